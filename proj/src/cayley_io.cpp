#include "invexp/cayley_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "invexp/error.hpp"

namespace invexp {

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

Elem parse_id(const std::string& tok, std::size_t line_no) {
  Elem v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": '" + tok + "' is not an id");
  }
  return v;
}

}  // namespace

InverseSemigroup load_cayley(std::string_view text, ValidationOptions options) {
  // Content lines with their 1-based source line numbers.
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.emplace_back(line_no, raw);
  }
  if (lines.empty()) throw Error(ErrorKind::ParseError, "empty document");

  const auto header = split_ws(lines[0].second);
  if (header.size() != 1) throw Error(ErrorKind::ParseError, "line " + std::to_string(lines[0].first) + ": expected element count");
  const Elem n = parse_id(header[0], lines[0].first);
  if (n == 0) throw Error(ErrorKind::ParseError, "element count must be positive");
  if (lines.size() < n + 1) throw Error(ErrorKind::ParseError, "document has fewer than n table rows");

  std::vector<std::vector<Elem>> table;
  table.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& [ln, content] = lines[r + 1];
    const auto toks = split_ws(content);
    if (toks.size() != n) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(ln) + ": expected " + std::to_string(n) +
                                             " entries, got " + std::to_string(toks.size()));
    }
    std::vector<Elem> row;
    row.reserve(n);
    for (const auto& t : toks) row.push_back(parse_id(t, ln));
    table.push_back(std::move(row));
  }

  std::vector<std::string> names;
  if (lines.size() > n + 1) {
    const auto& [ln, content] = lines[n + 1];
    auto toks = split_ws(content);
    if (toks.empty() || toks[0] != "names:") {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(ln) + ": expected 'names:' line");
    }
    names.assign(toks.begin() + 1, toks.end());
    if (names.size() != n) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(ln) + ": expected " + std::to_string(n) + " names");
    }
    if (lines.size() > n + 2) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lines[n + 2].first) + ": trailing content");
    }
  }
  return InverseSemigroup::from_table(std::move(table), std::move(names), options);
}

InverseSemigroup load_cayley_file(const std::filesystem::path& path, ValidationOptions options) {
  return load_cayley(read_text_file(path), options);
}

std::string serialize_cayley(const InverseSemigroup& s) {
  std::string out = std::to_string(s.size()) + "\n";
  for (Elem a = 0; a < s.size(); ++a) {
    for (Elem b = 0; b < s.size(); ++b) {
      if (b > 0) out += ' ';
      out += std::to_string(s.product(a, b));
    }
    out += '\n';
  }
  if (s.has_explicit_names()) {
    out += "names:";
    for (const auto& nm : s.names()) out += " " + nm;
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace invexp
