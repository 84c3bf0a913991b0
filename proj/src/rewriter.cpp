#include "invexp/rewriter.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace invexp {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// Longest-match split of a bracket body into a product of (possibly starred) names.
Elem parse_bracket_body(std::string_view body, const InverseSemigroup& g) {
  if (all_digits(body)) {
    auto id = g.find(body);
    if (!id) throw Error(ErrorKind::UnknownElement, "no element '" + std::string(body) + "'");
    return *id;
  }
  std::optional<Elem> acc;
  std::size_t pos = 0;
  while (pos < body.size()) {
    if (body[pos] == '.') {
      ++pos;
      continue;
    }
    std::size_t best_len = 0;
    Elem best = 0;
    for (Elem a = 0; a < g.size(); ++a) {
      const auto& nm = g.name(a);
      if (nm.size() > best_len && body.substr(pos, nm.size()) == nm) {
        best_len = nm.size();
        best = a;
      }
    }
    if (best_len == 0) throw Error(ErrorKind::UnknownElement, "no element matches '" + std::string(body.substr(pos)) + "'");
    pos += best_len;
    if (pos < body.size() && body[pos] == '*') {
      best = g.inverse(best);
      ++pos;
    }
    acc = acc ? g.product(*acc, best) : best;
  }
  if (!acc) throw Error(ErrorKind::ParseError, "empty bracket");
  return *acc;
}

Elem range_idem(const InverseSemigroup& g, Elem s) { return g.product(s, g.inverse(s)); }

}  // namespace

Word parse_word(std::string_view text, const InverseSemigroup& g) {
  Word w;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const unsigned char c = text[pos];
    if (std::isspace(c)) {
      ++pos;
      continue;
    }
    if (c != '[') throw Error(ErrorKind::ParseError, "expected '[' at offset " + std::to_string(pos));
    const auto close = text.find(']', pos);
    if (close == std::string_view::npos) throw Error(ErrorKind::ParseError, "unterminated bracket at offset " + std::to_string(pos));
    std::string_view body = text.substr(pos + 1, close - pos - 1);
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
    w.letters.push_back(parse_bracket_body(body, g));
    pos = close + 1;
  }
  if (w.letters.empty()) throw Error(ErrorKind::ParseError, "empty word");
  return w;
}

std::string render_word(const InverseSemigroup& g, const Word& w) {
  std::string out;
  for (Elem s : w.letters) out += "[" + g.name(s) + "]";
  return out;
}

ExpElem reduce_to_normal_form(const InverseSemigroup& g, const Word& w) {
  if (w.letters.empty()) throw Error(ErrorKind::ParseError, "empty word");
  ExpElem acc = canonical_gen(g, w.letters.front());
  for (std::size_t i = 1; i < w.letters.size(); ++i) acc = exp_product(g, acc, canonical_gen(g, w.letters[i]));
  return acc;
}

bool words_equal(const InverseSemigroup& g, const Word& a, const Word& b) {
  return reduce_to_normal_form(g, a) == reduce_to_normal_form(g, b);
}

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::R1: return "R1";
    case Rule::R2: return "R2";
    case Rule::R3: return "R3";
    case Rule::Reductor: return "Reductor";
    case Rule::NormShape: return "NormShape";
  }
  return "?";
}

TokenWord to_tokens(const Word& w) {
  TokenWord out;
  for (Elem s : w.letters) out.push_back({Token::Kind::Bracket, s, true});
  return out;
}

std::string render_tokens(const InverseSemigroup& g, const TokenWord& w) {
  std::string out;
  for (const auto& tok : w) {
    if (!out.empty()) out += ' ';
    out += tok.kind == Token::Kind::Eps ? "eps{" + g.name(tok.v) + "}" : "[" + g.name(tok.v) + "]";
  }
  return out;
}

ExpElem token_word_value(const InverseSemigroup& g, const TokenWord& w) {
  Word letters;
  for (const auto& tok : w) {
    letters.letters.push_back(tok.v);
    if (tok.kind == Token::Kind::Eps) letters.letters.push_back(g.inverse(tok.v));
  }
  return reduce_to_normal_form(g, letters);
}

std::string RewriteTrace::render(const InverseSemigroup& g) const {
  std::string out;
  for (const auto& st : steps) {
    out += std::string(to_string(st.rule)) + ": " + render_tokens(g, st.before) + " => " + render_tokens(g, st.after) + "\n";
  }
  return out;
}

namespace {

using Kind = Token::Kind;

Token eps(Elem v) { return {Kind::Eps, v, false}; }
Token br(Elem v) { return {Kind::Bracket, v, false}; }

// One rewrite in priority order; nullopt when no rule applies.
std::optional<std::pair<Rule, TokenWord>> step_once(const InverseSemigroup& g, const TokenWord& w) {
  // R3: [r] = eps_r [r]
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].kind == Kind::Bracket && w[i].raw) {
      TokenWord out(w.begin(), w.begin() + i);
      out.push_back(eps(w[i].v));
      out.push_back(br(w[i].v));
      out.insert(out.end(), w.begin() + i + 1, w.end());
      return std::pair{Rule::R3, out};
    }
  }
  // Bracket merge: [t][r] = eps_t [tr]
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i].kind == Kind::Bracket && w[i + 1].kind == Kind::Bracket) {
      TokenWord out(w.begin(), w.begin() + i);
      out.push_back(eps(w[i].v));
      out.push_back(br(g.product(w[i].v, w[i + 1].v)));
      out.insert(out.end(), w.begin() + i + 2, w.end());
      return std::pair{Rule::R2, out};
    }
  }
  // Push: [t] eps_s = eps_{ts} [t]
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i].kind == Kind::Bracket && w[i + 1].kind == Kind::Eps) {
      TokenWord out(w.begin(), w.begin() + i);
      out.push_back(eps(g.product(w[i].v, w[i + 1].v)));
      out.push_back(w[i]);
      out.insert(out.end(), w.begin() + i + 2, w.end());
      return std::pair{Rule::R1, out};
    }
  }
  // Now the shape is eps...eps [t], or eps...eps alone if the word had no
  // bracket (only possible for hand-built token words).
  if (w.empty() || w.back().kind != Kind::Bracket) return std::nullopt;
  const Elem t = w.back().v;
  Elem p = range_idem(g, t);
  for (std::size_t i = 0; i + 1 < w.size(); ++i) p = g.product(p, range_idem(g, w[i].v));
  {
    TokenWord out;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) out.push_back(eps(g.product(p, w[i].v)));
    out.push_back(br(g.product(p, t)));
    if (out != w) return std::pair{Rule::Reductor, out};
  }
  // NormShape: eps-set contains t and tt*, listed once in ascending order.
  std::vector<Elem> a;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) a.push_back(w[i].v);
  a.push_back(t);
  a.push_back(range_idem(g, t));
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  TokenWord out;
  for (Elem v : a) out.push_back(eps(v));
  out.push_back(br(t));
  if (out != w) return std::pair{Rule::NormShape, out};
  return std::nullopt;
}

}  // namespace

RewriteResult rewrite_tokens(const InverseSemigroup& g, TokenWord w, std::size_t max_steps) {
  if (max_steps == 0) throw Error(ErrorKind::StepLimitExceeded, "max_steps must be at least 1");
  const TokenWord start = w;
  RewriteTrace trace;
  while (auto next = step_once(g, w)) {
    if (trace.steps.size() >= max_steps) {
      throw StepLimitError("no normal form after " + std::to_string(max_steps) + " steps", std::move(trace));
    }
    trace.steps.push_back({next->first, w, next->second});
    w = std::move(next->second);
  }
  if (w.empty() || w.back().kind != Kind::Bracket) {
    throw Error(ErrorKind::NotNormalForm, "word has no bracket: " + render_tokens(g, w));
  }
  ExpElem result{ElemSet(g.size()), w.back().v};
  for (std::size_t i = 0; i + 1 < w.size(); ++i) result.eps.insert(w[i].v);

  const ExpElem expected = token_word_value(g, start);
  if (!(result == expected) || !is_normal_form(g, result)) {
    throw Error(ErrorKind::OracleMismatch,
                render_tokens(g, start) + " rewrote to " + render(g, result) + " but the fold gives " + render(g, expected));
  }
  return {std::move(result), std::move(trace)};
}

RewriteResult rewrite_steps(const InverseSemigroup& g, const Word& w, std::size_t max_steps) {
  if (w.letters.empty()) throw Error(ErrorKind::ParseError, "empty word");
  return rewrite_tokens(g, to_tokens(w), max_steps);
}

}  // namespace invexp
