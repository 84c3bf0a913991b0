#include "invexp/report.hpp"

#include <algorithm>

namespace invexp {

void Report::append(const Report& other, std::string_view prefix) {
  for (auto line : other.lines_) {
    if (!prefix.empty()) line.check = std::string(prefix) + line.check;
    lines_.push_back(std::move(line));
  }
}

bool Report::ok() const {
  return std::none_of(lines_.begin(), lines_.end(), [](const Line& l) { return l.status == Status::Fail; });
}

bool Report::passed(std::string_view check) const {
  bool seen = false;
  for (const auto& l : lines_) {
    if (l.check != check || l.status == Status::Info) continue;
    if (l.status == Status::Fail) return false;
    seen = true;
  }
  return seen;
}

bool Report::failed(std::string_view check) const {
  return std::any_of(lines_.begin(), lines_.end(),
                     [&](const Line& l) { return l.check == check && l.status == Status::Fail; });
}

std::size_t Report::fail_count() const {
  return static_cast<std::size_t>(
      std::count_if(lines_.begin(), lines_.end(), [](const Line& l) { return l.status == Status::Fail; }));
}

std::string Report::render() const {
  std::string out;
  for (const auto& l : lines_) {
    switch (l.status) {
      case Status::Pass:
        out += "PASS " + l.check;
        break;
      case Status::Fail:
        out += "FAIL " + l.check + " witness=" + l.detail;
        break;
      case Status::Info:
        out += "INFO " + l.check + " " + l.detail;
        break;
    }
    out += '\n';
  }
  return out;
}

}  // namespace invexp
