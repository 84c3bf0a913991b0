#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace invexp {

/// Structured verification output. Rendered one line per check:
///
///     PASS <check>
///     FAIL <check> witness=<...>
///     INFO <check> <note>
///
/// INFO lines never affect ok().
class Report {
 public:
  enum class Status { Pass, Fail, Info };

  struct Line {
    Status status;
    std::string check;
    std::string detail;
  };

  void pass(std::string check) { lines_.push_back({Status::Pass, std::move(check), {}}); }
  void fail(std::string check, std::string witness) {
    lines_.push_back({Status::Fail, std::move(check), std::move(witness)});
  }
  void info(std::string check, std::string note) {
    lines_.push_back({Status::Info, std::move(check), std::move(note)});
  }
  /// PASS when `ok`, otherwise FAIL with the witness.
  void record(std::string check, bool ok, std::string witness) {
    if (ok) {
      pass(std::move(check));
    } else {
      fail(std::move(check), std::move(witness));
    }
  }

  void append(const Report& other, std::string_view prefix = {});

  bool ok() const;
  /// True iff at least one line names `check` and none of them failed.
  bool passed(std::string_view check) const;
  bool failed(std::string_view check) const;
  std::size_t fail_count() const;

  const std::vector<Line>& lines() const { return lines_; }
  std::string render() const;

 private:
  std::vector<Line> lines_;
};

}  // namespace invexp
