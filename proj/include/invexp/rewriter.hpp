#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "invexp/error.hpp"
#include "invexp/expansion.hpp"
#include "invexp/semigroup.hpp"

namespace invexp {

/// A nonempty product of generators [s_1][s_2]...[s_k].
struct Word {
  std::vector<Elem> letters;
  bool operator==(const Word&) const = default;
};

/// Syntax: `[x]` tokens, whitespace optional. Inside a bracket, either a
/// decimal id or a product of names, each optionally suffixed by `*`
/// (`[s*]`, `[st]`, `[s.t*]`).
Word parse_word(std::string_view text, const InverseSemigroup& g);
std::string render_word(const InverseSemigroup& g, const Word& w);

/// Left fold of canonical generators through the pair-formula product.
ExpElem reduce_to_normal_form(const InverseSemigroup& g, const Word& w);

bool words_equal(const InverseSemigroup& g, const Word& a, const Word& b);

enum class Rule { R1, R2, R3, Reductor, NormShape };
std::string_view to_string(Rule rule);

/// Intermediate words mix eps_s = [s][s*] factors with brackets. A raw
/// bracket is one that has not been absorbed as eps_r[r] yet.
struct Token {
  enum class Kind { Eps, Bracket } kind;
  Elem v;
  bool raw = false;
  bool operator==(const Token&) const = default;
};
using TokenWord = std::vector<Token>;

TokenWord to_tokens(const Word& w);
std::string render_tokens(const InverseSemigroup& g, const TokenWord& w);
/// Value of a token word, obtained by spelling eps_r as [r][r*] and folding.
ExpElem token_word_value(const InverseSemigroup& g, const TokenWord& w);

struct RewriteStep {
  Rule rule;
  TokenWord before;
  TokenWord after;
};

struct RewriteTrace {
  std::vector<RewriteStep> steps;
  /// One line per step: `RULE: before => after`.
  std::string render(const InverseSemigroup& g) const;
};

struct RewriteResult {
  ExpElem value;
  RewriteTrace trace;
};

class StepLimitError : public Error {
 public:
  StepLimitError(const std::string& what, RewriteTrace partial)
      : Error(ErrorKind::StepLimitExceeded, what), trace_(std::move(partial)) {}
  const RewriteTrace& partial_trace() const { return trace_; }

 private:
  RewriteTrace trace_;
};

inline constexpr std::size_t kDefaultStepLimit = 10'000;

/// Relation-level rewriting to normal form; the result is compared with
/// reduce_to_normal_form before returning (OracleMismatch on disagreement).
RewriteResult rewrite_steps(const InverseSemigroup& g, const Word& w, std::size_t max_steps = kDefaultStepLimit);
RewriteResult rewrite_tokens(const InverseSemigroup& g, TokenWord w, std::size_t max_steps = kDefaultStepLimit);

}  // namespace invexp
