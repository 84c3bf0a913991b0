#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "invexp/elem_set.hpp"
#include "invexp/expansion.hpp"
#include "invexp/partial_hom.hpp"
#include "invexp/report.hpp"
#include "invexp/semigroup.hpp"

namespace invexp {

/// Injective partial map on {0..size-1}, stored as target-or-undefined.
class PartialBijection {
 public:
  static constexpr int kUndefined = -1;

  explicit PartialBijection(std::size_t size = 0) : map_(size, kUndefined) {}
  /// Throws NotPartialAction if targets repeat or fall outside the set.
  explicit PartialBijection(std::vector<int> map);
  static PartialBijection identity_on(const ElemSet& domain);

  std::size_t size() const { return map_.size(); }
  bool defined(std::size_t x) const { return map_[x] != kUndefined; }
  int at(std::size_t x) const { return map_[x]; }
  const std::vector<int>& raw() const { return map_; }

  ElemSet domain() const;
  ElemSet range() const;
  /// Image of a subset (points outside the domain are dropped).
  ElemSet image(const ElemSet& subset) const;
  PartialBijection inverse() const;
  /// Restriction to domain ∩ subset.
  PartialBijection restrict_domain(const ElemSet& subset) const;
  /// Graph inclusion.
  bool leq(const PartialBijection& other) const;

  bool operator==(const PartialBijection&) const = default;

  /// `0->1, 2->2`
  std::string to_string() const;

 private:
  std::vector<int> map_;
};

/// (a * b)(x) = a(b(x)).
PartialBijection operator*(const PartialBijection& a, const PartialBijection& b);

struct PartialActionOnSet {
  std::size_t x_size = 0;
  /// Indexed by semigroup element.
  std::vector<PartialBijection> maps;
  /// Optional display names for points; empty means decimal ids.
  std::vector<std::string> point_names;
};

/// Checks the definition (partial homomorphism into I(X)) plus the
/// range-equality criterion and the inclusion criterion. Report lines are
/// prefixed `partial-hom`, `range-criterion` and `inclusion-criterion`. The
/// three verdicts must agree; otherwise CriteriaDisagree is thrown.
Report is_partial_action(const InverseSemigroup& g, const PartialActionOnSet& act);

struct FilterOptions {
  std::size_t max_n = 24;
};

/// es ∈ xi ⇔ (e ∈ xi and s ∈ xi), for idempotent e.
bool is_filter_by_definition(const InverseSemigroup& g, const ElemSet& xi);
/// ss* ∈ xi; ss*t ∈ xi; up-closed.
bool is_filter_by_conditions(const InverseSemigroup& g, const ElemSet& xi);
/// Nonempty, ss* ∈ eta and ss*t ∈ eta for all s, t ∈ eta.
bool is_filter_base(const InverseSemigroup& g, const ElemSet& eta);

/// All filters, in ElemSet order. Throws TooLarge when n > options.max_n.
std::vector<ElemSet> enumerate_filters(const InverseSemigroup& g, FilterOptions options = {});

/// Up-closure of a filter base; NotFilterBase names the offending pair.
ElemSet filter_closure(const InverseSemigroup& g, const ElemSet& eta);

/// `{e,s}`
std::string render_subset(const InverseSemigroup& g, const ElemSet& set);

/// pi_t(xi) = <t xi> on the filters containing t*. Points are the filters
/// in enumerate_filters order, named by render_subset.
PartialActionOnSet canonical_partial_action(const InverseSemigroup& g, FilterOptions options = {});

struct LiftedAction {
  /// Indexed by expansion id.
  std::vector<PartialBijection> maps;
  Report report;
};

/// eps_A[t] -> id_{X_A} . pi_t with X_A the intersection of the ranges of
/// pi_a, a ∈ A. Throws NotPartialAction if act fails is_partial_action and
/// LiftNotHomomorphism if the result is not multiplicative.
LiftedAction lift_action(const ExpansionTable& table, const PartialActionOnSet& act);

struct SeparationResult {
  std::size_t expansion_size = 0;
  std::size_t filter_count = 0;
  /// Distinct (lifted map, degree) pairs; equals expansion_size when separated.
  std::size_t distinct_pairs = 0;
  bool idempotents_injective = false;
  Report report;
};

/// Lifts the canonical partial action and checks that lift and degree
/// jointly separate S(G). A failure throws PropertyViolation.
SeparationResult separation_check(const InverseSemigroup& g, ExpansionOptions expansion = {},
                                  FilterOptions filters = {});

/// Document: first line |X|, then one `name: i->j, k->l` line per element.
PartialActionOnSet load_action(std::string_view text, const InverseSemigroup& g);
std::string serialize_action(const InverseSemigroup& g, const PartialActionOnSet& act);

}  // namespace invexp
