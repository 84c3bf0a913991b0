#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "invexp/elem_set.hpp"

namespace invexp {

/// Bounds for the exhaustive O(n^3) validators.
struct ValidationOptions {
  std::size_t exhaustive_cap = 64;
};

/// A finite inverse semigroup given by its Cayley table over dense ids.
///
/// Instances are immutable once constructed. `from_table` runs every
/// structural check (associativity, unique generalized inverses, commuting
/// idempotents) and computes the inverse table; there is no way to obtain an
/// unvalidated instance except through `from_trusted`, which is reserved for
/// tables produced by this library that are too large to re-check.
class InverseSemigroup {
 public:
  static InverseSemigroup from_table(std::vector<std::vector<Elem>> table,
                                     std::vector<std::string> names = {},
                                     ValidationOptions options = {});

  /// Skips the O(n^3) associativity check; still computes and checks inverses.
  static InverseSemigroup from_trusted(std::vector<std::vector<Elem>> table,
                                       std::vector<std::string> names = {});

  std::size_t size() const { return n_; }
  Elem product(Elem a, Elem b) const { return table_[a * n_ + b]; }
  Elem inverse(Elem a) const { return inv_[a]; }
  bool is_idempotent(Elem a) const { return product(a, a) == a; }

  const std::string& name(Elem a) const { return names_[a]; }
  const std::vector<std::string>& names() const { return names_; }
  /// True when names were supplied rather than defaulted to decimal ids.
  bool has_explicit_names() const { return explicit_names_; }

  /// Looks an element up by name, falling back to a decimal id.
  std::optional<Elem> find(std::string_view token) const;

  friend bool operator==(const InverseSemigroup& a, const InverseSemigroup& b) {
    return a.n_ == b.n_ && a.table_ == b.table_;
  }

 private:
  InverseSemigroup() = default;
  static InverseSemigroup assemble(std::vector<std::vector<Elem>> table,
                                   std::vector<std::string> names);
  void compute_inverses();
  void check_associative(std::size_t cap) const;
  void check_idempotents_commute() const;

  std::size_t n_ = 0;
  std::vector<Elem> table_;
  std::vector<Elem> inv_;
  std::vector<std::string> names_;
  bool explicit_names_ = false;
};

inline Elem product(const InverseSemigroup& s, Elem a, Elem b) { return s.product(a, b); }

/// E(G) as a subset of G.
ElemSet idempotents(const InverseSemigroup& s);

/// a <= b in the natural partial order. Both a = b(a*a) and a = (aa*)b are
/// evaluated; disagreement raises InternalInconsistency.
bool natural_leq(const InverseSemigroup& s, Elem a, Elem b);

bool is_e_unitary(const InverseSemigroup& s);
bool is_semilattice(const InverseSemigroup& s);

/// A is an e-set: e in A and aa* = e for every a in A. Throws NotIdempotent
/// when e is not idempotent.
bool is_e_set(const InverseSemigroup& s, const ElemSet& a, Elem e);

/// G^e = { s : ss* = e }.
ElemSet range_class(const InverseSemigroup& s, Elem e);

// Constructors for the standard examples.

/// All partial bijections of {1..k} under composition (ab)(x) = a(b(x)).
/// Element names are "m" followed by the image of each point ('-' for
/// undefined), so the swap on two points is "m21". k <= 4.
InverseSemigroup symmetric_inverse_monoid(std::size_t k);

/// The partial map underlying element `a` of symmetric_inverse_monoid(k):
/// entry x is the image of point x (0-based) or -1.
std::vector<int> symmetric_inverse_monoid_map(std::size_t k, Elem a);

/// G = {0, e, f, s, t} with s^2 = 0, ss* = e, s*s = f, t = s*; ids in that order.
InverseSemigroup five_element_example();

/// Z/m written multiplicatively; element 0 is the identity, named "1".
InverseSemigroup cyclic_group(std::size_t m);

/// Z/2 x Z/2 with elements 1, a, b, c.
InverseSemigroup klein_four_group();

/// E(G) as a semilattice in its own right (ids renumbered ascending, names kept).
InverseSemigroup idempotent_semilattice(const InverseSemigroup& s);

}  // namespace invexp
