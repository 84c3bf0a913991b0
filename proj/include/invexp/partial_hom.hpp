#pragma once

#include <span>
#include <string>

#include "invexp/report.hpp"
#include "invexp/semigroup.hpp"

namespace invexp {

/// Checks the three partial-homomorphism identities for pi over all pairs:
///
///   (i)   pi(s) pi(t) pi(t*) = pi(st) pi(t*)
///   (ii)  pi(s*) pi(s) pi(t) = pi(s*) pi(st)
///   (iii) pi(s) pi(s*) pi(s) = pi(s)
///
/// T is any semigroup value type; `mul` multiplies and `eq` compares. One
/// report line per axiom, carrying the first witness and the violation count.
template <class T, class Mul, class Eq>
Report check_partial_hom_axioms(const InverseSemigroup& g, std::span<const T> pi, Mul mul, Eq eq) {
  Report report;
  const Elem n = static_cast<Elem>(g.size());
  std::size_t bad1 = 0, bad2 = 0, bad3 = 0;
  std::string w1, w2, w3;
  auto pair_name = [&](Elem s, Elem t) { return "(" + g.name(s) + "," + g.name(t) + ")"; };
  for (Elem s = 0; s < n; ++s) {
    const Elem ss = g.inverse(s);
    for (Elem t = 0; t < n; ++t) {
      const Elem ts = g.inverse(t);
      const Elem st = g.product(s, t);
      if (!eq(mul(mul(pi[s], pi[t]), pi[ts]), mul(pi[st], pi[ts]))) {
        if (bad1++ == 0) w1 = pair_name(s, t);
      }
      if (!eq(mul(mul(pi[ss], pi[s]), pi[t]), mul(pi[ss], pi[st]))) {
        if (bad2++ == 0) w2 = pair_name(s, t);
      }
    }
    if (!eq(mul(mul(pi[s], pi[ss]), pi[s]), pi[s])) {
      if (bad3++ == 0) w3 = "(" + g.name(s) + ")";
    }
  }
  auto with_count = [](const std::string& w, std::size_t c) { return w + " violations=" + std::to_string(c); };
  report.record("partial-hom(i)", bad1 == 0, with_count(w1, bad1));
  report.record("partial-hom(ii)", bad2 == 0, with_count(w2, bad2));
  report.record("partial-hom(iii)", bad3 == 0, with_count(w3, bad3));
  return report;
}

/// Partial-homomorphism axioms for a map G -> H between table semigroups.
/// Throws NotPartialHom when pi is not a total map into H.
Report is_partial_homomorphism(const InverseSemigroup& g, const InverseSemigroup& h, std::span<const Elem> pi);

/// The order-theoretic characterization: pi(s*) = pi(s)*, pi(s)pi(t) <= pi(st),
/// and s <= t implies pi(s) <= pi(t). The verdict is compared against
/// is_partial_homomorphism; a disagreement raises EquivalenceViolation.
Report is_dual_prehomomorphism(const InverseSemigroup& g, const InverseSemigroup& h, std::span<const Elem> pi);

}  // namespace invexp
