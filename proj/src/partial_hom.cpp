#include "invexp/partial_hom.hpp"

#include "invexp/error.hpp"

namespace invexp {

namespace {

void require_total(const InverseSemigroup& g, const InverseSemigroup& h, std::span<const Elem> pi) {
  if (pi.size() != g.size()) {
    throw Error(ErrorKind::NotPartialHom, "map has " + std::to_string(pi.size()) + " entries, expected " +
                                              std::to_string(g.size()));
  }
  for (Elem v : pi) {
    if (v >= h.size()) throw Error(ErrorKind::NotPartialHom, "map value " + std::to_string(v) + " outside target");
  }
}

}  // namespace

Report is_partial_homomorphism(const InverseSemigroup& g, const InverseSemigroup& h, std::span<const Elem> pi) {
  require_total(g, h, pi);
  return check_partial_hom_axioms<Elem>(
      g, pi, [&](Elem a, Elem b) { return h.product(a, b); }, [](Elem a, Elem b) { return a == b; });
}

Report is_dual_prehomomorphism(const InverseSemigroup& g, const InverseSemigroup& h, std::span<const Elem> pi) {
  require_total(g, h, pi);
  Report report;
  const Elem n = static_cast<Elem>(g.size());
  std::string w1, w2, w3;
  std::size_t bad1 = 0, bad2 = 0, bad3 = 0;
  for (Elem s = 0; s < n; ++s) {
    if (pi[g.inverse(s)] != h.inverse(pi[s])) {
      if (bad1++ == 0) w1 = "(" + g.name(s) + ")";
    }
    for (Elem t = 0; t < n; ++t) {
      const Elem lhs = h.product(pi[s], pi[t]);
      if (!natural_leq(h, lhs, pi[g.product(s, t)])) {
        if (bad2++ == 0) w2 = "(" + g.name(s) + "," + g.name(t) + ")";
      }
      if (natural_leq(g, s, t) && !natural_leq(h, pi[s], pi[t])) {
        if (bad3++ == 0) w3 = "(" + g.name(s) + "<=" + g.name(t) + ")";
      }
    }
  }
  auto with_count = [](const std::string& w, std::size_t c) { return w + " violations=" + std::to_string(c); };
  report.record("dual-prehom(star)", bad1 == 0, with_count(w1, bad1));
  report.record("dual-prehom(product-below)", bad2 == 0, with_count(w2, bad2));
  report.record("dual-prehom(order)", bad3 == 0, with_count(w3, bad3));

  const bool via_axioms = is_partial_homomorphism(g, h, pi).ok();
  if (via_axioms != report.ok()) {
    throw Error(ErrorKind::EquivalenceViolation,
                std::string("identity axioms say ") + (via_axioms ? "yes" : "no") +
                    " but order characterization says " + (report.ok() ? "yes" : "no"));
  }
  return report;
}

}  // namespace invexp
