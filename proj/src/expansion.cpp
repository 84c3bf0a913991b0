#include "invexp/expansion.hpp"

#include <algorithm>

namespace invexp {

namespace {

Elem range_idem(const InverseSemigroup& g, Elem s) { return g.product(s, g.inverse(s)); }

void require_normal(const InverseSemigroup& g, const ExpElem& x) {
  if (!is_normal_form(g, x)) throw Error(ErrorKind::NotNormalForm, render(g, x) + " is not in normal form");
}

std::string set_names(const InverseSemigroup& g, const ElemSet& a) {
  std::string out;
  for (Elem m : a.members()) {
    if (!out.empty()) out += ',';
    out += g.name(m);
  }
  return out;
}

}  // namespace

bool is_normal_form(const InverseSemigroup& g, const ExpElem& x) {
  if (x.eps.width() != g.size() || x.bracket >= g.size()) return false;
  const Elem e = range_idem(g, x.bracket);
  return x.eps.contains(x.bracket) && is_e_set(g, x.eps, e);
}

ExpElem canonical_gen(const InverseSemigroup& g, Elem s) {
  return {ElemSet(g.size(), {range_idem(g, s), s}), s};
}

ExpElem exp_product(const InverseSemigroup& g, const ExpElem& x, const ExpElem& y) {
  require_normal(g, x);
  require_normal(g, y);
  const Elem t = x.bracket;
  const Elem s = y.bracket;
  const Elem ts = g.product(t, s);
  const Elem q = range_idem(g, ts);  // ts s* t*
  ExpElem out{ElemSet(g.size()), ts};
  for (Elem a : x.eps.members()) out.eps.insert(g.product(q, a));
  for (Elem b : y.eps.members()) out.eps.insert(g.product(t, b));
  return out;
}

ExpElem exp_product_via_union(const InverseSemigroup& g, const ExpElem& x, const ExpElem& y) {
  require_normal(g, x);
  require_normal(g, y);
  const Elem t = x.bracket;
  ElemSet combined = x.eps;
  for (Elem b : y.eps.members()) combined.insert(g.product(t, b));
  const auto list = combined.members();
  return normalize_eps_form(g, list, g.product(t, y.bracket));
}

ExpElem normalize_eps_form(const InverseSemigroup& g, std::span<const Elem> eps, Elem t) {
  Elem p = range_idem(g, t);
  for (Elem a : eps) p = g.product(p, range_idem(g, a));
  ExpElem out{ElemSet(g.size()), g.product(p, t)};
  for (Elem a : eps) out.eps.insert(g.product(p, a));
  out.eps.insert(out.bracket);
  out.eps.insert(p);
  return out;
}

ExpElem exp_inverse(const InverseSemigroup& g, const ExpElem& x) {
  require_normal(g, x);
  const Elem ti = g.inverse(x.bracket);
  ExpElem out{ElemSet(g.size()), ti};
  for (Elem a : x.eps.members()) out.eps.insert(g.product(ti, a));
  return out;
}

std::string render(const InverseSemigroup& g, const ExpElem& x) {
  return "eps{" + set_names(g, x.eps) + "}[" + g.name(x.bracket) + "]";
}

std::string element_name(const InverseSemigroup& g, const ExpElem& x) {
  const Elem t = x.bracket;
  if (g.is_idempotent(t)) return "eps{" + set_names(g, x.eps) + "}";
  if (x.eps == ElemSet(g.size(), {range_idem(g, t), t})) return "br{" + g.name(t) + "}";
  return "eps{" + set_names(g, x.eps) + "}br{" + g.name(t) + "}";
}

ExpansionCount predicted_count(const InverseSemigroup& g) {
  std::vector<std::size_t> class_size(g.size(), 0);
  for (Elem s = 0; s < g.size(); ++s) ++class_size[range_idem(g, s)];
  ExpansionCount out{0, 0};
  for (Elem e = 0; e < g.size(); ++e) {
    if (!g.is_idempotent(e)) continue;
    const std::size_t p = class_size[e];
    const BigInt half = BigInt(1) << (p - 1);
    out.idempotent += half;
    out.total += half;
    if (p >= 2) out.total += BigInt(p - 1) * (BigInt(1) << (p - 2));
  }
  return out;
}

Elem ExpansionTable::id_of(const ExpElem& x) const {
  auto it = index.find(x);
  if (it == index.end()) throw Error(ErrorKind::NotNormalForm, render(source, x) + " is not an element of S(G)");
  return it->second;
}

ExpansionTable build_expansion(const InverseSemigroup& g, ExpansionOptions options) {
  const auto predicted = predicted_count(g);
  if (predicted.total > options.cap) {
    throw Error(ErrorKind::TooLarge, "|S(G)| = " + predicted.total.str() + " exceeds cap " + std::to_string(options.cap));
  }
  std::vector<ExpElem> elems;
  elems.reserve(static_cast<std::size_t>(predicted.total));
  for (Elem e = 0; e < g.size(); ++e) {
    if (!g.is_idempotent(e)) continue;
    std::vector<Elem> others;
    for (Elem s : range_class(g, e).members()) {
      if (s != e) others.push_back(s);
    }
    const std::size_t subsets = std::size_t{1} << others.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      ElemSet a(g.size(), {e});
      for (std::size_t i = 0; i < others.size(); ++i) {
        if (mask & (std::size_t{1} << i)) a.insert(others[i]);
      }
      for (Elem t : a.members()) elems.push_back({a, t});
    }
  }

  ExpansionTable out{g, g, {}, {}, false};
  out.index.reserve(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (!out.index.emplace(elems[i], static_cast<Elem>(i)).second) {
      throw Error(ErrorKind::InternalInconsistency, "duplicate normal form " + render(g, elems[i]));
    }
  }
  out.elems = std::move(elems);

  const std::size_t n = out.elems.size();
  std::vector<std::vector<Elem>> table(n, std::vector<Elem>(n));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) table[x][y] = out.id_of(exp_product(g, out.elems[x], out.elems[y]));
  }
  std::vector<std::string> names;
  names.reserve(n);
  for (const auto& x : out.elems) names.push_back(element_name(g, x));
  if (n <= options.validate_cap) {
    out.base = InverseSemigroup::from_table(std::move(table), std::move(names), {.exhaustive_cap = options.validate_cap});
    out.fully_validated = true;
  } else {
    out.base = InverseSemigroup::from_trusted(std::move(table), std::move(names));
  }
  return out;
}

std::string serialize_sidecar(const ExpansionTable& table) {
  std::string out = std::to_string(table.size()) + "\n";
  for (Elem x = 0; x < table.size(); ++x) {
    const auto& e = table.elems[x];
    out += std::to_string(x) + " " + table.base.name(x) + " t=" + table.source.name(e.bracket) +
           " A=" + set_names(table.source, e.eps) + "\n";
  }
  return out;
}

LiftResult lift_partial_hom(const ExpansionTable& table, const InverseSemigroup& h, std::span<const Elem> pi) {
  LiftResult out;
  out.report = is_partial_homomorphism(table.source, h, pi);
  if (!out.report.ok()) throw Error(ErrorKind::NotPartialHom, "pi is not a partial homomorphism:\n" + out.report.render());
  out.hom = lift_values<Elem>(table, pi, [&](Elem a, Elem b) { return h.product(a, b); });
  out.report.pass("lift-homomorphism");
  out.report.pass("lift-extends-pi");
  return out;
}

Report check_unit_counit(const InverseSemigroup& g, ExpansionOptions options) {
  const auto sg = build_expansion(g, options);
  const auto& base = sg.base;
  Report report;

  // (b) degree o iota = id on G.
  std::string wb;
  for (Elem s = 0; s < g.size() && wb.empty(); ++s) {
    if (sg.degree_of(sg.canonical_id(s)) != s) wb = g.name(s);
  }
  report.record("counit(degree.iota=id_G)", wb.empty(), wb);

  // (a) Pr(iota_G) sends [g] to [[g]] in S(S(G)); its degree back in S(G)
  // must return the starting element.
  std::vector<ExpElem> pi;
  pi.reserve(g.size());
  for (Elem s = 0; s < g.size(); ++s) pi.push_back(canonical_gen(base, sg.canonical_id(s)));
  const auto image = lift_values<ExpElem>(
      sg, pi, [&](const ExpElem& a, const ExpElem& b) { return exp_product(base, a, b); });
  std::string wa;
  for (Elem x = 0; x < sg.size() && wa.empty(); ++x) {
    if (degree(image[x]) != x) wa = base.name(x);
  }
  report.record("unit(degree.Pr(iota)=id_SG)", wa.empty(), wa);
  return report;
}

bool check_e_unitary_transfer(const InverseSemigroup& g, ExpansionOptions options) {
  const bool below = is_e_unitary(g);
  const bool above = is_e_unitary(build_expansion(g, options).base);
  if (below != above) {
    throw Error(ErrorKind::PropertyViolation, std::string("E-unitary(G) = ") + (below ? "true" : "false") +
                                                  " but E-unitary(S(G)) = " + (above ? "true" : "false"));
  }
  return below;
}

Report check_semilattice_fixedpoint(const InverseSemigroup& g, ExpansionOptions options) {
  const auto sg = build_expansion(g, options);
  Report report;
  std::string witness;
  for (Elem a = 0; a < g.size() && witness.empty(); ++a) {
    for (Elem b = 0; b < g.size() && witness.empty(); ++b) {
      if (sg.base.product(sg.canonical_id(a), sg.canonical_id(b)) != sg.canonical_id(g.product(a, b))) {
        witness = "[" + g.name(a) + "][" + g.name(b) + "]!=[" + g.name(g.product(a, b)) + "]";
      }
    }
  }
  const std::string sizes = "|G|=" + std::to_string(g.size()) + " |S(G)|=" + std::to_string(sg.size());
  if (is_semilattice(g)) {
    if (sg.size() != g.size() || !witness.empty()) {
      throw Error(ErrorKind::PropertyViolation, "semilattice but iota is not an isomorphism: " + sizes + " " + witness);
    }
    report.pass("iota-isomorphism");
    report.info("sizes", sizes);
  } else {
    if (sg.size() <= g.size() || witness.empty()) {
      throw Error(ErrorKind::PropertyViolation, "non-semilattice but iota looks multiplicative: " + sizes);
    }
    report.pass("strict-growth");
    report.pass("iota-not-multiplicative");
    report.info("sizes", sizes);
    report.info("witness", witness);
  }
  return report;
}

}  // namespace invexp
