#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "invexp/actions.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace invexp;
using invexp::testing::kind_of;

namespace {

constexpr Elem kZero = 0, kE = 1, kF = 2, kS = 3, kT = 4;

ElemSet set5(std::initializer_list<Elem> a) { return ElemSet(5, a); }

// Filter definition evaluated on raw ids.
bool oracle_is_filter(const InverseSemigroup& g, std::uint64_t mask) {
  if (mask == 0) return false;
  auto in = [&](Elem a) { return ((mask >> a) & 1u) != 0; };
  for (Elem e = 0; e < g.size(); ++e) {
    if (g.product(e, e) != e) continue;
    for (Elem s = 0; s < g.size(); ++s) {
      if (in(g.product(e, s)) != (in(e) && in(s))) return false;
    }
  }
  return true;
}

ElemSet from_mask(std::size_t n, std::uint64_t mask) {
  ElemSet out(n);
  for (Elem a = 0; a < n; ++a) {
    if ((mask >> a) & 1u) out.insert(a);
  }
  return out;
}

std::vector<std::vector<int>> raw_maps(const PartialActionOnSet& act) {
  std::vector<std::vector<int>> out;
  for (const auto& m : act.maps) out.push_back(m.raw());
  return out;
}

std::vector<InverseSemigroup> filter_zoo() {
  return {cyclic_group(1),
          cyclic_group(3),
          cyclic_group(4),
          klein_four_group(),
          five_element_example(),
          symmetric_inverse_monoid(2),
          idempotent_semilattice(symmetric_inverse_monoid(3))};
}

}  // namespace

TEST_CASE("PartialBijection basics") {
  const PartialBijection a(std::vector<int>{1, -1, 0});
  CHECK(a.domain() == ElemSet(3, {0, 2}));
  CHECK(a.range() == ElemSet(3, {0, 1}));
  CHECK(a.inverse().raw() == std::vector<int>{2, 0, -1});
  CHECK((a * a).raw() == std::vector<int>{-1, -1, 1});
  CHECK((a * a.inverse()) == PartialBijection::identity_on(a.range()));
  CHECK(a.restrict_domain(ElemSet(3, {2})).leq(a));
  CHECK_FALSE(a.leq(a.restrict_domain(ElemSet(3, {2}))));
  CHECK(a.to_string() == "0->1, 2->0");
  CHECK(kind_of([] { PartialBijection(std::vector<int>{0, 0}); }) == ErrorKind::NotPartialAction);
  CHECK(kind_of([] { PartialBijection(std::vector<int>{2, -1}); }) == ErrorKind::NotPartialAction);
  const auto compose_check = oracle::compose(a.raw(), a.inverse().raw());
  CHECK((a * a.inverse()).raw() == compose_check);
}

TEST_CASE("partial homomorphism examples") {
  const auto g = five_element_example();
  const auto i2 = symmetric_inverse_monoid(2);
  const std::vector<Elem> to_empty(5, *i2.find("m--"));
  CHECK(is_partial_homomorphism(g, i2, to_empty).ok());
  CHECK(is_dual_prehomomorphism(g, i2, to_empty).ok());
  std::vector<Elem> id(5);
  for (Elem s = 0; s < 5; ++s) id[s] = s;
  CHECK(is_partial_homomorphism(g, g, id).ok());
  CHECK(is_dual_prehomomorphism(g, g, id).ok());
  // Every map from the five-element example into I_2 gets the same verdict from both checks.
  std::size_t homs = 0;
  std::vector<Elem> pi(5, 0);
  while (true) {
    const bool a = is_partial_homomorphism(g, i2, pi).ok();
    CHECK(is_dual_prehomomorphism(g, i2, pi).ok() == a);
    homs += a;
    std::size_t i = 0;
    while (i < 5 && ++pi[i] == i2.size()) pi[i++] = 0;
    if (i == 5) break;
  }
  CHECK(homs > 1);
}

TEST_CASE("five-element filters") {
  const auto g = five_element_example();
  const auto filters = enumerate_filters(g);
  const std::vector<ElemSet> expected{set5({kZero, kE, kF, kS, kT}), set5({kE}), set5({kE, kS}), set5({kF}),
                                      set5({kF, kT})};
  CHECK(filters == expected);
  // {e,s} contains s but neither s* nor s*s.
  CHECK(is_filter_by_definition(g, set5({kE, kS})));
  CHECK_FALSE(set5({kE, kS}).contains(kT));
  CHECK_FALSE(set5({kE, kS}).contains(kF));
}

TEST_CASE("filter enumeration matches brute force and the idempotent count of S(G)") {
  for (const auto& g : filter_zoo()) {
    std::vector<ElemSet> brute;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << g.size()); ++mask) {
      if (oracle_is_filter(g, mask)) brute.push_back(from_mask(g.size(), mask));
    }
    std::sort(brute.begin(), brute.end());
    const auto filters = enumerate_filters(g);
    CHECK(filters == brute);
    CHECK(predicted_count(g).idempotent == filters.size());
  }
  for (std::size_t m = 1; m <= 5; ++m) CHECK(enumerate_filters(cyclic_group(m)).size() == (std::size_t{1} << (m - 1)));
}

TEST_CASE("filter axiom equivalence on every subset") {
  for (const auto& g : filter_zoo()) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.size()); ++mask) {
      const auto xi = from_mask(g.size(), mask);
      REQUIRE(is_filter_by_definition(g, xi) == is_filter_by_conditions(g, xi));
      REQUIRE(is_filter_by_definition(g, xi) == oracle_is_filter(g, mask));
    }
  }
}

TEST_CASE("filter enumeration cap") {
  CHECK(kind_of([] { enumerate_filters(symmetric_inverse_monoid(3)); }) == ErrorKind::TooLarge);
  CHECK(enumerate_filters(symmetric_inverse_monoid(3), {.max_n = 64}).size() == 141);
}

TEST_CASE("filter_closure") {
  const auto g = five_element_example();
  CHECK(filter_closure(g, set5({kE, kS})) == set5({kE, kS}));
  for (const auto& xi : enumerate_filters(g)) CHECK(filter_closure(g, xi) == xi);
  // {s} is closed under (s,t) -> ss*t but misses ss* = e.
  CHECK(kind_of([&] { filter_closure(g, set5({kS})); }) == ErrorKind::NotFilterBase);
  CHECK(kind_of([&] { filter_closure(g, set5({kS, kT})); }) == ErrorKind::NotFilterBase);
  CHECK(kind_of([&] { filter_closure(g, set5({})); }) == ErrorKind::NotFilterBase);
  // Closures of arbitrary bases are filters.
  for (const auto& h : filter_zoo()) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << h.size()); ++mask) {
      const auto eta = from_mask(h.size(), mask);
      if (!is_filter_base(h, eta)) continue;
      const auto xi = filter_closure(h, eta);
      REQUIRE(is_filter_by_definition(h, xi));
      REQUIRE(eta.is_subset_of(xi));
    }
  }
}

TEST_CASE("e-sets are filter bases") {
  for (const auto& g : {five_element_example(), symmetric_inverse_monoid(2)}) {
    for (const auto& x : build_expansion(g).elems) CHECK(is_filter_base(g, x.eps));
  }
}

TEST_CASE("translated filter bases do not depend on the base") {
  std::mt19937 rng(20261016);
  for (const auto& g : {five_element_example(), symmetric_inverse_monoid(2), klein_four_group()}) {
    const auto filters = enumerate_filters(g);
    std::size_t checked = 0;
    for (const auto& xi : filters) {
      const auto members = xi.members();
      for (Elem t = 0; t < g.size(); ++t) {
        const Elem ti = g.inverse(t);
        if (!xi.contains(ti)) continue;
        std::vector<ElemSet> bases;
        for (int trial = 0; trial < 64; ++trial) {
          ElemSet eta(g.size());
          eta.insert(ti);
          for (Elem a : members) {
            if (rng() & 1u) eta.insert(a);
          }
          if (is_filter_base(g, eta) && filter_closure(g, eta) == xi) bases.push_back(eta);
        }
        for (std::size_t i = 1; i < bases.size(); ++i) {
          ElemSet a(g.size()), b(g.size());
          for (Elem s : bases[0].members()) a.insert(g.product(t, s));
          for (Elem s : bases[i].members()) b.insert(g.product(t, s));
          REQUIRE(filter_closure(g, a) == filter_closure(g, b));
          ++checked;
        }
      }
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("canonical partial action of the five-element example") {
  const auto g = five_element_example();
  const auto act = canonical_partial_action(g);
  REQUIRE(act.x_size == 5);
  CHECK(act.point_names == std::vector<std::string>{"{0,e,f,s,t}", "{e}", "{e,s}", "{f}", "{f,t}"});
  CHECK(is_partial_action(g, act).ok());
  CHECK(oracle::is_partial_action(g, raw_maps(act)));
  // pi_{s*}({e,s}) = {f,t}
  CHECK(act.maps[kT].at(2) == 4);
  CHECK(act.maps[kS].at(4) == 2);
  CHECK_FALSE(act.maps[kS].defined(2));
}

TEST_CASE("canonical partial action laws") {
  for (const auto& g : filter_zoo()) {
    const auto act = canonical_partial_action(g);
    CHECK(is_partial_action(g, act).ok());
    CHECK(oracle::is_partial_action(g, raw_maps(act)));
    for (Elem s = 0; s < g.size(); ++s) {
      const auto& m = act.maps[s];
      if (g.is_idempotent(s)) CHECK(m == PartialBijection::identity_on(m.domain()));
      CHECK(m * act.maps[g.inverse(s)] == PartialBijection::identity_on(m.range()));
    }
  }
}

TEST_CASE("empty action passes every criterion") {
  const auto g = five_element_example();
  PartialActionOnSet act{3, std::vector<PartialBijection>(5, PartialBijection(3)), {}};
  CHECK(is_partial_action(g, act).ok());
}

TEST_CASE("single-target mutations are judged like the definition says") {
  for (const auto& g : {five_element_example(), symmetric_inverse_monoid(2)}) {
    const auto act = canonical_partial_action(g);
    std::size_t failures = 0, mutants = 0;
    for (Elem s = 0; s < g.size(); ++s) {
      for (std::size_t x = 0; x < act.x_size; ++x) {
        for (int y = -1; y < static_cast<int>(act.x_size); ++y) {
          auto raw = act.maps[s].raw();
          if (raw[x] == y) continue;
          raw[x] = y;
          if (y >= 0 && std::count(raw.begin(), raw.end(), y) > 1) continue;
          auto mutant = act;
          mutant.maps[s] = PartialBijection(raw);
          const auto report = is_partial_action(g, mutant);
          REQUIRE(report.ok() == oracle::is_partial_action(g, raw_maps(mutant)));
          ++mutants;
          if (!report.ok()) ++failures;
        }
      }
    }
    CHECK(mutants > 0);
    CHECK(failures > 0);
  }
  // A mutation with a readable witness.
  const auto g = five_element_example();
  auto act = canonical_partial_action(g);
  act.maps[kT] = PartialBijection(std::vector<int>{0, -1, 3, -1, -1});
  const auto report = is_partial_action(g, act);
  CHECK(report.failed("range-criterion(i)"));
  CHECK(report.render().find("FAIL range-criterion(i) witness=(s)") != std::string::npos);
}

TEST_CASE("lifted canonical action") {
  const auto g = five_element_example();
  const auto table = build_expansion(g);
  const auto act = canonical_partial_action(g);
  const auto lifted = lift_action(table, act);
  CHECK(lifted.report.ok());
  std::set<std::vector<int>> distinct;
  for (const auto& m : lifted.maps) distinct.insert(m.raw());
  CHECK(distinct.size() == 7);

  // Generic universal-property lift and the domain-restriction form agree.
  const auto generic = lift_values<PartialBijection>(
      table, act.maps, [](const PartialBijection& a, const PartialBijection& b) { return a * b; });
  for (Elem x = 0; x < table.size(); ++x) {
    CHECK(lifted.maps[x] == generic[x]);
    const auto& e = table.elems[x];
    ElemSet xa(act.x_size);
    for (std::size_t p = 0; p < act.x_size; ++p) xa.insert(static_cast<Elem>(p));
    for (Elem a : e.eps.members()) xa &= act.maps[a].range();
    const auto& pt = act.maps[e.bracket];
    CHECK(lifted.maps[x] == pt.restrict_domain(pt.inverse().image(xa)));
  }
}

TEST_CASE("lift of I_2 and of the trivial action") {
  const auto i2 = symmetric_inverse_monoid(2);
  const auto lifted = lift_action(build_expansion(i2), canonical_partial_action(i2));
  CHECK(lifted.maps.size() == 10);
  CHECK(lifted.report.ok());

  const auto trivial = cyclic_group(1);
  PartialActionOnSet act{1, {PartialBijection(std::vector<int>{0})}, {}};
  const auto one = lift_action(build_expansion(trivial), act);
  CHECK(one.maps.size() == 1);
  CHECK(one.maps[0].raw() == std::vector<int>{0});
}

TEST_CASE("lift_action rejects non-actions") {
  const auto g = five_element_example();
  auto act = canonical_partial_action(g);
  act.maps[kE] = PartialBijection(5);
  CHECK(kind_of([&] { lift_action(build_expansion(g), act); }) == ErrorKind::NotPartialAction);
}

TEST_CASE("separation") {
  const auto five = separation_check(five_element_example());
  CHECK(five.expansion_size == 7);
  CHECK(five.distinct_pairs == 7);
  CHECK(five.idempotents_injective);
  CHECK(separation_check(cyclic_group(1)).distinct_pairs == 1);
  CHECK(separation_check(symmetric_inverse_monoid(2)).distinct_pairs == 10);
  CHECK(separation_check(klein_four_group()).distinct_pairs == 20);
  const auto i3 = separation_check(symmetric_inverse_monoid(3), {}, {.max_n = 64});
  CHECK(i3.expansion_size == 473);
  CHECK(i3.filter_count == 141);
  CHECK(i3.distinct_pairs == 473);
}

TEST_CASE("action documents") {
  const auto g = five_element_example();
  const auto act = canonical_partial_action(g);
  const auto text = serialize_action(g, act);
  CHECK(text == "5\n0: 0->0\ne: 0->0, 1->1, 2->2\nf: 0->0, 3->3, 4->4\ns: 0->0, 4->2\nt: 0->0, 2->4\n");
  const auto back = load_action(text, g);
  CHECK(back.maps == act.maps);
  CHECK(back.x_size == 5);
  CHECK(kind_of([&] { load_action("2\ne: 0->1\n", g); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { load_action("2\n0:\ne:\nf:\ns:\nq:\n", g); }) == ErrorKind::UnknownElement);
  CHECK(kind_of([&] { load_action("2\n0:\ne: 0->5\nf:\ns:\nt:\n", g); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { load_action("2\n0:\ne: 0->1, 1->1\nf:\ns:\nt:\n", g); }) == ErrorKind::NotPartialAction);
  CHECK(load_action("# comment\n2\n0:\ne:\nf:\ns:\nt:\n", g).maps[kE].domain().empty());
}
