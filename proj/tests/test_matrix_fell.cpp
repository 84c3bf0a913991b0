#include <cmath>

#include "doctest.h"
#include "invexp/matrix_fell.hpp"
#include "test_util.hpp"

using namespace invexp;
using invexp::testing::kind_of;

namespace {

constexpr Elem kZero = 0, kE = 1, kF = 2, kS = 3, kT = 4;

Matrix unit2(std::size_t i, std::size_t j) { return matrix_unit(2, i, j); }
MatrixSubspace span2(std::initializer_list<Matrix> m) { return subspace_from_matrices(m, 2); }
MatrixSubspace diagonal2() { return span2({unit2(0, 0), unit2(1, 1)}); }

// Which matrix unit a fiber of the five-element model holds: (row, col) or none for 0.
std::optional<std::pair<int, int>> unit_of(Elem s) {
  switch (s) {
    case kE: return std::pair{0, 0};
    case kF: return std::pair{1, 1};
    case kS: return std::pair{0, 1};
    case kT: return std::pair{1, 0};
    default: return std::nullopt;
  }
}

}  // namespace

TEST_CASE("subspace_from_matrices rank decisions") {
  CHECK(span2({unit2(0, 0), 2.0 * unit2(0, 0)}).dim() == 1);
  CHECK(span2({unit2(0, 1)}).dim() == 1);
  CHECK(span2({unit2(0, 0), unit2(0, 0) + 1e-15 * unit2(1, 1)}).dim() == 1);
  CHECK(span2({unit2(0, 0), unit2(0, 0) + 1e-3 * unit2(1, 1)}).dim() == 2);
  CHECK(span2({Matrix::Zero(2, 2)}).dim() == 0);
  const auto full = span2({unit2(0, 0), unit2(0, 1), unit2(1, 0), unit2(1, 1), Matrix::Identity(2, 2)});
  CHECK(full.dim() == 4);
  for (std::size_t i = 0; i < full.dim(); ++i) {
    for (std::size_t j = 0; j < full.dim(); ++j) {
      CHECK(std::abs(frobenius_inner(full.basis()[i], full.basis()[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
  }
  CHECK(kind_of([] { subspace_from_matrices({Matrix::Zero(3, 3)}, 2); }) == ErrorKind::ParseError);
}

TEST_CASE("subspace product, adjoint, order, intersection") {
  CHECK(subspace_equal(subspace_product(span2({unit2(0, 1)}), span2({unit2(1, 0)})), span2({unit2(0, 0)})));
  CHECK(subspace_product(span2({unit2(0, 1)}), MatrixSubspace(2)).is_zero());
  CHECK(subspace_product(span2({unit2(0, 1)}), span2({unit2(0, 1)})).is_zero());
  CHECK(subspace_equal(subspace_adjoint(span2({unit2(0, 1)})), span2({unit2(1, 0)})));
  CHECK(subspace_leq(span2({unit2(0, 0)}), diagonal2()));
  CHECK_FALSE(subspace_leq(span2({unit2(0, 1)}), diagonal2()));
  CHECK(subspace_equal(subspace_intersection(diagonal2(), span2({unit2(0, 0), unit2(0, 1)})), span2({unit2(0, 0)})));
  CHECK(subspace_intersection(span2({unit2(0, 1)}), diagonal2()).is_zero());
  const Complex i{0.0, 1.0};
  CHECK(subspace_equal(span2({i * unit2(0, 0)}), span2({unit2(0, 0)})));
  // Tilted line through E11 + E22 lies in the diagonal.
  CHECK(subspace_equal(subspace_intersection(span2({Matrix::Identity(2, 2)}), diagonal2()),
                       span2({Matrix::Identity(2, 2)})));
}

TEST_CASE("generated_star_algebra") {
  const std::vector<MatrixSubspace> one{span2({unit2(0, 1)})};
  CHECK(generated_star_algebra(one).dim() == 4);
  const std::vector<MatrixSubspace> diag{diagonal2()};
  CHECK(subspace_equal(generated_star_algebra(diag), diagonal2()));
  const auto model = five_element_matrix_model();
  const std::vector<MatrixSubspace> idem{model.bundle.fibers[kZero], model.bundle.fibers[kE], model.bundle.fibers[kF]};
  CHECK(subspace_equal(generated_star_algebra(idem), diagonal2()));
}

TEST_CASE("ideal_unit") {
  CHECK(near(ideal_unit(span2({unit2(0, 0)})), unit2(0, 0), 1e-12));
  CHECK(near(ideal_unit(diagonal2()), Matrix::Identity(2, 2), 1e-12));
  CHECK(ideal_unit(MatrixSubspace(2)).isZero());
  CHECK(kind_of([] { ideal_unit(span2({unit2(0, 1)})); }) == ErrorKind::NotAnAlgebra);
  const auto full = span2({unit2(0, 0), unit2(0, 1), unit2(1, 0), unit2(1, 1)});
  const Matrix p = ideal_unit(full);
  CHECK(near(p, Matrix::Identity(2, 2), 1e-12));
}

TEST_CASE("five-element matrix model is a concrete Fell bundle") {
  const auto model = five_element_matrix_model();
  const auto report = check_concrete_fell_bundle(model.bundle);
  CHECK(report.ok());
  // Index-rule oracle: E_ij E_kl = [j == k] E_il.
  const auto& a = model.bundle.fibers;
  const auto& g = model.bundle.g;
  for (Elem s = 0; s < 5; ++s) {
    for (Elem t = 0; t < 5; ++t) {
      const auto us = unit_of(s), ut = unit_of(t);
      MatrixSubspace expected(2);
      if (us && ut && us->second == ut->first) expected = span2({unit2(us->first, ut->second)});
      CHECK(subspace_equal(subspace_product(a[s], a[t]), expected));
      CHECK(subspace_leq(expected, a[g.product(s, t)]));
    }
  }
}

TEST_CASE("corrupted fiber is caught") {
  auto model = five_element_matrix_model();
  model.bundle.fibers[kS] = span2({unit2(0, 0)});
  const auto report = check_concrete_fell_bundle(model.bundle);
  CHECK(report.failed("fell(product)"));
  CHECK_FALSE(report.ok());
}

TEST_CASE("Z2-graded model is saturated") {
  const auto model = z2_graded_model();
  CHECK(check_concrete_fell_bundle(model.bundle).ok());
  const auto& a = model.bundle.fibers;
  CHECK(subspace_equal(subspace_product(a[0], a[1]), a[1]));
  CHECK(subspace_equal(subspace_product(a[1], a[1]), a[0]));
  CHECK(subspace_equal(subspace_product(a[1], a[0]), a[1]));
}

TEST_CASE("expanded five-element bundle") {
  const auto model = five_element_matrix_model();
  const auto expanded = expand_bundle(model.bundle);
  CHECK(expanded.report.ok());
  CHECK(expanded.table.size() == 7);
  const auto& sg = expanded.table.base;
  const auto& fib = expanded.bundle.fibers;
  const Elem eps_s = *sg.find("eps{e,s}");
  const Elem br_s = *sg.find("br{s}");
  CHECK(subspace_equal(fib[eps_s], span2({unit2(0, 0)})));
  CHECK(subspace_equal(fib[br_s], model.bundle.fibers[kS]));
  for (Elem x = 0; x < 7; ++x) {
    for (Elem y = 0; y < 7; ++y) CHECK(subspace_equal(subspace_product(fib[x], fib[y]), fib[sg.product(x, y)]));
  }
  CHECK(check_span_refinement(model.bundle, expanded).ok());
}

TEST_CASE("expanded Z2 and trivial bundles") {
  const auto z2 = z2_graded_model();
  const auto expanded = expand_bundle(z2.bundle);
  CHECK(expanded.table.size() == 3);
  const auto& sg = expanded.table.base;
  CHECK(subspace_equal(expanded.bundle.fibers[*sg.find("eps{1}")], diagonal2()));
  CHECK(subspace_equal(expanded.bundle.fibers[*sg.find("eps{1,g}")], diagonal2()));
  CHECK(check_span_refinement(z2.bundle, expanded).ok());

  const auto trivial = trivial_matrix_model();
  const auto one = expand_bundle(trivial.bundle);
  CHECK(one.table.size() == 1);
  CHECK(subspace_equal(one.bundle.fibers[0], trivial.bundle.fibers[0]));
  CHECK(check_span_refinement(trivial.bundle, one).ok());
}

TEST_CASE("regularity") {
  const auto model = five_element_matrix_model();
  CHECK(check_regularity(model.bundle, model.u).ok());
  CHECK(check_regularity(z2_graded_model().bundle, z2_graded_model().u).ok());
  CHECK(check_regularity(trivial_matrix_model().bundle, trivial_matrix_model().u).ok());
  RegularityData zero{std::vector<Matrix>(5, Matrix::Zero(2, 2))};
  const auto report = check_regularity(model.bundle, zero);
  CHECK(report.failed("regularity(uu*=1_s)"));
  CHECK(kind_of([&] { twisted_from_regular(model.bundle, zero); }) == ErrorKind::RegularityFailure);
}

TEST_CASE("twisted partial action from regularity data") {
  const auto model = five_element_matrix_model();
  const auto tpa = twisted_from_regular(model.bundle, model.u);
  CHECK(near(tpa.omega(kS, kT), unit2(0, 0), 1e-12));
  CHECK(subspace_equal(tpa.domains[kS], span2({unit2(0, 0)})));
  CHECK(subspace_equal(tpa.algebra, diagonal2()));
  const auto report = check_twisted_partial_action(tpa);
  CHECK_MESSAGE(report.ok(), report.render());

  auto phased = model.u;
  phased.u[kS] = Complex(0.0, 1.0) * unit2(0, 1);
  const auto twisted = twisted_from_regular(model.bundle, phased);
  CHECK(near(twisted.omega(kT, kS), Complex(0.0, 1.0) * unit2(1, 1), 1e-12));
  CHECK(check_twisted_partial_action(twisted).ok());

  const auto z2 = twisted_from_regular(z2_graded_model().bundle, z2_graded_model().u);
  CHECK(check_twisted_partial_action(z2).ok());
  for (const auto& w : z2.omegas) CHECK(near(w, Matrix::Identity(2, 2), 1e-12));
}

TEST_CASE("single phase perturbations of omega are detected") {
  const auto model = five_element_matrix_model();
  const auto tpa = twisted_from_regular(model.bundle, model.u);
  auto a = tpa;
  perturb_omega(a, kS, kT, 0.1);
  const auto ra = check_twisted_partial_action(a);
  CHECK_FALSE(ra.ok());
  CHECK(ra.failed("twisted-axiom(iii)"));
  auto b = tpa;
  perturb_omega(b, kS, kF, 0.1);
  CHECK(check_twisted_partial_action(b).failed("twisted-axiom(iv)"));
  for (Elem r = 0; r < 5; ++r) {
    for (Elem s = 0; s < 5; ++s) {
      if (tpa.omega(r, s).isZero()) continue;
      auto c = tpa;
      perturb_omega(c, r, s, 0.1);
      CHECK_FALSE(check_twisted_partial_action(c).ok());
    }
  }
}

TEST_CASE("global twisted action of S(G)") {
  const auto model = five_element_matrix_model();
  const auto tpa = twisted_from_regular(model.bundle, model.u);
  const auto global = twisted_global_from_partial(tpa);
  CHECK_MESSAGE(global.report.ok(), global.report.render());
  const auto& sg = global.table.base;
  CHECK(subspace_equal(global.action.domains[*sg.find("eps{e,s}")], span2({unit2(0, 0)})));
  CHECK(subspace_equal(global.action.domains[*sg.find("br{s}")], span2({unit2(0, 0)})));
  CHECK(global.report.passed("restriction(omega)"));

  const auto z2 = twisted_from_regular(z2_graded_model().bundle, z2_graded_model().u);
  CHECK(twisted_global_from_partial(z2).report.ok());
  const auto one = twisted_from_regular(trivial_matrix_model().bundle, trivial_matrix_model().u);
  CHECK(twisted_global_from_partial(one).report.ok());
}

TEST_CASE("round trip (beta, omega) -> (A, u) -> (beta, omega)") {
  const auto five = five_element_matrix_model();
  CHECK(round_trip_deviation(twisted_from_regular(five.bundle, five.u)) < 1e-8);
  auto phased = five.u;
  phased.u[kS] = Complex(0.0, 1.0) * unit2(0, 1);
  CHECK(round_trip_deviation(twisted_from_regular(five.bundle, phased)) < 1e-8);
  const auto z2 = z2_graded_model();
  CHECK(round_trip_deviation(twisted_from_regular(z2.bundle, z2.u)) < 1e-8);
  const auto [bundle, u] = regular_from_twisted(twisted_from_regular(five.bundle, five.u));
  for (Elem s = 0; s < 5; ++s) CHECK(subspace_equal(bundle.fibers[s], five.bundle.fibers[s]));
}

TEST_CASE("complex entries") {
  CHECK(parse_complex("1") == Complex(1, 0));
  CHECK(parse_complex("-0.5") == Complex(-0.5, 0));
  CHECK(parse_complex("2i") == Complex(0, 2));
  CHECK(parse_complex("i") == Complex(0, 1));
  CHECK(parse_complex("-i") == Complex(0, -1));
  CHECK(parse_complex("1+2i") == Complex(1, 2));
  CHECK(parse_complex("1-i") == Complex(1, -1));
  CHECK(parse_complex("1e-3+2.5e+1i") == Complex(1e-3, 25));
  CHECK(kind_of([] { parse_complex("x"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_complex("1+xi"); }) == ErrorKind::ParseError);
  for (Complex z : {Complex(0.1, -0.2), Complex(-3, 0), Complex(0, 1e-17)}) CHECK(parse_complex(format_complex(z)) == z);
  CHECK(format_complex(Complex(1, -1)) == "1-1i");
  CHECK(format_complex(Complex(0, 0)) == "0");
}

TEST_CASE("bundle documents") {
  const auto g = five_element_example();
  const std::string doc =
      "dim 2\n"
      "0:\n"
      "e:\n1 0\n0 0\n"
      "f:\n0 0\n0 1\n"
      "s:\n0 1\n0 0\n"
      "t:\n0 0\n1 0\n"
      "u 0:\n0 0\n0 0\n"
      "u e:\n1 0\n0 0\n"
      "u f:\n0 0\n0 1\n"
      "u s:\n0 i\n0 0\n"
      "u t:\n0 0\n1 0\n";
  const auto model = load_bundle(doc, g);
  CHECK(check_concrete_fell_bundle(model.bundle).ok());
  CHECK(check_regularity(model.bundle, model.u).ok());
  CHECK(model.u.u[kS](0, 1) == Complex(0, 1));
  const auto again = load_bundle(serialize_bundle(model), g);
  for (Elem s = 0; s < 5; ++s) {
    CHECK(subspace_equal(again.bundle.fibers[s], model.bundle.fibers[s]));
    CHECK(near(again.u.u[s], model.u.u[s], 0.0));
  }
  CHECK(kind_of([&] { load_bundle("dim 2\ne:\n1 0\n0 0\n", g); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { load_bundle("dim 2\nq:\n", g); }) == ErrorKind::UnknownElement);
  CHECK(kind_of([&] { load_bundle("dim 2\n0:\ne:\n1 0 0\n", g); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { load_bundle("2\n", g); }) == ErrorKind::ParseError);
}
