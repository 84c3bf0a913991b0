#include "invexp/matrix_fell.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>

#include "invexp/error.hpp"

namespace invexp {

Complex frobenius_inner(const Matrix& a, const Matrix& b) { return (a.conjugate().cwiseProduct(b)).sum(); }

bool near(const Matrix& a, const Matrix& b, double tol) {
  return (a - b).norm() <= tol * (1.0 + std::max(a.norm(), b.norm()));
}

Matrix matrix_unit(std::size_t n, std::size_t i, std::size_t j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

Matrix MatrixSubspace::project(const Matrix& m) const {
  Matrix out = Matrix::Zero(n_, n_);
  for (const auto& q : basis_) out += frobenius_inner(q, m) * q;
  return out;
}

bool MatrixSubspace::contains(const Matrix& m) const {
  return (m - project(m)).norm() <= tol_ * (1.0 + m.norm());
}

MatrixSubspace subspace_from_matrices(std::span<const Matrix> mats, std::size_t n, double tol) {
  MatrixSubspace out(n, tol);
  double scale = 0.0;
  for (const auto& m : mats) {
    if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != n) {
      throw Error(ErrorKind::ParseError, "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                             ", expected " + std::to_string(n) + "x" + std::to_string(n));
    }
    scale = std::max(scale, m.norm());
  }
  const double cut = tol * (1.0 + scale);
  for (const auto& m : mats) {
    Matrix r = m;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : out.basis_) r -= frobenius_inner(q, r) * q;
    }
    const double norm = r.norm();
    if (norm > cut) out.basis_.push_back(r / norm);
  }
  return out;
}

MatrixSubspace subspace_from_matrices(std::initializer_list<Matrix> mats, std::size_t n, double tol) {
  return subspace_from_matrices(std::span<const Matrix>(mats.begin(), mats.size()), n, tol);
}

MatrixSubspace subspace_product(const MatrixSubspace& u, const MatrixSubspace& v) {
  std::vector<Matrix> prods;
  for (const auto& a : u.basis()) {
    for (const auto& b : v.basis()) prods.push_back(a * b);
  }
  return subspace_from_matrices(prods, u.n(), u.tol());
}

MatrixSubspace subspace_adjoint(const MatrixSubspace& u) {
  std::vector<Matrix> adj;
  for (const auto& a : u.basis()) adj.push_back(a.adjoint());
  return subspace_from_matrices(adj, u.n(), u.tol());
}

MatrixSubspace subspace_sum(const MatrixSubspace& u, const MatrixSubspace& v) {
  std::vector<Matrix> all = u.basis();
  all.insert(all.end(), v.basis().begin(), v.basis().end());
  return subspace_from_matrices(all, u.n(), u.tol());
}

MatrixSubspace subspace_intersection(const MatrixSubspace& u, const MatrixSubspace& v) {
  const std::size_t n = u.n();
  if (u.is_zero() || v.is_zero()) return MatrixSubspace(n, u.tol());
  const std::size_t k = u.dim(), m = v.dim();
  Matrix stacked(n * n, k + m);
  for (std::size_t i = 0; i < k; ++i) stacked.col(i) = u.basis()[i].reshaped();
  for (std::size_t j = 0; j < m; ++j) stacked.col(k + j) = -v.basis()[j].reshaped();
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  std::vector<Matrix> common;
  for (std::size_t c = 0; c < k + m; ++c) {
    const bool null = c >= static_cast<std::size_t>(sigma.size()) || sigma(c) <= u.tol();
    if (!null) continue;
    Matrix x = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < k; ++i) x += svd.matrixV()(i, c) * u.basis()[i];
    common.push_back(x);
  }
  return subspace_from_matrices(common, n, u.tol());
}

bool subspace_leq(const MatrixSubspace& u, const MatrixSubspace& v) {
  return std::all_of(u.basis().begin(), u.basis().end(), [&](const Matrix& q) { return v.contains(q); });
}

bool subspace_equal(const MatrixSubspace& u, const MatrixSubspace& v) {
  return u.dim() == v.dim() && subspace_leq(u, v) && subspace_leq(v, u);
}

MatrixSubspace subspace_conjugate(const Matrix& c, const MatrixSubspace& u) {
  std::vector<Matrix> out;
  for (const auto& a : u.basis()) out.push_back(c * a * c.adjoint());
  return subspace_from_matrices(out, u.n(), u.tol());
}

MatrixSubspace generated_star_algebra(std::span<const MatrixSubspace> parts) {
  if (parts.empty()) return MatrixSubspace();
  MatrixSubspace acc(parts.front().n(), parts.front().tol());
  for (const auto& p : parts) acc = subspace_sum(acc, p);
  while (true) {
    MatrixSubspace next = subspace_sum(acc, subspace_adjoint(acc));
    next = subspace_sum(next, subspace_product(next, next));
    if (next.dim() == acc.dim()) return next;
    acc = std::move(next);
  }
}

Matrix ideal_unit(const MatrixSubspace& d) {
  const std::size_t n = d.n();
  if (d.is_zero()) return Matrix::Zero(n, n);
  if (!subspace_leq(subspace_adjoint(d), d) || !subspace_leq(subspace_product(d, d), d)) {
    throw Error(ErrorKind::NotAnAlgebra, "subspace of dimension " + std::to_string(d.dim()) +
                                             " is not closed under products and adjoints");
  }
  const std::size_t k = d.dim();
  const std::size_t block = n * n;
  Matrix lhs(2 * k * block, k);
  Eigen::VectorXcd rhs(2 * k * block);
  for (std::size_t j = 0; j < k; ++j) {
    const auto& dj = d.basis()[j];
    for (std::size_t i = 0; i < k; ++i) {
      const auto& di = d.basis()[i];
      lhs.block(2 * j * block, i, block, 1) = (di * dj).reshaped();
      lhs.block((2 * j + 1) * block, i, block, 1) = (dj * di).reshaped();
    }
    rhs.segment(2 * j * block, block) = dj.reshaped();
    rhs.segment((2 * j + 1) * block, block) = dj.reshaped();
  }
  const Eigen::VectorXcd c = lhs.completeOrthogonalDecomposition().solve(rhs);
  if ((lhs * c - rhs).norm() > d.tol() * (1.0 + rhs.norm())) {
    throw Error(ErrorKind::NoUnit, "no two-sided unit in a subspace of dimension " + std::to_string(k));
  }
  Matrix p = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < k; ++i) p += c(i) * d.basis()[i];
  return p;
}

namespace {

struct Tally {
  std::size_t count = 0;
  std::string witness;
  void hit(const std::string& w) {
    if (count++ == 0) witness = w;
  }
  void record(Report& report, const std::string& check) const {
    report.record(check, count == 0, witness + " violations=" + std::to_string(count));
  }
};

std::string pair_name(const InverseSemigroup& g, Elem s, Elem t) { return "(" + g.name(s) + "," + g.name(t) + ")"; }

MatrixSubspace conjugate_span(const std::vector<Matrix>& mats, const Matrix& left, const Matrix& right, std::size_t n,
                              double tol) {
  std::vector<Matrix> out;
  for (const auto& m : mats) out.push_back(left * m * right);
  return subspace_from_matrices(out, n, tol);
}

}  // namespace

Report check_concrete_fell_bundle(const ConcreteFellBundle& bundle) {
  const auto& g = bundle.g;
  const auto& a = bundle.fibers;
  if (a.size() != g.size()) throw Error(ErrorKind::ParseError, "bundle needs one fiber per element");
  Tally product, adjoint, order, ternary;
  std::size_t positivity_misses = 0;
  std::string positivity_witness;
  for (Elem s = 0; s < g.size(); ++s) {
    const Elem si = g.inverse(s);
    const auto adj = subspace_adjoint(a[s]);
    if (!subspace_leq(adj, a[si])) adjoint.hit("(" + g.name(s) + ")");
    if (!subspace_equal(subspace_product(subspace_product(a[s], adj), a[s]), a[s])) ternary.hit("(" + g.name(s) + ")");
    if (!subspace_leq(subspace_product(adj, a[s]), a[g.product(si, s)]) && positivity_misses++ == 0) {
      positivity_witness = g.name(s);
    }
    for (Elem t = 0; t < g.size(); ++t) {
      if (!subspace_leq(subspace_product(a[s], a[t]), a[g.product(s, t)])) product.hit(pair_name(g, s, t));
      if (natural_leq(g, s, t) && !subspace_leq(a[s], a[t])) order.hit(pair_name(g, s, t));
    }
  }
  Report report;
  product.record(report, "fell(product)");
  adjoint.record(report, "fell(adjoint)");
  order.record(report, "fell(order)");
  ternary.record(report, "fell(ternary)");
  report.info("fell(positivity)", positivity_misses == 0
                                      ? "a*a lies in the fiber over s*s for every s"
                                      : "a*a leaves the fiber over s*s at " + positivity_witness);
  return report;
}

ExpandedBundle expand_bundle(const ConcreteFellBundle& bundle, ExpansionOptions options) {
  const Report base_check = check_concrete_fell_bundle(bundle);
  if (!base_check.ok()) throw Error(ErrorKind::SaturationFailure, "input is not a Fell bundle:\n" + base_check.render());
  auto table = build_expansion(bundle.g, options);
  std::vector<MatrixSubspace> fibers;
  try {
    fibers = lift_values<MatrixSubspace>(table, bundle.fibers, subspace_product, subspace_equal);
  } catch (const Error& e) {
    throw Error(ErrorKind::SaturationFailure, e.what());
  }
  ConcreteFellBundle expanded{table.base, std::move(fibers)};
  Report report;
  report.pass("saturation");
  report.append(check_concrete_fell_bundle(expanded), "expanded:");
  for (Elem x = 0; x < table.size(); ++x) {
    if (!subspace_equal(subspace_adjoint(expanded.fibers[x]), expanded.fibers[table.base.inverse(x)])) {
      throw Error(ErrorKind::SaturationFailure, "adjoint fiber mismatch at " + table.base.name(x));
    }
  }
  return {std::move(table), std::move(expanded), std::move(report)};
}

Report check_span_refinement(const ConcreteFellBundle& bundle, const ExpandedBundle& expanded) {
  const auto& g = bundle.g;
  const std::size_t n = bundle.fibers.empty() ? 0 : bundle.fibers.front().n();
  const double tol = bundle.fibers.empty() ? kDefaultTol : bundle.fibers.front().tol();
  Tally per_degree, inside;
  std::vector<MatrixSubspace> sums(g.size(), MatrixSubspace(n, tol));
  for (Elem x = 0; x < expanded.table.size(); ++x) {
    const Elem s = expanded.table.degree_of(x);
    if (!subspace_leq(expanded.bundle.fibers[x], bundle.fibers[s])) inside.hit(expanded.table.base.name(x));
    sums[s] = subspace_sum(sums[s], expanded.bundle.fibers[x]);
  }
  MatrixSubspace total_a(n, tol), total_hat(n, tol);
  for (Elem s = 0; s < g.size(); ++s) {
    if (!subspace_equal(sums[s], bundle.fibers[s])) per_degree.hit("(" + g.name(s) + ")");
    total_a = subspace_sum(total_a, bundle.fibers[s]);
    total_hat = subspace_sum(total_hat, sums[s]);
  }
  Report report;
  inside.record(report, "refinement(fiber-inside-degree)");
  per_degree.record(report, "refinement(span-per-degree)");
  report.record("refinement(total-span)", subspace_equal(total_a, total_hat),
                "dims " + std::to_string(total_a.dim()) + " vs " + std::to_string(total_hat.dim()));
  const std::vector<MatrixSubspace> a_list{total_a}, hat_list{total_hat};
  report.record("refinement(generated-algebra)",
                subspace_equal(generated_star_algebra(a_list), generated_star_algebra(hat_list)), "algebras differ");
  return report;
}

Report check_regularity(const ConcreteFellBundle& bundle, const RegularityData& u) {
  const auto& g = bundle.g;
  const auto& a = bundle.fibers;
  if (u.u.size() != g.size()) throw Error(ErrorKind::ParseError, "regularity data needs one matrix per element");
  const std::size_t n = a.front().n();
  const double tol = a.front().tol();
  const Matrix id = Matrix::Identity(n, n);
  Tally left, right, range, source, idem;
  for (Elem s = 0; s < g.size(); ++s) {
    const auto adj = subspace_adjoint(a[s]);
    const auto ideal_left = subspace_product(a[s], adj);
    const auto ideal_right = subspace_product(adj, a[s]);
    if (!subspace_equal(conjugate_span(adj.basis(), u.u[s], id, n, tol), ideal_left)) left.hit("(" + g.name(s) + ")");
    if (!subspace_equal(conjugate_span(adj.basis(), id, u.u[s], n, tol), ideal_right)) right.hit("(" + g.name(s) + ")");
    const Elem si = g.inverse(s);
    const Matrix unit_s = ideal_unit(ideal_left);
    const Matrix unit_si = ideal_unit(subspace_product(a[si], subspace_adjoint(a[si])));
    if (!near(u.u[s] * u.u[s].adjoint(), unit_s, tol)) range.hit("(" + g.name(s) + ")");
    if (!near(u.u[s].adjoint() * u.u[s], unit_si, tol)) source.hit("(" + g.name(s) + ")");
    if (g.is_idempotent(s) && !near(u.u[s], unit_s, tol)) idem.hit("(" + g.name(s) + ")");
  }
  Report report;
  left.record(report, "regularity(uA*=AA*)");
  right.record(report, "regularity(A*u=A*A)");
  range.record(report, "regularity(uu*=1_s)");
  source.record(report, "regularity(u*u=1_s*)");
  idem.record(report, "regularity(u_e=1_e)");
  return report;
}

TwistedPartialActionFD twisted_from_regular(const ConcreteFellBundle& bundle, const RegularityData& u) {
  const Report check = check_regularity(bundle, u);
  if (!check.ok()) throw Error(ErrorKind::RegularityFailure, "regularity data rejected:\n" + check.render());
  const auto& g = bundle.g;
  const std::size_t n = bundle.fibers.front().n();
  const double tol = bundle.fibers.front().tol();
  TwistedPartialActionFD tpa{g, MatrixSubspace(n, tol), {}, u.u, {}};
  for (Elem s = 0; s < g.size(); ++s) {
    tpa.domains.push_back(subspace_product(bundle.fibers[s], subspace_adjoint(bundle.fibers[s])));
    tpa.algebra = subspace_sum(tpa.algebra, tpa.domains.back());
  }
  for (Elem s = 0; s < g.size(); ++s) {
    for (Elem t = 0; t < g.size(); ++t) tpa.omegas.push_back(u.u[s] * u.u[t] * u.u[g.product(s, t)].adjoint());
  }
  return tpa;
}

std::pair<ConcreteFellBundle, RegularityData> regular_from_twisted(const TwistedPartialActionFD& tpa) {
  ConcreteFellBundle bundle{tpa.g, {}};
  const std::size_t n = tpa.algebra.n();
  const Matrix id = Matrix::Identity(n, n);
  for (Elem s = 0; s < tpa.g.size(); ++s) {
    bundle.fibers.push_back(conjugate_span(tpa.domains[s].basis(), id, tpa.conjugators[s], n, tpa.algebra.tol()));
  }
  return {std::move(bundle), RegularityData{tpa.conjugators}};
}

Report check_twisted_partial_action(const TwistedPartialActionFD& tpa) {
  const auto& g = tpa.g;
  const Elem m = static_cast<Elem>(g.size());
  const auto& d = tpa.domains;
  const double tol = tpa.algebra.tol();
  Report report;

  // Structure.
  MatrixSubspace span(tpa.algebra.n(), tol);
  for (const auto& dom : d) span = subspace_sum(span, dom);
  report.record("twisted(span)", subspace_equal(span, tpa.algebra),
                "dims " + std::to_string(span.dim()) + " vs " + std::to_string(tpa.algebra.dim()));

  Tally ideals;
  std::vector<Matrix> unit(m);
  for (Elem s = 0; s < m; ++s) {
    const bool ideal = subspace_leq(subspace_adjoint(d[s]), d[s]) &&
                       subspace_leq(subspace_product(tpa.algebra, d[s]), d[s]) &&
                       subspace_leq(subspace_product(d[s], tpa.algebra), d[s]);
    if (!ideal) {
      ideals.hit("(" + g.name(s) + ")");
      unit[s] = Matrix::Zero(tpa.algebra.n(), tpa.algebra.n());
    } else {
      unit[s] = ideal_unit(d[s]);
    }
  }
  ideals.record(report, "twisted(domains-are-ideals)");
  if (ideals.count != 0) return report;

  std::vector<MatrixSubspace> inter(std::size_t{m} * m);
  for (Elem s = 0; s < m; ++s) {
    for (Elem t = 0; t < m; ++t) inter[s * m + t] = subspace_intersection(d[s], d[t]);
  }
  auto cap = [&](Elem s, Elem t) -> const MatrixSubspace& { return inter[s * m + t]; };

  Tally iso, unitary;
  for (Elem s = 0; s < m; ++s) {
    const Elem si = g.inverse(s);
    bool ok = subspace_equal(subspace_conjugate(tpa.conjugators[s], d[si]), d[s]);
    for (const auto& x : d[si].basis()) {
      if (!near(tpa.beta(s, x.adjoint()), tpa.beta(s, x).adjoint(), tol)) ok = false;
      for (const auto& y : d[si].basis()) {
        if (!near(tpa.beta(s, x * y), tpa.beta(s, x) * tpa.beta(s, y), tol)) ok = false;
      }
    }
    if (!ok) iso.hit("(" + g.name(s) + ")");
    for (Elem t = 0; t < m; ++t) {
      const auto& j = cap(s, g.product(s, t));
      const Matrix& w = tpa.omega(s, t);
      const Matrix one = ideal_unit(j);
      if (!j.contains(w) || !near(w * w.adjoint(), one, tol) || !near(w.adjoint() * w, one, tol)) {
        unitary.hit(pair_name(g, s, t));
      }
    }
  }
  iso.record(report, "twisted(beta-star-iso)");
  unitary.record(report, "twisted(omega-unitary)");

  Tally ax1, ax2, ax3, ax4, ax5;
  for (Elem r = 0; r < m; ++r) {
    const Elem ri = g.inverse(r);
    for (Elem s = 0; s < m; ++s) {
      const Elem rs = g.product(r, s);
      const Elem si = g.inverse(s);
      // (i)
      if (!subspace_equal(subspace_conjugate(tpa.conjugators[r], cap(ri, s)), cap(r, rs))) ax1.hit(pair_name(g, r, s));
      // (ii)
      const auto dom2 = subspace_intersection(d[si], d[g.inverse(rs)]);
      for (const auto& x : dom2.basis()) {
        const Matrix& w = tpa.omega(r, s);
        if (!near(tpa.beta(r, tpa.beta(s, x)), w * tpa.beta(rs, x) * w.adjoint(), tol)) {
          ax2.hit(pair_name(g, r, s));
          break;
        }
      }
      // (iii)
      for (Elem t = 0; t < m; ++t) {
        const Elem st = g.product(s, t);
        const auto dom3 = subspace_intersection(cap(ri, s), d[st]);
        for (const auto& x : dom3.basis()) {
          const Matrix lhs = tpa.beta(r, x * tpa.omega(s, t)) * tpa.omega(r, st);
          const Matrix rhs = tpa.beta(r, x) * tpa.omega(r, s) * tpa.omega(rs, t);
          if (!near(lhs, rhs, tol)) {
            ax3.hit("(" + g.name(r) + "," + g.name(s) + "," + g.name(t) + ")");
            break;
          }
        }
      }
      // (iv), idempotent pairs
      if (g.is_idempotent(r) && g.is_idempotent(s) && !near(tpa.omega(r, s), unit[rs], tol)) ax4.hit(pair_name(g, r, s));
      // (v), with r playing s and s playing e
      if (g.is_idempotent(s)) {
        const Elem rie = g.product(ri, s);
        for (const auto& x : d[rie].basis()) {
          if (!near(tpa.omega(ri, s) * tpa.omega(rie, r) * x, tpa.omega(ri, r) * x, tol)) {
            ax5.hit(pair_name(g, r, s));
            break;
          }
        }
      }
    }
    if (!near(tpa.omega(r, g.product(ri, r)), unit[r], tol)) ax4.hit(pair_name(g, r, g.product(ri, r)));
    if (!near(tpa.omega(g.product(r, ri), r), unit[r], tol)) ax4.hit(pair_name(g, g.product(r, ri), r));
  }
  ax1.record(report, "twisted-axiom(i)");
  ax2.record(report, "twisted-axiom(ii)");
  ax3.record(report, "twisted-axiom(iii)");
  ax4.record(report, "twisted-axiom(iv)");
  ax5.record(report, "twisted-axiom(v)");

  // Derived domain identities.
  Tally below_range, beta_id, meets, order, commute;
  for (Elem s = 0; s < m; ++s) {
    const Elem range = g.product(s, g.inverse(s));
    if (!subspace_leq(d[s], d[range])) below_range.hit("(" + g.name(s) + ")");
    if (g.is_idempotent(s)) {
      for (const auto& x : d[s].basis()) {
        if (!near(tpa.beta(s, x), x, tol)) {
          beta_id.hit("(" + g.name(s) + ")");
          break;
        }
      }
    }
    for (Elem t = 0; t < m; ++t) {
      if (!subspace_equal(cap(s, t), cap(s, g.product(range, t)))) meets.hit(pair_name(g, s, t));
      if (natural_leq(g, s, t) && !subspace_leq(d[s], d[t])) order.hit(pair_name(g, s, t));
      const auto st = subspace_product(d[s], d[t]);
      if (!subspace_equal(st, subspace_product(d[t], d[s])) || !subspace_equal(st, cap(s, t))) {
        commute.hit(pair_name(g, s, t));
      }
    }
  }
  below_range.record(report, "twisted-props(D_s<=D_ss*)");
  beta_id.record(report, "twisted-props(beta_e=id)");
  meets.record(report, "twisted-props(D_s^D_t=D_s^D_ss*t)");
  order.record(report, "twisted-props(order)");
  commute.record(report, "twisted-props(ideal-products-commute)");
  return report;
}

void perturb_omega(TwistedPartialActionFD& tpa, Elem r, Elem s, double theta) {
  tpa.omega(r, s) *= std::polar(1.0, theta);
}

GlobalTwisted twisted_global_from_partial(const TwistedPartialActionFD& tpa, ExpansionOptions options) {
  const auto& g = tpa.g;
  const std::size_t n = tpa.algebra.n();
  const double tol = tpa.algebra.tol();
  auto table = build_expansion(g, options);
  const auto& sg = table.base;
  const Elem size = static_cast<Elem>(table.size());

  std::vector<Matrix> unit;
  for (const auto& dom : tpa.domains) unit.push_back(ideal_unit(dom));

  TwistedPartialActionFD global{sg, tpa.algebra, {}, {}, {}};
  for (const auto& x : table.elems) {
    MatrixSubspace dom = tpa.domains[x.eps.members().front()];
    Matrix proj = unit[x.eps.members().front()];
    for (Elem a : x.eps.members()) {
      dom = subspace_product(dom, tpa.domains[a]);
      proj = proj * unit[a];
    }
    global.domains.push_back(subspace_product(dom, tpa.domains[x.bracket]));
    global.conjugators.push_back(proj * tpa.conjugators[x.bracket]);
  }
  std::vector<Matrix> dom_unit;
  for (const auto& dom : global.domains) dom_unit.push_back(ideal_unit(dom));
  for (Elem x = 0; x < size; ++x) {
    for (Elem y = 0; y < size; ++y) {
      const Elem r = table.degree_of(x), s = table.degree_of(y);
      global.omegas.push_back(tpa.omega(r, s) * dom_unit[sg.product(x, y)]);
    }
  }

  for (Elem x = 0; x < size; ++x) {
    const Elem xx = sg.product(x, sg.inverse(x));
    if (!subspace_equal(global.domains[x], global.domains[xx])) {
      throw Error(ErrorKind::GlobalityFailure, "domain of " + sg.name(x) + " differs from that of " + sg.name(xx));
    }
  }

  Report report;
  report.pass("globality(D_x=D_xx*)");
  report.append(check_twisted_partial_action(global), "global:");

  Tally doms, betas, omegas;
  for (Elem s = 0; s < g.size(); ++s) {
    const Elem xs = table.canonical_id(s);
    if (!subspace_equal(global.domains[xs], tpa.domains[s])) doms.hit("(" + g.name(s) + ")");
    for (const auto& v : tpa.domains[g.inverse(s)].basis()) {
      if (!near(global.beta(xs, v), tpa.beta(s, v), tol)) {
        betas.hit("(" + g.name(s) + ")");
        break;
      }
    }
    for (Elem t = 0; t < g.size(); ++t) {
      if (!near(global.omega(xs, table.canonical_id(t)), tpa.omega(s, t), tol)) omegas.hit(pair_name(g, s, t));
    }
  }
  doms.record(report, "restriction(domains)");
  betas.record(report, "restriction(beta)");
  omegas.record(report, "restriction(omega)");
  (void)n;
  return {std::move(table), std::move(global), std::move(report)};
}

double round_trip_deviation(const TwistedPartialActionFD& tpa) {
  const auto [bundle, u] = regular_from_twisted(tpa);
  const auto back = twisted_from_regular(bundle, u);
  double worst = 0.0;
  const auto& g = tpa.g;
  for (Elem s = 0; s < g.size(); ++s) {
    worst = std::max(worst, (ideal_unit(tpa.domains[s]) - ideal_unit(back.domains[s])).norm());
    for (const auto& x : tpa.domains[g.inverse(s)].basis()) {
      worst = std::max(worst, (tpa.beta(s, x) - back.beta(s, x)).norm());
    }
    for (Elem t = 0; t < g.size(); ++t) worst = std::max(worst, (tpa.omega(s, t) - back.omega(s, t)).norm());
  }
  return worst;
}

MatrixModel five_element_matrix_model() {
  const auto g = five_element_example();
  const std::size_t n = 2;
  const Matrix e11 = matrix_unit(n, 0, 0), e22 = matrix_unit(n, 1, 1);
  const Matrix e12 = matrix_unit(n, 0, 1), e21 = matrix_unit(n, 1, 0);
  return {{g,
           {MatrixSubspace(n), subspace_from_matrices({e11}, n), subspace_from_matrices({e22}, n),
            subspace_from_matrices({e12}, n), subspace_from_matrices({e21}, n)}},
          {{Matrix::Zero(n, n), e11, e22, e12, e21}}};
}

MatrixModel z2_graded_model() {
  const std::size_t n = 2;
  const Matrix e11 = matrix_unit(n, 0, 0), e22 = matrix_unit(n, 1, 1);
  const Matrix e12 = matrix_unit(n, 0, 1), e21 = matrix_unit(n, 1, 0);
  return {{cyclic_group(2), {subspace_from_matrices({e11, e22}, n), subspace_from_matrices({e12, e21}, n)}},
          {{Matrix::Identity(n, n), e12 + e21}}};
}

MatrixModel trivial_matrix_model() {
  return {{cyclic_group(1), {subspace_from_matrices({Matrix::Identity(1, 1)}, 1)}}, {{Matrix::Identity(1, 1)}}};
}

namespace {

double parse_real(std::string_view text, std::string_view whole) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::ParseError, "bad matrix entry '" + std::string(whole) + "'");
  }
  return v;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  const std::string_view whole = text;
  if (text.empty()) throw Error(ErrorKind::ParseError, "empty matrix entry");
  if (text.back() != 'i') return {parse_real(text, whole), 0.0};
  text.remove_suffix(1);
  std::size_t split = std::string_view::npos;
  for (std::size_t p = text.size(); p-- > 1;) {
    if ((text[p] == '+' || text[p] == '-') && text[p - 1] != 'e' && text[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  auto imag_of = [&](std::string_view im) {
    if (im.empty() || im == "+") return 1.0;
    if (im == "-") return -1.0;
    return parse_real(im, whole);
  };
  if (split == std::string_view::npos) return {0.0, imag_of(text)};
  return {parse_real(text.substr(0, split), whole), imag_of(text.substr(split))};
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_real(z.real());
  std::string im = format_real(z.imag());
  if (im.front() != '-') im = "+" + im;
  return format_real(z.real()) + im + "i";
}

MatrixModel load_bundle(std::string_view text, const InverseSemigroup& g, double tol) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  std::optional<std::size_t> n;
  // Section target: fiber spanning set or u matrix of an element.
  std::vector<std::optional<std::vector<Matrix>>> fibers(g.size());
  std::vector<std::optional<std::vector<Matrix>>> us(g.size());
  std::vector<Matrix>* current = nullptr;
  std::vector<std::vector<Complex>> rows;
  auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
  auto flush_rows = [&] {
    if (rows.empty()) return;
    if (rows.size() != *n) throw Error(ErrorKind::ParseError, where() + "matrix has " + std::to_string(rows.size()) + " rows");
    Matrix m(*n, *n);
    for (std::size_t i = 0; i < *n; ++i) {
      for (std::size_t j = 0; j < *n; ++j) m(i, j) = rows[i][j];
    }
    current->push_back(m);
    rows.clear();
  };
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) {
      if (current) flush_rows();
      continue;
    }
    if (!n) {
      std::istringstream hdr(line);
      std::string word;
      std::size_t value = 0;
      if (!(hdr >> word >> value) || word != "dim" || value == 0 || value > 16) {
        throw Error(ErrorKind::ParseError, where() + "expected 'dim <n>' with 1 <= n <= 16");
      }
      n = value;
      continue;
    }
    if (line.back() == ':') {
      if (current) flush_rows();
      std::string name = trim(std::string_view(line).substr(0, line.size() - 1));
      bool is_u = false;
      if (name.rfind("u ", 0) == 0) {
        is_u = true;
        name = trim(std::string_view(name).substr(2));
      }
      const auto s = g.find(name);
      if (!s) throw Error(ErrorKind::UnknownElement, where() + "no element '" + name + "'");
      auto& slot = is_u ? us[*s] : fibers[*s];
      if (slot) throw Error(ErrorKind::ParseError, where() + "duplicate section for " + name);
      slot.emplace();
      current = &*slot;
      continue;
    }
    if (!current) throw Error(ErrorKind::ParseError, where() + "matrix row outside a section");
    std::istringstream row(line);
    std::string tok;
    std::vector<Complex> entries;
    while (row >> tok) entries.push_back(parse_complex(tok));
    if (entries.size() != *n) throw Error(ErrorKind::ParseError, where() + "expected " + std::to_string(*n) + " entries");
    rows.push_back(std::move(entries));
    if (rows.size() == *n) flush_rows();
  }
  if (current) flush_rows();
  if (!n) throw Error(ErrorKind::ParseError, "empty document");

  MatrixModel model{{g, {}}, {}};
  const bool any_u = std::any_of(us.begin(), us.end(), [](const auto& v) { return v.has_value(); });
  for (Elem s = 0; s < g.size(); ++s) {
    if (!fibers[s]) throw Error(ErrorKind::ParseError, "no fiber section for " + g.name(s));
    model.bundle.fibers.push_back(subspace_from_matrices(*fibers[s], *n, tol));
    if (any_u) {
      if (!us[s] || us[s]->size() != 1) throw Error(ErrorKind::ParseError, "need exactly one u matrix for " + g.name(s));
      model.u.u.push_back(us[s]->front());
    }
  }
  return model;
}

std::string serialize_bundle(const MatrixModel& model) {
  const auto& g = model.bundle.g;
  const std::size_t n = model.bundle.fibers.empty() ? 1 : model.bundle.fibers.front().n();
  std::string out = "dim " + std::to_string(n) + "\n";
  auto emit = [&](const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) out += (j ? " " : "") + format_complex(m(i, j));
      out += "\n";
    }
  };
  for (Elem s = 0; s < g.size(); ++s) {
    out += "\n" + g.name(s) + ":\n";
    const auto& basis = model.bundle.fibers[s].basis();
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (k) out += "\n";
      emit(basis[k]);
    }
  }
  for (Elem s = 0; s < model.u.u.size(); ++s) {
    out += "\nu " + g.name(s) + ":\n";
    emit(model.u.u[s]);
  }
  return out;
}

}  // namespace invexp
