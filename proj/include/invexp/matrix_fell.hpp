#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "invexp/expansion.hpp"
#include "invexp/report.hpp"
#include "invexp/semigroup.hpp"

namespace invexp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kDefaultTol = 1e-9;

/// Frobenius inner product <a, b> = tr(a* b).
Complex frobenius_inner(const Matrix& a, const Matrix& b);
/// ||a - b|| <= tol (1 + max(||a||, ||b||)).
bool near(const Matrix& a, const Matrix& b, double tol);
/// Matrix unit E_{ij} (0-based) in M_n.
Matrix matrix_unit(std::size_t n, std::size_t i, std::size_t j);

/// Linear subspace of M_n with a Frobenius-orthonormal basis.
class MatrixSubspace {
 public:
  MatrixSubspace(std::size_t n = 0, double tol = kDefaultTol) : n_(n), tol_(tol) {}

  std::size_t n() const { return n_; }
  double tol() const { return tol_; }
  std::size_t dim() const { return basis_.size(); }
  bool is_zero() const { return basis_.empty(); }
  const std::vector<Matrix>& basis() const { return basis_; }

  Matrix project(const Matrix& m) const;
  bool contains(const Matrix& m) const;

 private:
  friend MatrixSubspace subspace_from_matrices(std::span<const Matrix>, std::size_t, double);
  std::size_t n_;
  double tol_;
  std::vector<Matrix> basis_;
};

/// Gram-Schmidt with one re-orthogonalization pass; a residual is dropped
/// when its norm is at most tol (1 + largest input norm).
MatrixSubspace subspace_from_matrices(std::span<const Matrix> mats, std::size_t n, double tol = kDefaultTol);
MatrixSubspace subspace_from_matrices(std::initializer_list<Matrix> mats, std::size_t n, double tol = kDefaultTol);

/// span{uv : u in U, v in V}
MatrixSubspace subspace_product(const MatrixSubspace& u, const MatrixSubspace& v);
MatrixSubspace subspace_adjoint(const MatrixSubspace& u);
MatrixSubspace subspace_sum(const MatrixSubspace& u, const MatrixSubspace& v);
MatrixSubspace subspace_intersection(const MatrixSubspace& u, const MatrixSubspace& v);
/// Every basis matrix of U is within tol of its projection onto V.
bool subspace_leq(const MatrixSubspace& u, const MatrixSubspace& v);
bool subspace_equal(const MatrixSubspace& u, const MatrixSubspace& v);
/// Image of U under x -> c x c*.
MatrixSubspace subspace_conjugate(const Matrix& c, const MatrixSubspace& u);

/// Smallest subspace containing the inputs and closed under products and adjoints.
MatrixSubspace generated_star_algebra(std::span<const MatrixSubspace> parts);

/// Unit of a finite-dimensional *-algebra (zero for the zero space). Throws
/// NotAnAlgebra when D is not *-closed and product-closed, NoUnit when the
/// unit equations have no solution.
Matrix ideal_unit(const MatrixSubspace& d);

struct ConcreteFellBundle {
  InverseSemigroup g;
  std::vector<MatrixSubspace> fibers;
};

/// Product, adjoint and order conditions over all pairs, the ternary
/// identity A_s A_s* A_s = A_s, and an INFO line on A_s* A_s ⊆ A_{s*s}.
Report check_concrete_fell_bundle(const ConcreteFellBundle& bundle);

struct ExpandedBundle {
  ExpansionTable table;
  /// Over table.base.
  ConcreteFellBundle bundle;
  Report report;
};

/// Fiber over eps_A[t] is (prod_{a in A} A_a A_{a*}) A_t. The result is
/// checked to be a saturated Fell bundle; SaturationFailure otherwise.
ExpandedBundle expand_bundle(const ConcreteFellBundle& bundle, ExpansionOptions options = {});

/// For every s the fibers over degree s span A_s, and the total spans agree.
Report check_span_refinement(const ConcreteFellBundle& bundle, const ExpandedBundle& expanded);

struct RegularityData {
  std::vector<Matrix> u;
};

Report check_regularity(const ConcreteFellBundle& bundle, const RegularityData& u);

/// Twisted partial action with beta_s(x) = c_s x c_s* on D_{s*} -> D_s.
struct TwistedPartialActionFD {
  InverseSemigroup g;
  MatrixSubspace algebra;
  std::vector<MatrixSubspace> domains;
  std::vector<Matrix> conjugators;
  /// omega(s,t) at s * |G| + t.
  std::vector<Matrix> omegas;

  const Matrix& omega(Elem s, Elem t) const { return omegas[s * g.size() + t]; }
  Matrix& omega(Elem s, Elem t) { return omegas[s * g.size() + t]; }
  Matrix beta(Elem s, const Matrix& x) const { return conjugators[s] * x * conjugators[s].adjoint(); }
};

/// D_s = A_s A_s*, beta_s = Ad(u_s), omega(s,t) = u_s u_t u_{st}*.
/// Throws RegularityFailure when u fails check_regularity.
TwistedPartialActionFD twisted_from_regular(const ConcreteFellBundle& bundle, const RegularityData& u);

/// A_s = span{d u_s : d in D_s}, u_s = c_s.
std::pair<ConcreteFellBundle, RegularityData> regular_from_twisted(const TwistedPartialActionFD& tpa);

/// Axioms (i)-(v) plus the structural requirements (spanning, ideals,
/// *-isomorphisms, unitary cocycle) and the derived domain identities.
Report check_twisted_partial_action(const TwistedPartialActionFD& tpa);

/// Multiplies omega(r,s) by exp(i theta).
void perturb_omega(TwistedPartialActionFD& tpa, Elem r, Elem s, double theta);

struct GlobalTwisted {
  ExpansionTable table;
  TwistedPartialActionFD action;
  Report report;
};

/// Twisted action of S(G): D~_x = prod_{a in A} D_a . D_t, beta~_x =
/// Ad(prod 1_a . c_t), omega~(x,y) = omega(t,s) compressed to D~_{xy}.
/// Throws GlobalityFailure if D~_x != D~_{xx*} for some x. The report
/// carries the axioms over S(G) and the restriction round trip along iota.
GlobalTwisted twisted_global_from_partial(const TwistedPartialActionFD& tpa, ExpansionOptions options = {});

/// Max Frobenius deviation of (beta, omega) -> (A, u) -> (beta, omega):
/// domains (via their units), beta on domain bases, omega entries.
double round_trip_deviation(const TwistedPartialActionFD& tpa);

struct MatrixModel {
  ConcreteFellBundle bundle;
  RegularityData u;
};

/// Matrix units in M_2 over {0,e,f,s,t}; u = (0, E11, E22, E12, E21).
MatrixModel five_element_matrix_model();
/// Diagonal / antidiagonal grading of M_2 over Z_2; u_g = [[0,1],[1,0]].
MatrixModel z2_graded_model();
/// The trivial group acting on M_1.
MatrixModel trivial_matrix_model();

/// Entry syntax: `a`, `bi`, `a+bi`, `a-bi` (`i`, `-i` allowed).
Complex parse_complex(std::string_view text);
std::string format_complex(Complex z);

/// Bundle document:
///
///     dim <n>
///     <name>:          fiber spanning set, blank-line separated matrices
///     u <name>:        optional regularity matrix (all or none)
///
/// Elements without a fiber section are rejected.
MatrixModel load_bundle(std::string_view text, const InverseSemigroup& g, double tol = kDefaultTol);
std::string serialize_bundle(const MatrixModel& model);

}  // namespace invexp
