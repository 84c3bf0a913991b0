#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "invexp/error.hpp"
#include "invexp/partial_hom.hpp"
#include "invexp/report.hpp"
#include "invexp/semigroup.hpp"

namespace invexp {

/// Element eps_A [t] of the prefix expansion, kept in normal form: A is a
/// finite tt*-set containing t (and hence tt*).
struct ExpElem {
  ElemSet eps;
  Elem bracket = 0;

  friend bool operator==(const ExpElem& a, const ExpElem& b) {
    return a.bracket == b.bracket && a.eps == b.eps;
  }
  friend bool operator!=(const ExpElem& a, const ExpElem& b) { return !(a == b); }
};

}  // namespace invexp

template <>
struct std::hash<invexp::ExpElem> {
  std::size_t operator()(const invexp::ExpElem& x) const {
    return x.eps.hash() * 31 + x.bracket;
  }
};

namespace invexp {

bool is_normal_form(const InverseSemigroup& g, const ExpElem& x);

/// [s] in normal form: ({ss*, s}, s).
ExpElem canonical_gen(const InverseSemigroup& g, Elem s);

/// (A, t)(B, s) = (ts s* t* A  u  tB, ts). Both operands must be normal.
ExpElem exp_product(const InverseSemigroup& g, const ExpElem& x, const ExpElem& y);

/// Second route to the same product: eps_{A u tB}[ts] renormalized through
/// normalize_eps_form. Used as an oracle for exp_product.
ExpElem exp_product_via_union(const InverseSemigroup& g, const ExpElem& x, const ExpElem& y);

/// Normal form of eps_{s1} ... eps_{sn} [t] for arbitrary s_i and t:
/// with p = s1s1* ... snsn* tt*, the result is ({p s_i} u {pt, p}, pt).
ExpElem normalize_eps_form(const InverseSemigroup& g, std::span<const Elem> eps, Elem t);

/// (t*A, t*), the unique inverse of (A, t).
ExpElem exp_inverse(const InverseSemigroup& g, const ExpElem& x);

inline Elem degree(const ExpElem& x) { return x.bracket; }

/// "eps{e,s}[s]" rendering used by the CLI and rewrite traces.
std::string render(const InverseSemigroup& g, const ExpElem& x);

/// Table name: "eps{A}" for idempotents, "br{t}" when A = {tt*, t}, and
/// "eps{A}br{t}" otherwise.
std::string element_name(const InverseSemigroup& g, const ExpElem& x);

using BigInt = boost::multiprecision::cpp_int;

struct ExpansionCount {
  BigInt total;
  BigInt idempotent;
};

/// Closed-form |S(G)| and |E(S(G))| from the class sizes p_e = |{s : ss* = e}|:
/// total = sum_e 2^{p_e-1} + (p_e-1) 2^{p_e-2}, idempotent = sum_e 2^{p_e-1}.
ExpansionCount predicted_count(const InverseSemigroup& g);

struct ExpansionOptions {
  std::size_t cap = 1'000'000;
  /// Tables up to this size get the full O(n^3) validation.
  std::size_t validate_cap = 1024;
};

/// S(G) as a Cayley table together with the normal form behind every id.
struct ExpansionTable {
  InverseSemigroup source;
  InverseSemigroup base;
  std::vector<ExpElem> elems;
  std::unordered_map<ExpElem, Elem> index;
  /// False when the table exceeded validate_cap and skipped associativity.
  bool fully_validated = false;

  std::size_t size() const { return elems.size(); }
  /// Throws NotNormalForm if x is not one of the enumerated elements.
  Elem id_of(const ExpElem& x) const;
  /// Id of [s].
  Elem canonical_id(Elem s) const { return id_of(canonical_gen(source, s)); }
  Elem degree_of(Elem x) const { return elems[x].bracket; }
};

/// Enumerates all normal forms (idempotent e ascending, then subsets of
/// G^e containing e in binary order, then t ascending) and tabulates the
/// product. Throws TooLarge when predicted_count exceeds the cap.
ExpansionTable build_expansion(const InverseSemigroup& g, ExpansionOptions options = {});

/// Sidecar listing id -> (A, t): first line the element count, then
/// "<id> <name> t=<t> A=<a1>,<a2>,..." per element.
std::string serialize_sidecar(const ExpansionTable& table);

/// Universal-property lift of pi : G -> T along the canonical map,
/// hom(eps_A [t]) = prod_{a in A} pi(a) pi(a*) * pi(t), evaluated left to
/// right. The result is checked to be a homomorphism S(G) -> T with
/// hom([s]) = pi(s); a failure raises LiftNotHomomorphism.
template <class T, class Mul, class Eq = std::equal_to<T>>
std::vector<T> lift_values(const ExpansionTable& table, std::span<const T> pi, Mul mul, Eq eq = {}) {
  const auto& g = table.source;
  std::vector<T> hom;
  hom.reserve(table.size());
  for (const auto& x : table.elems) {
    const auto members = x.eps.members();
    T acc = mul(pi[members.front()], pi[g.inverse(members.front())]);
    for (std::size_t i = 1; i < members.size(); ++i) {
      acc = mul(acc, mul(pi[members[i]], pi[g.inverse(members[i])]));
    }
    hom.push_back(mul(acc, pi[x.bracket]));
  }
  for (Elem s = 0; s < g.size(); ++s) {
    if (!eq(hom[table.canonical_id(s)], pi[s])) {
      throw Error(ErrorKind::LiftNotHomomorphism, "lift disagrees with pi at [" + g.name(s) + "]");
    }
  }
  for (Elem x = 0; x < table.size(); ++x) {
    for (Elem y = 0; y < table.size(); ++y) {
      if (!eq(hom[table.base.product(x, y)], mul(hom[x], hom[y]))) {
        throw Error(ErrorKind::LiftNotHomomorphism,
                    "hom(xy) != hom(x)hom(y) at (" + table.base.name(x) + ", " + table.base.name(y) + ")");
      }
    }
  }
  return hom;
}

struct LiftResult {
  std::vector<Elem> hom;
  Report report;
};

/// Lift of a partial homomorphism pi : G -> H to the homomorphism S(G) -> H.
/// Throws NotPartialHom when pi fails the partial-homomorphism axioms.
LiftResult lift_partial_hom(const ExpansionTable& table, const InverseSemigroup& h, std::span<const Elem> pi);

/// Unit-counit identities of the expansion adjunction, elementwise:
///   (a) the degree map of S(S(G)) after Pr(iota_G) is the identity on S(G);
///   (b) degree o iota_G is the identity on G.
/// S(S(G)) is never tabulated; its products are evaluated directly on
/// normal forms over S(G), so only |S(G)| is subject to the cap.
Report check_unit_counit(const InverseSemigroup& g, ExpansionOptions options = {});

/// is_e_unitary(G), after asserting it equals is_e_unitary(S(G)); a mismatch
/// raises PropertyViolation.
bool check_e_unitary_transfer(const InverseSemigroup& g, ExpansionOptions options = {});

/// Semilattices: iota_G is a bijective homomorphism. Otherwise |S(G)| > |G|
/// and iota_G fails to be multiplicative; the first failing pair is reported.
/// A violation of either statement raises PropertyViolation.
Report check_semilattice_fixedpoint(const InverseSemigroup& g, ExpansionOptions options = {});

}  // namespace invexp
