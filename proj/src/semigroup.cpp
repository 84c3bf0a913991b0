#include "invexp/semigroup.hpp"

#include <charconv>
#include <set>
#include <sstream>

#include "invexp/error.hpp"

namespace invexp {

namespace {

std::string triple(const InverseSemigroup& s, Elem a, Elem b, Elem c) {
  return "(" + s.name(a) + ", " + s.name(b) + ", " + s.name(c) + ")";
}

}  // namespace

InverseSemigroup InverseSemigroup::assemble(std::vector<std::vector<Elem>> table,
                                            std::vector<std::string> names) {
  InverseSemigroup out;
  out.n_ = table.size();
  if (out.n_ == 0) throw Error(ErrorKind::ParseError, "empty Cayley table");
  out.table_.reserve(out.n_ * out.n_);
  for (std::size_t a = 0; a < out.n_; ++a) {
    if (table[a].size() != out.n_) {
      throw Error(ErrorKind::ParseError, "row " + std::to_string(a) + " has " +
                                             std::to_string(table[a].size()) + " entries, expected " +
                                             std::to_string(out.n_));
    }
    for (Elem v : table[a]) {
      if (v >= out.n_) {
        throw Error(ErrorKind::ParseError, "entry " + std::to_string(v) + " in row " +
                                               std::to_string(a) + " is not an element id");
      }
      out.table_.push_back(v);
    }
  }
  if (names.empty()) {
    out.names_.reserve(out.n_);
    for (std::size_t a = 0; a < out.n_; ++a) out.names_.push_back(std::to_string(a));
  } else {
    if (names.size() != out.n_) {
      throw Error(ErrorKind::ParseError, "expected " + std::to_string(out.n_) + " names, got " +
                                             std::to_string(names.size()));
    }
    std::set<std::string> seen;
    for (const auto& nm : names) {
      if (nm.empty() || nm.find_first_of(" \t\r\n#") != std::string::npos) {
        throw Error(ErrorKind::ParseError, "invalid element name '" + nm + "'");
      }
      if (!seen.insert(nm).second) throw Error(ErrorKind::ParseError, "duplicate element name '" + nm + "'");
    }
    out.names_ = std::move(names);
    out.explicit_names_ = true;
  }
  return out;
}

InverseSemigroup InverseSemigroup::from_table(std::vector<std::vector<Elem>> table,
                                              std::vector<std::string> names,
                                              ValidationOptions options) {
  InverseSemigroup out = assemble(std::move(table), std::move(names));
  out.check_associative(options.exhaustive_cap);
  out.compute_inverses();
  out.check_idempotents_commute();
  return out;
}

InverseSemigroup InverseSemigroup::from_trusted(std::vector<std::vector<Elem>> table,
                                                std::vector<std::string> names) {
  InverseSemigroup out = assemble(std::move(table), std::move(names));
  out.compute_inverses();
  out.check_idempotents_commute();
  return out;
}

void InverseSemigroup::check_associative(std::size_t cap) const {
  if (n_ > cap) {
    throw Error(ErrorKind::TooLarge, "associativity check needs n <= " + std::to_string(cap) +
                                         ", got n = " + std::to_string(n_));
  }
  for (Elem a = 0; a < n_; ++a) {
    for (Elem b = 0; b < n_; ++b) {
      const Elem ab = product(a, b);
      for (Elem c = 0; c < n_; ++c) {
        if (product(ab, c) != product(a, product(b, c))) {
          throw Error(ErrorKind::NotAssociative, "(ab)c != a(bc) at " + triple(*this, a, b, c));
        }
      }
    }
  }
}

void InverseSemigroup::compute_inverses() {
  inv_.assign(n_, 0);
  for (Elem a = 0; a < n_; ++a) {
    std::vector<Elem> found;
    for (Elem x = 0; x < n_; ++x) {
      if (product(product(a, x), a) == a && product(product(x, a), x) == x) found.push_back(x);
    }
    if (found.size() != 1) {
      std::string msg = "element " + name(a) + " has " + std::to_string(found.size()) +
                        " generalized inverses";
      if (found.size() > 1) msg += " (" + name(found[0]) + ", " + name(found[1]) + ", ...)";
      throw Error(ErrorKind::NotInverse, msg);
    }
    inv_[a] = found.front();
  }
}

void InverseSemigroup::check_idempotents_commute() const {
  std::vector<Elem> es;
  for (Elem a = 0; a < n_; ++a) {
    if (is_idempotent(a)) es.push_back(a);
  }
  for (Elem e : es) {
    for (Elem f : es) {
      if (product(e, f) != product(f, e)) {
        throw Error(ErrorKind::IdempotentsDontCommute,
                    "ef != fe for e = " + name(e) + ", f = " + name(f));
      }
    }
  }
}

std::optional<Elem> InverseSemigroup::find(std::string_view token) const {
  for (Elem a = 0; a < n_; ++a) {
    if (names_[a] == token) return a;
  }
  Elem id = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, id);
  if (ec == std::errc() && ptr == last && !token.empty() && id < n_) return id;
  return std::nullopt;
}

ElemSet idempotents(const InverseSemigroup& s) {
  ElemSet out(s.size());
  for (Elem a = 0; a < s.size(); ++a) {
    if (s.is_idempotent(a)) out.insert(a);
  }
  return out;
}

bool natural_leq(const InverseSemigroup& s, Elem a, Elem b) {
  const Elem as = s.inverse(a);
  const bool right = a == s.product(b, s.product(as, a));
  const bool left = a == s.product(s.product(a, as), b);
  if (right != left) {
    throw Error(ErrorKind::InternalInconsistency,
                "order characterizations disagree for (" + s.name(a) + ", " + s.name(b) + ")");
  }
  return right;
}

bool is_e_unitary(const InverseSemigroup& s) {
  for (Elem e = 0; e < s.size(); ++e) {
    if (!s.is_idempotent(e)) continue;
    for (Elem x = 0; x < s.size(); ++x) {
      if (s.is_idempotent(s.product(e, x)) && !s.is_idempotent(x)) return false;
    }
  }
  return true;
}

bool is_semilattice(const InverseSemigroup& s) {
  for (Elem a = 0; a < s.size(); ++a) {
    if (!s.is_idempotent(a)) return false;
  }
  return true;
}

bool is_e_set(const InverseSemigroup& s, const ElemSet& a, Elem e) {
  if (!s.is_idempotent(e)) throw Error(ErrorKind::NotIdempotent, s.name(e) + " is not idempotent");
  if (!a.contains(e)) return false;
  for (Elem x : a.members()) {
    if (s.product(x, s.inverse(x)) != e) return false;
  }
  return true;
}

ElemSet range_class(const InverseSemigroup& s, Elem e) {
  ElemSet out(s.size());
  for (Elem x = 0; x < s.size(); ++x) {
    if (s.product(x, s.inverse(x)) == e) out.insert(x);
  }
  return out;
}

namespace {

std::vector<std::vector<int>> partial_bijections(std::size_t k) {
  // Mixed-radix decode over {-1, 0, ..., k-1}^k in lexicographic order,
  // keeping the injective maps.
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= k + 1;
  std::vector<std::vector<int>> out;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<int> cur(k);
    std::size_t rest = code;
    for (std::size_t i = k; i-- > 0;) {
      cur[i] = static_cast<int>(rest % (k + 1)) - 1;
      rest /= k + 1;
    }
    std::vector<bool> used(k, false);
    bool injective = true;
    for (int v : cur) {
      if (v < 0) continue;
      if (used[v]) injective = false;
      used[v] = true;
    }
    if (injective) out.push_back(std::move(cur));
  }
  return out;
}

}  // namespace

InverseSemigroup symmetric_inverse_monoid(std::size_t k) {
  if (k > 4) throw Error(ErrorKind::TooLarge, "symmetric inverse monoid supports k <= 4");
  if (k == 0) return InverseSemigroup::from_table({{0}}, {"m"});
  const auto maps = partial_bijections(k);
  const std::size_t n = maps.size();
  auto index_of = [&](const std::vector<int>& m) {
    for (std::size_t i = 0; i < n; ++i) {
      if (maps[i] == m) return static_cast<Elem>(i);
    }
    throw Error(ErrorKind::InternalInconsistency, "composition left the monoid");
  };
  std::vector<std::vector<Elem>> table(n, std::vector<Elem>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<int> c(k, -1);
      for (std::size_t x = 0; x < k; ++x) {
        if (maps[b][x] >= 0) c[x] = maps[a][maps[b][x]];
      }
      table[a][b] = index_of(c);
    }
  }
  std::vector<std::string> names;
  for (const auto& m : maps) {
    std::string nm = "m";
    for (int v : m) nm += v < 0 ? '-' : static_cast<char>('1' + v);
    names.push_back(nm);
  }
  return InverseSemigroup::from_table(std::move(table), std::move(names), {.exhaustive_cap = 256});
}

std::vector<int> symmetric_inverse_monoid_map(std::size_t k, Elem a) {
  if (k > 4) throw Error(ErrorKind::TooLarge, "symmetric inverse monoid supports k <= 4");
  const auto maps = partial_bijections(k);
  if (a >= maps.size()) throw Error(ErrorKind::UnknownElement, "no element " + std::to_string(a));
  return maps[a];
}

InverseSemigroup five_element_example() {
  // Matrix-unit model: e = E11, f = E22, s = E12, t = E21.
  return InverseSemigroup::from_table({{0, 0, 0, 0, 0},
                                       {0, 1, 0, 3, 0},
                                       {0, 0, 2, 0, 4},
                                       {0, 0, 3, 0, 1},
                                       {0, 4, 0, 2, 0}},
                                      {"0", "e", "f", "s", "t"});
}

InverseSemigroup cyclic_group(std::size_t m) {
  if (m == 0) throw Error(ErrorKind::ParseError, "group order must be positive");
  std::vector<std::vector<Elem>> table(m, std::vector<Elem>(m));
  std::vector<std::string> names;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) table[a][b] = static_cast<Elem>((a + b) % m);
    names.push_back(a == 0 ? "1" : a == 1 ? "g" : "g" + std::to_string(a));
  }
  return InverseSemigroup::from_table(std::move(table), std::move(names));
}

InverseSemigroup klein_four_group() {
  std::vector<std::vector<Elem>> table(4, std::vector<Elem>(4));
  for (Elem a = 0; a < 4; ++a) {
    for (Elem b = 0; b < 4; ++b) table[a][b] = a ^ b;
  }
  return InverseSemigroup::from_table(std::move(table), {"1", "a", "b", "c"});
}

InverseSemigroup idempotent_semilattice(const InverseSemigroup& s) {
  const auto es = idempotents(s).members();
  std::vector<Elem> pos(s.size(), 0);
  for (std::size_t i = 0; i < es.size(); ++i) pos[es[i]] = static_cast<Elem>(i);
  std::vector<std::vector<Elem>> table(es.size(), std::vector<Elem>(es.size()));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < es.size(); ++i) {
    for (std::size_t j = 0; j < es.size(); ++j) table[i][j] = pos[s.product(es[i], es[j])];
    names.push_back(s.name(es[i]));
  }
  if (!s.has_explicit_names()) names.clear();
  return InverseSemigroup::from_table(std::move(table), std::move(names));
}

}  // namespace invexp
