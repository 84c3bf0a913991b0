#include "invexp/actions.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <set>
#include <sstream>

#include "invexp/error.hpp"

namespace invexp {

PartialBijection::PartialBijection(std::vector<int> map) : map_(std::move(map)) {
  std::vector<bool> hit(map_.size(), false);
  for (std::size_t x = 0; x < map_.size(); ++x) {
    const int y = map_[x];
    if (y == kUndefined) continue;
    if (y < 0 || static_cast<std::size_t>(y) >= map_.size()) {
      throw Error(ErrorKind::NotPartialAction, "target " + std::to_string(y) + " outside the set");
    }
    if (hit[y]) throw Error(ErrorKind::NotPartialAction, "target " + std::to_string(y) + " hit twice");
    hit[y] = true;
  }
}

PartialBijection PartialBijection::identity_on(const ElemSet& domain) {
  PartialBijection out(domain.width());
  for (Elem x : domain.members()) out.map_[x] = static_cast<int>(x);
  return out;
}

ElemSet PartialBijection::domain() const {
  ElemSet out(size());
  for (std::size_t x = 0; x < size(); ++x) {
    if (defined(x)) out.insert(static_cast<Elem>(x));
  }
  return out;
}

ElemSet PartialBijection::range() const {
  ElemSet out(size());
  for (int y : map_) {
    if (y != kUndefined) out.insert(static_cast<Elem>(y));
  }
  return out;
}

ElemSet PartialBijection::image(const ElemSet& subset) const {
  ElemSet out(size());
  for (Elem x : subset.members()) {
    if (defined(x)) out.insert(static_cast<Elem>(map_[x]));
  }
  return out;
}

PartialBijection PartialBijection::inverse() const {
  PartialBijection out(size());
  for (std::size_t x = 0; x < size(); ++x) {
    if (defined(x)) out.map_[map_[x]] = static_cast<int>(x);
  }
  return out;
}

PartialBijection PartialBijection::restrict_domain(const ElemSet& subset) const {
  PartialBijection out(size());
  for (Elem x : subset.members()) out.map_[x] = map_[x];
  return out;
}

bool PartialBijection::leq(const PartialBijection& other) const {
  for (std::size_t x = 0; x < size(); ++x) {
    if (defined(x) && other.map_[x] != map_[x]) return false;
  }
  return true;
}

std::string PartialBijection::to_string() const {
  std::string out;
  for (std::size_t x = 0; x < size(); ++x) {
    if (!defined(x)) continue;
    if (!out.empty()) out += ", ";
    out += std::to_string(x) + "->" + std::to_string(map_[x]);
  }
  return out;
}

PartialBijection operator*(const PartialBijection& a, const PartialBijection& b) {
  std::vector<int> out(b.size(), PartialBijection::kUndefined);
  for (std::size_t x = 0; x < b.size(); ++x) {
    if (b.defined(x)) out[x] = a.at(b.at(x));
  }
  return PartialBijection(std::move(out));
}

namespace {

std::string point_name(const PartialActionOnSet& act, std::size_t x) {
  return act.point_names.empty() ? std::to_string(x) : act.point_names[x];
}

void require_shape(const InverseSemigroup& g, const PartialActionOnSet& act) {
  if (act.maps.size() != g.size()) {
    throw Error(ErrorKind::NotPartialAction, "action has " + std::to_string(act.maps.size()) + " maps for " +
                                                 std::to_string(g.size()) + " elements");
  }
  for (const auto& m : act.maps) {
    if (m.size() != act.x_size) throw Error(ErrorKind::NotPartialAction, "map size differs from |X|");
  }
}

struct Tally {
  std::size_t count = 0;
  std::string witness;
  void hit(const std::string& w) {
    if (count++ == 0) witness = w;
  }
  std::string detail() const { return witness + " violations=" + std::to_string(count); }
};

}  // namespace

Report is_partial_action(const InverseSemigroup& g, const PartialActionOnSet& act) {
  require_shape(g, act);
  const Elem n = static_cast<Elem>(g.size());
  const auto& pi = act.maps;
  std::vector<ElemSet> ranges;
  for (const auto& m : pi) ranges.push_back(m.range());
  auto pair = [&](Elem s, Elem t) { return "(" + g.name(s) + "," + g.name(t) + ")"; };

  // Definition: partial homomorphism into I(X).
  Report def = check_partial_hom_axioms<PartialBijection>(
      g, pi, [](const PartialBijection& a, const PartialBijection& b) { return a * b; },
      [](const PartialBijection& a, const PartialBijection& b) { return a == b; });

  Tally inv, range_eq, comp, range_sub, order;
  for (Elem s = 0; s < n; ++s) {
    const Elem ss = g.inverse(s);
    if (!(pi[s].inverse() == pi[ss])) inv.hit("(" + g.name(s) + ")");
    for (Elem t = 0; t < n; ++t) {
      const Elem st = g.product(s, t);
      ElemSet dom = ranges[ss];
      dom &= ranges[t];
      const ElemSet img = pi[s].image(dom);
      ElemSet target = ranges[s];
      target &= ranges[st];
      if (!(img == target)) range_eq.hit(pair(s, t));
      if (!img.is_subset_of(ranges[st])) range_sub.hit(pair(s, t));
      if (natural_leq(g, s, t) && !ranges[s].is_subset_of(ranges[t])) order.hit(pair(s, t));

      // Composition on X_{t*} ∩ X_{t*s*}.
      ElemSet where = ranges[g.inverse(t)];
      where &= ranges[g.inverse(st)];
      for (Elem x : where.members()) {
        const int y = pi[t].at(x);
        const int lhs = y == PartialBijection::kUndefined ? y : pi[s].at(y);
        if (lhs == PartialBijection::kUndefined || lhs != pi[st].at(x)) {
          comp.hit(pair(s, t) + " at " + point_name(act, x));
          break;
        }
      }
    }
  }

  Report report;
  report.append(def);
  report.record("range-criterion(i)", inv.count == 0, inv.detail());
  report.record("range-criterion(ii)", range_eq.count == 0, range_eq.detail());
  report.record("range-criterion(iii)", comp.count == 0, comp.detail());
  report.record("inclusion-criterion(i)", inv.count == 0, inv.detail());
  report.record("inclusion-criterion(ii)", range_sub.count == 0, range_sub.detail());
  report.record("inclusion-criterion(iii)", order.count == 0, order.detail());
  report.record("inclusion-criterion(iv)", comp.count == 0, comp.detail());

  const bool by_def = def.ok();
  const bool by_range = inv.count == 0 && range_eq.count == 0 && comp.count == 0;
  const bool by_inclusion = inv.count == 0 && range_sub.count == 0 && order.count == 0 && comp.count == 0;
  if (by_def != by_range || by_def != by_inclusion) {
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    throw Error(ErrorKind::CriteriaDisagree, std::string("definition=") + yn(by_def) + " range=" + yn(by_range) +
                                                 " inclusion=" + yn(by_inclusion));
  }
  return report;
}

bool is_filter_by_definition(const InverseSemigroup& g, const ElemSet& xi) {
  if (xi.empty()) return false;
  for (Elem e = 0; e < g.size(); ++e) {
    if (!g.is_idempotent(e)) continue;
    for (Elem s = 0; s < g.size(); ++s) {
      if (xi.contains(g.product(e, s)) != (xi.contains(e) && xi.contains(s))) return false;
    }
  }
  return true;
}

bool is_filter_by_conditions(const InverseSemigroup& g, const ElemSet& xi) {
  if (xi.empty()) return false;
  const auto members = xi.members();
  for (Elem s : members) {
    const Elem range = g.product(s, g.inverse(s));
    if (!xi.contains(range)) return false;
    for (Elem t : members) {
      if (!xi.contains(g.product(range, t))) return false;
    }
    for (Elem t = 0; t < g.size(); ++t) {
      if (!xi.contains(t) && natural_leq(g, s, t)) return false;
    }
  }
  return true;
}

bool is_filter_base(const InverseSemigroup& g, const ElemSet& eta) {
  if (eta.empty()) return false;
  const auto members = eta.members();
  for (Elem s : members) {
    const Elem range = g.product(s, g.inverse(s));
    if (!eta.contains(range)) return false;
    for (Elem t : members) {
      if (!eta.contains(g.product(range, t))) return false;
    }
  }
  return true;
}

namespace {

struct OrderCache {
  // above[s] = {t : s <= t}, below[s] = {t : t <= s}.
  std::vector<ElemSet> above, below;
  explicit OrderCache(const InverseSemigroup& g) {
    const Elem n = static_cast<Elem>(g.size());
    above.assign(n, ElemSet(n));
    below.assign(n, ElemSet(n));
    for (Elem s = 0; s < n; ++s) {
      for (Elem t = 0; t < n; ++t) {
        if (natural_leq(g, s, t)) {
          above[s].insert(t);
          below[t].insert(s);
        }
      }
    }
  }
};

ElemSet up_closure(const OrderCache& order, const ElemSet& set) {
  ElemSet out(set.width());
  for (Elem s : set.members()) out |= order.above[s];
  return out;
}

// Smallest set containing `in` closed under up-closure, s ↦ ss* and
// (s,t) ↦ ss*t. Returns nullopt as soon as it meets `out`.
std::optional<ElemSet> close_filter(const InverseSemigroup& g, const OrderCache& order, ElemSet in,
                                    const ElemSet& excluded) {
  std::vector<Elem> queue = in.members();
  std::vector<Elem> done;
  auto add = [&](Elem v) {
    if (in.contains(v)) return true;
    if (excluded.contains(v)) return false;
    in.insert(v);
    queue.push_back(v);
    return true;
  };
  while (!queue.empty()) {
    const Elem s = queue.back();
    queue.pop_back();
    for (Elem t : order.above[s].members()) {
      if (!add(t)) return std::nullopt;
    }
    const Elem rs = g.product(s, g.inverse(s));
    if (!add(rs)) return std::nullopt;
    for (Elem t : done) {
      if (!add(g.product(rs, t))) return std::nullopt;
      if (!add(g.product(g.product(t, g.inverse(t)), s))) return std::nullopt;
    }
    done.push_back(s);
  }
  return in;
}

void search_filters(const InverseSemigroup& g, const OrderCache& order, const ElemSet& in, const ElemSet& out,
                    std::vector<ElemSet>& found) {
  const Elem n = static_cast<Elem>(g.size());
  Elem next = 0;
  while (next < n && (in.contains(next) || out.contains(next))) ++next;
  if (next == n) {
    if (!in.empty()) found.push_back(in);
    return;
  }
  ElemSet with = in;
  with.insert(next);
  if (auto closed = close_filter(g, order, with, out)) search_filters(g, order, *closed, out, found);
  ElemSet without = out;
  without |= order.below[next];
  if (!without.intersects(in)) search_filters(g, order, in, without, found);
}

}  // namespace

std::vector<ElemSet> enumerate_filters(const InverseSemigroup& g, FilterOptions options) {
  if (g.size() > options.max_n) {
    throw Error(ErrorKind::TooLarge, "filter enumeration needs n <= " + std::to_string(options.max_n) + ", got n = " +
                                         std::to_string(g.size()));
  }
  const OrderCache order(g);
  std::vector<ElemSet> found;
  search_filters(g, order, ElemSet(g.size()), ElemSet(g.size()), found);
  std::sort(found.begin(), found.end());
  return found;
}

ElemSet filter_closure(const InverseSemigroup& g, const ElemSet& eta) {
  if (eta.empty()) throw Error(ErrorKind::NotFilterBase, "empty set");
  for (Elem s : eta.members()) {
    const Elem range = g.product(s, g.inverse(s));
    if (!eta.contains(range)) throw Error(ErrorKind::NotFilterBase, "(" + g.name(s) + "): " + g.name(range) + " missing");
    for (Elem t : eta.members()) {
      if (!eta.contains(g.product(range, t))) {
        throw Error(ErrorKind::NotFilterBase, "(" + g.name(s) + "," + g.name(t) + "): " + g.name(g.product(range, t)) +
                                                  " missing");
      }
    }
  }
  return up_closure(OrderCache(g), eta);
}

std::string render_subset(const InverseSemigroup& g, const ElemSet& set) {
  std::string out = "{";
  for (Elem a : set.members()) {
    if (out.size() > 1) out += ',';
    out += g.name(a);
  }
  return out + "}";
}

PartialActionOnSet canonical_partial_action(const InverseSemigroup& g, FilterOptions options) {
  const auto filters = enumerate_filters(g, options);
  std::unordered_map<ElemSet, std::size_t> where;
  for (std::size_t i = 0; i < filters.size(); ++i) where.emplace(filters[i], i);
  const OrderCache order(g);

  PartialActionOnSet act;
  act.x_size = filters.size();
  for (const auto& xi : filters) act.point_names.push_back(render_subset(g, xi));
  for (Elem t = 0; t < g.size(); ++t) {
    const Elem ti = g.inverse(t);
    std::vector<int> map(filters.size(), PartialBijection::kUndefined);
    for (std::size_t i = 0; i < filters.size(); ++i) {
      if (!filters[i].contains(ti)) continue;
      ElemSet moved(g.size());
      for (Elem s : filters[i].members()) moved.insert(g.product(t, s));
      if (!is_filter_base(g, moved)) {
        throw Error(ErrorKind::InternalInconsistency, g.name(t) + render_subset(g, filters[i]) + " is not a filter base");
      }
      const auto it = where.find(up_closure(order, moved));
      if (it == where.end()) throw Error(ErrorKind::InternalInconsistency, "closure of a translated filter is not a filter");
      map[i] = static_cast<int>(it->second);
    }
    act.maps.emplace_back(std::move(map));
  }
  return act;
}

LiftedAction lift_action(const ExpansionTable& table, const PartialActionOnSet& act) {
  const auto& g = table.source;
  LiftedAction out;
  const Report check = is_partial_action(g, act);
  if (!check.ok()) throw Error(ErrorKind::NotPartialAction, "action fails its axioms:\n" + check.render());

  std::vector<ElemSet> ranges;
  for (const auto& m : act.maps) ranges.push_back(m.range());
  for (const auto& x : table.elems) {
    ElemSet xa(act.x_size);
    for (std::size_t p = 0; p < act.x_size; ++p) xa.insert(static_cast<Elem>(p));
    for (Elem a : x.eps.members()) xa &= ranges[a];
    out.maps.push_back(PartialBijection::identity_on(xa) * act.maps[x.bracket]);
  }

  std::size_t bad_hom = 0, bad_iota = 0, bad_idem = 0;
  std::string w_hom, w_iota, w_idem;
  for (Elem s = 0; s < g.size(); ++s) {
    if (!(out.maps[table.canonical_id(s)] == act.maps[s]) && bad_iota++ == 0) w_iota = "[" + g.name(s) + "]";
  }
  for (Elem x = 0; x < table.size(); ++x) {
    if (table.base.is_idempotent(x)) {
      const auto& m = out.maps[x];
      if (!(m == PartialBijection::identity_on(m.domain())) && bad_idem++ == 0) w_idem = table.base.name(x);
    }
    for (Elem y = 0; y < table.size(); ++y) {
      if (!(out.maps[table.base.product(x, y)] == out.maps[x] * out.maps[y]) && bad_hom++ == 0) {
        w_hom = "(" + table.base.name(x) + "," + table.base.name(y) + ")";
      }
    }
  }
  if (bad_hom != 0 || bad_iota != 0) {
    throw Error(ErrorKind::LiftNotHomomorphism, "lift fails at " + (bad_hom ? w_hom : w_iota));
  }
  auto with_count = [](const std::string& w, std::size_t c) { return w + " violations=" + std::to_string(c); };
  out.report.record("lift(multiplicative)", true, {});
  out.report.record("lift(extends-pi)", true, {});
  out.report.record("lift(idempotents-to-partial-identities)", bad_idem == 0, with_count(w_idem, bad_idem));
  return out;
}

SeparationResult separation_check(const InverseSemigroup& g, ExpansionOptions expansion, FilterOptions filters) {
  const auto table = build_expansion(g, expansion);
  const auto act = canonical_partial_action(g, filters);
  auto lifted = lift_action(table, act);

  SeparationResult result;
  result.expansion_size = table.size();
  result.filter_count = act.x_size;
  result.report = std::move(lifted.report);

  std::set<std::pair<std::vector<int>, Elem>> pairs;
  std::set<std::vector<int>> idem_maps;
  std::size_t idem_count = 0;
  for (Elem x = 0; x < table.size(); ++x) {
    pairs.emplace(lifted.maps[x].raw(), table.degree_of(x));
    if (table.base.is_idempotent(x)) {
      ++idem_count;
      idem_maps.insert(lifted.maps[x].raw());
    }
  }
  result.distinct_pairs = pairs.size();
  result.idempotents_injective = idem_maps.size() == idem_count;
  result.report.record("separation(idempotents)", result.idempotents_injective,
                       std::to_string(idem_maps.size()) + " maps for " + std::to_string(idem_count) + " idempotents");
  result.report.record("separation(lift+degree)", result.distinct_pairs == table.size(),
                       std::to_string(result.distinct_pairs) + " pairs for " + std::to_string(table.size()) +
                           " elements");
  if (!result.report.ok()) throw Error(ErrorKind::PropertyViolation, "separation fails:\n" + result.report.render());
  return result;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

int parse_point(const std::string& tok, std::size_t size, std::size_t line_no) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || v < 0 || static_cast<std::size_t>(v) >= size) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": bad point '" + tok + "'");
  }
  return v;
}

}  // namespace

PartialActionOnSet load_action(std::string_view text, const InverseSemigroup& g) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  std::optional<std::size_t> size;
  std::vector<std::optional<PartialBijection>> maps(g.size());
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (!size) {
      size = static_cast<std::size_t>(parse_point(line, std::numeric_limits<int>::max(), line_no));
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": missing ':'");
    const std::string name = trim(std::string_view(line).substr(0, colon));
    const auto s = g.find(name);
    if (!s) throw Error(ErrorKind::UnknownElement, "line " + std::to_string(line_no) + ": no element '" + name + "'");
    if (maps[*s]) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": duplicate map for " + name);
    std::vector<int> map(*size, PartialBijection::kUndefined);
    std::string rest = line.substr(colon + 1);
    std::istringstream pairs(rest);
    std::string item;
    while (std::getline(pairs, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      const auto arrow = item.find("->");
      if (arrow == std::string::npos) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected i->j");
      const int x = parse_point(trim(std::string_view(item).substr(0, arrow)), *size, line_no);
      const int y = parse_point(trim(std::string_view(item).substr(arrow + 2)), *size, line_no);
      if (map[x] != PartialBijection::kUndefined) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": point " + std::to_string(x) + " mapped twice");
      }
      map[x] = y;
    }
    maps[*s] = PartialBijection(std::move(map));
  }
  if (!size) throw Error(ErrorKind::ParseError, "empty document");
  PartialActionOnSet act;
  act.x_size = *size;
  for (Elem s = 0; s < g.size(); ++s) {
    if (!maps[s]) throw Error(ErrorKind::ParseError, "no map for " + g.name(s));
    act.maps.push_back(std::move(*maps[s]));
  }
  return act;
}

std::string serialize_action(const InverseSemigroup& g, const PartialActionOnSet& act) {
  std::string out = std::to_string(act.x_size) + "\n";
  for (Elem s = 0; s < g.size(); ++s) {
    const auto body = act.maps[s].to_string();
    out += g.name(s) + ":" + (body.empty() ? "" : " " + body) + "\n";
  }
  return out;
}

}  // namespace invexp
