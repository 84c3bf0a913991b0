#include "cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "invexp/actions.hpp"
#include "invexp/cayley_io.hpp"
#include "invexp/error.hpp"
#include "invexp/expansion.hpp"
#include "invexp/matrix_fell.hpp"
#include "invexp/rewriter.hpp"

namespace invexp::cli {

namespace {

struct Config {
  std::size_t cap = 1'000'000;
  std::size_t filter_cap = 24;
  double tol = kDefaultTol;
  bool trace = false;
  std::string out_path;
  std::string sidecar_path;
};

bool starts_with(const std::string& s, std::string_view prefix) { return s.rfind(prefix, 0) == 0; }

std::size_t suffix_number(const std::string& s, std::size_t from) {
  try {
    return std::stoul(s.substr(from));
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "bad builtin '" + s + "'");
  }
}

/// builtin:five | trivial | klein | c<m> | sym<k> | esym<k>, or a Cayley file.
InverseSemigroup load_semigroup(const std::string& spec) {
  if (!starts_with(spec, "builtin:")) return load_cayley_file(spec);
  const std::string name = spec.substr(8);
  if (name == "five") return five_element_example();
  if (name == "trivial") return cyclic_group(1);
  if (name == "klein") return klein_four_group();
  if (starts_with(name, "esym")) return idempotent_semilattice(symmetric_inverse_monoid(suffix_number(name, 4)));
  if (starts_with(name, "sym")) return symmetric_inverse_monoid(suffix_number(name, 3));
  if (starts_with(name, "c")) return cyclic_group(suffix_number(name, 1));
  throw Error(ErrorKind::ParseError, "unknown builtin '" + name + "'");
}

/// builtin:five | five-phase | z2 | trivial, or a bundle document over g.
MatrixModel load_model(const std::string& spec, const InverseSemigroup& g, double tol) {
  if (!starts_with(spec, "builtin:")) return load_bundle(read_text_file(spec), g, tol);
  const std::string name = spec.substr(8);
  MatrixModel model = [&] {
    if (name == "five") return five_element_matrix_model();
    if (name == "five-phase") {
      auto m = five_element_matrix_model();
      m.u.u[3] = Complex(0.0, 1.0) * matrix_unit(2, 0, 1);
      return m;
    }
    if (name == "z2") return z2_graded_model();
    if (name == "trivial") return trivial_matrix_model();
    throw Error(ErrorKind::ParseError, "unknown builtin bundle '" + name + "'");
  }();
  if (!(model.bundle.g == g)) throw Error(ErrorKind::ParseError, "builtin bundle '" + name + "' is over a different semigroup");
  return model;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::ParseError, "cannot write " + path);
  f << text;
}

int finish(const Report& report, std::ostream& out) {
  out << report.render();
  return report.ok() ? 0 : 1;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

int cmd_expand(const Config& cfg, const std::string& spec, std::ostream& out) {
  const auto g = load_semigroup(spec);
  const auto predicted = predicted_count(g);
  const auto table = build_expansion(g, {.cap = cfg.cap});
  const std::size_t idem = idempotents(table.base).count();
  out << "order=" << g.size() << " enumerated=" << table.size() << " predicted=" << predicted.total
      << " idempotents=" << idem << " predicted_idempotents=" << predicted.idempotent << "\n";
  const bool eu_g = is_e_unitary(g), eu_sg = is_e_unitary(table.base);
  out << "e_unitary_G=" << yes_no(eu_g) << " e_unitary_SG=" << yes_no(eu_sg) << "\n";
  Report report;
  report.record("count(total)", predicted.total == table.size(), "enumerated differs from predicted");
  report.record("count(idempotents)", predicted.idempotent == idem, "enumerated differs from predicted");
  report.record("e-unitary-transfer", eu_g == eu_sg, "verdicts differ");
  if (!table.fully_validated) report.info("validation", "table above validate cap, associativity not rechecked");
  if (cfg.out_path.empty()) {
    out << serialize_sidecar(table);
  } else {
    write_file(cfg.out_path, serialize_cayley(table.base));
  }
  if (!cfg.sidecar_path.empty()) write_file(cfg.sidecar_path, serialize_sidecar(table));
  return finish(report, out);
}

int cmd_reduce(const Config& cfg, const std::string& spec, const std::string& word, std::ostream& out) {
  const auto g = load_semigroup(spec);
  const Word w = parse_word(word, g);
  const auto result = rewrite_steps(g, w);
  if (cfg.trace) out << result.trace.render(g);
  out << render(g, reduce_to_normal_form(g, w)) << "\n";
  return 0;
}

int cmd_count(const std::string& spec, std::ostream& out) {
  const auto g = load_semigroup(spec);
  const auto predicted = predicted_count(g);
  out << "order=" << g.size() << " predicted=" << predicted.total << " predicted_idempotents=" << predicted.idempotent
      << "\n";
  return 0;
}

int cmd_filters(const Config& cfg, const std::string& spec, std::ostream& out) {
  const auto g = load_semigroup(spec);
  for (const auto& xi : enumerate_filters(g, {.max_n = cfg.filter_cap})) out << render_subset(g, xi) << "\n";
  return 0;
}

std::vector<Elem> load_map(const std::string& path, const InverseSemigroup& g, const InverseSemigroup& h) {
  std::istringstream in(read_text_file(path));
  std::vector<std::optional<Elem>> pi(g.size());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected 'src: tgt'");
    std::istringstream lhs(line.substr(0, colon)), rhs(line.substr(colon + 1));
    std::string a, b;
    lhs >> a;
    rhs >> b;
    const auto s = g.find(a);
    const auto t = h.find(b);
    if (!s || !t) throw Error(ErrorKind::UnknownElement, "line " + std::to_string(line_no) + ": unknown element");
    pi[*s] = *t;
  }
  std::vector<Elem> out;
  for (Elem s = 0; s < g.size(); ++s) {
    if (!pi[s]) throw Error(ErrorKind::NotPartialHom, "map misses " + g.name(s));
    out.push_back(*pi[s]);
  }
  return out;
}

int verify_partial_hom(const std::string& gs, const std::string& hs, const std::string& map_path, std::ostream& out) {
  const auto g = load_semigroup(gs);
  const auto h = load_semigroup(hs);
  const auto pi = load_map(map_path, g, h);
  Report report = is_partial_homomorphism(g, h, pi);
  report.append(is_dual_prehomomorphism(g, h, pi));
  return finish(report, out);
}

int verify_partial_action(const Config& cfg, const std::string& gs, const std::string& action_path, std::ostream& out) {
  const auto g = load_semigroup(gs);
  const auto act = action_path.empty() ? canonical_partial_action(g, {.max_n = cfg.filter_cap})
                                       : load_action(read_text_file(action_path), g);
  out << "points=" << act.x_size << "\n";
  return finish(is_partial_action(g, act), out);
}

int verify_filters(const Config& cfg, const std::string& gs, std::ostream& out) {
  const auto g = load_semigroup(gs);
  const auto filters = enumerate_filters(g, {.max_n = cfg.filter_cap});
  Report report;
  std::size_t bad = 0;
  std::string witness;
  for (const auto& xi : filters) {
    report.info("filter", render_subset(g, xi));
    const bool ok = is_filter_by_definition(g, xi) && is_filter_by_conditions(g, xi) && filter_closure(g, xi) == xi;
    if (!ok && bad++ == 0) witness = render_subset(g, xi);
  }
  report.record("filters(axioms)", bad == 0, witness + " violations=" + std::to_string(bad));
  const auto predicted = predicted_count(g);
  report.record("filters(count=|E(S(G))|)", predicted.idempotent == filters.size(),
                std::to_string(filters.size()) + " filters, " + predicted.idempotent.str() + " idempotents");
  return finish(report, out);
}

int verify_fell(const Config& cfg, const std::string& gs, const std::string& bundle_spec, std::ostream& out) {
  const auto g = load_semigroup(gs);
  const auto model = load_model(bundle_spec, g, cfg.tol);
  Report report = check_concrete_fell_bundle(model.bundle);
  if (report.ok()) {
    const auto expanded = expand_bundle(model.bundle, {.cap = cfg.cap});
    report.append(expanded.report);
    report.append(check_span_refinement(model.bundle, expanded));
  }
  if (!model.u.u.empty()) report.append(check_regularity(model.bundle, model.u));
  return finish(report, out);
}

int verify_twisted(const Config& cfg, const std::string& gs, const std::string& bundle_spec,
                   const std::string& perturb, double theta, std::ostream& out) {
  const auto g = load_semigroup(gs);
  const auto model = load_model(bundle_spec, g, cfg.tol);
  if (model.u.u.empty()) throw Error(ErrorKind::RegularityFailure, "bundle has no regularity data");
  auto tpa = twisted_from_regular(model.bundle, model.u);
  if (!perturb.empty()) {
    const auto comma = perturb.find(',');
    if (comma == std::string::npos) throw Error(ErrorKind::ParseError, "--perturb-omega expects r,s");
    const auto r = g.find(perturb.substr(0, comma));
    const auto s = g.find(perturb.substr(comma + 1));
    if (!r || !s) throw Error(ErrorKind::UnknownElement, "--perturb-omega names an unknown element");
    perturb_omega(tpa, *r, *s, theta);
    out << "perturbed omega(" << g.name(*r) << "," << g.name(*s) << ") theta=" << theta << "\n";
  }
  Report report = check_twisted_partial_action(tpa);
  if (report.ok()) {
    report.append(twisted_global_from_partial(tpa, {.cap = cfg.cap}).report);
    const double dev = round_trip_deviation(tpa);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", dev);
    report.record("round-trip(beta,omega)", dev < 10 * cfg.tol, std::string("deviation=") + buf);
  }
  return finish(report, out);
}

int verify_lift(const Config& cfg, const std::string& gs, std::ostream& out) {
  const auto g = load_semigroup(gs);
  const auto result = separation_check(g, {.cap = cfg.cap}, {.max_n = cfg.filter_cap});
  out << "expansion=" << result.expansion_size << " filters=" << result.filter_count
      << " distinct_pairs=" << result.distinct_pairs << "\n";
  return finish(result.report, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prefix expansions of finite inverse semigroups", "invexp"};
  app.require_subcommand(1);
  Config cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--cap", cfg.cap, "Largest expansion to enumerate")->check(CLI::PositiveNumber);
    sub->add_option("--filter-cap", cfg.filter_cap, "Largest semigroup for filter enumeration")->check(CLI::PositiveNumber);
    sub->add_option("--tol", cfg.tol, "Matrix tolerance")->check(CLI::Range(1e-300, 1e-3));
  };

  std::string g_spec, h_spec, extra, word, perturb;
  double theta = 0.1;

  auto* expand = app.add_subcommand("expand", "Enumerate S(G) and compare with the counting formula");
  expand->add_option("semigroup", g_spec, "Cayley file or builtin:<name>")->required();
  expand->add_option("--out", cfg.out_path, "Write the Cayley table of S(G) here");
  expand->add_option("--sidecar", cfg.sidecar_path, "Write the normal-form listing here");
  add_common(expand);

  auto* reduce = app.add_subcommand("reduce", "Normal form of a word of generators");
  reduce->add_option("semigroup", g_spec)->required();
  reduce->add_option("word", word, "e.g. \"[s][t*]\"")->required();
  reduce->add_flag("--trace", cfg.trace, "Print every rewrite step");

  auto* count = app.add_subcommand("count", "Predicted |S(G)| without enumeration");
  count->add_option("semigroup", g_spec)->required();

  auto* filters = app.add_subcommand("filters", "List the filters of G");
  filters->add_option("semigroup", g_spec)->required();
  add_common(filters);

  auto* verify = app.add_subcommand("verify", "Run a checker; exit 1 on any FAIL");
  verify->require_subcommand(1);
  auto* v_hom = verify->add_subcommand("partial-hom", "Partial homomorphism G -> H from a map file");
  v_hom->add_option("source", g_spec)->required();
  v_hom->add_option("target", h_spec)->required();
  v_hom->add_option("map", extra, "Lines 'src: tgt'")->required();
  auto* v_act = verify->add_subcommand("partial-action", "Partial action (canonical one when no file is given)");
  v_act->add_option("semigroup", g_spec)->required();
  v_act->add_option("action", extra, "Action document");
  add_common(v_act);
  auto* v_filters = verify->add_subcommand("filters", "Filter axioms and count");
  v_filters->add_option("semigroup", g_spec)->required();
  add_common(v_filters);
  auto* v_fell = verify->add_subcommand("fell", "Concrete Fell bundle, expansion, refinement, regularity");
  v_fell->add_option("semigroup", g_spec)->required();
  v_fell->add_option("bundle", extra, "Bundle document or builtin:<name>")->required();
  add_common(v_fell);
  auto* v_twisted = verify->add_subcommand("twisted", "Twisted partial action from regularity data");
  v_twisted->add_option("semigroup", g_spec)->required();
  v_twisted->add_option("bundle", extra)->required();
  v_twisted->add_option("--perturb-omega", perturb, "Multiply omega(r,s) by exp(i theta); give r,s");
  v_twisted->add_option("--theta", theta, "Phase for --perturb-omega");
  add_common(v_twisted);
  auto* v_lift = verify->add_subcommand("lift", "Lift the canonical partial action to S(G) and check separation");
  v_lift->add_option("semigroup", g_spec)->required();
  add_common(v_lift);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (expand->parsed()) return cmd_expand(cfg, g_spec, out);
    if (reduce->parsed()) return cmd_reduce(cfg, g_spec, word, out);
    if (count->parsed()) return cmd_count(g_spec, out);
    if (filters->parsed()) return cmd_filters(cfg, g_spec, out);
    if (v_hom->parsed()) return verify_partial_hom(g_spec, h_spec, extra, out);
    if (v_act->parsed()) return verify_partial_action(cfg, g_spec, extra, out);
    if (v_filters->parsed()) return verify_filters(cfg, g_spec, out);
    if (v_fell->parsed()) return verify_fell(cfg, g_spec, extra, out);
    if (v_twisted->parsed()) return verify_twisted(cfg, g_spec, extra, perturb, theta, out);
    if (v_lift->parsed()) return verify_lift(cfg, g_spec, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace invexp::cli
