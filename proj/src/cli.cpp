#include "skl/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <set>

#include "skl/random_diagram.hpp"

namespace skl {

namespace {

constexpr std::size_t kQuotientCrossingCap = 10;
constexpr std::size_t kMaxWitnessesReported = 10;

std::optional<GaussRat> parse_zeta(const std::string& z) {
  if (z == "symbolic") return std::nullopt;
  if (z == "1") return GaussRat(1);
  if (z == "-1") return GaussRat(-1);
  if (z == "i") return GaussRat::i();
  if (z == "-i") return -GaussRat::i();
  throw InputError("--zeta", "expected one of symbolic, -1, 1, i, -i");
}

std::size_t cap_for(const RunConfig& cfg, std::size_t fallback) {
  return cfg.max_crossings.value_or(fallback);
}

const std::string& input_at(const RunConfig& cfg, std::size_t k, const char* what) {
  if (cfg.inputs.size() <= k) throw InputError(cfg.subcommand, std::string("missing ") + what + " file");
  return cfg.inputs[k];
}

Diagram load_diagram(const std::string& path) {
  const DiagramFile f = [&] {
    try {
      return diagram_file_from_json(read_json_file(path));
    } catch (const InputError& e) {
      if (e.where().rfind(path, 0) == 0) throw;
      throw InputError(path + ":" + e.where(), e.message());
    }
  }();
  try {
    return build_diagram(f);
  } catch (const InputError& e) {
    throw InputError(path + ":" + e.where(), e.message());
  } catch (const DiagramError& e) {
    throw InputError(path, e.what());
  }
}

HeegaardData load_heegaard(const std::string& path) {
  try {
    return heegaard_from_json(read_json_file(path));
  } catch (const InputError& e) {
    if (e.where().rfind(path, 0) == 0) throw;
    throw InputError(path + ":" + e.where(), e.message());
  }
}

Json skein_report(const Skein& x, const std::optional<GaussRat>& zeta) {
  return skein_to_json(zeta ? eval_skein(x, *zeta) : x);
}

Json h1_to_json(const H1Report& h1) {
  Json inv = Json::array();
  for (const auto& z : h1.invariants) inv.push_back(integer_to_json(z));
  return inv;
}

Surface suite_surface(std::size_t trial) {
  switch (trial % 3) {
    case 0: return Surface::disk();
    case 1: return Surface::torus();
    default: return Surface::punctured_torus();
  }
}

// At every crossing: <D> = zeta <D_+> + zeta^-1 <D_->.
bool kauffman_relation_holds(const Diagram& d, std::size_t cap, std::string& witness) {
  const Skein whole = bracket(d, cap);
  for (std::size_t k = 0; k < d.crossing_count(); ++k) {
    Skein rhs = LaurentPoly::zeta(1) * bracket(smooth_crossing(d, k, 1), cap);
    rhs += LaurentPoly::zeta(-1) * bracket(smooth_crossing(d, k, -1), cap);
    if (rhs != whole) {
      witness = "crossing " + std::to_string(k) + ": " + whole.to_string() + " vs " + rhs.to_string();
      return false;
    }
  }
  return true;
}

// A disjoint trivial loop multiplies by -zeta^2 - zeta^-2.
bool loop_absorption_holds(const Diagram& d, std::size_t cap, std::string& witness) {
  const Skein lhs = bracket(add_trivial_loop(d), cap);
  const Skein rhs = LaurentPoly::loop_value() * bracket(d, cap);
  if (lhs == rhs) return true;
  witness = lhs.to_string() + " vs " + rhs.to_string();
  return false;
}

Json run_bracket(const RunConfig& cfg, const std::optional<GaussRat>& zeta) {
  const Diagram d = load_diagram(input_at(cfg, 0, "diagram"));
  const PsiResult p = psi(d);
  Json out;
  out["surface"] = to_string(d.surface().kind());
  out["components"] = d.component_count();
  out["crossings"] = d.crossing_count();
  out["writhe"] = p.writhe;
  out["bracket"] = skein_report(bracket(d, cap_for(cfg, kDefaultCrossingCap)), zeta);
  return out;
}

Json run_product(const RunConfig& cfg, const std::optional<GaussRat>& zeta) {
  const Diagram x = load_diagram(input_at(cfg, 0, "first diagram"));
  const Diagram y = load_diagram(input_at(cfg, 1, "second diagram"));
  if (x.surface() != y.surface()) throw InputError(cfg.inputs[1], "diagrams live on different surfaces");
  const std::size_t cap = cap_for(cfg, kDefaultCrossingCap);
  Json out;
  if (cfg.heegaard) {
    if (!zeta || zeta->re() != 0) throw InputError("--zeta", "the signed product needs zeta = i or -i");
    if (x.surface().kind() != SurfaceKind::Torus) throw InputError(cfg.inputs[0], "the signed product needs torus diagrams");
    const HeegaardData h = load_heegaard(*cfg.heegaard);
    try {
      out["lk2"] = lk2(x, y, h);
    } catch (const std::invalid_argument& e) {
      throw InputError(cfg.inputs[0], e.what());
    }
    out["product"] = skein_to_json(k0_product(x, y, h, *zeta, cap));
    return out;
  }
  const Diagram d = stack(x, y);
  out["crossings"] = d.crossing_count();
  out["product"] = skein_report(bracket(d, cap), zeta);
  return out;
}

Json run_verify_comm(const RunConfig& cfg, bool& failed) {
  const std::size_t cap = cap_for(cfg, kDefaultCrossingCap);
  Json out;
  if (!cfg.inputs.empty()) {
    const Diagram d = load_diagram(cfg.inputs[0]);
    const CommReport rep = verify_comm_report(d, cap);
    out["crossings"] = d.crossing_count();
    out["sides_equal"] = rep.sides_equal;
    out["states_ok"] = rep.states_ok;
    out["states_checked"] = rep.states_checked;
    out["lhs"] = tensor_to_json(rep.lhs);
    out["rhs"] = tensor_to_json(rep.rhs);
    if (!rep.ok) out["witness"] = rep.witness;
    failed = !rep.ok;
    return out;
  }
  std::mt19937_64 rng(cfg.seed);
  std::size_t eq6 = 0, eq7 = 0, comm = 0, states_ok = 0, states = 0;
  std::map<std::string, std::size_t> per_surface;
  std::map<std::size_t, std::size_t> by_crossings;
  Json failures = Json::array();
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const Surface surface = suite_surface(t);
    const Diagram d = random_diagram(surface, rng);
    ++per_surface[to_string(surface.kind())];
    ++by_crossings[d.crossing_count()];
    std::string w6, w7;
    const bool ok6 = kauffman_relation_holds(d, cap, w6);
    const bool ok7 = loop_absorption_holds(d, cap, w7);
    const CommReport rep = verify_comm_report(d, cap);
    eq6 += ok6;
    eq7 += ok7;
    comm += rep.sides_equal;
    states_ok += rep.states_ok;
    states += rep.states_checked;
    if (ok6 && ok7 && rep.ok) continue;
    Json f{{"trial", t}, {"surface", to_string(surface.kind())}};
    if (!ok6) f["kauffman_relation"] = w6;
    if (!ok7) f["loop_absorption"] = w7;
    if (!rep.ok) f["commutativity"] = rep.witness;
    failures.push_back(std::move(f));
  }
  Json hist = Json::object();
  for (const auto& [n, count] : by_crossings) hist[std::to_string(n)] = count;
  out["trials"] = cfg.trials;
  out["surfaces"] = per_surface;
  out["crossing_histogram"] = hist;
  out["kauffman_relation_pass"] = eq6;
  out["loop_absorption_pass"] = eq7;
  out["commutativity_pass"] = comm;
  out["state_identities_pass"] = states_ok;
  out["states_checked"] = states;
  out["failures"] = failures;
  failed = !failures.empty();
  return out;
}

// phi on basis curves is diagonal and injective; psi does not depend on the
// orientation; psi_expand agrees with bracket_psi at crossings between
// distinct components.
Json run_verify_marche(const RunConfig& cfg, bool& failed) {
  const std::size_t cap = cap_for(cfg, kDefaultCrossingCap);
  Json out;
  Json failures = Json::array();

  std::size_t basis_checked = 0;
  for (const Surface& surface : {Surface::torus(), Surface::punctured_torus()}) {
    std::set<TensorElem::Key> keys;
    const int n = std::max(cfg.truncation, 0);
    std::vector<SimpleMulticurve> curves{SimpleMulticurve::empty(surface.kind())};
    for (int p = -n; p <= n; ++p)
      for (int q = 0; q <= n; ++q) {
        const IVec2 v{p, q};
        if (v.is_zero() || normalize_slope(v) != v || gcd_abs(v) != 1) continue;
        const int span = static_cast<int>(std::max(std::abs(p), std::abs(q)));
        for (int k = 1; k * span <= n; ++k) curves.emplace_back(surface.kind(), std::map<IVec2, int>{{v, k}});
      }
    if (surface.kind() == SurfaceKind::PuncturedTorus)
      for (int b = 1; b <= n; ++b) curves.emplace_back(surface.kind(), std::map<IVec2, int>{}, b);
    for (const auto& mc : curves) {
      ++basis_checked;
      const TensorElem t = phi(Skein::basis(mc, 1), surface);
      if (t.terms().size() != 1 || !t.is_diagonal() || !keys.insert(t.terms().begin()->first).second)
        failures.push_back(Json{{"check", "phi on basis"}, {"multicurve", mc.to_string()}});
    }
  }

  std::mt19937_64 rng(cfg.seed);
  std::size_t orient_checked = 0, expand_checked = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const Surface surface = suite_surface(t);
    const Diagram d = random_diagram(surface, rng);
    const PsiResult base = psi(d);
    const std::size_t n = d.component_count();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<int> dirs(n, 1);
      for (std::size_t c = 0; c < n; ++c)
        if (mask >> c & 1) dirs[c] = -1;
      const PsiResult other = psi(OrientedDiagram(d, dirs));
      ++orient_checked;
      if (other.coeff != base.coeff || other.key != base.key)
        failures.push_back(Json{{"check", "psi orientation"}, {"trial", t}, {"mask", mask}});
    }
    const TensorElem whole = bracket_psi(d, cap);
    for (std::size_t k = 0; k < d.crossing_count(); ++k) {
      if (d.crossings()[k].is_self()) continue;
      ++expand_checked;
      if (psi_expand(d, k, cap) != whole)
        failures.push_back(Json{{"check", "psi skein relation"}, {"trial", t}, {"crossing", k}});
    }
  }
  out["basis_curves_checked"] = basis_checked;
  out["orientations_checked"] = orient_checked;
  out["inter_component_expansions_checked"] = expand_checked;
  out["failures"] = failures;
  failed = !failures.empty();
  return out;
}

Json run_heegaard_audit(const RunConfig& cfg, bool& failed) {
  const HeegaardData h = load_heegaard(input_at(cfg, 0, "Heegaard"));
  const std::vector<SlideRelation> rels = generate_relations(h, cfg.bounds);
  const WritheAudit audit = writhe_mod4_audit(h, rels);
  const PsiRelationReport psi_rep = psi_on_relations(rels);
  Json out;
  out["h1"] = h1_to_json(audit.h1);
  out["two_torsion"] = audit.h1.two_torsion;
  out["relations"] = audit.relations;
  Json hist = Json::object();
  for (std::size_t r = 0; r < 4; ++r) hist[std::to_string(r)] = audit.histogram[r];
  out["writhe_mod4_histogram"] = hist;
  out["writhe_formula_agrees"] = audit.formula_agrees;
  Json wit = Json::array();
  for (std::size_t k = 0; k < audit.witnesses.size() && k < kMaxWitnessesReported; ++k) {
    const auto& w = audit.witnesses[k];
    wit.push_back(Json{{"relation", w.relation},
                       {"writhe", w.writhe},
                       {"writhe_mod4", ((w.writhe % 4) + 4) % 4},
                       {"description", w.description}});
  }
  out["witnesses"] = wit;
  out["witness_count"] = audit.witnesses.size();
  Json dis = Json::array();
  for (const auto& w : audit.disagreements)
    dis.push_back(Json{{"relation", w.relation}, {"writhe", w.writhe}, {"description", w.description}});
  out["writhe_formula_disagreements"] = dis;
  out["psi_relations_passed"] = psi_rep.passed;
  out["psi_relations_failed"] = psi_rep.failures.size();
  const bool nonzero = audit.histogram[1] + audit.histogram[2] + audit.histogram[3] > 0;
  failed = !audit.formula_agrees || (!audit.h1.two_torsion && (nonzero || !psi_rep.all_pass()));
  return out;
}

Json run_quotient_dim(const RunConfig& cfg, const std::optional<GaussRat>& zeta, bool& failed) {
  const HeegaardData h = load_heegaard(input_at(cfg, 0, "Heegaard"));
  if (cfg.truncation < 0) throw InputError("--truncation", "must be non-negative");
  const std::size_t cap = cap_for(cfg, kQuotientCrossingCap);
  const std::vector<SlideRelation> rels = generate_relations(h, cfg.bounds);
  std::vector<std::pair<std::string, GaussRat>> points;
  if (zeta) points.emplace_back(cfg.zeta, *zeta);
  else points = {{"-1", GaussRat(-1)}, {"-i", -GaussRat::i()}};
  Json out;
  out["h1"] = h1_to_json(manifold_h1(h));
  out["dimension_is_upper_bound"] = true;
  Json dims = Json::object();
  std::set<std::size_t> seen;
  for (const auto& [name, z] : points) {
    const QuotientResult q = truncated_quotient(rels, z, cfg.truncation, cap);
    Json basis = Json::array();
    for (const auto& mc : q.basis) basis.push_back(multicurve_to_json(mc));
    dims[name] = Json{{"dimension", q.dimension},
                      {"basis", basis},
                      {"rank", q.rank},
                      {"relations_generated", q.generated},
                      {"relations_kept", q.relations.rows.size()},
                      {"relations_dropped", q.dropped}};
    seen.insert(q.dimension);
  }
  out["quotients"] = dims;
  failed = !manifold_h1(h).two_torsion && seen.size() > 1;
  return out;
}

Json run_a_algebra(const RunConfig& cfg, bool& failed) {
  const Lattice lattice = Lattice::symplectic(1);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::int64_t> coord(-5, 5);
  auto draw = [&] { return HomClass{coord(rng), coord(rng)}; };
  auto gen = [&](const HomClass& g) { return AElem::generator(g, lattice); };
  std::size_t assoc = 0, square = 0, graded = 0, canon = 0;
  Json failures = Json::array();
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const HomClass a = draw(), b = draw(), c = draw();
    const AElem x = gen(a), y = gen(b), z = gen(c);
    const AElem xy = a_mul(x, y, lattice);
    if (a_mul(xy, z, lattice) == a_mul(x, a_mul(y, z, lattice), lattice)) ++assoc;
    else failures.push_back(Json{{"check", "associativity"}, {"trial", t}});
    if (a_mul(x, x, lattice) == AElem::one(lattice)) ++square;
    else failures.push_back(Json{{"check", "square"}, {"trial", t}});
    const HomClass sum = a + b;
    if (xy.terms().size() == 1 && reduce_mod2(xy.terms().begin()->first) == reduce_mod2(sum)) ++graded;
    else failures.push_back(Json{{"check", "grading"}, {"trial", t}});
    AElem expected = gen(sum);
    expected *= GaussRat::i_pow(-lattice.omega(a, b));
    if (xy == expected) ++canon;
    else failures.push_back(Json{{"check", "canonical lift"}, {"trial", t}});
  }
  Json out;
  out["trials"] = cfg.trials;
  out["associativity_pass"] = assoc;
  out["square_pass"] = square;
  out["grading_pass"] = graded;
  out["canonical_lift_pass"] = canon;
  out["failures"] = failures;
  failed = !failures.empty();
  return out;
}

}  // namespace

Json config_to_json(const RunConfig& cfg) {
  Json c;
  c["subcommand"] = cfg.subcommand;
  c["inputs"] = cfg.inputs;
  if (cfg.heegaard) c["heegaard"] = *cfg.heegaard;
  c["zeta"] = cfg.zeta;
  if (cfg.max_crossings) c["max_crossings"] = *cfg.max_crossings;
  else c["max_crossings"] = cfg.subcommand == "quotient-dim" ? kQuotientCrossingCap : kDefaultCrossingCap;
  c["truncation"] = cfg.truncation;
  c["seed"] = cfg.seed;
  c["trials"] = cfg.trials;
  c["slide_bounds"] = Json{{"max_multiplicity", cfg.bounds.max_multiplicity},
                           {"max_slope", cfg.bounds.max_slope},
                           {"max_arcs", cfg.bounds.max_arcs},
                           {"winding_range", cfg.bounds.winding_range}};
  return c;
}

RunResult execute(const RunConfig& cfg) {
  RunResult res;
  try {
    const std::optional<GaussRat> zeta = parse_zeta(cfg.zeta);
    bool failed = false;
    Json body;
    if (cfg.subcommand == "bracket") body = run_bracket(cfg, zeta);
    else if (cfg.subcommand == "product") body = run_product(cfg, zeta);
    else if (cfg.subcommand == "verify-comm") body = run_verify_comm(cfg, failed);
    else if (cfg.subcommand == "verify-marche") body = run_verify_marche(cfg, failed);
    else if (cfg.subcommand == "heegaard-audit") body = run_heegaard_audit(cfg, failed);
    else if (cfg.subcommand == "quotient-dim") body = run_quotient_dim(cfg, zeta, failed);
    else if (cfg.subcommand == "a-algebra") body = run_a_algebra(cfg, failed);
    else throw InputError("subcommand", "unknown subcommand '" + cfg.subcommand + "'");
    res.report = Json{{"config", config_to_json(cfg)}, {"result", std::move(body)}};
    res.report["status"] = failed ? "verification_failure" : "ok";
    res.exit_code = failed ? 1 : 0;
  } catch (const InputError& e) {
    res.exit_code = 2;
    res.diagnostic = e.what();
  } catch (const CrossingCapExceeded& e) {
    res.exit_code = 2;
    res.diagnostic = e.what();
  }
  return res;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Kauffman bracket skein computations"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::size_t cap = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--zeta", cfg.zeta, "symbolic, -1, 1, i or -i");
    sub->add_option("--max-crossings", cap, "state-sum crossing cap");
    sub->add_option("--truncation", cfg.truncation, "complexity bound N");
    sub->add_option("--seed", cfg.seed, "seed for randomized suites");
    sub->add_option("--trials", cfg.trials, "size of randomized suites");
    sub->add_option("--out", cfg.out, "report path (default stdout)");
    sub->add_option("--max-multiplicity", cfg.bounds.max_multiplicity);
    sub->add_option("--max-slope", cfg.bounds.max_slope);
    sub->add_option("--max-arcs", cfg.bounds.max_arcs);
    sub->add_option("--winding-range", cfg.bounds.winding_range);
  };
  struct Spec {
    const char* name;
    const char* help;
  };
  const Spec specs[] = {
      {"bracket", "bracket of a diagram file"},
      {"product", "stacked product of two diagram files"},
      {"verify-comm", "phi/psi commutativity on a file or a random suite"},
      {"verify-marche", "phi and psi suites"},
      {"heegaard-audit", "H1, writhe mod 4 and psi on slide relations"},
      {"quotient-dim", "truncated skein module dimension"},
      {"a-algebra", "random checks of the algebra A"},
  };
  for (const auto& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    common(sub);
    sub->add_option("inputs", cfg.inputs, "input files");
    if (std::string(s.name) == "product") sub->add_option("--heegaard", cfg.heegaard, "Heegaard file");
    sub->callback([&cfg, sub, &cap] {
      cfg.subcommand = sub->get_name();
      if (sub->count("--max-crossings")) cfg.max_crossings = cap;
    });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const RunResult res = execute(cfg);
  if (res.exit_code == 2) {
    std::cerr << "error: " << res.diagnostic << '\n';
    return 2;
  }
  const std::string text = res.report.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out || !(out << text)) {
      std::cerr << "error: cannot write " << cfg.out << '\n';
      return 2;
    }
  }
  if (res.exit_code == 1) std::cerr << "verification failure; see the report\n";
  return res.exit_code;
}

}  // namespace skl
