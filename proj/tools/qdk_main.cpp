// qdk: command-line front end. Exit codes: 0 ok, 1 a checked property failed,
// 2 unparsable or invalid input, 3 a size cap was hit.
#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qdk/io.hpp"

namespace {

using namespace qdk;

constexpr double kTransformTolerance = 1e-9;

struct Options {
  std::string group;
  std::string format = "json";
  std::string output;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  bool timing = false;
};

struct Outcome {
  Json doc;
  bool passed = true;
};

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  const char* env = std::getenv("QDK_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (env[used] == '\0') return v;
  } catch (const std::exception&) {
  }
  throw ParseError("QDK_SEED must be an unsigned integer, got '" + std::string(env) + "'");
}

Json header(const char* command, const FiniteGroup& g) {
  return {{"command", command}, {"group", group_to_json(g)}};
}

Json label_json(const QuantumDouble& qd, const DGIrrepLabel& l) {
  Json j = label_to_json(qd, l);
  j["name"] = qd.describe(l);
  j["dim"] = qd.dim(l);
  return j;
}

struct InvariantArgs {
  std::string irrep, closure = "trace", braid;
  std::optional<double> mc;
};

Outcome run_invariant(const Options& o, const InvariantArgs& a) {
  const FiniteGroup g = parse_group(o.group);
  const QuantumDouble qd(g);
  const DGIrrepLabel l = parse_label(qd, a.irrep);
  const BraidWord w = parse_braid(a.braid);
  const std::uint64_t seed = resolve_seed(o);
  if (a.mc && !(*a.mc > 0 && *a.mc < 1)) throw ParseError("--mc needs an epsilon in (0, 1)");

  Json doc = header("invariant", g);
  doc["irrep"] = label_json(qd, l);
  doc["closure"] = a.closure;
  doc["braid"] = braid_to_json(w);
  doc["seed"] = seed;

  InvariantValue v;
  if (a.closure == "trace") {
    v = a.mc ? trace_closure_sampled(DGQft(qd), l, w, *a.mc, seed, o.threads) : trace_closure(qd, l, w);
  } else if (l.charge == 0) {
    // Fluxon plat closures run on the inverse-closed flux set as permutations.
    const FluxSet flux = FluxSet::inverse_closed_class(g, qd.flux_rep(l));
    doc["flux_set_size"] = flux.size();
    v = a.mc ? plat_closure_fluxon_mc(flux, w, *a.mc, seed, o.threads) : plat_closure(flux, w);
  } else {
    if (a.mc) throw ParseError("--mc with a plat closure needs a fluxon label");
    v = plat_closure(qd, l, w);
  }
  doc["result"] = to_json(v);
  return {std::move(doc), true};
}

struct CountArgs {
  std::string cls, braid;
};

Outcome run_oracle_count(const Options& o, const CountArgs& a) {
  const FiniteGroup g = parse_group(o.group);
  const Elem rep = parse_element(g, a.cls);
  const BraidWord w = parse_braid(a.braid);
  const FluxSet flux = FluxSet::inverse_closed_class(g, rep);
  CountOptions opt;
  opt.threads = o.threads;
  const FluxonIdentityReport r = verify_fluxon_identity(w, flux, opt);
  Json doc = header("oracle count", g);
  doc["class"] = g.element_label(rep);
  doc["braid"] = braid_to_json(w);
  const Json report = to_json(r);
  for (const auto& [key, value] : report.items()) doc[key] = value;
  return {std::move(doc), r.passed};
}

struct GadgetArgs {
  std::size_t ell = 1;
  std::string cls = "3-cycles";
  std::vector<std::string> tuple_c{"(1 2 3)", "(3 4 5)"};
  std::vector<std::string> tuple_d{"(1 2 3)", "(1 2 3)"};
  std::optional<std::string> alpha;
};

Outcome run_oracle_gadget(const Options& o, const GadgetArgs& a) {
  const FiniteGroup g = parse_group(o.group.empty() ? "A5" : o.group);
  const FluxSet cls = FluxSet::conjugacy_class(g, parse_element(g, a.cls));
  if (a.tuple_c.size() != a.tuple_d.size()) throw ParseError("--tuple-c and --tuple-d need the same length");
  std::vector<Elem> c, d;
  for (const auto& s : a.tuple_c) c.push_back(parse_element(g, s));
  for (const auto& s : a.tuple_d) d.push_back(parse_element(g, s));
  std::optional<Elem> alpha;
  if (a.alpha) alpha = parse_element(g, *a.alpha);
  const AmplificationReport r = suppression_amplification_check(cls, c, d, a.ell, alpha);
  Json doc = header("oracle gadget", g);
  doc["class"] = g.element_label(cls.members().front());
  const Json report = to_json(g, r);
  for (const auto& [key, value] : report.items()) doc[key] = value;
  return {std::move(doc), r.passed};
}

struct CgArgs {
  std::vector<std::string> irreps;
  bool transform = false;
};

Outcome run_cg(const Options& o, const CgArgs& a) {
  const FiniteGroup g = parse_group(o.group);
  const QuantumDouble qd(g);
  const DGIrrepLabel first = parse_label(qd, a.irreps.at(0));
  const DGIrrepLabel second = parse_label(qd, a.irreps.at(1));
  const bool fluxons = first.charge == 0 && second.charge == 0;
  const CGDecomposition dec = fluxons ? fluxon_cg_decompose(qd, first.sector, second.sector)
                                      : general_cg_decompose(qd, first, second);
  Json doc = header("cg", g);
  doc["irreps"] = {label_json(qd, first), label_json(qd, second)};
  const Json report = to_json(qd, dec);
  for (const auto& [key, value] : report.items())
    if (key != "first" && key != "second") doc[key] = value;
  bool passed = dec.conditions_met();
  if (a.transform) {
    const CGTransform t = fluxons ? fluxon_cg_transform(qd, first.sector, second.sector) : cg_transform(qd, first, second);
    const double err = cg_intertwining_error(t);
    Json blocks = Json::array();
    for (const CGBlock& b : t.blocks) {
      Json jb = label_json(qd, b.label);
      jb["offset"] = b.offset;
      jb["copy"] = b.copy;
      blocks.push_back(std::move(jb));
    }
    doc["transform"] = {{"intertwining_error", err}, {"blocks", std::move(blocks)}, {"matrix", matrix_to_json(t.unitary)}};
    passed = passed && err <= kTransformTolerance;
  }
  return {std::move(doc), passed};
}

const PropertyResult& property(const SuiteReport& r, const std::string& name) {
  for (const auto& p : r.properties)
    if (p.name == name) return p;
  throw std::logic_error("suite has no property " + name);
}

Outcome run_qft_check(const Options& o) {
  const FiniteGroup g = parse_group(o.group);
  const QuantumDouble qd(g);
  const std::uint64_t seed = resolve_seed(o);
  const SuiteReport r = qft_suite(qd, seed);
  Json spectrum = Json::array();
  for (const auto& l : qd.labels()) {
    Json jl = label_json(qd, l);
    jl["multiplicity"] = qd.dim(l);
    spectrum.push_back(std::move(jl));
  }
  Json doc = header("qft-check", g);
  doc["seed"] = seed;
  doc["unitarity_error"] = property(r, "unitarity").max_deviation;
  doc["off_block_mass"] = property(r, "block structure").max_deviation;
  doc["irrep_block_error"] = property(r, "irrep blocks").max_deviation;
  doc["restriction_check_error"] = property(r, "restriction").max_deviation;
  doc["block_spectrum"] = std::move(spectrum);
  doc["passed"] = r.passed();
  return {std::move(doc), r.passed()};
}

Outcome run_check(const Options& o, const std::string& suite) {
  const FiniteGroup g = parse_group(o.group);
  const std::uint64_t seed = resolve_seed(o);
  SuiteReport r;
  if (suite == "axioms") {
    r = hopf_axiom_suite(g);
  } else {
    const QuantumDouble qd(g);
    if (suite == "braid") r = braid_relation_suite(qd);
    else if (suite == "irreps") r = irrep_suite(qd, seed);
    else if (suite == "qft") r = qft_suite(qd, seed);
    else r = cg_suite(qd, seed);
  }
  Json doc = header("check", g);
  doc["seed"] = seed;
  const Json report = to_json(r);
  for (const auto& [key, value] : report.items())
    if (key != "group") doc[key] = value;
  return {std::move(doc), r.passed()};
}

void emit(const Options& o, Json doc, double seconds) {
  if (o.timing) doc["wall_time_s"] = seconds;
  const std::string text = o.format == "text" ? to_text(doc) : doc.dump(2) + "\n";
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw ParseError("cannot open output file '" + o.output + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum double invariants, oracles and checks"};
  app.require_subcommand(1);
  Options opt;

  const auto common = [&](CLI::App* sub, bool group_required = true) {
    auto* g = sub->add_option("--group", opt.group, "Group: JSON spec or short name (S4, A5, Z6, Z7xZ3)");
    if (group_required) g->required();
    sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("-o,--output", opt.output, "Write the report to a file");
    sub->add_option("--seed", opt.seed, "Seed (default: $QDK_SEED, then 0)");
    sub->add_option("--threads", opt.threads, "Worker threads, 0 = auto");
    sub->add_flag("--timing", opt.timing, "Add wall time to the report");
  };

  InvariantArgs inv;
  auto* invariant = app.add_subcommand("invariant", "Evaluate a trace or plat closure invariant");
  common(invariant);
  invariant->add_option("--irrep", inv.irrep, "Irrep label")->required();
  invariant->add_option("--closure", inv.closure, "Closure")->check(CLI::IsMember({"trace", "plat"}));
  invariant->add_option("--braid", inv.braid, "Braid word, text or JSON")->required();
  invariant->add_option("--mc", inv.mc, "Monte Carlo with this epsilon");

  auto* oracle = app.add_subcommand("oracle", "Combinatorial ground truth");
  oracle->require_subcommand(1);
  CountArgs cnt;
  auto* count = oracle->add_subcommand("count", "Count homomorphisms of a plat closure into a flux set");
  common(count);
  count->add_option("--class", cnt.cls, "Conjugacy class")->required();
  count->add_option("--braid", cnt.braid, "Braid word, text or JSON")->required();
  GadgetArgs gad;
  auto* gadget = oracle->add_subcommand("gadget", "Suppression amplification report (default A5, 3-cycles)");
  common(gadget, false);
  gadget->add_option("--ell", gad.ell, "Number of suppression variables")->required();
  gadget->add_option("--class", gad.cls, "Conjugacy class");
  gadget->add_option("--tuple-c", gad.tuple_c, "First generator tuple (repeat the flag)");
  gadget->add_option("--tuple-d", gad.tuple_d, "Second generator tuple (repeat the flag)");
  gadget->add_option("--alpha", gad.alpha, "Kernel element to relate");

  CgArgs cga;
  auto* cg = app.add_subcommand("cg", "Clebsch-Gordan decomposition of two irreps");
  common(cg);
  cg->add_option("--irrep", cga.irreps, "Irrep label, given twice")->required()->expected(2);
  cg->add_flag("--transform", cga.transform, "Build the unitary and dump it");

  auto* qft = app.add_subcommand("qft-check", "Quantum Fourier transform report");
  common(qft);

  std::string suite;
  auto* check = app.add_subcommand("check", "Run a verification suite");
  common(check);
  check->add_option("suite", suite, "Suite")->required()->check(CLI::IsMember({"axioms", "braid", "irreps", "qft", "cg"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    if (invariant->parsed()) out = run_invariant(opt, inv);
    else if (count->parsed()) out = run_oracle_count(opt, cnt);
    else if (gadget->parsed()) out = run_oracle_gadget(opt, gad);
    else if (cg->parsed()) out = run_cg(opt, cga);
    else if (qft->parsed()) out = run_qft_check(opt);
    else out = run_check(opt, suite);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(opt, std::move(out.doc), seconds);
    return out.passed ? 0 : 1;
  } catch (const ParseError& e) {
    std::cerr << "qdk: parse error: " << e.what() << '\n';
    return 2;
  } catch (const GroupError& e) {
    std::cerr << "qdk: invalid input: " << e.what() << '\n';
    return 2;
  } catch (const CapExceeded& e) {
    std::cerr << "qdk: cap exceeded: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "qdk: error: " << e.what() << '\n';
    return 1;
  }
}
