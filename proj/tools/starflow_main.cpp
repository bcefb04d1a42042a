// starflow — batch front door for the deformation-quantization engine.
//
// Subcommands: star, evolve, open-evolve, classical, kms, check, selftest.
// A JSON scenario file supplies defaults; explicit flags override it. The
// STARFLOW_TOL environment variable overrides the float comparison tolerance.
// Exit codes: 0 success, 1 battery failure, 2 usage or configuration error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "starflow/classical.hpp"
#include "starflow/config.hpp"
#include "starflow/parse.hpp"
#include "starflow/rng.hpp"
#include "starflow/selftest.hpp"
#include "starflow/serialize.hpp"

using namespace starflow;

namespace {

// Thrown for malformed command lines that CLI11 cannot catch itself
// (unknown product names, bad grids, ...). Mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scenario assembled from defaults, an optional config file, and flags, in
// that order of precedence (later wins).
struct Invocation {
  std::string config_path;
  std::optional<double> m, nu, kappa, beta;
  std::optional<int> order;
  std::optional<std::string> backend, format, observable, state_spec, out;
  std::vector<double> times;
  std::optional<std::uint64_t> seed;

  ScenarioConfig resolve() const {
    ScenarioConfig cfg;
    if (!config_path.empty()) cfg = load_scenario(config_path);
    if (m) cfg.m = *m;
    if (nu) cfg.nu = *nu;
    if (kappa) cfg.kappa = *kappa;
    if (beta) cfg.beta = *beta;
    if (order) cfg.truncation_order = *order;
    if (backend) cfg.scalar_backend = *backend;
    if (format) cfg.format = *format;
    if (observable) cfg.observable = *observable;
    if (state_spec) apply_state_spec(*state_spec, cfg);
    if (!times.empty()) cfg.times = times;
    if (seed) cfg.seed = *seed;
    cfg.validate();
    return cfg;
  }
};

// Registers the shared scenario flags on a subcommand.
void add_scenario_flags(CLI::App* sub, Invocation& inv) {
  sub->add_option("--config", inv.config_path, "JSON scenario file");
  sub->add_option("--m", inv.m, "oscillator mass");
  sub->add_option("--nu", inv.nu, "oscillator frequency");
  sub->add_option("--kappa", inv.kappa, "coupling constant");
  sub->add_option("--beta", inv.beta, "inverse temperature");
  sub->add_option("--order", inv.order, "hbar truncation order");
  sub->add_option("--backend", inv.backend,
                  "scalar backend: float64 | exact-rational");
  sub->add_option("--format", inv.format, "output format: csv | json");
  sub->add_option("--out", inv.out, "output file (default: stdout)");
  sub->add_option("--seed", inv.seed, "seed for randomized batteries");
}

void write_output(const Invocation& inv, const std::string& text) {
  if (!inv.out) {
    std::cout << text;
    return;
  }
  std::ofstream os(*inv.out, std::ios::binary);
  if (!os) throw ConfigError("out", "cannot open '" + *inv.out + "' for writing");
  os << text;
}

FrameId infer_frame(const std::vector<std::string>& exprs,
                    const std::optional<std::string>& frame_flag) {
  if (frame_flag) {
    auto f = frame_by_name(*frame_flag);
    if (!f) throw UsageError("unknown frame '" + *frame_flag + "'");
    return *f;
  }
  for (const std::string& e : exprs)
    if (auto f = detect_frame(e)) return *f;
  return FrameId::darboux;  // constants live in any frame
}

std::string render_table(const ScenarioConfig& cfg, const std::string& observable,
                         const std::string& state, const SeriesTable& table) {
  if (cfg.format == "json")
    return series_table_json(observable, state, table).dump(2) + "\n";
  std::ostringstream os;
  write_series_csv(os, table);
  return os.str();
}

// star <f> <g>: one product application, serialized whole.
int cmd_star(const Invocation& inv, const std::vector<std::string>& exprs,
             const std::string& product_name,
             const std::optional<std::string>& frame_flag) {
  ScenarioConfig cfg = inv.resolve();
  auto product = StarProduct::by_name(product_name);
  if (!product) throw UsageError("unknown product '" + product_name + "'");

  FrameId frame = infer_frame(exprs, frame_flag);
  Backend be = cfg.backend();
  FormalSeries f =
      parse_expression(exprs[0], frame, be, cfg.truncation_order);
  FormalSeries g =
      parse_expression(exprs[1], frame, be, cfg.truncation_order);

  // transports need the float catalog; exact runs stay frame-local
  std::optional<FrameCatalog> frames;
  if (be == Backend::float64) frames.emplace(cfg.parameters(), be);
  FormalSeries result =
      star_product(*product, f, g, frames ? &*frames : nullptr);

  if (cfg.format == "json") {
    nlohmann::json j;
    j["product"] = product_name;
    j["frame"] = frame_name(result.frame());
    j["series"] = series_to_json(result);
    write_output(inv, j.dump(2) + "\n");
  } else {
    write_output(inv, result.to_string() + "\n");
  }
  return 0;
}

// evolve: closed Heisenberg evolution of an observable over the time grid.
int cmd_evolve(const Invocation& inv) {
  ScenarioConfig cfg = inv.resolve();
  FrameId frame = infer_frame({cfg.observable}, std::nullopt);
  FormalSeries f =
      parse_expression(cfg.observable, frame, cfg.backend(), cfg.truncation_order);
  FrameCatalog frames(cfg.parameters(), cfg.backend());
  SeriesTable table;
  for (double t : cfg.times) table.push_back({t, heisenberg_evolve(f, t, frames)});
  write_output(inv, render_table(cfg, cfg.observable, "", table));
  return 0;
}

// open-evolve: reduced evolution against a bath state.
int cmd_open_evolve(const Invocation& inv) {
  ScenarioConfig cfg = inv.resolve();
  FrameId frame = infer_frame({cfg.observable}, std::nullopt);
  FormalSeries f =
      parse_expression(cfg.observable, frame, cfg.backend(), cfg.truncation_order);
  BathState state = cfg.make_state();
  SeriesTable table;
  std::string state_desc;
  for (double t : cfg.times) {
    ReducedObservable red = open_evolve(f, t, state, cfg.observable);
    state_desc = red.state;
    table.push_back({t, red.series});
  }
  write_output(inv, render_table(cfg, cfg.observable, state_desc, table));
  return 0;
}

// classical: flow of a builtin vector field; one CSV row per time with the
// evolved system point and the evolution-property residual at s = t/2.
int cmd_classical(const Invocation& inv, const std::string& field_tag,
                  std::vector<double> x0, std::vector<double> xb0) {
  ScenarioConfig cfg = inv.resolve();
  auto field = VectorFieldSpec::by_name(field_tag, cfg.parameters());
  if (!field) throw UsageError("unknown field '" + field_tag + "'");
  if (x0.empty()) x0.assign(field->system_dim, 0.8);
  if (xb0.empty()) xb0.assign(field->bath_dim, 0.3);
  if (static_cast<int>(x0.size()) != field->system_dim ||
      static_cast<int>(xb0.size()) != field->bath_dim)
    throw UsageError(field_tag + " needs " + std::to_string(field->system_dim) +
                     " system and " + std::to_string(field->bath_dim) +
                     " bath coordinates");

  std::ostringstream os;
  os << "t";
  for (std::size_t d = 0; d < x0.size(); ++d) os << ",xS" << d;
  os << ",residual\n";
  for (double t : cfg.times) {
    std::vector<double> xt = open_evolve_pure(*field, x0, xb0, t);
    os << format_double(t);
    for (double v : xt) os << ',' << format_double(v);
    double res = evolution_property_residual(*field, x0, xb0, t / 2.0, t / 2.0);
    os << ',' << format_double(res) << '\n';
  }
  write_output(inv, os.str());
  return 0;
}

// kms: the thermal functional — trace normalization, partition function,
// and the low-degree bath moment table.
int cmd_kms(const Invocation& inv) {
  ScenarioConfig cfg = inv.resolve();
  if (cfg.beta <= 0.0) throw ConfigError("params.beta", "must be positive");
  Parameters p = cfg.parameters();
  int order = cfg.truncation_order;
  PartitionFunction pf = partition_function(cfg.beta, p, order);
  BathState state = BathState::kms(Scalar::real_double(cfg.beta), p);

  const std::vector<std::pair<int, int>> monos = {
      {1, 0}, {0, 1}, {2, 0}, {0, 2}, {1, 1}, {3, 0}, {4, 0}};
  if (cfg.format == "json") {
    nlohmann::json j;
    j["beta"] = cfg.beta;
    j["params"] = {{"m", cfg.m}, {"nu", cfg.nu}, {"kappa", cfg.kappa}};
    j["mu"] = series_to_json(pf.mu);
    j["z_principal"] = format_double(pf.z_principal.real());
    j["z_regular"] = series_to_json(pf.z_regular);
    nlohmann::json moments = nlohmann::json::array();
    for (auto [dq, dp] : monos) {
      FormalSeries m = state.moment(Monomial({0, 0, dq, dp}), order);
      moments.push_back({{"mono", Monomial({0, 0, dq, dp}).to_string(FrameId::darboux)},
                         {"series", series_to_json(m)}});
    }
    j["moments"] = moments;
    write_output(inv, j.dump(2) + "\n");
    return 0;
  }

  std::ostringstream os;
  os << "kms functional: beta=" << format_double(cfg.beta)
     << " m=" << format_double(cfg.m) << " nu=" << format_double(cfg.nu)
     << " order=" << order << "\n";
  os << "mu(1)       = " << pf.mu.to_string() << "\n";
  os << "Z principal = " << format_double(pf.z_principal.real())
     << " (coefficient of 1/hbar)\n";
  os << "Z regular   = " << pf.z_regular.to_string() << "\n";
  os << "moments:\n";
  for (auto [dq, dp] : monos) {
    FormalSeries m = state.moment(Monomial({0, 0, dq, dp}), order);
    os << "  " << Monomial({0, 0, dq, dp}).to_string(FrameId::darboux) << " -> "
       << m.to_string() << "\n";
  }
  write_output(inv, os.str());
  return 0;
}

// check positivity: random-square battery plus a matrix amplification sample.
int cmd_check_positivity(const Invocation& inv, int trials) {
  ScenarioConfig cfg = inv.resolve();
  if (trials <= 0) throw UsageError("--trials must be positive");
  BathState state = cfg.make_state();
  int order = cfg.truncation_order;

  Rng rng(cfg.seed);
  int positive = 0, zero = 0, negative = 0, indefinite = 0;
  for (int trial = 0; trial < trials; ++trial) {
    Polynomial p(FrameId::darboux, state.backend());
    for (int term = 0; term < 4; ++term) {
      int dq = static_cast<int>(rng.uniform_int(0, 3));
      int dp = static_cast<int>(rng.uniform_int(0, 3 - dq));
      p.add_term(Monomial({0, 0, dq, dp}), rng.small_scalar(state.backend(), true));
    }
    switch (positivity_check(state, FormalSeries::of_polynomial(p, order))) {
      case SeriesSign::positive: ++positive; break;
      case SeriesSign::zero_at_truncation: ++zero; break;
      case SeriesSign::negative: ++negative; break;
      case SeriesSign::indefinite: ++indefinite; break;
    }
  }

  std::vector<std::pair<double, double>> pts = {
      {0.0, 0.0}, {0.8, -0.3}, {-1.2, 0.5}, {0.4, 1.6}, {1.0, 1.0}};
  int cp_matrices = std::max(1, trials / 10);
  int cp_failures = 0;
  double min_eig = 0.0;
  for (int trial = 0; trial < cp_matrices; ++trial) {
    MatrixObservable f(2, FrameId::darboux, state.backend(), order);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        f.set(i, j, rng.series(FrameId::darboux, state.backend(), order, 2, 3, true));
    CpSampleReport r = cp_sample_check(state, f, pts);
    if (!r.passed) ++cp_failures;
    min_eig = std::min(min_eig, r.min_eigenvalue);
  }

  bool pass = negative == 0 && indefinite == 0 && cp_failures == 0;
  std::ostringstream os;
  os << "positivity battery: state " << state.description() << ", seed "
     << cfg.seed << ", generator " << Rng::kGeneratorName << ", trials "
     << trials << "\n";
  os << "squares: positive " << positive << ", zero " << zero << ", negative "
     << negative << ", indefinite " << indefinite << "\n";
  os << "cp sample: " << cp_matrices << " matrices, min eigenvalue "
     << format_double(min_eig) << ", failures " << cp_failures << "\n";
  os << "result: " << (pass ? "PASS" : "FAIL") << "\n";
  write_output(inv, os.str());
  return pass ? 0 : 1;
}

int cmd_selftest(const Invocation& inv) {
  ScenarioConfig cfg = inv.resolve();
  SelftestReport report = run_selftest(cfg.seed);
  write_output(inv, report.to_text());
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* tol = std::getenv("STARFLOW_TOL")) {
    char* end = nullptr;
    double v = std::strtod(tol, &end);
    if (end == tol || *end != '\0' || !(v > 0.0)) {
      std::cerr << "error: STARFLOW_TOL must be a positive number, got '" << tol
                << "'\n";
      return 2;
    }
    set_default_tolerance(v);
  }

  CLI::App app{"formal deformation quantization of an open oscillator pair"};
  app.require_subcommand(1);

  Invocation inv;
  std::vector<std::string> star_exprs;
  std::string product_name = "weyl";
  std::optional<std::string> frame_flag;
  std::string field_tag = "linear-hamiltonian";
  std::vector<double> x0, xb0;
  int trials = 100;

  CLI::App* star = app.add_subcommand("star", "multiply two observables");
  add_scenario_flags(star, inv);
  star->add_option("exprs", star_exprs, "the two factor expressions")
      ->expected(2)
      ->required();
  star->add_option("--product", product_name,
                   "weyl | wick-total | wick-system | wick-bath");
  star->add_option("--frame", frame_flag,
                   "coordinate frame (default: inferred from the factors)");

  CLI::App* evolve = app.add_subcommand(
      "evolve", "Heisenberg evolution of an observable over a time grid");
  add_scenario_flags(evolve, inv);
  evolve->add_option("--observable", inv.observable, "observable expression");
  evolve->add_option("--t", inv.times, "time grid");

  CLI::App* open_ev = app.add_subcommand(
      "open-evolve", "reduced evolution against a bath state");
  add_scenario_flags(open_ev, inv);
  open_ev->add_option("--observable", inv.observable,
                      "system observable expression");
  open_ev->add_option("--state", inv.state_spec,
                      "bath state, e.g. kms:beta=1 or deformed-delta:q0=0.3,p0=-0.2");
  open_ev->add_option("--t", inv.times, "time grid");

  CLI::App* classical = app.add_subcommand(
      "classical", "flow of a builtin classical vector field");
  add_scenario_flags(classical, inv);
  classical->add_option("--field", field_tag,
                        "rotation-const | rotation-radial | linear-hamiltonian"
                        " | timedep-embedding");
  classical->add_option("--x0", x0, "initial system point");
  classical->add_option("--xb0", xb0, "initial bath point");
  classical->add_option("--t", inv.times, "time grid");

  CLI::App* kms = app.add_subcommand(
      "kms", "thermal functional: trace, partition function, moments");
  add_scenario_flags(kms, inv);

  CLI::App* check = app.add_subcommand("check", "run a verification battery");
  check->require_subcommand(1);
  CLI::App* positivity =
      check->add_subcommand("positivity", "random positive-square battery");
  add_scenario_flags(positivity, inv);
  positivity->add_option("--state", inv.state_spec, "bath state spec");
  positivity->add_option("--trials", trials, "number of random squares");

  CLI::App* selftest = app.add_subcommand(
      "selftest", "full verification battery with the acceptance thresholds");
  add_scenario_flags(selftest, inv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (star->parsed()) return cmd_star(inv, star_exprs, product_name, frame_flag);
    if (evolve->parsed()) return cmd_evolve(inv);
    if (open_ev->parsed()) return cmd_open_evolve(inv);
    if (classical->parsed()) return cmd_classical(inv, field_tag, x0, xb0);
    if (kms->parsed()) return cmd_kms(inv);
    if (positivity->parsed()) return cmd_check_positivity(inv, trials);
    if (selftest->parsed()) return cmd_selftest(inv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
