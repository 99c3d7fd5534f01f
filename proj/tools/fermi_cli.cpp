// fermi: entanglement entropies of free fermions, their L^(d-1) ln L scaling
// and the coefficients that predict it.
//
//   fermi entropy    --config run.cfg [--out rec.json] [--csv rows.csv] [--dump-matrix A.txt]
//   fermi sweep      --config run.cfg [--jobs N] [--self-test]
//   fermi jcoeff     --config run.cfg [--seed N]
//   fermi functional [--config run.cfg]
//   fermi validate   [--verbose] [--seed N]
//
// Exit codes: 0 success, 2 configuration error, 3 computation error,
// 4 validation failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fermi/fermi.hpp"

namespace {

using namespace fermi;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitComputation = 3;
constexpr int kExitValidation = 4;

struct Options {
  std::string config_path;
  std::string out;
  std::string csv;
  std::string dump_matrix;
  std::string fault;
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
  bool self_test = false;
  bool verbose = false;
};

struct Loaded {
  RunConfig cfg;
  std::string text;
};

Loaded load(const Options& opt, Command cmd, bool required) {
  Loaded l;
  if (opt.config_path.empty()) {
    if (required) throw ConfigError(to_string(cmd) + ": --config is required");
  } else {
    std::ifstream in(opt.config_path);
    if (!in) throw ConfigError("cannot read config file '" + opt.config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    l.text = ss.str();
    l.cfg = parse_config(l.text);
  }
  if (opt.seed) l.cfg.seed = *opt.seed;
  if (!opt.out.empty()) l.cfg.output_json = opt.out;
  if (!opt.csv.empty()) l.cfg.output_csv = opt.csv;
  require_for(l.cfg, cmd);
  return l;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ComputationError("cannot write '" + path + "'");
  out << text;
}

/// Writes the record to the configured path (or stdout) and CSV rows if asked.
void emit(const RunConfig& cfg, const json& rec, const std::vector<EntropyResult>& rows, int dim) {
  const std::string text = rec.dump(2) + "\n";
  if (cfg.output_json.empty()) {
    std::cout << text;
  } else {
    write_text(cfg.output_json, text);
  }
  if (!cfg.output_csv.empty()) {
    std::ostringstream csv;
    write_csv(csv, rows, dim);
    write_text(cfg.output_csv, csv.str());
  }
}

/// Short human-readable line on stderr when the record goes to a file.
void note(const RunConfig& cfg, const std::string& line) {
  if (!cfg.output_json.empty()) std::cerr << line << "\n";
}

std::string num(double v) { return detail::fmt_double(v); }

/// J for the configured geometry; in lattice mode the two Fermi points and
/// the two block ends give J = 4.
WidomCoefficient geometry_J(const RunConfig& cfg, unsigned jobs) {
  if (cfg.mode == Mode::lattice) return {4.0, JMethod::closed_form, 0.0};
  return widom_J(*cfg.gamma, *cfg.omega, cfg.resolved_j_resolution(), JRoute::automatic, jobs);
}

// ---------------------------------------------------------------- entropy

int cmd_entropy(const Options& opt) {
  auto [cfg, text] = load(opt, Command::entropy, true);
  json rec = new_record(Command::entropy, cfg, text);
  PipelineResult res;
  if (cfg.mode == Mode::lattice) {
    const auto n = static_cast<int>(*cfg.L);
    if (static_cast<std::size_t>(n) > cfg.max_lattice) throw ComputationError("block length exceeds budget.max_lattice");
    res = lattice_pipeline(cfg.k_F, n, cfg.alphas, cfg.thresholds());
  } else {
    const auto pc = cfg.pipeline();
    if (!opt.dump_matrix.empty()) {
      if (pc.route == Route::tensor || (pc.route == Route::automatic && separable(*cfg.gamma, *cfg.omega) &&
                                        cfg.gamma->dim() >= 2))
        throw ConfigError("--dump-matrix needs discretization.route = direct");
      const auto op = nystrom(*cfg.gamma, *cfg.omega, *cfg.L, pc.discretization);
      std::ofstream out(opt.dump_matrix, std::ios::binary);
      if (!out) throw ComputationError("cannot write '" + opt.dump_matrix + "'");
      const bool binary = opt.dump_matrix.size() > 4 && opt.dump_matrix.substr(opt.dump_matrix.size() - 4) == ".bin";
      if (binary) write_operator_binary(op, out);
      else write_operator_text(op, out);
    }
    res = entropy_pipeline(*cfg.gamma, *cfg.omega, *cfg.L, cfg.alphas, pc);
  }
  rec["rows"] = rows_json(res.entropies);
  rec["spectrum"] = {{"n", res.spectrum.size()},
                     {"clamp_count", res.spectrum.clamp_count},
                     {"max_violation", res.spectrum.max_violation},
                     {"warning", res.spectrum.warning},
                     {"nyquist_warning", res.nyquist_warning},
                     {"provenance", provenance_json(res.spectrum.source)}};
  note(cfg, "n = " + std::to_string(res.spectrum.size()));
  for (const auto& e : res.entropies) note(cfg, "S_" + e.alpha.to_string() + " = " + num(e.S));
  emit(cfg, rec, res.entropies, cfg.dim());
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

/// Rows generated from the predicted coefficient itself (plus an area term),
/// which the fit must return to rounding accuracy.
std::vector<EntropyResult> synthetic_rows(const RunConfig& cfg, const std::vector<double>& grid,
                                          const std::map<std::string, double>& theory) {
  std::vector<EntropyResult> rows;
  const int d = cfg.dim();
  for (const auto& a : cfg.alphas) {
    const auto it = theory.find(a.to_string());
    if (it == theory.end()) continue;
    for (double L : grid) {
      EntropyResult r;
      r.alpha = a;
      r.L = L;
      const double area = std::pow(L, d - 1);
      r.S = it->second * area * std::log(L) + 0.25 * area;
      rows.push_back(r);
    }
  }
  return rows;
}

int cmd_sweep(const Options& opt) {
  Loaded loaded;
  if (opt.self_test && opt.config_path.empty()) {
    // default synthetic problem: half-filled lattice over the standard window
    loaded.cfg.mode = Mode::lattice;
    loaded.cfg.grid = {{}, 200.0, 2000.0, 10};
    loaded.cfg.alphas = {RenyiOrder(0.5), RenyiOrder::one(), RenyiOrder(2.0)};
    if (!opt.out.empty()) loaded.cfg.output_json = opt.out;
    if (!opt.csv.empty()) loaded.cfg.output_csv = opt.csv;
    validate_config(loaded.cfg);
  } else {
    loaded = load(opt, Command::sweep, true);
  }
  auto& cfg = loaded.cfg;
  const auto grid = cfg.grid_points();
  json rec = new_record(Command::sweep, cfg, loaded.text);
  rec["self_test"] = opt.self_test;

  const auto J = geometry_J(cfg, opt.jobs);
  rec["J"] = j_json(J);
  std::map<std::string, double> theory;
  for (const auto& a : cfg.alphas)
    if (a.is_finite()) theory[a.to_string()] = I_h_closed_form(a) * J.value;

  SweepResult result;
  result.dim = cfg.dim();
  result.L_grid = grid;
  result.alphas = cfg.alphas;
  if (opt.self_test) {
    result.rows = synthetic_rows(cfg, grid, theory);
  } else {
    std::optional<PartialStore> store;
    std::map<double, std::vector<EntropyResult>> resumed;
    if (!cfg.output_json.empty()) {
      store.emplace(cfg.output_json + ".partial.jsonl", config_hash(cfg));
      resumed = store->load();
      store->open();
    }
    SweepOptions so;
    so.jobs = opt.jobs;
    for (const auto& [L, rows] : resumed) so.skip.insert(L);
    so.on_point = [&](double L, const PipelineResult& r) {
      if (store) store->append(L, r.entropies);
      note(cfg, "L = " + num(L) + "  n = " + std::to_string(r.spectrum.size()));
    };
    if (cfg.mode == Mode::lattice) {
      result = lattice_sweep(cfg.k_F, grid, cfg.alphas, cfg.max_lattice, cfg.thresholds(), so);
    } else {
      result = sweep(*cfg.gamma, *cfg.omega, cfg.alphas, grid, cfg.pipeline(), so);
    }
    for (auto& [L, rows] : resumed)
      if (std::find(grid.begin(), grid.end(), L) != grid.end())
        result.rows.insert(result.rows.end(), rows.begin(), rows.end());
    sort_rows(result.rows);
    rec["resumed_points"] = resumed.size();
    if (store) store->remove();
  }
  rec["rows"] = rows_json(result.rows);

  json fits = json::array();
  bool self_test_ok = true;
  const double lo = cfg.fit_min.value_or(grid.empty() ? 0.0 : grid.front());
  const double hi = cfg.fit_max.value_or(grid.empty() ? 0.0 : grid.back());
  for (const auto& a : cfg.alphas) {
    const auto [L, S] = result.series(a);
    std::size_t in_window = 0;
    for (double l : L) in_window += l >= lo && l <= hi;
    if (in_window < 4) continue;
    const auto fit = fit_scaling(L, S, result.dim, lo, hi, cfg.fit_weights);
    std::optional<TheoryComparison> cmp;
    if (auto it = theory.find(a.to_string()); it != theory.end()) cmp = compare_theory(fit, it->second);
    json f = fit_json(fit, cmp);
    f["alpha"] = alpha_json(a);
    fits.push_back(f);
    if (cmp) {
      note(cfg, "alpha " + a.to_string() + ": a = " + num(fit.a) + " +- " + num(fit.stderr_a) + ", theory " +
                    num(cmp->theory) + ", rel_dev " + num(cmp->rel_dev));
      if (opt.self_test && !(cmp->rel_dev < 1e-10)) self_test_ok = false;
    }
  }
  rec["fits"] = fits;
  emit(cfg, rec, result.rows, result.dim);
  if (opt.self_test && !self_test_ok) {
    std::cerr << "self-test: fitted coefficient differs from the generating value\n";
    return kExitValidation;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- jcoeff

int cmd_jcoeff(const Options& opt) {
  auto [cfg, text] = load(opt, Command::jcoeff, true);
  const Domain& g = *cfg.gamma;
  const Domain& o = *cfg.omega;
  const int d = g.dim();
  json rec = new_record(Command::jcoeff, cfg, text);
  json methods = json::array();
  std::vector<std::pair<std::string, WidomCoefficient>> found;
  auto add = [&](const std::string& name, const WidomCoefficient& c) {
    found.emplace_back(name, c);
    methods.push_back({{"method", name}, {"value", c.value}, {"error_estimate", c.error_estimate}});
  };
  if (d == 1) {
    add("endpoint_product", widom_J(g, o));
  } else {
    if (g.is<Ball>()) {
      add("sphere_closed_form", {widom_J_sphere(g.as<Ball>().radius, boundary_measure(o), d), JMethod::closed_form, 0.0});
      add("density_form", {widom_J_density_form(g, o), JMethod::closed_form, 0.0});
    } else if (o.is<Ball>()) {
      add("sphere_closed_form", {widom_J_sphere(o.as<Ball>().radius, boundary_measure(g), d), JMethod::closed_form, 0.0});
    }
    if (g.is_polytope() && o.is_polytope()) add("face_pair", {widom_J_face_pair(g, o), JMethod::face_pair_exact, 0.0});
    add("quadrature", widom_J_quadrature(g, o, cfg.resolved_j_resolution(), opt.jobs));
    if (cfg.mc_samples > 0) add("monte_carlo", widom_J_monte_carlo(g, o, cfg.mc_samples, cfg.seed));
  }
  rec["methods"] = methods;

  // Every method against the first (the most exact available).
  json checks = json::array();
  bool ok = true;
  const auto& [ref_name, ref] = found.front();
  for (std::size_t i = 1; i < found.size(); ++i) {
    const auto& [name, c] = found[i];
    double tol = 0.0;
    std::string kind;
    if (c.method == JMethod::monte_carlo) {
      tol = 5.0 * c.error_estimate;
      kind = "abs";
    } else if (c.method == JMethod::quadrature) {
      tol = (g.is_polytope() && o.is_polytope()) ? 1e-6 : 1e-3;
      kind = g.is_polytope() && o.is_polytope() ? "abs" : "rel";
    } else {
      tol = 1e-12;
      kind = "rel";
    }
    const double diff = std::abs(c.value - ref.value);
    const double measured = kind == "rel" ? diff / std::abs(ref.value) : diff;
    const bool pass = measured <= tol;
    ok = ok && pass;
    checks.push_back({{"reference", ref_name},
                      {"method", name},
                      {"deviation", measured},
                      {"kind", kind},
                      {"tolerance", tol},
                      {"passed", pass}});
  }
  rec["checks"] = checks;
  rec["J"] = j_json(ref);
  for (const auto& [name, c] : found) note(cfg, name + ": " + num(c.value));
  emit(cfg, rec, {}, d);
  return ok ? kExitOk : kExitValidation;
}

// ---------------------------------------------------------------- functional

int cmd_functional(const Options& opt) {
  auto [cfg, text] = load(opt, Command::functional, false);
  if (opt.config_path.empty())
    cfg.alphas = {RenyiOrder(0.25), RenyiOrder(0.5), RenyiOrder::one(), RenyiOrder(1.5),
                  RenyiOrder(2.0),  RenyiOrder(4.0), RenyiOrder(10.0)};
  json rec = new_record(Command::functional, cfg, text);
  json rows = json::array();
  json checks = json::array();
  bool ok = true;
  auto check = [&](const std::string& name, double deviation, double tol) {
    const bool pass = deviation <= tol;
    ok = ok && pass;
    checks.push_back({{"name", name}, {"deviation", deviation}, {"tolerance", tol}, {"passed", pass}});
  };
  for (const auto& a : cfg.alphas) {
    const auto v = I_h_numeric(a, cfg.functional_tol, 16);
    json row = {{"alpha", alpha_json(a)},
                {"numeric", v.value},
                {"abs_error_estimate", v.abs_error_estimate},
                {"evaluations", v.evaluations}};
    const double closed = a.is_finite() ? I_h_closed_form(a) : kIhInfinityLimit;
    row[a.is_finite() ? "closed_form" : "limit"] = closed;
    row["deviation"] = std::abs(v.value - closed);
    check("I(h_" + a.to_string() + ")", std::abs(v.value - closed), 1e-8);
    if (a.is_finite()) {
      // the same integral on all of (0, 1), without using the symmetry of h
      const auto g = I_functional([&](double t, double s) { return renyi_h(a, t, s); }, cfg.functional_tol, 16);
      row["unfolded"] = g.value;
      check("unfolded(" + a.to_string() + ")", std::abs(g.value - closed), 1e-8);
    }
    if (a.kind() == RenyiOrder::Kind::finite) {
      const double dl = I_h_via_dilog(a);
      row["dilog_route"] = dl;
      check("dilog_route(" + a.to_string() + ")", std::abs(dl - closed), 1e-8);
    }
    rows.push_back(row);
    note(cfg, "alpha " + a.to_string() + ": I = " + num(v.value) + " vs " + num(closed));
  }
  rec["functional"] = rows;
  check("I(t)", std::abs(I_functional([](double t) { return t; }).value), 1e-14);
  check("I(t(1-t))",
        std::abs(I_functional([](double t) { return t * (1.0 - t); }).value -
                 1.0 / (4.0 * std::numbers::pi * std::numbers::pi)),
        1e-13);
  const double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
  json limit = json::array();
  for (double y : {1e6, 1e7, 1e8}) {
    const double dev = std::abs(shifted_dilog(y) + 0.5 * std::log(y) * std::log(y) + pi2_6);
    limit.push_back({{"y", y}, {"deviation", dev}});
  }
  // the remainder decays like ln(y)/y, which first drops below 1e-5 past y = 1e6
  check("dilog_limit(y=1e7)", limit[1]["deviation"].get<double>(), 1e-5);
  rec["dilog_limit"] = limit;
  rec["checks"] = checks;
  emit(cfg, rec, {}, 1);
  return ok ? kExitOk : kExitValidation;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const Options& opt) {
  Fault fault = Fault::none;
  if (opt.fault == "corrupted-kernel") fault = Fault::corrupted_kernel;
  else if (!opt.fault.empty()) throw ConfigError("unknown fault '" + opt.fault + "'");
  const auto report = run_validation(fault, opt.seed.value_or(1));
  if (opt.verbose) {
    std::fprintf(stderr, "%-32s %-6s %10s  %s\n", "check", "result", "seconds", "detail");
    for (const auto& c : report.checks)
      std::fprintf(stderr, "%-32s %-6s %10.4f  %s\n", c.name.c_str(), c.passed ? "pass" : "FAIL", c.seconds,
                   c.detail.c_str());
  }
  json rec = {{"schema_version", kSchemaVersion}, {"command", "validate"}};
  json checks = json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"seconds", c.seconds}, {"detail", c.detail}});
  rec["checks"] = checks;
  rec["passed"] = report.passed();
  if (!opt.out.empty()) write_text(opt.out, rec.dump(2) + "\n");
  for (const auto& name : report.failed()) std::cerr << "FAILED invariant: " << name << "\n";
  if (!report.passed()) return kExitValidation;
  std::cerr << "all " << report.checks.size() << " invariants hold\n";
  return kExitOk;
}

int report_error(const std::string& command, const Options& opt, const std::string& kind, const std::string& msg,
                 int code) {
  const json err = error_record(command, kind, msg, code);
  std::cerr << err.dump() << "\n";
  if (!opt.out.empty()) {
    std::ofstream out(opt.out);
    if (out) out << err.dump(2) << "\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement entropy of free fermions: spectra, scaling fits and Widom coefficients"};
  app.require_subcommand(1);
  Options opt;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "run configuration file");
    sub->add_option("--out", opt.out, "JSON record path (default: stdout)");
    sub->add_option("--csv", opt.csv, "CSV rows path");
    sub->add_option("--jobs", opt.jobs, "worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--seed", opt.seed, "seed for Monte Carlo oracles");
  };
  auto* entropy = app.add_subcommand("entropy", "S_alpha for one L (or block length n)");
  common(entropy);
  entropy->add_option("--dump-matrix", opt.dump_matrix, "write the Nystrom matrix (.bin: binary, else text)");
  auto* sweep_cmd = app.add_subcommand("sweep", "S_alpha over an L grid, scaling fit and theory comparison");
  common(sweep_cmd);
  sweep_cmd->add_flag("--self-test", opt.self_test, "fit synthetic data generated from the predicted coefficient");
  auto* jcoeff = app.add_subcommand("jcoeff", "J(dGamma, dOmega) by every applicable method");
  common(jcoeff);
  auto* functional = app.add_subcommand("functional", "I(h_alpha) numerically, in closed form and via dilogarithms");
  common(functional);
  auto* validate = app.add_subcommand("validate", "run the invariant suite");
  common(validate);
  validate->add_flag("--verbose,-v", opt.verbose, "per-check timing table");
  validate->add_option("--inject-fault", opt.fault, "deliberately break a component (corrupted-kernel)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "entropy") return cmd_entropy(opt);
    if (command == "sweep") return cmd_sweep(opt);
    if (command == "jcoeff") return cmd_jcoeff(opt);
    if (command == "functional") return cmd_functional(opt);
    return cmd_validate(opt);
  } catch (const ComputationError& e) {
    return report_error(command, opt, "computation", e.what(), kExitComputation);
  } catch (const InvalidArgument& e) {
    return report_error(command, opt, "config", e.what(), kExitConfig);
  } catch (const std::exception& e) {
    return report_error(command, opt, "computation", e.what(), kExitComputation);
  }
}
