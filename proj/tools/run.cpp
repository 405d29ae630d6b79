#include "run.hpp"

#include "glvortex/classify.hpp"
#include "glvortex/energy.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace glv::cli {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kSchema = "glvortex.report/1";

Json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

template <typename Vec>
Json nums(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(num(static_cast<double>(v[k])));
  return out;
}

Json nums(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

std::string cell(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

class Writer {
 public:
  Writer(const RunOptions& options) : dir_(options.out_dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_))
      throw IoError(fmt::format("{}: cannot create output directory", dir_.string()));
  }

  void text(const std::string& name, const std::string& content) const {
    const fs::path path = dir_ / name;
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError(fmt::format("{}: cannot open for writing", path.string()));
    file << content;
    file.close();
    if (!file) throw IoError(fmt::format("{}: write failed", path.string()));
  }

  void json(const std::string& name, const Json& doc) const { text(name, doc.dump(2) + "\n"); }

 private:
  fs::path dir_;
};

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double limit = 0.0;
};

Json checks_json(const std::vector<Check>& checks) {
  Json out = Json::array();
  for (const auto& c : checks)
    out.push_back({{"name", c.name}, {"passed", c.passed}, {"value", num(c.value)}, {"limit", num(c.limit)}});
  return out;
}

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

Json params_json(const ModelParams& p) {
  Json degrees = Json::array();
  for (int i = 0; i < p.n; ++i) degrees.push_back(p.degrees[i]);
  return {{"n", p.n},
          {"lambdas", nums(p.lambdas)},
          {"degrees", degrees},
          {"alphas", nums(p.alphas)},
          {"r_max", num(p.r_max)}};
}

Json numerics_json(const Numerics& num_cfg) {
  Json out = {{"intervals", num_cfg.intervals},
              {"mapping", num_cfg.mapping.kind == GridMapping::Kind::Uniform ? "uniform" : "algebraic"},
              {"exponent", num(num_cfg.mapping.exponent)},
              {"tol", num(num_cfg.tol)},
              {"max_iter", num_cfg.max_iter}};
  if (!num_cfg.ramp_radii.empty()) out["continuation"] = {{"radii", nums(num_cfg.ramp_radii)}};
  if (num_cfg.homotopy_steps > 0) out["continuation"] = {{"homotopy_steps", num_cfg.homotopy_steps}};
  return out;
}

Json solve_json(const SolveReport& r) {
  Json stages = Json::array();
  for (const auto& s : r.stages)
    stages.push_back({{"r_max", num(s.r_max)},
                      {"intervals", s.intervals},
                      {"homotopy", num(s.homotopy)},
                      {"converged", s.converged},
                      {"iterations", s.iterations},
                      {"residual_norm", num(s.residual_norm)},
                      {"failure_kind", to_string(s.failure_kind)}});
  return {{"converged", r.converged},
          {"iterations", r.iterations},
          {"residual_norm", num(r.residual_norm)},
          {"damping_history", nums(r.damping_history)},
          {"failure_kind", to_string(r.failure_kind)},
          {"failed_stage", r.failed_stage},
          {"stages", stages},
          {"max_modulus_sum", num(r.max_modulus_sum)},
          {"min_value", num(r.min_value)}};
}

Json energy_json(const EnergyReport& e) {
  Json ia = Json::array();
  for (const auto& v : e.i_alpha)
    ia.push_back({{"value_truncated", num(v.value_truncated)},
                  {"verdict", to_string(v.verdict)},
                  {"tail_exponent", v.tail_exponent ? num(*v.tail_exponent) : Json()}});
  Json slope;
  if (e.slope)
    slope = {{"per_component", nums(e.slope->per_component)},
             {"total", num(e.slope->total)},
             {"weighted", num(e.slope->weighted)},
             {"points", e.slope->points}};
  return {{"e_truncated", num(e.potential.e_truncated)},
          {"tail_coeff", num(e.potential.tail_coeff)},
          {"e_estimate", num(e.potential.e_estimate)},
          {"quantized_target", num(e.quantized_target)},
          {"rel_error", num(e.rel_error)},
          {"pohozaev_max_residual", num(e.pohozaev_max_residual)},
          {"h_infinity", num(e.h_infinity)},
          {"lambda_d2", nums(e.lambda_d2)},
          {"i_alpha", ia},
          {"log_growth_slope", slope}};
}

Json head(Command command, const RunConfig& cfg) {
  return {{"schema", kSchema},
          {"command", to_string(command)},
          {"params", params_json(cfg.params)},
          {"numerics", numerics_json(cfg.numerics)}};
}

std::string profile_csv(const ProfileSet& profile, double n) {
  std::string out = "r";
  for (int i = 1; i <= profile.n(); ++i) out += fmt::format(",f_{}", i);
  for (int i = 1; i <= profile.n(); ++i) out += fmt::format(",f_{}'", i);
  out += ",n-sum_f2\n";
  const Eigen::VectorXd sum = profile.modulus_sum();
  for (Eigen::Index k = 0; k < profile.grid.size(); ++k) {
    out += cell(profile.grid[k]);
    for (int i = 0; i < profile.n(); ++i) out += "," + cell(profile.values(i, k));
    for (int i = 0; i < profile.n(); ++i) out += "," + cell(profile.derivs(i, k));
    out += "," + cell(n - sum[k]) + "\n";
  }
  return out;
}

std::string energy_csv(const EnergyReport& e) {
  std::string out = "R,grad_energy_total,grad_energy_weighted,E(R)\n";
  const Eigen::VectorXd total = e.ladder.total();
  const Eigen::VectorXd weighted = e.ladder.weighted();
  for (Eigen::Index l = 0; l < e.ladder.radii.size(); ++l)
    out += fmt::format("{},{},{},{}\n", cell(e.ladder.radii[l]), cell(total[l]), cell(weighted[l]),
                       cell(e.energy_at_ladder[l]));
  return out;
}

std::string summary_header(int n) {
  std::string out =
      "e_truncated,tail_coeff,e_estimate,quantized_target,rel_error,pohozaev_max_residual,"
      "slope_total,slope_weighted";
  for (int i = 1; i <= n; ++i) out += fmt::format(",alpha_hat_{}", i);
  for (int i = 1; i <= n; ++i) out += fmt::format(",lambda_d2_{}", i);
  return out;
}

std::string summary_cells(const EnergyReport& e, const Eigen::VectorXd& alpha_hat) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::string out = fmt::format(
      "{},{},{},{},{},{},{},{}", cell(e.potential.e_truncated), cell(e.potential.tail_coeff),
      cell(e.potential.e_estimate), cell(e.quantized_target), cell(e.rel_error),
      cell(e.pohozaev_max_residual), cell(e.slope ? e.slope->total : nan),
      cell(e.slope ? e.slope->weighted : nan));
  for (Eigen::Index i = 0; i < alpha_hat.size(); ++i) out += "," + cell(alpha_hat[i]);
  for (Eigen::Index i = 0; i < e.lambda_d2.size(); ++i) out += "," + cell(e.lambda_d2[i]);
  return out;
}

SolveResult solve(const ModelParams& p, const RunConfig& cfg) {
  if (auto schedule = cfg.schedule()) {
    // Sweeps over r_max keep the ramp proportions.
    const double scale = p.r_max / schedule->stages.back().r_max;
    for (auto& stage : schedule->stages) stage.r_max *= scale;
    schedule->stages.back().r_max = p.r_max;
    return continuation_solve(p, *schedule);
  }
  const RadialGrid grid = make_grid(p.r_max, cfg.numerics.intervals, cfg.numerics.mapping);
  return newton_solve(p, grid, initial_guess(p, grid), cfg.solver_options());
}

std::vector<Check> solution_checks(const SolveResult& s, const ModelParams& p, const Checks& limits,
                                   const AlphaEstimate& alpha) {
  return {{"maximum_principle", s.report.max_modulus_sum <= p.n + limits.modulus_slack,
           s.report.max_modulus_sum, p.n + limits.modulus_slack},
          {"far_field_fit", std::abs(alpha.deviation) <= limits.alpha_sum_tol, std::abs(alpha.deviation),
           limits.alpha_sum_tol}};
}

EnergyOptions energy_options(const RunConfig& cfg) {
  EnergyOptions options;
  if (!cfg.outputs.ladder.empty())
    options.ladder = Eigen::Map<const Eigen::VectorXd>(cfg.outputs.ladder.data(),
                                                       static_cast<Eigen::Index>(cfg.outputs.ladder.size()));
  return options;
}

void say(const RunOptions& options, const std::string& line) {
  if (!options.quiet) fmt::print("{}\n", line);
}

std::string solve_line(const SolveReport& r) {
  if (r.converged)
    return fmt::format("converged in {} iterations, residual {:.3e}", r.iterations, r.residual_norm);
  return fmt::format("not converged: {} after {} iterations, residual {:.3e}", to_string(r.failure_kind),
                     r.iterations, r.residual_norm);
}

int run_solve(Command command, const RunConfig& cfg, const RunOptions& options) {
  const Writer out(options);
  Json report = head(command, cfg);
  const SolveResult s = solve(cfg.params, cfg);
  report["solve"] = solve_json(s.report);
  say(options, to_string(command) + ": " + solve_line(s.report));
  if (!s.report.converged) {
    report["status"] = static_cast<int>(kNonconvergence);
    out.json(cfg.outputs.report, report);
    return kNonconvergence;
  }
  out.text(cfg.outputs.profile, profile_csv(s.profile, cfg.params.n));
  report["profile_file"] = cfg.outputs.profile;

  const AlphaEstimate alpha = estimate_alpha(s.profile);
  report["alpha_hat"] = nums(alpha.alpha_hat);
  std::vector<Check> checks = solution_checks(s, cfg.params, cfg.checks, alpha);

  if (command == Command::Verify) {
    const EnergyReport e = energy_report(s.profile, cfg.params, energy_options(cfg));
    report["energy"] = energy_json(e);
    checks.push_back({"quantization", e.rel_error <= cfg.checks.rel_error_max, e.rel_error,
                      cfg.checks.rel_error_max});
    out.text(cfg.outputs.energy, energy_csv(e));
    out.text(cfg.outputs.summary, summary_header(cfg.params.n) + "\n" + summary_cells(e, alpha.alpha_hat) + "\n");
    report["energy_file"] = cfg.outputs.energy;
    report["summary_file"] = cfg.outputs.summary;
    say(options, fmt::format("verify: e_estimate {:.10g} vs {:.10g}, rel_error {:.3e}",
                             e.potential.e_estimate, e.quantized_target, e.rel_error));
  }
  const int status = all_passed(checks) ? kOk : kChecksFailed;
  report["checks"] = checks_json(checks);
  report["status"] = status;
  out.json(cfg.outputs.report, report);
  for (const auto& c : checks)
    if (!c.passed) say(options, fmt::format("check failed: {} = {:.6g} (limit {:.6g})", c.name, c.value, c.limit));
  return status;
}

struct SweepRow {
  std::vector<double> values;
  int status = kOk;
  std::string message;
  std::optional<SolveReport> solve;
  std::optional<EnergyReport> energy;
  Eigen::VectorXd alpha_hat;
  std::vector<Check> checks;
};

SweepRow sweep_one(const RunConfig& cfg, const std::vector<double>& values) {
  SweepRow row;
  row.values = values;
  ModelParams p = cfg.params;
  for (std::size_t a = 0; a < cfg.sweep.size(); ++a) p = apply_axis(p, cfg.sweep[a], values[a]);
  const auto valid = validate_params(p);
  if (!valid.ok()) {
    row.status = kInvalid;
    row.message = valid.summary();
    return row;
  }
  const SolveResult s = solve(p, cfg);
  row.solve = s.report;
  if (!s.report.converged) {
    row.status = kNonconvergence;
    row.message = to_string(s.report.failure_kind);
    return row;
  }
  EnergyOptions eo = energy_options(cfg);
  if (eo.ladder.size() > 0 && eo.ladder[eo.ladder.size() - 1] > p.r_max) eo.ladder.resize(0);
  row.energy = energy_report(s.profile, p, eo);
  const AlphaEstimate alpha = estimate_alpha(s.profile);
  row.alpha_hat = alpha.alpha_hat;
  row.checks = solution_checks(s, p, cfg.checks, alpha);
  row.checks.push_back({"quantization", row.energy->rel_error <= cfg.checks.rel_error_max,
                        row.energy->rel_error, cfg.checks.rel_error_max});
  row.status = all_passed(row.checks) ? kOk : kChecksFailed;
  return row;
}

int worst(int a, int b) {
  const auto rank = [](int s) { return s == kInvalid ? 3 : s == kNonconvergence ? 2 : s == kChecksFailed ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

int run_sweep(const RunConfig& cfg, const RunOptions& options) {
  if (cfg.sweep.empty()) throw ConfigError(fmt::format("{}: sweep command needs a 'sweep' section", cfg.source));
  const Writer out(options);

  std::vector<std::vector<double>> combos{{}};
  for (const auto& axis : cfg.sweep) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : combos)
      for (double v : axis.values) {
        auto c = prefix;
        c.push_back(v);
        next.push_back(std::move(c));
      }
    combos = std::move(next);
  }

  std::vector<SweepRow> rows(combos.size());
  std::atomic<std::size_t> cursor{0};
  const auto worker = [&] {
    for (std::size_t k = cursor++; k < combos.size(); k = cursor++) rows[k] = sweep_one(cfg, combos[k]);
  };
  const int threads = std::clamp<int>(options.threads, 1, static_cast<int>(combos.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::string csv = "index";
  for (const auto& axis : cfg.sweep) csv += "," + axis.label();
  csv += ",status,converged,iterations,residual_norm,failure_kind,e_truncated,tail_coeff,e_estimate,"
         "quantized_target,rel_error,pohozaev_max_residual,slope_total,slope_weighted\n";
  Json runs = Json::array();
  int status = kOk;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& row = rows[k];
    status = worst(status, row.status);
    csv += std::to_string(k);
    for (double v : row.values) csv += "," + cell(v);
    const bool solved = row.solve.has_value();
    const EnergyReport* e = row.energy ? &*row.energy : nullptr;
    csv += fmt::format(",{},{},{},{},{}", row.status, solved && row.solve->converged ? 1 : 0,
                       solved ? row.solve->iterations : 0, cell(solved ? row.solve->residual_norm : nan),
                       solved ? to_string(row.solve->failure_kind) : "invalid");
    csv += fmt::format(",{},{},{},{},{},{},{},{}\n", cell(e ? e->potential.e_truncated : nan),
                       cell(e ? e->potential.tail_coeff : nan), cell(e ? e->potential.e_estimate : nan),
                       cell(e ? e->quantized_target : nan), cell(e ? e->rel_error : nan),
                       cell(e ? e->pohozaev_max_residual : nan),
                       cell(e && e->slope ? e->slope->total : nan),
                       cell(e && e->slope ? e->slope->weighted : nan));

    Json run = {{"index", k}, {"values", nums(row.values)}, {"status", row.status}};
    if (!row.message.empty()) run["message"] = row.message;
    if (solved) run["solve"] = solve_json(*row.solve);
    if (e) {
      run["energy"] = energy_json(*e);
      run["alpha_hat"] = nums(row.alpha_hat);
      run["checks"] = checks_json(row.checks);
    }
    runs.push_back(std::move(run));
  }
  Json axes = Json::array();
  for (const auto& axis : cfg.sweep) axes.push_back({{"param", axis.label()}, {"values", nums(axis.values)}});

  Json report = head(Command::Sweep, cfg);
  report["sweep"] = {{"axes", axes}, {"runs", runs}};
  report["sweep_file"] = cfg.outputs.sweep;
  report["status"] = status;
  out.text(cfg.outputs.sweep, csv);
  out.json(cfg.outputs.report, report);
  say(options, fmt::format("sweep: {} runs, status {}", rows.size(), status));
  return status;
}

Finiteness parse_flag(const std::string& s) {
  if (s == "finite") return Finiteness::Finite;
  if (s == "infinite") return Finiteness::Infinite;
  return Finiteness::Inconclusive;
}

Json classification_json(const ClassificationReport& c) {
  Json flags = Json::array();
  for (auto f : c.flags) flags.push_back(to_string(f));
  return {{"label", to_string(c.label)},
          {"k", c.k},
          {"l", c.l},
          {"flags", flags},
          {"alpha_hat", nums(c.alpha_hat)},
          {"diagnostics", c.diagnostics}};
}

int run_classify(const RunConfig& cfg, const RunOptions& options) {
  const Writer out(options);
  Json report = head(Command::Classify, cfg);
  ClassificationReport c;
  if (cfg.classify) {
    std::vector<Finiteness> flags;
    for (const auto& f : cfg.classify->flags) flags.push_back(parse_flag(f));
    c = classify(flags, Eigen::Map<const Eigen::VectorXd>(cfg.classify->alpha_hat.data(),
                                                           static_cast<Eigen::Index>(cfg.classify->alpha_hat.size())));
    report["source"] = "flags";
  } else {
    const SolveResult s = solve(cfg.params, cfg);
    report["source"] = "solve";
    report["solve"] = solve_json(s.report);
    say(options, "classify: " + solve_line(s.report));
    if (!s.report.converged) {
      report["status"] = static_cast<int>(kNonconvergence);
      out.json(cfg.outputs.report, report);
      return kNonconvergence;
    }
    c = classify_profile(s.profile);
  }
  const bool valid = c.label != CaseLabel::InvalidK1 && c.label != CaseLabel::Inconclusive;
  const int status = valid ? kOk : kChecksFailed;
  Json doc = {{"schema", kSchema}, {"classification", classification_json(c)}, {"status", status}};
  report["classification"] = classification_json(c);
  report["classification_file"] = cfg.outputs.classification;
  report["status"] = status;
  out.json(cfg.outputs.classification, doc);
  out.json(cfg.outputs.report, report);
  say(options, fmt::format("classify: {} (k = {}, l = {})", to_string(c.label), c.k, c.l));
  return status;
}

int run_thm11(const RunConfig& cfg, const RunOptions& options, const Writer& out, Json& report) {
  const Thm11Probe probe = thm11_probe(cfg.params, cfg.grid(), cfg.solver_options());
  Json doc = {{"kind", "thm11"},
              {"stage", probe.stage},
              {"passed", probe.passed},
              {"reason", probe.reason},
              {"solve", solve_json(probe.report)}};
  if (probe.constants)
    doc["constants"] = {{"gradient_energy", num(probe.constants->gradient_energy)},
                        {"max_deviation", num(probe.constants->max_deviation)},
                        {"limit", num(1e-8)}};
  if (probe.growth)
    doc["growth"] = {{"slope", num(probe.growth->slope)},
                     {"target", num(probe.growth->target)},
                     {"alpha_hat", nums(probe.growth->alpha_hat)}};
  const int status = !probe.report.converged ? kNonconvergence : probe.passed ? kOk : kChecksFailed;
  doc["status"] = status;
  report["probe"] = doc;
  report["status"] = status;
  out.json(cfg.outputs.probe, doc);
  out.json(cfg.outputs.report, report);
  say(options, fmt::format("probe thm11 [{}]: {} ({})", probe.stage, probe.passed ? "passed" : "failed", probe.reason));
  return status;
}

int run_thm12(const RunConfig& cfg, const RunOptions& options, const Writer& out, Json& report) {
  const ModelParams& p = cfg.params;
  std::optional<ProfileSet> profile;
  if (cfg.probe.profile == "fake_pair") {
    const RadialGrid grid = cfg.grid();
    Eigen::MatrixXd values(p.n, grid.size());
    Json parts = Json::array();
    for (int i = 0; i < p.n; ++i) {
      const SolveResult s = single_gl_solve(p.lambdas[i], p.degrees[i], grid, cfg.solver_options());
      parts.push_back(solve_json(s.report));
      if (!s.report.converged) {
        report["fake_pair"] = parts;
        report["status"] = static_cast<int>(kNonconvergence);
        out.json(cfg.outputs.report, report);
        say(options, fmt::format("probe thm12: component {} single solve failed", i + 1));
        return kNonconvergence;
      }
      values.row(i) = p.alphas[i] * s.profile.values.row(0);
    }
    report["fake_pair"] = parts;
    profile = make_profile(grid, std::move(values), p.degrees, Provenance::Supplied);
  } else {
    SolveResult s = solve(p, cfg);
    report["solve"] = solve_json(s.report);
    say(options, "probe thm12: " + solve_line(s.report));
    if (!s.report.converged) {
      report["status"] = static_cast<int>(kNonconvergence);
      out.json(cfg.outputs.report, report);
      return kNonconvergence;
    }
    profile = std::move(s.profile);
  }
  out.text(cfg.outputs.profile, profile_csv(*profile, p.n));
  report["profile_file"] = cfg.outputs.profile;

  const Thm12Probe probe = thm12_probe(*profile, p);
  Json doc = {{"kind", "thm12"},
              {"profile", cfg.probe.profile},
              {"verdict", to_string(probe.verdict)},
              {"reason", probe.reason},
              {"i", probe.i + 1},
              {"j", probe.j + 1},
              {"c0", num(probe.c0)},
              {"c0_stderr", num(probe.c0_stderr)},
              {"c1", num(probe.c1)},
              {"measured_c0", num(probe.measured_c0)},
              {"identity_defect", num(probe.identity_defect)}};
  if (p.n >= 2)
    doc["wronskian_max_residual"] = num(wronskian_identity_check(*profile, p, probe.i, probe.j).max_residual);
  int status = kOk;
  if (cfg.probe.expect) {
    doc["expect"] = *cfg.probe.expect;
    if (*cfg.probe.expect != to_string(probe.verdict)) status = kChecksFailed;
  }
  doc["status"] = status;
  report["probe"] = doc;
  report["status"] = status;
  out.json(cfg.outputs.probe, doc);
  out.json(cfg.outputs.report, report);
  say(options, fmt::format("probe thm12: {} ({})", to_string(probe.verdict), probe.reason));
  return status;
}

int run_probe(const RunConfig& cfg, const RunOptions& options) {
  const Writer out(options);
  Json report = head(Command::Probe, cfg);
  if (cfg.probe.kind == "thm11") return run_thm11(cfg, options, out, report);
  return run_thm12(cfg, options, out, report);
}

}  // namespace

int run(Command command, const RunConfig& config, const RunOptions& options) {
  switch (command) {
    case Command::Solve:
    case Command::Verify: return run_solve(command, config, options);
    case Command::Sweep: return run_sweep(config, options);
    case Command::Classify: return run_classify(config, options);
    case Command::Probe: return run_probe(config, options);
  }
  return kInvalid;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"n-component Ginzburg-Landau radial vortex solver and verifier", "glvortex"};
  std::string command_name;
  std::string config_path;
  RunOptions options;
  app.add_option("command", command_name, "solve | verify | sweep | classify | probe")
      ->required()
      ->check(CLI::IsMember({"solve", "verify", "sweep", "classify", "probe"}));
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", options.out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", options.threads, "worker threads for sweep")
      ->capture_default_str()
      ->check(CLI::Range(1, 1024));
  app.add_flag("--quiet", options.quiet, "no progress lines on stdout");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  const Command command = *parse_command(command_name);
  try {
    const RunConfig config = load_config(config_path);
    if (config.command && *config.command != command)
      throw ConfigError(fmt::format("{}: config is for '{}', not '{}'", config_path,
                                    to_string(*config.command), command_name));
    return run(command, config, options);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
  } catch (const IoError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
  } catch (const RefusedInput& e) {
    fmt::print(stderr, "refused: {}\n", e.what());
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
  }
  return kInvalid;
}

}  // namespace glv::cli
