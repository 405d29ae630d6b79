#include "config.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace glv::cli {
namespace {

using nlohmann::json;

class Reader {
 public:
  Reader(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ConfigError(fmt::format("{}:{}: {}", source_, line_of(key), message));
  }

  [[noreturn]] void fail_at_byte(std::size_t byte, const std::string& message) const {
    const std::size_t end = std::min(byte, text_.size());
    const auto line = 1 + std::count(text_.begin(), text_.begin() + static_cast<long>(end), '\n');
    throw ConfigError(fmt::format("{}:{}: {}", source_, line, message));
  }

  void only(const json& obj, const std::string& where, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(where, fmt::format("'{}' must be an object", where));
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
        fail(key, fmt::format("unknown key '{}' in {}", key, where));
    }
  }

  double number(const json& obj, const char* key) const {
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(key, fmt::format("'{}' must be a number", key));
    return v.get<double>();
  }

  int integer(const json& obj, const char* key) const {
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) fail(key, fmt::format("'{}' must be an integer", key));
    return v.get<int>();
  }

  std::string string(const json& obj, const char* key) const {
    const auto& v = obj.at(key);
    if (!v.is_string()) fail(key, fmt::format("'{}' must be a string", key));
    return v.get<std::string>();
  }

  std::vector<double> numbers(const json& obj, const char* key) const {
    const auto& v = obj.at(key);
    if (!v.is_array()) fail(key, fmt::format("'{}' must be an array of numbers", key));
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(key, fmt::format("'{}' must be an array of numbers", key));
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<int> integers(const json& obj, const char* key) const {
    const auto& v = obj.at(key);
    if (!v.is_array()) fail(key, fmt::format("'{}' must be an array of integers", key));
    std::vector<int> out;
    for (const auto& e : v) {
      if (!e.is_number_integer()) fail(key, fmt::format("'{}' must be an array of integers", key));
      out.push_back(e.get<int>());
    }
    return out;
  }

  std::size_t line_of(const std::string& key) const {
    const std::string quoted = "\"" + key + "\"";
    std::size_t pos = text_.find(quoted);
    while (pos != std::string::npos) {
      std::size_t after = pos + quoted.size();
      while (after < text_.size() && std::isspace(static_cast<unsigned char>(text_[after]))) ++after;
      if (after < text_.size() && text_[after] == ':') break;
      pos = text_.find(quoted, pos + 1);
    }
    if (pos == std::string::npos) return 1;
    return 1 + std::count(text_.begin(), text_.begin() + static_cast<long>(pos), '\n');
  }

 private:
  const std::string& text_;
  std::string source_;
};

void read_params(const Reader& in, const json& obj, RunConfig& cfg) {
  in.only(obj, "params", {"n", "lambdas", "degrees", "alphas", "r_max"});
  for (const char* key : {"lambdas", "degrees", "alphas"})
    if (!obj.contains(key)) in.fail("params", fmt::format("params: missing '{}'", key));
  const auto lambdas = in.numbers(obj, "lambdas");
  const auto degrees = in.integers(obj, "degrees");
  const auto alphas = in.numbers(obj, "alphas");
  const double r_max = obj.contains("r_max") ? in.number(obj, "r_max") : 100.0;
  cfg.params = make_params(lambdas, degrees, alphas, r_max);
  if (obj.contains("n")) {
    const int n = in.integer(obj, "n");
    if (n != static_cast<int>(lambdas.size()))
      in.fail("n", fmt::format("params: n = {} but lambdas has {} entries", n, lambdas.size()));
  }
  const auto check = validate_params(cfg.params);
  if (!check.ok()) {
    const auto& first = check.violations.front();
    in.fail(first.field, "params: " + check.summary());
  }
}

void read_numerics(const Reader& in, const json& obj, RunConfig& cfg) {
  in.only(obj, "numerics",
          {"intervals", "mapping", "exponent", "tol", "max_iter", "continuation"});
  auto& num = cfg.numerics;
  if (obj.contains("intervals")) num.intervals = in.integer(obj, "intervals");
  if (num.intervals < kMinIntervals)
    in.fail("intervals", fmt::format("numerics: intervals = {} < {}", num.intervals, kMinIntervals));
  std::string mapping = "algebraic";
  if (obj.contains("mapping")) mapping = in.string(obj, "mapping");
  if (mapping == "uniform") {
    num.mapping = GridMapping::uniform();
    if (obj.contains("exponent")) in.fail("exponent", "numerics: exponent only applies to the algebraic mapping");
  } else if (mapping == "algebraic") {
    const double q = obj.contains("exponent") ? in.number(obj, "exponent") : 2.0;
    if (!(q >= 1.0 && q <= 4.0)) in.fail("exponent", fmt::format("numerics: exponent {} outside [1, 4]", q));
    num.mapping = GridMapping::algebraic(q);
  } else {
    in.fail("mapping", fmt::format("numerics: unknown mapping '{}'", mapping));
  }
  if (obj.contains("tol")) num.tol = in.number(obj, "tol");
  if (!(num.tol > 0.0)) in.fail("tol", "numerics: tol must be positive");
  if (obj.contains("max_iter")) num.max_iter = in.integer(obj, "max_iter");
  if (num.max_iter < 1) in.fail("max_iter", "numerics: max_iter must be >= 1");

  if (!obj.contains("continuation")) return;
  const auto& cont = obj.at("continuation");
  in.only(cont, "continuation", {"radii", "homotopy_steps"});
  if (cont.contains("radii") && cont.contains("homotopy_steps"))
    in.fail("continuation", "continuation: give either radii or homotopy_steps");
  if (cont.contains("radii")) {
    num.ramp_radii = in.numbers(cont, "radii");
    const auto& radii = num.ramp_radii;
    if (radii.empty()) in.fail("radii", "continuation: radii is empty");
    for (std::size_t k = 0; k < radii.size(); ++k)
      if (!(radii[k] > 0.0) || (k > 0 && !(radii[k] > radii[k - 1])))
        in.fail("radii", "continuation: radii must be positive and increasing");
    if (std::abs(radii.back() - cfg.params.r_max) > 1e-12 * cfg.params.r_max)
      in.fail("radii", fmt::format("continuation: last radius {} differs from r_max {}",
                                   radii.back(), cfg.params.r_max));
  }
  if (cont.contains("homotopy_steps")) {
    num.homotopy_steps = in.integer(cont, "homotopy_steps");
    if (num.homotopy_steps < 1) in.fail("homotopy_steps", "continuation: homotopy_steps must be >= 1");
  }
}

void read_outputs(const Reader& in, const json& obj, RunConfig& cfg) {
  in.only(obj, "outputs",
          {"report", "profile", "energy", "summary", "sweep", "classification", "probe", "ladder"});
  auto& out = cfg.outputs;
  const auto name = [&](const char* key, std::string& target) {
    if (!obj.contains(key)) return;
    target = in.string(obj, key);
    if (target.empty()) in.fail(key, fmt::format("outputs: '{}' is empty", key));
  };
  name("report", out.report);
  name("profile", out.profile);
  name("energy", out.energy);
  name("summary", out.summary);
  name("sweep", out.sweep);
  name("classification", out.classification);
  name("probe", out.probe);
  if (obj.contains("ladder")) {
    out.ladder = in.numbers(obj, "ladder");
    for (std::size_t k = 0; k < out.ladder.size(); ++k)
      if (!(out.ladder[k] > 0.0) || out.ladder[k] > cfg.params.r_max ||
          (k > 0 && !(out.ladder[k] > out.ladder[k - 1])))
        in.fail("ladder", "outputs: ladder radii must increase within (0, r_max]");
  }
}

void read_checks(const Reader& in, const json& obj, RunConfig& cfg) {
  in.only(obj, "checks", {"rel_error_max", "modulus_slack", "alpha_sum_tol"});
  const auto positive = [&](const char* key, double& target) {
    if (!obj.contains(key)) return;
    target = in.number(obj, key);
    if (!(target > 0.0)) in.fail(key, fmt::format("checks: '{}' must be positive", key));
  };
  positive("rel_error_max", cfg.checks.rel_error_max);
  positive("modulus_slack", cfg.checks.modulus_slack);
  positive("alpha_sum_tol", cfg.checks.alpha_sum_tol);
}

void read_sweep(const Reader& in, const json& obj, RunConfig& cfg) {
  in.only(obj, "sweep", {"axes"});
  if (!obj.contains("axes") || !obj.at("axes").is_array() || obj.at("axes").empty())
    in.fail("sweep", "sweep: 'axes' must be a non-empty array");
  for (const auto& a : obj.at("axes")) {
    in.only(a, "axes", {"param", "component", "values"});
    SweepAxis axis;
    if (!a.contains("param") || !a.contains("values")) in.fail("axes", "sweep axis needs 'param' and 'values'");
    axis.param = in.string(a, "param");
    axis.values = in.numbers(a, "values");
    if (axis.values.empty()) in.fail("values", "sweep axis has no values");
    if (axis.param == "r_max") {
      if (a.contains("component")) in.fail("component", "sweep: r_max takes no component");
    } else if (axis.param == "lambdas" || axis.param == "degrees" || axis.param == "alphas") {
      const int c = a.contains("component") ? in.integer(a, "component") : 1;
      if (c < 1 || c > cfg.params.n)
        in.fail("component", fmt::format("sweep: component {} outside 1..{}", c, cfg.params.n));
      axis.component = c - 1;
      if (axis.param == "degrees")
        for (double v : axis.values)
          if (v != std::floor(v)) in.fail("values", "sweep: degree values must be integers");
    } else {
      in.fail("param", fmt::format("sweep: unknown param '{}'", axis.param));
    }
    cfg.sweep.push_back(std::move(axis));
  }
}

void read_classify(const Reader& in, const json& obj, RunConfig& cfg) {
  in.only(obj, "classify", {"flags", "alpha_hat"});
  if (!obj.contains("flags") || !obj.contains("alpha_hat"))
    in.fail("classify", "classify: needs 'flags' and 'alpha_hat'");
  ClassifyInput input;
  const auto& flags = obj.at("flags");
  if (!flags.is_array()) in.fail("flags", "classify: 'flags' must be an array of strings");
  for (const auto& f : flags) {
    if (!f.is_string()) in.fail("flags", "classify: 'flags' must be an array of strings");
    const auto s = f.get<std::string>();
    if (s != "finite" && s != "infinite" && s != "inconclusive")
      in.fail("flags", fmt::format("classify: unknown flag '{}'", s));
    input.flags.push_back(s);
  }
  input.alpha_hat = in.numbers(obj, "alpha_hat");
  if (input.alpha_hat.size() != input.flags.size())
    in.fail("alpha_hat", "classify: alpha_hat and flags differ in length");
  cfg.classify = std::move(input);
}

void read_probe(const Reader& in, const json& obj, RunConfig& cfg) {
  in.only(obj, "probe", {"kind", "profile", "expect"});
  auto& probe = cfg.probe;
  if (obj.contains("kind")) probe.kind = in.string(obj, "kind");
  if (probe.kind != "thm11" && probe.kind != "thm12")
    in.fail("kind", fmt::format("probe: unknown kind '{}'", probe.kind));
  if (obj.contains("profile")) probe.profile = in.string(obj, "profile");
  if (probe.profile != "solve" && probe.profile != "fake_pair")
    in.fail("profile", fmt::format("probe: unknown profile source '{}'", probe.profile));
  if (obj.contains("expect")) {
    probe.expect = in.string(obj, "expect");
    if (*probe.expect != "contradiction_detected" && *probe.expect != "no_obstruction" &&
        *probe.expect != "refused")
      in.fail("expect", fmt::format("probe: unknown verdict '{}'", *probe.expect));
  }
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Verify: return "verify";
    case Command::Sweep: return "sweep";
    case Command::Classify: return "classify";
    case Command::Probe: return "probe";
  }
  return "unknown";
}

std::optional<Command> parse_command(const std::string& name) {
  for (auto c : {Command::Solve, Command::Verify, Command::Sweep, Command::Classify, Command::Probe})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

std::string SweepAxis::label() const {
  if (param == "r_max") return param;
  return fmt::format("{}[{}]", param, component + 1);
}

RadialGrid RunConfig::grid() const {
  return make_grid(params.r_max, numerics.intervals, numerics.mapping);
}

SolverOptions RunConfig::solver_options() const {
  SolverOptions options;
  options.tol = numerics.tol;
  options.max_iter = numerics.max_iter;
  return options;
}

std::optional<ContinuationSchedule> RunConfig::schedule() const {
  ContinuationSchedule s;
  if (!numerics.ramp_radii.empty()) {
    for (double r : numerics.ramp_radii) s.stages.push_back({r, numerics.intervals, 1.0});
  } else if (numerics.homotopy_steps > 0) {
    s = ContinuationSchedule::homotopy_ramp(params.r_max, numerics.intervals,
                                            numerics.homotopy_steps, numerics.mapping);
  } else {
    return std::nullopt;
  }
  s.mapping = numerics.mapping;
  s.options = solver_options();
  return s;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  Reader in(text, source);
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    in.fail_at_byte(e.byte == 0 ? 0 : e.byte - 1, "malformed JSON");
  }
  in.only(root, "config",
          {"command", "params", "numerics", "outputs", "checks", "sweep", "classify", "probe"});

  RunConfig cfg;
  cfg.source = source;
  if (root.contains("command")) {
    const auto name = in.string(root, "command");
    cfg.command = parse_command(name);
    if (!cfg.command) in.fail("command", fmt::format("unknown command '{}'", name));
  }
  if (!root.contains("params")) in.fail("params", "missing 'params' section");
  read_params(in, root.at("params"), cfg);
  if (root.contains("numerics")) read_numerics(in, root.at("numerics"), cfg);
  if (root.contains("outputs")) read_outputs(in, root.at("outputs"), cfg);
  if (root.contains("checks")) read_checks(in, root.at("checks"), cfg);
  if (root.contains("sweep")) read_sweep(in, root.at("sweep"), cfg);
  if (root.contains("classify")) read_classify(in, root.at("classify"), cfg);
  if (root.contains("probe")) read_probe(in, root.at("probe"), cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError(fmt::format("{}: cannot open config", path));
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_config(buffer.str(), path);
}

ModelParams apply_axis(ModelParams p, const SweepAxis& axis, double value) {
  if (axis.param == "r_max") {
    p.r_max = value;
  } else if (axis.param == "lambdas") {
    p.lambdas[axis.component] = value;
  } else if (axis.param == "degrees") {
    p.degrees[axis.component] = static_cast<int>(value);
  } else if (axis.param == "alphas") {
    p.alphas[axis.component] = value;
  }
  return p;
}

}  // namespace glv::cli
