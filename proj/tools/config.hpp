#pragma once

#include "glvortex/grid.hpp"
#include "glvortex/model.hpp"
#include "glvortex/solver.hpp"

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace glv::cli {

enum class Command { Solve, Verify, Sweep, Classify, Probe };

std::string to_string(Command c);
std::optional<Command> parse_command(const std::string& name);

/// Carries a "<file>:<line>: ..." message.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Numerics {
  int intervals = 2000;
  GridMapping mapping = GridMapping::algebraic();
  double tol = 1e-10;
  int max_iter = 50;
  std::vector<double> ramp_radii;  ///< radius continuation; last entry is r_max
  int homotopy_steps = 0;          ///< homotopy continuation at r_max
};

struct Outputs {
  std::string report = "report.json";
  std::string profile = "profile.csv";
  std::string energy = "energy.csv";
  std::string summary = "summary.csv";
  std::string sweep = "sweep.csv";
  std::string classification = "classification.json";
  std::string probe = "probe.json";
  std::vector<double> ladder;  ///< empty: 16 geometric radii over [r_max/5, r_max]
};

struct Checks {
  double rel_error_max = 0.02;
  double modulus_slack = 1e-8;
  double alpha_sum_tol = 5e-3;
};

struct SweepAxis {
  std::string param;  ///< lambdas | degrees | alphas | r_max
  int component = 0;  ///< 0-based; ignored for r_max
  std::vector<double> values;

  std::string label() const;
};

struct ClassifyInput {
  std::vector<std::string> flags;
  std::vector<double> alpha_hat;
};

struct ProbeSpec {
  std::string kind = "thm11";          ///< thm11 | thm12
  std::string profile = "solve";       ///< thm12: solve | fake_pair
  std::optional<std::string> expect;   ///< thm12 verdict that counts as passing
};

struct RunConfig {
  std::string source;
  std::optional<Command> command;
  ModelParams params;
  Numerics numerics;
  Outputs outputs;
  Checks checks;
  std::vector<SweepAxis> sweep;
  std::optional<ClassifyInput> classify;
  ProbeSpec probe;

  RadialGrid grid() const;
  SolverOptions solver_options() const;
  /// Empty when no continuation is configured.
  std::optional<ContinuationSchedule> schedule() const;
};

/// Parses JSON text. Unknown keys, type errors and invalid model parameters
/// raise ConfigError naming `source` and the offending line.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");

RunConfig load_config(const std::string& path);

/// Params with one sweep axis value substituted.
ModelParams apply_axis(ModelParams p, const SweepAxis& axis, double value);

}  // namespace glv::cli
