#pragma once

#include "glvortex/errors.hpp"
#include "glvortex/model.hpp"
#include "glvortex/solver.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace glv {

struct PotentialEnergy {
  double e_truncated = 0.0;  ///< \int_{B_{r_max}} (n - sum f^2)^2
  double tail_coeff = 0.0;   ///< C in n - sum f^2 ~ C / r^2
  double e_estimate = 0.0;   ///< e_truncated + pi C^2 / r_max^2
};

/// Throws RefusedInput for unconverged profiles.
PotentialEnergy potential_energy(const ProfileSet& profile, const ModelParams& p);

enum class Finiteness { Finite, Infinite, Inconclusive };

std::string to_string(Finiteness f);

struct IAlpha {
  double value_truncated = 0.0;
  Finiteness verdict = Finiteness::Inconclusive;
  /// Log-log slope of |alpha^2 - f_i^2| on [r_max/2, r_max]; empty when the
  /// integrand vanishes identically there.
  std::optional<double> tail_exponent;
};

inline constexpr double kFiniteExponent = -1.5;
inline constexpr double kInfiniteExponent = -0.5;

IAlpha i_alpha(const ProfileSet& profile, int component, double alpha);

/// Gradient energy 2 pi \int_0^R (f_i'^2 + d_i^2 f_i^2 / r^2) r dr per component
/// at each ladder radius.
struct GradientLadder {
  Eigen::VectorXd radii;
  Eigen::MatrixXd per_component;  ///< n x L
  Eigen::VectorXd lambdas;
  /// max_i sqrt(lambda_i) max(d_i, 1); slope windows must start >= 10x this.
  double core_scale = 1.0;

  Eigen::VectorXd total() const { return per_component.colwise().sum().transpose(); }
  Eigen::VectorXd weighted() const {
    return (lambdas.asDiagonal() * per_component).colwise().sum().transpose();
  }
};

GradientLadder gradient_energy_ladder(const ProfileSet& profile, const ModelParams& p,
                                      const Eigen::VectorXd& radii);

/// `count` radii spaced geometrically over [lo, hi].
Eigen::VectorXd geometric_radii(double lo, double hi, int count);

struct GrowthSlope {
  Eigen::VectorXd per_component;
  double total = 0.0;     ///< target 2 pi sum alpha_i^2 d_i^2
  double weighted = 0.0;  ///< target E = 2 pi sum lambda_i alpha_i^2 d_i^2
  int points = 0;
};

/// Least-squares slope of the ladder against ln R over [lo, hi].
/// Refuses windows with fewer than 3 ladder points or starting inside the core.
GrowthSlope log_growth_slope(const GradientLadder& ladder, double lo, double hi);

struct PohozaevResidual {
  /// Res(r) = sum lambda f'^2 + E(r)/(2 pi r^2) - sum lambda d^2 f^2 / r^2
  ///          - (n - sum f^2)^2 / 2 at every node (zero on the axis).
  Eigen::VectorXd residual;
  double max_abs = 0.0;
  Eigen::Index argmax = 0;
  int core_nodes = 5;
};

PohozaevResidual pohozaev_residual(const ProfileSet& profile, const ModelParams& p,
                                   int core_nodes = 5);

struct EnergyOptions {
  Eigen::VectorXd ladder;  ///< empty: 16 geometric radii over [r_max/5, r_max]
  double slope_lo = 0.0;   ///< 0: first ladder radius
  double slope_hi = 0.0;   ///< 0: last ladder radius
  int core_nodes = 5;
};

struct EnergyReport {
  PotentialEnergy potential;
  std::vector<IAlpha> i_alpha;
  GradientLadder ladder;
  std::optional<GrowthSlope> slope;
  double h_infinity = 0.0;  ///< sum alpha_j^2 / lambda_j
  double pohozaev_max_residual = 0.0;
  double quantized_target = 0.0;
  double rel_error = 0.0;
  Eigen::VectorXd lambda_d2;  ///< lambda_i d_i^2, a far-field matching diagnostic
  /// E(r) at the ladder radii.
  Eigen::VectorXd energy_at_ladder;
};

EnergyReport energy_report(const ProfileSet& profile, const ModelParams& p,
                           const EnergyOptions& options = {});

}  // namespace glv
