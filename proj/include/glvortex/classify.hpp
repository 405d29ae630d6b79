#pragma once

#include "glvortex/energy.hpp"
#include "glvortex/errors.hpp"
#include "glvortex/solver.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace glv {

struct AlphaEstimate {
  Eigen::VectorXd alpha_hat;
  double sum_sq = 0.0;
  double deviation = 0.0;  ///< sum_sq - n
};

/// alpha_hat_i: intercept of the affine fit of f_i against 1/r^2 on
/// [r_max/2, r_max]. Refuses unconverged profiles.
AlphaEstimate estimate_alpha(const ProfileSet& profile);

enum class CaseLabel { P1, P2, P3, P4, InvalidK1, Inconclusive };

std::string to_string(CaseLabel label);

inline constexpr double kZeroAmplitude = 1e-6;

struct ClassificationReport {
  Eigen::VectorXd alpha_hat;
  std::vector<Finiteness> flags;
  CaseLabel label = CaseLabel::Inconclusive;
  int l = 0;  ///< positive amplitudes (P1/P2) or finite components (P3)
  int k = 0;  ///< components with I = infinity
  std::vector<std::string> diagnostics;
};

/// Assigns the finiteness pattern of {I_{alpha_j}} to one of the cases
/// P1-P4. A pattern with exactly one infinite component cannot come from a
/// finite-energy solution and is labelled InvalidK1.
ClassificationReport classify(const std::vector<Finiteness>& flags,
                              const Eigen::VectorXd& alpha_hat);

/// Convenience: estimates alpha_hat, computes I_{alpha_hat_i} verdicts and classifies.
ClassificationReport classify_profile(const ProfileSet& profile);

struct WronskianCheck {
  /// (1/r)(r W)' - [(d_i^2 - d_j^2)/r^2 + (1/lambda_j - 1/lambda_i)(n - sum f^2)] f_i f_j
  /// with W = f_i' f_j - f_i f_j'; zero on excluded nodes.
  Eigen::VectorXd residual;
  double max_residual = 0.0;
};

WronskianCheck wronskian_identity_check(const ProfileSet& profile, const ModelParams& p, int i,
                                        int j, int core_nodes = 5);

struct Thm12Probe {
  enum class Verdict { ContradictionDetected, NoObstruction, Refused };
  Verdict verdict = Verdict::Refused;
  std::string reason;
  int i = 0;
  int j = 1;
  /// Fit of the Wronskian r W(r) ~ c0 ln r + c1 forced by the equal-lambda
  /// system, r W(r) = R0 W(R0) + (d_i^2 - d_j^2) \int_{R0}^r f_i f_j / s ds.
  double c0 = 0.0;
  double c0_stderr = 0.0;
  double c1 = 0.0;
  /// Same fit applied to r W measured directly from the profile.
  double measured_c0 = 0.0;
  /// max |measured - forced| on the tail; small only for true solutions.
  double identity_defect = 0.0;
};

std::string to_string(Thm12Probe::Verdict v);

/// Equal diffusion constants with distinct degrees: tests whether the
/// profile's tail forces logarithmic Wronskian growth, which is
/// incompatible with f_i -> alpha_i > 0.
Thm12Probe thm12_probe(const ProfileSet& profile, const ModelParams& p);

struct ConstantsCheck {
  SolveReport report;
  bool passed = false;
  double gradient_energy = 0.0;
  double max_deviation = 0.0;  ///< max |f_i - alpha_i|
};

/// All-zero degrees: a 10% smooth perturbation of the constants must relax
/// back to them with vanishing gradient energy.
ConstantsCheck constants_check(const ModelParams& p, const RadialGrid& grid,
                               const SolverOptions& options = {});

struct GrowthCheck {
  bool passed = false;
  double slope = 0.0;   ///< unweighted log-growth slope of the gradient energy
  double target = 0.0;  ///< 2 pi sum alpha_hat_i^2 d_i^2
  Eigen::VectorXd alpha_hat;
};

/// Some d_i >= 1: the gradient energy must grow at least like
/// 0.9 * target * ln R over [max(r_max/5, 10 core scales), r_max].
GrowthCheck growth_check(const ProfileSet& profile, const ModelParams& p);

struct Thm11Probe {
  std::optional<ConstantsCheck> constants;
  std::optional<GrowthCheck> growth;
  SolveReport report;
  bool passed = false;
  std::string stage;  ///< "constants-solve" or "vortex-solve"
  std::string reason;
};

Thm11Probe thm11_probe(const ModelParams& p, const RadialGrid& grid,
                       const SolverOptions& options = {});

}  // namespace glv
