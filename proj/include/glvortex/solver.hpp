#pragma once

#include "glvortex/grid.hpp"
#include "glvortex/model.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace glv {

/// Where a profile came from. Energy and classification routines refuse
/// Unconverged profiles; Supplied profiles (closed forms, hand-built pairs)
/// are taken at face value.
enum class Provenance { Solved, Unconverged, Supplied };

/// Radial profiles f_i(r_k), stored component-major (n x (M+1)).
struct ProfileSet {
  RadialGrid grid;
  Eigen::MatrixXd values;
  Eigen::MatrixXd derivs;
  Eigen::VectorXd core_coeffs;
  Eigen::VectorXi degrees;
  Provenance provenance = Provenance::Supplied;

  int n() const { return static_cast<int>(values.rows()); }
  /// sum_j f_j(r_k)^2 at every node.
  Eigen::VectorXd modulus_sum() const { return values.colwise().squaredNorm().transpose(); }
};

/// Wraps sampled values; computes derivative samples and core coefficients.
ProfileSet make_profile(RadialGrid grid, Eigen::MatrixXd values, Eigen::VectorXi degrees,
                        Provenance provenance = Provenance::Supplied);

enum class FailureKind { None, MaxIterations, SingularJacobian, DivergedLineSearch };

std::string to_string(FailureKind kind);

struct StageSummary {
  double r_max = 0.0;
  int intervals = 0;
  double homotopy = 1.0;
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
  FailureKind failure_kind = FailureKind::None;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
  std::vector<double> damping_history;
  FailureKind failure_kind = FailureKind::None;
  /// Continuation only: index of the first failing stage, -1 otherwise.
  int failed_stage = -1;
  std::vector<StageSummary> stages;
  /// max_k sum_j f_j(r_k)^2 of the returned iterate.
  double max_modulus_sum = 0.0;
  /// Smallest f_i(r_k) over r_k > 0; negative values are reported, not fixed.
  double min_value = 0.0;
};

struct SolveResult {
  ProfileSet profile;
  SolveReport report;
};

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 50;
  /// Scales the cross-component part of the potential; 1 is the full system.
  double homotopy = 1.0;
  double min_step = 1e-6;
  double armijo_c = 1e-4;
};

/// f_i = alpha_i (r / sqrt(r^2 + s_i^2))^{d_i}, s_i = sqrt(lambda_i) max(d_i, 1).
ProfileSet initial_guess(const ModelParams& p, const RadialGrid& grid);

/// Discrete residual of the radial system, n x (M+1). Interior columns hold
/// the ODE (multiplied by r^2 where r < 1), column 0 the axis condition and column M the far-field
/// condition f_i(r_max) = alpha_i. `homotopy` t replaces the potential by
/// t (n - sum f^2) + (1 - t)(alpha_i^2 - f_i^2).
Eigen::MatrixXd ode_residual(const ModelParams& p, const ProfileSet& profile,
                             double homotopy = 1.0);

/// Damped Newton with an analytic banded Jacobian and Armijo halving.
SolveResult newton_solve(const ModelParams& p, const RadialGrid& grid, const ProfileSet& guess,
                         const SolverOptions& options = {});

struct ContinuationStage {
  double r_max = 100.0;
  int intervals = 2000;
  double homotopy = 1.0;
};

struct ContinuationSchedule {
  std::vector<ContinuationStage> stages;
  GridMapping mapping = GridMapping::algebraic();
  SolverOptions options;

  /// r_max ramp r_first, 2 r_first, ... up to r_final (inclusive).
  static ContinuationSchedule radius_ramp(double r_first, double r_final, int intervals,
                                          GridMapping mapping = GridMapping::algebraic());
  /// Homotopy from t = 0 to t = 1 in `steps` equal increments at fixed r_max.
  static ContinuationSchedule homotopy_ramp(double r_max, int intervals, int steps,
                                            GridMapping mapping = GridMapping::algebraic());
};

/// Chains newton_solve over the stages, warm-starting each from the
/// previous profile. Stops at the first failing stage.
SolveResult continuation_solve(const ModelParams& p, const ContinuationSchedule& schedule);

/// Moves a profile onto another grid by monotone cubic interpolation;
/// nodes beyond the old r_max take the far-field values `alphas`.
ProfileSet resample(const ProfileSet& profile, const RadialGrid& grid,
                    const Eigen::VectorXd& alphas);

/// The n = 1 problem with alpha = 1.
SolveResult single_gl_solve(double lambda, int degree, const RadialGrid& grid,
                            const SolverOptions& options = {});

/// n identical components f(sqrt(n) r), with f the single-component profile
/// solved on [0, sqrt(n) r_max].
SolveResult scaled_oracle(int n, double lambda, int degree, const RadialGrid& grid,
                          const SolverOptions& options = {});

}  // namespace glv
