#pragma once

#include "glvortex/model.hpp"

#include <Eigen/Dense>

#include <vector>

namespace glv {

struct SamplePlan {
  std::vector<Eigen::Vector2d> points;
  double h = 1e-3;
};

inline constexpr double kMinStep = 1e-5;
inline constexpr double kMaxStep = 1e-1;

/// Throws std::invalid_argument unless h is in [kMinStep, kMaxStep] and every point is finite.
void validate_plan(const SamplePlan& plan);

/// 64 Halton points (bases 2 and 3) scaled to [-3, 3]^2.
SamplePlan default_plan(double h = 1e-3);

/// Halton points restricted to the annulus lo <= |x| <= hi.
SamplePlan annulus_plan(double lo, double hi, int count, double h = 1e-3);

struct Residual2d {
  double max_residual = 0.0;
  Eigen::Vector2d location = Eigen::Vector2d::Zero();
  int component = 0;
};

/// max |-lambda_i Lap u_i - u_i (n - sum |u_j|^2)| with the 5-point stencil.
Residual2d residual_2d(const Field& field, const Eigen::VectorXd& lambdas, const SamplePlan& plan);

}  // namespace glv
