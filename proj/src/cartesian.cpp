#include "glvortex/cartesian.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace glv {
namespace {

double radical_inverse(unsigned index, unsigned base) {
  double value = 0.0;
  double scale = 1.0 / base;
  while (index > 0) {
    value += scale * (index % base);
    index /= base;
    scale /= base;
  }
  return value;
}

Eigen::Vector2d halton(unsigned index) {
  return {6.0 * radical_inverse(index, 2) - 3.0, 6.0 * radical_inverse(index, 3) - 3.0};
}

}  // namespace

void validate_plan(const SamplePlan& plan) {
  if (!(plan.h >= kMinStep && plan.h <= kMaxStep))
    throw std::invalid_argument("SamplePlan: h must lie in [1e-5, 1e-1]");
  for (const auto& pt : plan.points)
    if (!pt.allFinite()) throw std::invalid_argument("SamplePlan: non-finite sample point");
}

SamplePlan default_plan(double h) {
  SamplePlan plan;
  plan.h = h;
  for (unsigned k = 1; k <= 64; ++k) plan.points.push_back(halton(k));
  validate_plan(plan);
  return plan;
}

SamplePlan annulus_plan(double lo, double hi, int count, double h) {
  if (!(lo >= 0.0 && hi > lo && hi <= 3.0) || count < 1)
    throw std::invalid_argument("annulus_plan: need 0 <= lo < hi <= 3 and count >= 1");
  SamplePlan plan;
  plan.h = h;
  for (unsigned k = 1; static_cast<int>(plan.points.size()) < count; ++k) {
    const Eigen::Vector2d pt = halton(k);
    const double r = pt.norm();
    if (r >= lo && r <= hi) plan.points.push_back(pt);
  }
  validate_plan(plan);
  return plan;
}

Residual2d residual_2d(const Field& field, const Eigen::VectorXd& lambdas, const SamplePlan& plan) {
  validate_plan(plan);
  const int n = component_count(field);
  if (lambdas.size() != n) throw std::invalid_argument("residual_2d: lambdas length differs from n");

  // Long double keeps the h^-2 cancellation in the stencil below the truncation error.
  using Real = long double;
  const Real h = plan.h;
  Residual2d out;
  for (const auto& pt : plan.points) {
    const Real x = pt.x();
    const Real y = pt.y();
    const auto centre = eval_field<Real>(field, x, y);
    const auto lap = (eval_field<Real>(field, x + h, y) + eval_field<Real>(field, x - h, y) +
                      eval_field<Real>(field, x, y + h) + eval_field<Real>(field, x, y - h) -
                      Real(4) * centre) /
                     (h * h);
    Real sum = 0;
    for (int j = 0; j < n; ++j) sum += std::norm(centre[j]);
    for (int i = 0; i < n; ++i) {
      const std::complex<Real> r =
          -static_cast<Real>(lambdas[i]) * lap[i] - centre[i] * (Real(n) - sum);
      const double value = static_cast<double>(std::abs(r));
      if (value > out.max_residual) {
        out.max_residual = value;
        out.location = pt;
        out.component = i;
      }
    }
  }
  return out;
}

}  // namespace glv
