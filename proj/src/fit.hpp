#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace glv::detail {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

// Ordinary least squares y ~ intercept + slope * x.
inline LineFit fit_line(const Eigen::Ref<const Eigen::VectorXd>& x,
                        const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Eigen::Index m = x.size();
  if (m < 2 || y.size() != m) throw std::invalid_argument("fit_line: need >= 2 paired samples");
  const double x_mean = x.mean();
  const double y_mean = y.mean();
  const Eigen::VectorXd dx = x.array() - x_mean;
  const Eigen::VectorXd dy = y.array() - y_mean;
  const double sxx = dx.squaredNorm();
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = dx.dot(dy) / sxx;
  fit.intercept = y_mean - fit.slope * x_mean;
  if (m > 2) {
    const double sse = (dy - fit.slope * dx).squaredNorm();
    fit.slope_stderr = std::sqrt(sse / static_cast<double>(m - 2) / sxx);
  }
  return fit;
}

}  // namespace glv::detail
