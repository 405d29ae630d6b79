#include "glvortex/grid.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace glv {
namespace {

// Fornberg's recursion: weights c[j] such that sum_j c[j] f(x[j]) approximates
// the `order`-th derivative of f at x0.
std::vector<double> fd_weights(double x0, std::span<const double> x, int order) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = c[j][order];
  return w;
}

RowSparse build_operator(const Eigen::VectorXd& r, int order) {
  const Eigen::Index size = r.size();
  const Eigen::Index last = size - 1;
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(4 * size));
  auto emit = [&](Eigen::Index row, Eigen::Index first, int count) {
    const auto w = fd_weights(r[row], std::span<const double>(r.data() + first, count), order);
    for (int j = 0; j < count; ++j) entries.emplace_back(row, first + j, w[j]);
  };
  // One-sided second-order end stencils: three points for f', four for f''.
  const int end_points = order == 1 ? 3 : 4;
  emit(0, 0, end_points);
  for (Eigen::Index k = 1; k < last; ++k) emit(k, k - 1, 3);
  emit(last, last - end_points + 1, end_points);

  RowSparse op(size, size);
  op.setFromTriplets(entries.begin(), entries.end());
  op.makeCompressed();
  return op;
}

}  // namespace

RadialGrid::RadialGrid(Eigen::VectorXd nodes, GridMapping mapping)
    : nodes_(std::move(nodes)), mapping_(mapping) {
  d1_ = build_operator(nodes_, 1);
  d2_ = build_operator(nodes_, 2);

  const Eigen::Index last = nodes_.size() - 1;
  weights_.setZero(nodes_.size());
  for (Eigen::Index k = 0; k < last; ++k) {
    const double half = 0.5 * (nodes_[k + 1] - nodes_[k]);
    weights_[k] += half * nodes_[k];
    weights_[k + 1] += half * nodes_[k + 1];
  }
}

RadialGrid make_grid(double r_max, int intervals, GridMapping mapping) {
  if (!(r_max > 0.0) || !std::isfinite(r_max))
    throw std::invalid_argument("make_grid: r_max must be positive");
  if (intervals < kMinIntervals)
    throw std::invalid_argument("make_grid: at least 16 intervals required");
  if (mapping.kind == GridMapping::Kind::Algebraic && !(mapping.exponent >= 1.0))
    throw std::invalid_argument("make_grid: algebraic exponent must be >= 1");

  Eigen::VectorXd nodes(intervals + 1);
  const double q = mapping.kind == GridMapping::Kind::Uniform ? 1.0 : mapping.exponent;
  for (int k = 0; k <= intervals; ++k) {
    const double s = static_cast<double>(k) / intervals;
    nodes[k] = r_max * std::pow(s, q);
  }
  nodes[0] = 0.0;
  nodes[intervals] = r_max;
  return RadialGrid(std::move(nodes), mapping);
}

double quad_r(const RadialGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& g) {
  if (g.size() != grid.size()) throw std::invalid_argument("quad_r: sample count != node count");
  return grid.quad_weights().dot(g);
}

Eigen::VectorXd cumulative_quad_r(const RadialGrid& grid,
                                  const Eigen::Ref<const Eigen::VectorXd>& g) {
  if (g.size() != grid.size())
    throw std::invalid_argument("cumulative_quad_r: sample count != node count");
  const auto& r = grid.nodes();
  Eigen::VectorXd out(r.size());
  out[0] = 0.0;
  for (Eigen::Index k = 0; k + 1 < r.size(); ++k)
    out[k + 1] = out[k] + 0.5 * (r[k + 1] - r[k]) * (g[k] * r[k] + g[k + 1] * r[k + 1]);
  return out;
}

double quad_r_to(const RadialGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& g,
                 double upper) {
  if (g.size() != grid.size()) throw std::invalid_argument("quad_r_to: sample count != node count");
  const auto& r = grid.nodes();
  if (!(upper >= 0.0) || upper > grid.r_max())
    throw std::invalid_argument("quad_r_to: upper limit outside the grid");
  double sum = 0.0;
  Eigen::Index k = 0;
  for (; k + 1 < r.size() && r[k + 1] <= upper; ++k)
    sum += 0.5 * (r[k + 1] - r[k]) * (g[k] * r[k] + g[k + 1] * r[k + 1]);
  if (k + 1 < r.size() && upper > r[k]) {
    const double t = (upper - r[k]) / (r[k + 1] - r[k]);
    const double g_upper = (1.0 - t) * g[k] + t * g[k + 1];
    sum += 0.5 * (upper - r[k]) * (g[k] * r[k] + g_upper * upper);
  }
  return sum;
}

MonotoneCubic::MonotoneCubic(Eigen::VectorXd x, Eigen::VectorXd y)
    : x_(std::move(x)), y_(std::move(y)) {
  const Eigen::Index n = x_.size();
  if (n < 2 || y_.size() != n) throw std::invalid_argument("MonotoneCubic: need >= 2 matching samples");
  Eigen::VectorXd h = x_.tail(n - 1) - x_.head(n - 1);
  if ((h.array() <= 0.0).any()) throw std::invalid_argument("MonotoneCubic: abscissae must increase");
  Eigen::VectorXd delta = (y_.tail(n - 1) - y_.head(n - 1)).cwiseQuotient(h);

  slopes_.setZero(n);
  if (n == 2) {
    slopes_.setConstant(delta[0]);
    return;
  }
  for (Eigen::Index k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    slopes_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3.0 * d0)) return 3.0 * d0;
    return s;
  };
  slopes_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  slopes_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

double MonotoneCubic::operator()(double xq) const {
  const Eigen::Index n = x_.size();
  if (xq <= x_[0]) return y_[0];
  if (xq >= x_[n - 1]) return y_[n - 1];
  const auto it = std::upper_bound(x_.data(), x_.data() + n, xq);
  const Eigen::Index k = (it - x_.data()) - 1;
  const double h = x_[k + 1] - x_[k];
  const double t = (xq - x_[k]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * h * slopes_[k] +
         (-2 * t3 + 3 * t2) * y_[k + 1] + (t3 - t2) * h * slopes_[k + 1];
}

Eigen::VectorXd MonotoneCubic::operator()(const Eigen::Ref<const Eigen::VectorXd>& xq) const {
  Eigen::VectorXd out(xq.size());
  for (Eigen::Index k = 0; k < xq.size(); ++k) out[k] = (*this)(xq[k]);
  return out;
}

std::pair<Eigen::Index, Eigen::Index> node_window(const RadialGrid& grid, double lo,
                                                  double hi) {
  const auto& r = grid.nodes();
  const double* begin = r.data();
  const double* end = r.data() + r.size();
  const Eigen::Index first = std::lower_bound(begin, end, lo) - begin;
  const Eigen::Index last = (std::upper_bound(begin, end, hi) - begin) - 1;
  return {first, last};
}

}  // namespace glv
