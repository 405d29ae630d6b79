#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace glv {

struct GridMapping {
  enum class Kind { Uniform, Algebraic };
  Kind kind = Kind::Algebraic;
  double exponent = 2.0;

  static GridMapping uniform() { return {Kind::Uniform, 1.0}; }
  static GridMapping algebraic(double q = 2.0) { return {Kind::Algebraic, q}; }
};

using RowSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Nodes 0 = r_0 < r_1 < ... < r_M = r_max, together with three-point
/// differentiation operators (one-sided at the ends) and trapezoid weights
/// for integrals of the form \int_0^{r_max} g(r) r dr.
class RadialGrid {
 public:
  RadialGrid() = default;

  int intervals() const { return static_cast<int>(nodes_.size()) - 1; }
  Eigen::Index size() const { return nodes_.size(); }
  double r_max() const { return nodes_[nodes_.size() - 1]; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  double operator[](Eigen::Index k) const { return nodes_[k]; }
  const GridMapping& mapping() const { return mapping_; }

  const RowSparse& d1() const { return d1_; }
  const RowSparse& d2() const { return d2_; }
  /// Weights w_k with sum_k w_k g_k ~ \int_0^{r_max} g(r) r dr.
  const Eigen::VectorXd& quad_weights() const { return weights_; }

  friend RadialGrid make_grid(double r_max, int intervals, GridMapping mapping);

 private:
  explicit RadialGrid(Eigen::VectorXd nodes, GridMapping mapping);

  Eigen::VectorXd nodes_;
  GridMapping mapping_;
  RowSparse d1_;
  RowSparse d2_;
  Eigen::VectorXd weights_;
};

inline constexpr int kMinIntervals = 16;

/// r_k = r_max (k/M)^q for the algebraic mapping, r_k = r_max k/M for the
/// uniform one. Throws std::invalid_argument for r_max <= 0 or M < 16.
RadialGrid make_grid(double r_max, int intervals,
                     GridMapping mapping = GridMapping::algebraic());

/// \int_0^{r_max} g(r) r dr for samples g(r_k).
double quad_r(const RadialGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& g);

/// Running values of \int_0^{r_k} g(r) r dr, one per node.
Eigen::VectorXd cumulative_quad_r(const RadialGrid& grid,
                                  const Eigen::Ref<const Eigen::VectorXd>& g);

/// \int_0^{R} g(r) r dr for any 0 <= R <= r_max; the last partial cell uses
/// the linearly interpolated integrand.
double quad_r_to(const RadialGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& g,
                 double upper);

/// Monotone piecewise-cubic Hermite interpolation (Fritsch-Carlson slopes).
/// Queries outside [x_0, x_N] are clamped to the end values.
class MonotoneCubic {
 public:
  MonotoneCubic(Eigen::VectorXd x, Eigen::VectorXd y);

  double operator()(double xq) const;
  Eigen::VectorXd operator()(const Eigen::Ref<const Eigen::VectorXd>& xq) const;

 private:
  Eigen::VectorXd x_;
  Eigen::VectorXd y_;
  Eigen::VectorXd slopes_;
};

/// Indices [first, last] of the nodes inside [lo, hi].
std::pair<Eigen::Index, Eigen::Index> node_window(const RadialGrid& grid, double lo,
                                                  double hi);

}  // namespace glv
