#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace glv {

/// Square band matrix with `lower` sub- and `upper` super-diagonals, stored
/// row-wise with room for the fill-in that partial pivoting creates
/// (upper bandwidth grows to lower + upper).
template <typename Scalar>
class BandMatrix {
 public:
  BandMatrix(Eigen::Index size, int lower, int upper)
      : size_(size), lower_(lower), upper_(upper),
        band_(Band::Zero(size, 2 * lower + upper + 1)) {}

  Eigen::Index size() const { return size_; }
  int lower() const { return lower_; }
  int upper() const { return upper_; }

  bool in_band(Eigen::Index i, Eigen::Index j) const {
    const Eigen::Index off = j - i;
    return off >= -lower_ && off <= lower_ + upper_;
  }

  Scalar& operator()(Eigen::Index i, Eigen::Index j) {
    if (j - i < -lower_ || j - i > upper_)
      throw std::out_of_range("BandMatrix: entry outside the declared band");
    return band_(i, j - i + lower_);
  }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const {
    if (j - i < -lower_ || j - i > upper_) return Scalar(0);
    return band_(i, j - i + lower_);
  }

  void setZero() { band_.setZero(); }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> operator*(
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x) const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(size_);
    for (Eigen::Index i = 0; i < size_; ++i) {
      const Eigen::Index j0 = std::max<Eigen::Index>(0, i - lower_);
      const Eigen::Index j1 = std::min<Eigen::Index>(size_ - 1, i + upper_);
      for (Eigen::Index j = j0; j <= j1; ++j) y[i] += band_(i, j - i + lower_) * x[j];
    }
    return y;
  }

 private:
  template <typename>
  friend class BandedLU;
  using Band = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Scalar& raw(Eigen::Index i, Eigen::Index j) { return band_(i, j - i + lower_); }

  Eigen::Index size_;
  int lower_;
  int upper_;
  Band band_;
};

/// Gaussian elimination with partial pivoting restricted to the band.
/// Follows the Eigen decomposition idiom: construct/compute, then check
/// info() before solve().
template <typename Scalar>
class BandedLU {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BandedLU() = default;
  explicit BandedLU(BandMatrix<Scalar> a) { compute(std::move(a)); }

  BandedLU& compute(BandMatrix<Scalar> a) {
    lu_ = std::move(a);
    const Eigen::Index n = lu_->size();
    const int kl = lu_->lower();
    const int reach = kl + lu_->upper();
    pivots_.assign(static_cast<std::size_t>(n), 0);
    multipliers_.setZero(n, std::max(kl, 1));
    info_ = Eigen::Success;
    failed_row_ = -1;

    const Scalar threshold =
        std::numeric_limits<Scalar>::epsilon() * lu_->band_.cwiseAbs().maxCoeff();
    auto& m = *lu_;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index last_row = std::min<Eigen::Index>(n - 1, i + kl);
      const Eigen::Index last_col = std::min<Eigen::Index>(n - 1, i + reach);
      Eigen::Index p = i;
      Scalar best = std::abs(m.raw(i, i));
      for (Eigen::Index r = i + 1; r <= last_row; ++r) {
        const Scalar v = std::abs(m.raw(r, i));
        if (v > best) {
          best = v;
          p = r;
        }
      }
      if (!(best > threshold) || !std::isfinite(static_cast<double>(best))) {
        info_ = Eigen::NumericalIssue;
        failed_row_ = i;
        return *this;
      }
      pivots_[static_cast<std::size_t>(i)] = p;
      if (p != i)
        for (Eigen::Index j = i; j <= last_col; ++j) std::swap(m.raw(i, j), m.raw(p, j));
      const Scalar diag = m.raw(i, i);
      for (Eigen::Index r = i + 1; r <= last_row; ++r) {
        const Scalar factor = m.raw(r, i) / diag;
        multipliers_(i, r - i - 1) = factor;
        if (factor == Scalar(0)) continue;
        m.raw(r, i) = Scalar(0);
        for (Eigen::Index j = i + 1; j <= last_col; ++j) m.raw(r, j) -= factor * m.raw(i, j);
      }
    }
    return *this;
  }

  Eigen::ComputationInfo info() const { return info_; }
  /// Elimination step at which a zero pivot appeared, or -1.
  Eigen::Index failed_row() const { return failed_row_; }

  Vector solve(Vector b) const {
    if (!lu_ || info_ != Eigen::Success)
      throw std::logic_error("BandedLU::solve on a failed or empty factorization");
    const auto& m = *lu_;
    const Eigen::Index n = m.size();
    if (b.size() != n) throw std::invalid_argument("BandedLU::solve: rhs size mismatch");
    const int kl = m.lower();
    const int reach = kl + m.upper();
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index p = pivots_[static_cast<std::size_t>(i)];
      if (p != i) std::swap(b[i], b[p]);
      const Eigen::Index last_row = std::min<Eigen::Index>(n - 1, i + kl);
      for (Eigen::Index r = i + 1; r <= last_row; ++r) b[r] -= multipliers_(i, r - i - 1) * b[i];
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      const Eigen::Index last_col = std::min<Eigen::Index>(n - 1, i + reach);
      Scalar acc = b[i];
      for (Eigen::Index j = i + 1; j <= last_col; ++j) acc -= m.band_(i, j - i + kl) * b[j];
      b[i] = acc / m.band_(i, kl);
    }
    return b;
  }

 private:
  std::optional<BandMatrix<Scalar>> lu_;
  std::vector<Eigen::Index> pivots_;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> multipliers_;
  Eigen::ComputationInfo info_ = Eigen::InvalidInput;
  Eigen::Index failed_row_ = -1;
};

}  // namespace glv
