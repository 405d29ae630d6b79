#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace glv {

/// Problem instance for the radial n-component system
///   f_i'' + f_i'/r - d_i^2 f_i / r^2 + (1/lambda_i) f_i (n - sum_j f_j^2) = 0,
/// with f_i ~ b_i r^{d_i} at the axis and f_i -> alpha_i at infinity
/// (truncated to r_max).
struct ModelParams {
  int n = 1;
  Eigen::VectorXd lambdas;
  Eigen::VectorXi degrees;
  Eigen::VectorXd alphas;
  double r_max = 100.0;
};

/// Builds a params block from plain lists; n is taken from the list length.
ModelParams make_params(const std::vector<double>& lambdas,
                        const std::vector<int>& degrees,
                        const std::vector<double>& alphas, double r_max);

inline constexpr double kNormalizationTol = 1e-12;

struct Violation {
  std::string field;
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  explicit operator bool() const { return ok(); }
  std::string summary() const;
};

ValidationResult validate_params(const ModelParams& p);

/// 2*pi * sum_j lambda_j alpha_j^2 d_j^2. Throws std::invalid_argument on
/// shape mismatch or out-of-domain entries.
double quantized_value(const Eigen::VectorXd& lambdas,
                       const Eigen::VectorXd& alphas,
                       const Eigen::VectorXi& degrees);

inline double quantized_value(const ModelParams& p) {
  return quantized_value(p.lambdas, p.alphas, p.degrees);
}

// Closed-form reference fields on the plane.

/// u_j = A_j exp(i omega x); an exact solution when all diffusion constants
/// equal lambda and lambda*omega^2 + sum A_j^2 = n.
class PlaneWaveField {
 public:
  PlaneWaveField(Eigen::VectorXd amplitudes, double omega, double lambda);

  int n() const { return static_cast<int>(amplitudes_.size()); }
  const Eigen::VectorXd& amplitudes() const { return amplitudes_; }
  double omega() const { return omega_; }
  double lambda() const { return lambda_; }

  template <typename Scalar>
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> eval(Scalar x,
                                                             Scalar /*y*/) const {
    using std::cos;
    using std::sin;
    const Scalar phase = static_cast<Scalar>(omega_) * x;
    const std::complex<Scalar> e(cos(phase), sin(phase));
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> u(n());
    for (int j = 0; j < n(); ++j) u[j] = static_cast<Scalar>(amplitudes_[j]) * e;
    return u;
  }

 private:
  Eigen::VectorXd amplitudes_;
  double omega_;
  double lambda_;
};

/// u_1 = sqrt(n) sin(rho), u_j = sqrt(n) cos^{j-1}(rho) sin(rho) for
/// 2 <= j <= n-1, u_n = sqrt(n) cos^{n-1}(rho), rho = x^2 + y^2.
/// Sum of squared moduli is n everywhere, but it does not solve the system.
class SwirlField {
 public:
  explicit SwirlField(int n);

  int n() const { return n_; }

  template <typename Scalar>
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> eval(Scalar x,
                                                             Scalar y) const {
    using std::cos;
    using std::sin;
    using std::sqrt;
    const Scalar rho = x * x + y * y;
    const Scalar s = sin(rho);
    const Scalar c = cos(rho);
    const Scalar scale = sqrt(static_cast<Scalar>(n_));
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> u(n_);
    Scalar cpow = 1;  // cos^{j} for the j-th (0-based) component
    for (int j = 0; j < n_ - 1; ++j) {
      u[j] = scale * cpow * s;
      cpow *= c;
    }
    u[n_ - 1] = scale * cpow;
    return u;
  }

 private:
  int n_;
};

/// Constant field with sum |c_j|^2 = n.
class ConstantField {
 public:
  explicit ConstantField(Eigen::VectorXcd values);

  int n() const { return static_cast<int>(values_.size()); }
  const Eigen::VectorXcd& values() const { return values_; }

  template <typename Scalar>
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> eval(Scalar, Scalar) const {
    return values_.template cast<std::complex<Scalar>>();
  }

 private:
  Eigen::VectorXcd values_;
};

using Field = std::variant<PlaneWaveField, SwirlField, ConstantField>;

inline int component_count(const Field& field) {
  return std::visit([](const auto& f) { return f.n(); }, field);
}

template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> eval_field(const Field& field,
                                                                 Scalar x, Scalar y) {
  return std::visit([&](const auto& f) { return f.template eval<Scalar>(x, y); }, field);
}

}  // namespace glv
