#include "glvortex/model.hpp"

#include <fmt/format.h>

#include <numbers>

namespace glv {

ModelParams make_params(const std::vector<double>& lambdas,
                        const std::vector<int>& degrees,
                        const std::vector<double>& alphas, double r_max) {
  ModelParams p;
  p.n = static_cast<int>(lambdas.size());
  p.lambdas = Eigen::Map<const Eigen::VectorXd>(lambdas.data(), lambdas.size());
  p.degrees = Eigen::Map<const Eigen::VectorXi>(degrees.data(), degrees.size());
  p.alphas = Eigen::Map<const Eigen::VectorXd>(alphas.data(), alphas.size());
  p.r_max = r_max;
  return p;
}

std::string ValidationResult::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.field + ": " + v.message;
  }
  return out;
}

ValidationResult validate_params(const ModelParams& p) {
  ValidationResult result;
  auto add = [&](std::string field, std::string message) {
    result.violations.push_back({std::move(field), std::move(message)});
  };

  if (p.n < 1) add("n", fmt::format("n = {} < 1", p.n));
  const auto n = static_cast<Eigen::Index>(p.n);
  if (p.lambdas.size() != n)
    add("lambdas", fmt::format("length {} != n = {}", p.lambdas.size(), p.n));
  if (p.degrees.size() != n)
    add("degrees", fmt::format("length {} != n = {}", p.degrees.size(), p.n));
  if (p.alphas.size() != n)
    add("alphas", fmt::format("length {} != n = {}", p.alphas.size(), p.n));
  if (!(p.r_max > 0.0) || !std::isfinite(p.r_max))
    add("r_max", fmt::format("r_max = {} must be positive and finite", p.r_max));

  for (Eigen::Index i = 0; i < p.lambdas.size(); ++i)
    if (!(p.lambdas[i] > 0.0) || !std::isfinite(p.lambdas[i]))
      add("lambdas", fmt::format("λ_{} ≤ 0 (λ_{} = {})", i + 1, i + 1, p.lambdas[i]));
  for (Eigen::Index i = 0; i < p.degrees.size(); ++i)
    if (p.degrees[i] < 0)
      add("degrees", fmt::format("d_{} = {} is negative", i + 1, p.degrees[i]));

  bool alphas_finite = true;
  for (Eigen::Index i = 0; i < p.alphas.size(); ++i) {
    if (!std::isfinite(p.alphas[i])) {
      alphas_finite = false;
      add("alphas", fmt::format("α_{} is not finite", i + 1));
    } else if (p.alphas[i] < 0.0) {
      add("alphas", fmt::format("α_{} = {} < 0", i + 1, p.alphas[i]));
    }
  }
  if (alphas_finite && p.n >= 1) {
    const double sum_sq = p.alphas.squaredNorm();
    if (std::abs(sum_sq - p.n) > kNormalizationTol)
      add("alphas", fmt::format("Σα² = {:.6g} ≠ {}", sum_sq, p.n));
  }
  return result;
}

double quantized_value(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& alphas,
                       const Eigen::VectorXi& degrees) {
  if (lambdas.size() != alphas.size() || lambdas.size() != degrees.size())
    throw std::invalid_argument("quantized_value: lambdas, alphas and degrees differ in length");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < lambdas.size(); ++j) {
    if (!(lambdas[j] > 0.0)) throw std::invalid_argument("quantized_value: lambda must be positive");
    if (alphas[j] < 0.0) throw std::invalid_argument("quantized_value: alpha must be nonnegative");
    if (degrees[j] < 0) throw std::invalid_argument("quantized_value: degree must be nonnegative");
    const double d = degrees[j];
    sum += lambdas[j] * alphas[j] * alphas[j] * d * d;
  }
  return 2.0 * std::numbers::pi * sum;
}

PlaneWaveField::PlaneWaveField(Eigen::VectorXd amplitudes, double omega, double lambda)
    : amplitudes_(std::move(amplitudes)), omega_(omega), lambda_(lambda) {
  if (amplitudes_.size() < 1) throw std::invalid_argument("PlaneWaveField: no components");
  if ((amplitudes_.array() <= 0.0).any())
    throw std::invalid_argument("PlaneWaveField: amplitudes must be positive");
  if (!(omega_ > 0.0)) throw std::invalid_argument("PlaneWaveField: omega must be positive");
  if (!(lambda_ > 0.0)) throw std::invalid_argument("PlaneWaveField: lambda must be positive");
  const double defect = lambda_ * omega_ * omega_ + amplitudes_.squaredNorm() - n();
  if (std::abs(defect) > kNormalizationTol)
    throw std::invalid_argument(fmt::format(
        "PlaneWaveField: not admissible, λω² + ΣA² - n = {:.3g}", defect));
}

SwirlField::SwirlField(int n) : n_(n) {
  if (n_ < 2) throw std::invalid_argument("SwirlField: needs n >= 2");
}

ConstantField::ConstantField(Eigen::VectorXcd values) : values_(std::move(values)) {
  if (values_.size() < 1) throw std::invalid_argument("ConstantField: no components");
  const double defect = values_.squaredNorm() - static_cast<double>(values_.size());
  if (std::abs(defect) > kNormalizationTol)
    throw std::invalid_argument(
        fmt::format("ConstantField: Σ|c|² - n = {:.3g}", defect));
}

}  // namespace glv
