#include "glvortex/energy.hpp"

#include "fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace glv {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_usable(const ProfileSet& profile, const char* who) {
  if (profile.provenance == Provenance::Unconverged)
    throw RefusedInput(std::string(who) + ": profile is not a converged solve");
}

void require_match(const ProfileSet& profile, const ModelParams& p, const char* who) {
  if (profile.n() != p.n || p.lambdas.size() != p.n || p.degrees.size() != p.n ||
      p.alphas.size() != p.n)
    throw std::invalid_argument(std::string(who) + ": profile and params disagree on n");
}

Eigen::VectorXd defect(const ProfileSet& profile, double n) {
  return (n - profile.modulus_sum().array()).matrix();
}

// f_i^2 / r^2 with the axis value taken from the core expansion b_i r^{d_i}.
Eigen::VectorXd squared_over_r2(const ProfileSet& profile, int i) {
  const auto& r = profile.grid.nodes();
  Eigen::VectorXd out(r.size());
  for (Eigen::Index k = 1; k < r.size(); ++k) {
    const double f = profile.values(i, k);
    out[k] = f * f / (r[k] * r[k]);
  }
  const int d = profile.degrees[i];
  out[0] = d == 1 ? profile.core_coeffs[i] * profile.core_coeffs[i] : 0.0;
  return out;
}

}  // namespace

std::string to_string(Finiteness f) {
  switch (f) {
    case Finiteness::Finite: return "finite";
    case Finiteness::Infinite: return "infinite";
    case Finiteness::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

PotentialEnergy potential_energy(const ProfileSet& profile, const ModelParams& p) {
  require_usable(profile, "potential_energy");
  require_match(profile, p, "potential_energy");
  const auto& grid = profile.grid;
  const Eigen::VectorXd sigma = defect(profile, p.n);

  PotentialEnergy out;
  out.e_truncated = kTwoPi * quad_r(grid, sigma.array().square().matrix());

  const double r_max = grid.r_max();
  const auto [first, last] = node_window(grid, 0.5 * r_max, r_max);
  double acc = 0.0;
  for (Eigen::Index k = first; k <= last; ++k) acc += grid[k] * grid[k] * sigma[k];
  out.tail_coeff = last >= first ? acc / static_cast<double>(last - first + 1) : 0.0;
  out.e_estimate = out.e_truncated + std::numbers::pi * out.tail_coeff * out.tail_coeff / (r_max * r_max);
  return out;
}

IAlpha i_alpha(const ProfileSet& profile, int component, double alpha) {
  if (component < 0 || component >= profile.n())
    throw std::invalid_argument("i_alpha: component index out of range");
  const auto& grid = profile.grid;
  const Eigen::VectorXd f2 = profile.values.row(component).transpose().array().square();
  const Eigen::VectorXd gap = (alpha * alpha - f2.array()).matrix();

  IAlpha out;
  out.value_truncated = kTwoPi * quad_r(grid, gap.array().square().matrix());

  const double r_max = grid.r_max();
  const auto [first, last] = node_window(grid, 0.5 * r_max, r_max);
  const double scale = std::max(1.0, alpha * alpha);
  std::vector<double> xs;
  std::vector<double> ys;
  double largest = 0.0;
  for (Eigen::Index k = first; k <= last; ++k) {
    const double v = std::abs(gap[k]);
    largest = std::max(largest, v);
    if (v > 1e-14 * scale && grid[k] > 0.0) {
      xs.push_back(std::log(grid[k]));
      ys.push_back(std::log(v));
    }
  }
  if (largest <= 1e-12 * scale) {
    out.verdict = Finiteness::Finite;
    return out;
  }
  if (xs.size() < 3) {
    out.verdict = Finiteness::Inconclusive;
    return out;
  }
  const auto fit = detail::fit_line(Eigen::Map<const Eigen::VectorXd>(xs.data(), xs.size()),
                                    Eigen::Map<const Eigen::VectorXd>(ys.data(), ys.size()));
  out.tail_exponent = fit.slope;
  if (fit.slope <= kFiniteExponent)
    out.verdict = Finiteness::Finite;
  else if (fit.slope >= kInfiniteExponent)
    out.verdict = Finiteness::Infinite;
  else
    out.verdict = Finiteness::Inconclusive;
  return out;
}

Eigen::VectorXd geometric_radii(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2)
    throw std::invalid_argument("geometric_radii: need 0 < lo < hi and count >= 2");
  Eigen::VectorXd radii(count);
  const double ratio = std::log(hi / lo) / (count - 1);
  for (int k = 0; k < count; ++k) radii[k] = lo * std::exp(ratio * k);
  radii[0] = lo;
  radii[count - 1] = hi;
  return radii;
}

GradientLadder gradient_energy_ladder(const ProfileSet& profile, const ModelParams& p,
                                      const Eigen::VectorXd& radii) {
  require_match(profile, p, "gradient_energy_ladder");
  const auto& grid = profile.grid;
  for (Eigen::Index k = 0; k < radii.size(); ++k)
    if (!(radii[k] > 0.0) || radii[k] > grid.r_max() * (1.0 + 1e-12))
      throw std::invalid_argument("gradient_energy_ladder: radius outside (0, r_max]");

  GradientLadder ladder;
  ladder.radii = radii.cwiseMin(grid.r_max());
  ladder.lambdas = p.lambdas;
  ladder.per_component.setZero(p.n, radii.size());
  ladder.core_scale = 0.0;
  for (int i = 0; i < p.n; ++i) {
    ladder.core_scale =
        std::max(ladder.core_scale, std::sqrt(p.lambdas[i]) * std::max(p.degrees[i], 1));
    const double d = p.degrees[i];
    Eigen::VectorXd integrand = profile.derivs.row(i).transpose().array().square();
    if (d != 0.0) integrand += d * d * squared_over_r2(profile, i);
    for (Eigen::Index l = 0; l < radii.size(); ++l)
      ladder.per_component(i, l) = kTwoPi * quad_r_to(grid, integrand, ladder.radii[l]);
  }
  return ladder;
}

GrowthSlope log_growth_slope(const GradientLadder& ladder, double lo, double hi) {
  if (lo < 10.0 * ladder.core_scale * (1.0 - 1e-12))
    throw RefusedInput("log_growth_slope: window starts inside 10 core scales");
  std::vector<Eigen::Index> picks;
  for (Eigen::Index l = 0; l < ladder.radii.size(); ++l)
    if (ladder.radii[l] >= lo * (1.0 - 1e-12) && ladder.radii[l] <= hi * (1.0 + 1e-12))
      picks.push_back(l);
  if (picks.size() < 3) throw RefusedInput("log_growth_slope: fewer than 3 ladder points in window");

  Eigen::VectorXd x(picks.size());
  for (std::size_t m = 0; m < picks.size(); ++m) x[m] = std::log(ladder.radii[picks[m]]);
  GrowthSlope out;
  out.points = static_cast<int>(picks.size());
  const Eigen::Index n = ladder.per_component.rows();
  out.per_component.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd y(picks.size());
    for (std::size_t m = 0; m < picks.size(); ++m) y[m] = ladder.per_component(i, picks[m]);
    out.per_component[i] = detail::fit_line(x, y).slope;
  }
  out.total = out.per_component.sum();
  out.weighted = ladder.lambdas.dot(out.per_component);
  return out;
}

PohozaevResidual pohozaev_residual(const ProfileSet& profile, const ModelParams& p,
                                   int core_nodes) {
  require_usable(profile, "pohozaev_residual");
  require_match(profile, p, "pohozaev_residual");
  const auto& grid = profile.grid;
  const auto& r = grid.nodes();
  const Eigen::VectorXd sigma = defect(profile, p.n);
  const Eigen::VectorXd energy = kTwoPi * cumulative_quad_r(grid, sigma.array().square().matrix());

  PohozaevResidual out;
  out.core_nodes = core_nodes;
  out.residual.setZero(r.size());
  for (Eigen::Index k = 1; k < r.size(); ++k) {
    const double r2 = r[k] * r[k];
    double normal = 0.0;
    double tangential = 0.0;
    for (int i = 0; i < p.n; ++i) {
      const double fp = profile.derivs(i, k);
      const double f = profile.values(i, k);
      const double d = p.degrees[i];
      normal += p.lambdas[i] * fp * fp;
      tangential += p.lambdas[i] * d * d * f * f / r2;
    }
    out.residual[k] =
        normal + energy[k] / (kTwoPi * r2) - tangential - 0.5 * sigma[k] * sigma[k];
  }
  for (Eigen::Index k = std::max<Eigen::Index>(core_nodes, 1); k < r.size(); ++k) {
    if (std::abs(out.residual[k]) > out.max_abs) {
      out.max_abs = std::abs(out.residual[k]);
      out.argmax = k;
    }
  }
  return out;
}

EnergyReport energy_report(const ProfileSet& profile, const ModelParams& p,
                           const EnergyOptions& options) {
  EnergyReport out;
  out.potential = potential_energy(profile, p);
  for (int i = 0; i < p.n; ++i) out.i_alpha.push_back(i_alpha(profile, i, p.alphas[i]));

  const double r_max = profile.grid.r_max();
  const Eigen::VectorXd radii =
      options.ladder.size() > 0 ? options.ladder : geometric_radii(r_max / 5.0, r_max, 16);
  out.ladder = gradient_energy_ladder(profile, p, radii);
  const double lo = options.slope_lo > 0.0 ? options.slope_lo : radii[0];
  const double hi = options.slope_hi > 0.0 ? options.slope_hi : radii[radii.size() - 1];
  try {
    out.slope = log_growth_slope(out.ladder, lo, hi);
  } catch (const RefusedInput&) {
    out.slope.reset();
  }

  out.h_infinity = (p.alphas.array().square() / p.lambdas.array()).sum();
  out.pohozaev_max_residual = pohozaev_residual(profile, p, options.core_nodes).max_abs;
  out.quantized_target = quantized_value(p);
  out.rel_error = std::abs(out.potential.e_estimate - out.quantized_target) /
                  std::max(out.quantized_target, 1.0);
  out.lambda_d2 = (p.lambdas.array() * p.degrees.cast<double>().array().square()).matrix();

  const Eigen::VectorXd sigma2 = (p.n - profile.modulus_sum().array()).square().matrix();
  out.energy_at_ladder.resize(radii.size());
  for (Eigen::Index l = 0; l < radii.size(); ++l)
    out.energy_at_ladder[l] = kTwoPi * quad_r_to(profile.grid, sigma2, out.ladder.radii[l]);
  return out;
}

}  // namespace glv
