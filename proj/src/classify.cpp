#include "glvortex/classify.hpp"

#include "fit.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace glv {
namespace {

void require_usable(const ProfileSet& profile, const char* who) {
  if (profile.provenance == Provenance::Unconverged)
    throw RefusedInput(std::string(who) + ": profile is not a converged solve");
}

}  // namespace

std::string to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::P1: return "P1";
    case CaseLabel::P2: return "P2";
    case CaseLabel::P3: return "P3";
    case CaseLabel::P4: return "P4";
    case CaseLabel::InvalidK1: return "invalid(k=1)";
    case CaseLabel::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string to_string(Thm12Probe::Verdict v) {
  switch (v) {
    case Thm12Probe::Verdict::ContradictionDetected: return "contradiction_detected";
    case Thm12Probe::Verdict::NoObstruction: return "no_obstruction";
    case Thm12Probe::Verdict::Refused: return "refused";
  }
  return "unknown";
}

AlphaEstimate estimate_alpha(const ProfileSet& profile) {
  require_usable(profile, "estimate_alpha");
  const auto& grid = profile.grid;
  const auto [first, last] = node_window(grid, 0.5 * grid.r_max(), grid.r_max());
  const Eigen::Index count = last - first + 1;
  if (count < 2) throw RefusedInput("estimate_alpha: tail window holds fewer than 2 nodes");

  Eigen::VectorXd inv_r2(count);
  for (Eigen::Index k = 0; k < count; ++k) inv_r2[k] = 1.0 / (grid[first + k] * grid[first + k]);

  AlphaEstimate out;
  out.alpha_hat.resize(profile.n());
  for (int i = 0; i < profile.n(); ++i) {
    const Eigen::VectorXd y = profile.values.row(i).segment(first, count).transpose();
    if ((y.array() == y[0]).all()) {
      out.alpha_hat[i] = y[0];
      continue;
    }
    out.alpha_hat[i] = detail::fit_line(inv_r2, y).intercept;
  }
  out.sum_sq = out.alpha_hat.squaredNorm();
  out.deviation = out.sum_sq - profile.n();
  return out;
}

ClassificationReport classify(const std::vector<Finiteness>& flags,
                              const Eigen::VectorXd& alpha_hat) {
  ClassificationReport out;
  out.flags = flags;
  out.alpha_hat = alpha_hat;
  const int n = static_cast<int>(flags.size());
  if (n == 0) {
    out.diagnostics.push_back("no components");
    return out;
  }
  if (alpha_hat.size() != n)
    out.diagnostics.push_back("alpha_hat length differs from flag count");

  const auto count = [&](Finiteness f) {
    return static_cast<int>(std::count(flags.begin(), flags.end(), f));
  };
  out.k = count(Finiteness::Infinite);
  const int finite = count(Finiteness::Finite);
  const int open = count(Finiteness::Inconclusive);

  if (open > 0) {
    out.label = CaseLabel::Inconclusive;
    out.diagnostics.push_back(fmt::format("{} inconclusive I_alpha verdict(s)", open));
    return out;
  }
  if (out.k == 1) {
    out.label = CaseLabel::InvalidK1;
    out.diagnostics.push_back("exactly one infinite I_alpha: excluded for finite-energy solutions");
    return out;
  }
  if (out.k == 0) {
    int positive = 0;
    for (Eigen::Index i = 0; i < alpha_hat.size(); ++i)
      if (alpha_hat[i] > kZeroAmplitude) ++positive;
    out.l = positive;
    if (positive == n) {
      out.label = CaseLabel::P1;
    } else if (positive >= 1) {
      out.label = CaseLabel::P2;
    } else {
      out.label = CaseLabel::Inconclusive;
      out.diagnostics.push_back("all amplitudes vanish; sum alpha^2 = n cannot hold");
    }
    return out;
  }
  if (out.k == n) {
    out.label = CaseLabel::P4;
    return out;
  }
  // 2 <= k <= n - 1
  out.l = finite;
  if (out.l > n - 2) {
    out.label = CaseLabel::InvalidK1;
    out.diagnostics.push_back("P3 requires l <= n - 2");
    return out;
  }
  out.label = CaseLabel::P3;
  return out;
}

ClassificationReport classify_profile(const ProfileSet& profile) {
  const AlphaEstimate alpha = estimate_alpha(profile);
  std::vector<Finiteness> flags;
  for (int i = 0; i < profile.n(); ++i)
    flags.push_back(i_alpha(profile, i, std::max(alpha.alpha_hat[i], 0.0)).verdict);
  ClassificationReport out = classify(flags, alpha.alpha_hat);
  out.diagnostics.push_back(fmt::format("sum alpha_hat^2 - n = {:.3e}", alpha.deviation));
  return out;
}

WronskianCheck wronskian_identity_check(const ProfileSet& profile, const ModelParams& p, int i,
                                        int j, int core_nodes) {
  if (i == j) throw std::invalid_argument("wronskian_identity_check: needs two distinct components");
  if (i < 0 || j < 0 || i >= profile.n() || j >= profile.n() || p.n != profile.n())
    throw std::invalid_argument("wronskian_identity_check: component index out of range");
  require_usable(profile, "wronskian_identity_check");

  const auto& grid = profile.grid;
  const auto& r = grid.nodes();
  const Eigen::Index size = r.size();
  const auto fi = profile.values.row(i).transpose();
  const auto fj = profile.values.row(j).transpose();
  const auto gi = profile.derivs.row(i).transpose();
  const auto gj = profile.derivs.row(j).transpose();
  const Eigen::VectorXd r_wronskian =
      (r.array() * (gi.array() * fj.array() - fi.array() * gj.array())).matrix();
  const Eigen::VectorXd growth = grid.d1() * r_wronskian;
  const Eigen::VectorXd sigma = (p.n - profile.modulus_sum().array()).matrix();

  const double ddiff = static_cast<double>(p.degrees[i]) * p.degrees[i] -
                       static_cast<double>(p.degrees[j]) * p.degrees[j];
  const double ldiff = 1.0 / p.lambdas[j] - 1.0 / p.lambdas[i];

  WronskianCheck out;
  out.residual.setZero(size);
  // The ODE is not imposed on the far-field node, so it is skipped as well.
  for (Eigen::Index k = std::max<Eigen::Index>(core_nodes, 1); k + 1 < size; ++k) {
    const double lhs = growth[k] / r[k];
    const double rhs = (ddiff / (r[k] * r[k]) + ldiff * sigma[k]) * fi[k] * fj[k];
    out.residual[k] = lhs - rhs;
    out.max_residual = std::max(out.max_residual, std::abs(out.residual[k]));
  }
  return out;
}

Thm12Probe thm12_probe(const ProfileSet& profile, const ModelParams& p) {
  Thm12Probe out;
  if (p.n < 2 || profile.n() != p.n) {
    out.reason = "needs at least two components matching the params";
    return out;
  }
  if (p.lambdas.maxCoeff() - p.lambdas.minCoeff() > 1e-12) {
    out.reason = "diffusion constants differ; the equal-lambda hypothesis is absent";
    return out;
  }
  if (profile.provenance == Provenance::Unconverged) {
    out.reason = "profile is not a converged solve";
    return out;
  }
  // First pair with distinct degrees; with all degrees equal, (0, 1) shows no growth.
  bool found = false;
  for (int a = 0; a < p.n && !found; ++a)
    for (int b = a + 1; b < p.n && !found; ++b)
      if (p.degrees[a] != p.degrees[b]) {
        out.i = a;
        out.j = b;
        found = true;
      }

  const auto& grid = profile.grid;
  const auto alpha = estimate_alpha(profile).alpha_hat;
  const auto [first, last] = node_window(grid, 0.5 * grid.r_max(), grid.r_max());
  if (last - first + 1 < 3) {
    out.reason = "tail window holds fewer than 3 nodes";
    return out;
  }
  for (int c : {out.i, out.j}) {
    const double floor = 0.5 * alpha[c];
    if (!(alpha[c] > kZeroAmplitude) ||
        profile.values.row(c).segment(first, last - first + 1).minCoeff() < floor) {
      out.reason = fmt::format("component {} is not bounded below by alpha_hat/2 on the tail", c + 1);
      return out;
    }
  }

  const Eigen::Index count = last - first + 1;
  const double ddiff = static_cast<double>(p.degrees[out.i]) * p.degrees[out.i] -
                       static_cast<double>(p.degrees[out.j]) * p.degrees[out.j];
  Eigen::VectorXd log_r(count);
  Eigen::VectorXd measured(count);
  Eigen::VectorXd forced(count);
  for (Eigen::Index m = 0; m < count; ++m) {
    const Eigen::Index k = first + m;
    log_r[m] = std::log(grid[k]);
    measured[m] = grid[k] * (profile.derivs(out.i, k) * profile.values(out.j, k) -
                             profile.values(out.i, k) * profile.derivs(out.j, k));
  }
  forced[0] = measured[0];
  for (Eigen::Index m = 1; m < count; ++m) {
    const Eigen::Index k = first + m;
    const double prev = profile.values(out.i, k - 1) * profile.values(out.j, k - 1) / grid[k - 1];
    const double curr = profile.values(out.i, k) * profile.values(out.j, k) / grid[k];
    forced[m] = forced[m - 1] + ddiff * 0.5 * (prev + curr) * (grid[k] - grid[k - 1]);
  }

  const auto fit = detail::fit_line(log_r, forced);
  out.c0 = fit.slope;
  out.c1 = fit.intercept;
  out.c0_stderr = fit.slope_stderr;
  out.measured_c0 = detail::fit_line(log_r, measured).slope;
  out.identity_defect = (measured - forced).cwiseAbs().maxCoeff();
  const bool significant = std::abs(out.c0) > 3.0 * out.c0_stderr && std::abs(out.c0) > 1e-8;
  out.verdict = significant ? Thm12Probe::Verdict::ContradictionDetected
                            : Thm12Probe::Verdict::NoObstruction;
  out.reason = significant ? "Wronskian forced to grow like ln r on the tail"
                           : "no logarithmic Wronskian growth";
  return out;
}

ConstantsCheck constants_check(const ModelParams& p, const RadialGrid& grid,
                               const SolverOptions& options) {
  if ((p.degrees.array() != 0).any())
    throw std::invalid_argument("constants_check: all degrees must be zero");
  const auto& r = grid.nodes();
  Eigen::MatrixXd start(p.n, r.size());
  for (int i = 0; i < p.n; ++i) {
    const double sign = i % 2 == 0 ? 1.0 : -1.0;
    for (Eigen::Index k = 0; k < r.size(); ++k) {
      const double bump = std::exp(-(r[k] / 5.0) * (r[k] / 5.0));
      start(i, k) = p.alphas[i] * (1.0 + 0.1 * sign * bump);
    }
  }
  ModelParams pg = p;
  pg.r_max = grid.r_max();
  auto solved = newton_solve(pg, grid, make_profile(grid, start, p.degrees), options);

  ConstantsCheck out;
  out.report = solved.report;
  if (!solved.report.converged) return out;
  const Eigen::VectorXd upper = Eigen::VectorXd::Constant(1, grid.r_max());
  out.gradient_energy = gradient_energy_ladder(solved.profile, pg, upper).total()[0];
  out.max_deviation = (solved.profile.values.colwise() - p.alphas).cwiseAbs().maxCoeff();
  out.passed = out.gradient_energy <= 1e-8;
  return out;
}

GrowthCheck growth_check(const ProfileSet& profile, const ModelParams& p) {
  GrowthCheck out;
  const double r_max = profile.grid.r_max();
  double core = 0.0;
  for (int i = 0; i < p.n; ++i)
    core = std::max(core, std::sqrt(p.lambdas[i]) * std::max(p.degrees[i], 1));
  const double lo = std::max(r_max / 5.0, 10.0 * core);
  if (!(lo < r_max)) throw RefusedInput("growth_check: r_max is inside 10 core scales");

  const auto ladder = gradient_energy_ladder(profile, p, geometric_radii(lo, r_max, 16));
  out.slope = log_growth_slope(ladder, lo, r_max).total;
  out.alpha_hat = estimate_alpha(profile).alpha_hat;
  double sum = 0.0;
  for (int i = 0; i < p.n; ++i) {
    const double d = p.degrees[i];
    sum += out.alpha_hat[i] * out.alpha_hat[i] * d * d;
  }
  out.target = 2.0 * std::numbers::pi * sum;
  out.passed = out.target > 0.0 && out.slope >= 0.9 * out.target;
  return out;
}

Thm11Probe thm11_probe(const ModelParams& p, const RadialGrid& grid, const SolverOptions& options) {
  Thm11Probe out;
  ModelParams pg = p;
  pg.r_max = grid.r_max();
  if ((p.degrees.array() == 0).all()) {
    out.stage = "constants-solve";
    out.constants = constants_check(pg, grid, options);
    out.report = out.constants->report;
    out.passed = out.constants->passed;
    out.reason = out.report.converged
                     ? fmt::format("gradient energy {:.3e} after relaxation", out.constants->gradient_energy)
                     : "solver failed: " + to_string(out.report.failure_kind);
    return out;
  }
  out.stage = "vortex-solve";
  auto solved = newton_solve(pg, grid, initial_guess(pg, grid), options);
  out.report = solved.report;
  if (!solved.report.converged) {
    out.reason = "solver failed: " + to_string(solved.report.failure_kind);
    return out;
  }
  out.growth = growth_check(solved.profile, pg);
  out.passed = out.growth->passed;
  out.reason = fmt::format("log-growth slope {:.6g} vs 0.9 x {:.6g}", out.growth->slope,
                           out.growth->target);
  return out;
}

}  // namespace glv
