#include "glvortex/solver.hpp"

#include "glvortex/banded_lu.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace glv {
namespace {

void check_shape(const ModelParams& p, const ProfileSet& profile) {
  if (profile.values.rows() != p.n || p.lambdas.size() != p.n || p.degrees.size() != p.n ||
      p.alphas.size() != p.n)
    throw std::invalid_argument("profile and params disagree on the component count");
  if (profile.values.cols() != profile.grid.size())
    throw std::invalid_argument("profile values do not match the grid");
}

// b_i from an affine fit of f_i / r^{d_i} against r^2 on the first few nodes.
Eigen::VectorXd estimate_core_coeffs(const RadialGrid& grid, const Eigen::MatrixXd& values,
                                     const Eigen::VectorXi& degrees) {
  const int n = static_cast<int>(values.rows());
  Eigen::VectorXd b(n);
  constexpr int kNodes = 8;
  const Eigen::Index count = std::min<Eigen::Index>(kNodes, grid.size() - 1);
  for (int i = 0; i < n; ++i) {
    const int d = degrees.size() == n ? degrees[i] : 0;
    if (d == 0) {
      b[i] = values(i, 0);
      continue;
    }
    Eigen::MatrixXd design(count, 2);
    Eigen::VectorXd rhs(count);
    for (Eigen::Index k = 0; k < count; ++k) {
      const double r = grid[k + 1];
      design(k, 0) = 1.0;
      design(k, 1) = r * r;
      rhs[k] = values(i, k + 1) / std::pow(r, d);
    }
    b[i] = design.colPivHouseholderQr().solve(rhs)[0];
  }
  return b;
}

double sup_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// Stable ordering of components by (lambda, degree, alpha); solving in this
// order makes the iteration exactly permutation-equivariant.
std::vector<int> canonical_order(const ModelParams& p) {
  std::vector<int> order(static_cast<std::size_t>(p.n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (p.lambdas[a] != p.lambdas[b]) return p.lambdas[a] < p.lambdas[b];
    if (p.degrees[a] != p.degrees[b]) return p.degrees[a] < p.degrees[b];
    return p.alphas[a] < p.alphas[b];
  });
  return order;
}

ModelParams permute(const ModelParams& p, const std::vector<int>& order) {
  ModelParams q = p;
  for (int i = 0; i < p.n; ++i) {
    q.lambdas[i] = p.lambdas[order[i]];
    q.degrees[i] = p.degrees[order[i]];
    q.alphas[i] = p.alphas[order[i]];
  }
  return q;
}

Eigen::MatrixXd permute_rows(const Eigen::MatrixXd& m, const std::vector<int>& order) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.row(i) = m.row(order[i]);
  return out;
}

Eigen::MatrixXd unpermute_rows(const Eigen::MatrixXd& m, const std::vector<int>& order) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.row(order[i]) = m.row(i);
  return out;
}

// Interior rows inside r < 1 hold the Euler form r^2 * ODE, which keeps the
// stencil round-off on the fine core cells below the solver tolerance.
double row_weight(double r) { return std::min(1.0, r * r); }

Eigen::MatrixXd residual_of(const ModelParams& p, const RadialGrid& grid,
                            const Eigen::MatrixXd& values, double t) {
  const int n = p.n;
  const Eigen::Index last = grid.size() - 1;
  const Eigen::MatrixXd ft = values.transpose();
  const Eigen::MatrixXd d1f = grid.d1() * ft;
  const Eigen::MatrixXd d2f = grid.d2() * ft;
  const auto& r = grid.nodes();
  const double total = p.alphas.squaredNorm();

  Eigen::MatrixXd res(n, grid.size());
  for (Eigen::Index k = 1; k < last; ++k) {
    const double sum_sq = values.col(k).squaredNorm();
    const double inv_r = 1.0 / r[k];
    const double w = row_weight(r[k]);
    for (int i = 0; i < n; ++i) {
      const double f = values(i, k);
      const double a2 = p.alphas[i] * p.alphas[i];
      const double potential = t * (total - sum_sq) + (1.0 - t) * (a2 - f * f);
      const double d = p.degrees[i];
      res(i, k) = w * (d2f(k, i) + d1f(k, i) * inv_r - d * d * f * inv_r * inv_r +
                       f * potential / p.lambdas[i]);
    }
  }
  for (int i = 0; i < n; ++i) {
    res(i, 0) = p.degrees[i] >= 1 ? values(i, 0) : d1f(0, i);
    res(i, last) = values(i, last) - p.alphas[i];
  }
  return res;
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
  // node-major: entry (i, k) -> k * n + i, which is column-major storage.
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, Eigen::Index n) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), n, v.size() / n);
}

BandMatrix<double> jacobian_of(const ModelParams& p, const RadialGrid& grid,
                               const Eigen::MatrixXd& values, double t) {
  const int n = p.n;
  const Eigen::Index nodes = grid.size();
  const Eigen::Index last = nodes - 1;
  const auto& r = grid.nodes();
  const double total = p.alphas.squaredNorm();
  // The axis Neumann row reaches two nodes ahead.
  BandMatrix<double> jac(nodes * n, 2 * n, 2 * n);

  for (Eigen::Index k = 1; k < last; ++k) {
    const double sum_sq = values.col(k).squaredNorm();
    const double inv_r = 1.0 / r[k];
    const double w = row_weight(r[k]);
    for (int i = 0; i < n; ++i) {
      const Eigen::Index row = k * n + i;
      for (RowSparse::InnerIterator it(grid.d2(), k); it; ++it)
        jac(row, it.col() * n + i) += w * it.value();
      for (RowSparse::InnerIterator it(grid.d1(), k); it; ++it)
        jac(row, it.col() * n + i) += w * it.value() * inv_r;
      const double d = p.degrees[i];
      const double f = values(i, k);
      const double a2 = p.alphas[i] * p.alphas[i];
      const double potential = t * (total - sum_sq) + (1.0 - t) * (a2 - f * f);
      const double inv_lambda = 1.0 / p.lambdas[i];
      jac(row, row) += w * (-d * d * inv_r * inv_r + potential * inv_lambda);
      for (int j = 0; j < n; ++j) {
        double dpot = -2.0 * t * values(j, k);
        if (j == i) dpot += -2.0 * (1.0 - t) * f;
        jac(row, k * n + j) += w * inv_lambda * f * dpot;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (p.degrees[i] >= 1) {
      jac(i, i) = 1.0;
    } else {
      for (RowSparse::InnerIterator it(grid.d1(), 0); it; ++it)
        jac(i, it.col() * n + i) += it.value();
    }
    jac(last * n + i, last * n + i) = 1.0;
  }
  return jac;
}

double min_off_axis(const Eigen::MatrixXd& values) {
  if (values.cols() < 2) return values.minCoeff();
  return values.rightCols(values.cols() - 1).minCoeff();
}

}  // namespace

std::string to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::None: return "none";
    case FailureKind::MaxIterations: return "MaxIterations";
    case FailureKind::SingularJacobian: return "SingularJacobian";
    case FailureKind::DivergedLineSearch: return "DivergedLineSearch";
  }
  return "unknown";
}

ProfileSet make_profile(RadialGrid grid, Eigen::MatrixXd values, Eigen::VectorXi degrees,
                        Provenance provenance) {
  if (values.cols() != grid.size())
    throw std::invalid_argument("make_profile: values do not match the grid");
  if (degrees.size() != values.rows())
    throw std::invalid_argument("make_profile: one degree per component required");
  ProfileSet out;
  out.derivs = (grid.d1() * values.transpose()).transpose();
  out.core_coeffs = estimate_core_coeffs(grid, values, degrees);
  out.grid = std::move(grid);
  out.values = std::move(values);
  out.degrees = std::move(degrees);
  out.provenance = provenance;
  return out;
}

ProfileSet initial_guess(const ModelParams& p, const RadialGrid& grid) {
  Eigen::MatrixXd values(p.n, grid.size());
  const auto& r = grid.nodes();
  for (int i = 0; i < p.n; ++i) {
    const int d = p.degrees[i];
    if (d == 0) {
      values.row(i).setConstant(p.alphas[i]);
      continue;
    }
    const double s = std::sqrt(p.lambdas[i]) * std::max(d, 1);
    for (Eigen::Index k = 0; k < r.size(); ++k)
      values(i, k) = p.alphas[i] * std::pow(r[k] / std::sqrt(r[k] * r[k] + s * s), d);
  }
  return make_profile(grid, std::move(values), p.degrees);
}

Eigen::MatrixXd ode_residual(const ModelParams& p, const ProfileSet& profile, double homotopy) {
  check_shape(p, profile);
  return residual_of(p, profile.grid, profile.values, homotopy);
}

SolveResult newton_solve(const ModelParams& p, const RadialGrid& grid, const ProfileSet& guess,
                         const SolverOptions& options) {
  check_shape(p, guess);
  if (guess.grid.size() != grid.size())
    throw std::invalid_argument("newton_solve: guess lives on a different grid");
  if (!(options.tol > 0.0)) throw std::invalid_argument("newton_solve: tol must be positive");

  const auto order = canonical_order(p);
  const ModelParams q = permute(p, order);
  const double t = options.homotopy;
  const Eigen::Index n = q.n;

  Eigen::MatrixXd x = permute_rows(guess.values, order);
  Eigen::MatrixXd res = residual_of(q, grid, x, t);
  SolveReport report;
  report.residual_norm = sup_norm(res);

  while (true) {
    if (report.residual_norm <= options.tol) {
      report.converged = true;
      break;
    }
    if (report.iterations >= options.max_iter) {
      report.failure_kind = FailureKind::MaxIterations;
      break;
    }
    BandedLU<double> lu(jacobian_of(q, grid, x, t));
    if (lu.info() != Eigen::Success) {
      report.failure_kind = FailureKind::SingularJacobian;
      break;
    }
    const Eigen::MatrixXd step = unflatten(lu.solve(-flatten(res)), n);
    if (!step.allFinite()) {
      report.failure_kind = FailureKind::SingularJacobian;
      break;
    }

    const double merit = res.norm();
    double factor = 1.0;
    Eigen::MatrixXd trial;
    Eigen::MatrixXd trial_res;
    bool accepted = false;
    while (factor >= options.min_step) {
      trial = x + factor * step;
      trial_res = residual_of(q, grid, trial, t);
      const double trial_merit = trial_res.norm();
      if (std::isfinite(trial_merit) && trial_merit <= (1.0 - options.armijo_c * factor) * merit) {
        accepted = true;
        break;
      }
      factor *= 0.5;
    }
    ++report.iterations;
    report.damping_history.push_back(accepted ? factor : 0.0);
    if (!accepted) {
      report.failure_kind = FailureKind::DivergedLineSearch;
      break;
    }
    x = std::move(trial);
    res = std::move(trial_res);
    report.residual_norm = sup_norm(res);
  }

  Eigen::MatrixXd values = unpermute_rows(x, order);
  report.max_modulus_sum = values.colwise().squaredNorm().maxCoeff();
  report.min_value = min_off_axis(values);
  StageSummary stage;
  stage.r_max = grid.r_max();
  stage.intervals = grid.intervals();
  stage.homotopy = t;
  stage.converged = report.converged;
  stage.iterations = report.iterations;
  stage.residual_norm = report.residual_norm;
  stage.failure_kind = report.failure_kind;
  report.stages.push_back(stage);

  const auto provenance = report.converged ? Provenance::Solved : Provenance::Unconverged;
  return {make_profile(grid, std::move(values), p.degrees, provenance), std::move(report)};
}

ContinuationSchedule ContinuationSchedule::radius_ramp(double r_first, double r_final,
                                                       int intervals, GridMapping mapping) {
  if (!(r_first > 0.0) || !(r_final >= r_first))
    throw std::invalid_argument("radius_ramp: need 0 < r_first <= r_final");
  ContinuationSchedule s;
  s.mapping = mapping;
  for (double r = r_first; r < r_final * (1.0 - 1e-12); r *= 2.0) s.stages.push_back({r, intervals, 1.0});
  s.stages.push_back({r_final, intervals, 1.0});
  return s;
}

ContinuationSchedule ContinuationSchedule::homotopy_ramp(double r_max, int intervals, int steps,
                                                         GridMapping mapping) {
  if (steps < 1) throw std::invalid_argument("homotopy_ramp: steps must be >= 1");
  ContinuationSchedule s;
  s.mapping = mapping;
  for (int k = 0; k <= steps; ++k)
    s.stages.push_back({r_max, intervals, static_cast<double>(k) / steps});
  return s;
}

ProfileSet resample(const ProfileSet& profile, const RadialGrid& grid,
                    const Eigen::VectorXd& alphas) {
  const int n = profile.n();
  Eigen::MatrixXd values(n, grid.size());
  const double old_max = profile.grid.r_max();
  for (int i = 0; i < n; ++i) {
    const MonotoneCubic interp(profile.grid.nodes(), profile.values.row(i).transpose());
    for (Eigen::Index k = 0; k < grid.size(); ++k)
      values(i, k) = grid[k] <= old_max ? interp(grid[k]) : alphas[i];
  }
  return make_profile(grid, std::move(values), profile.degrees, Provenance::Supplied);
}

SolveResult continuation_solve(const ModelParams& p, const ContinuationSchedule& schedule) {
  if (schedule.stages.empty()) throw std::invalid_argument("continuation_solve: empty schedule");
  SolveResult current;
  SolveReport combined;
  for (std::size_t s = 0; s < schedule.stages.size(); ++s) {
    const auto& stage = schedule.stages[s];
    ModelParams ps = p;
    ps.r_max = stage.r_max;
    const RadialGrid grid = make_grid(stage.r_max, stage.intervals, schedule.mapping);
    const ProfileSet guess =
        s == 0 ? initial_guess(ps, grid) : resample(current.profile, grid, p.alphas);
    SolverOptions options = schedule.options;
    options.homotopy = stage.homotopy;
    current = newton_solve(ps, grid, guess, options);

    combined.iterations += current.report.iterations;
    combined.damping_history.insert(combined.damping_history.end(),
                                    current.report.damping_history.begin(),
                                    current.report.damping_history.end());
    combined.stages.insert(combined.stages.end(), current.report.stages.begin(),
                           current.report.stages.end());
    combined.converged = current.report.converged;
    combined.residual_norm = current.report.residual_norm;
    combined.failure_kind = current.report.failure_kind;
    combined.max_modulus_sum = current.report.max_modulus_sum;
    combined.min_value = current.report.min_value;
    if (!current.report.converged) {
      combined.failed_stage = static_cast<int>(s);
      break;
    }
  }
  current.report = std::move(combined);
  return current;
}

SolveResult single_gl_solve(double lambda, int degree, const RadialGrid& grid,
                            const SolverOptions& options) {
  if (!(lambda > 0.0)) throw std::invalid_argument("single_gl_solve: lambda must be positive");
  if (degree < 0) throw std::invalid_argument("single_gl_solve: degree must be nonnegative");
  const ModelParams p = make_params({lambda}, {degree}, {1.0}, grid.r_max());
  return newton_solve(p, grid, initial_guess(p, grid), options);
}

SolveResult scaled_oracle(int n, double lambda, int degree, const RadialGrid& grid,
                          const SolverOptions& options) {
  if (n < 1) throw std::invalid_argument("scaled_oracle: n must be >= 1");
  const double scale = std::sqrt(static_cast<double>(n));
  const RadialGrid wide = n == 1 ? grid : make_grid(scale * grid.r_max(), grid.intervals(), grid.mapping());
  SolveResult single = single_gl_solve(lambda, degree, wide, options);
  if (n == 1) return single;

  const MonotoneCubic interp(wide.nodes(), single.profile.values.row(0).transpose());
  Eigen::MatrixXd values(n, grid.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) values.col(k).setConstant(interp(scale * grid[k]));
  values.col(grid.size() - 1).setConstant(single.profile.values(0, wide.size() - 1));
  SolveResult out;
  out.report = single.report;
  out.report.max_modulus_sum = values.colwise().squaredNorm().maxCoeff();
  out.profile = make_profile(grid, std::move(values), Eigen::VectorXi::Constant(n, degree),
                             single.profile.provenance);
  return out;
}

}  // namespace glv
