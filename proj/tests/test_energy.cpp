#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "glvortex/energy.hpp"

#include <cmath>
#include <numbers>

using namespace glv;
using std::numbers::pi;

namespace {

struct Solved {
  ModelParams p;
  ProfileSet profile;
};

Solved vortex(int d, int m = 2000, double r_max = 100.0) {
  const auto p = make_params({1}, {d}, {1}, r_max);
  const auto g = make_grid(r_max, m);
  auto s = single_gl_solve(1.0, d, g);
  REQUIRE(s.report.converged);
  return {p, s.profile};
}

Solved constants() {
  const auto p = make_params({1, 3}, {0, 0}, {1, 1}, 100);
  const auto g = make_grid(100.0, 500);
  return {p, make_profile(g, Eigen::MatrixXd::Ones(2, g.size()), p.degrees, Provenance::Solved)};
}

}  // namespace

TEST_CASE("constants carry no energy") {
  const auto c = constants();
  const auto e = potential_energy(c.profile, c.p);
  CHECK(e.e_truncated == 0.0);
  CHECK(e.tail_coeff == 0.0);
  CHECK(e.e_estimate == 0.0);
  const auto ia = i_alpha(c.profile, 0, 1.0);
  CHECK(ia.value_truncated == 0.0);
  CHECK(ia.verdict == Finiteness::Finite);
  CHECK_FALSE(ia.tail_exponent.has_value());
  const auto ladder = gradient_energy_ladder(c.profile, c.p, geometric_radii(10, 100, 8));
  CHECK(ladder.per_component.cwiseAbs().maxCoeff() <= 1e-20);
  CHECK(std::abs(log_growth_slope(ladder, 20, 100).total) <= 1e-20);
  CHECK(pohozaev_residual(c.profile, c.p).residual.cwiseAbs().maxCoeff() <= 1e-20);
  const auto report = energy_report(c.profile, c.p);
  CHECK(report.potential.e_estimate <= 1e-8);
  REQUIRE(report.slope.has_value());
  CHECK(std::abs(report.slope->total) <= 1e-6);
  CHECK(std::abs(report.slope->weighted) <= 1e-6);
}

TEST_CASE("tail extrapolation on an algebraic profile") {
  // n - f^2 = 1/(1 + r^2): the full-plane integral of its square is pi.
  const auto p = make_params({1}, {0}, {1}, 100);
  const auto g = make_grid(100.0, 2000);
  const Eigen::VectorXd f = (1.0 - (1.0 + g.nodes().array().square()).inverse()).sqrt();
  const auto profile = make_profile(g, f.transpose(), p.degrees);
  const auto e = potential_energy(profile, p);
  CHECK(e.e_truncated == doctest::Approx(pi * (1.0 - 1.0 / (1.0 + 1e4))).epsilon(1e-4));
  CHECK(e.tail_coeff == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(e.e_estimate - pi) <= 2e-4);
  CHECK(e.e_truncated <= e.e_estimate);
}

TEST_CASE("single vortex potential energy and far-field verdicts") {
  const auto s = vortex(1);
  const auto e = potential_energy(s.profile, s.p);
  CHECK(std::abs(e.e_estimate - 2 * pi) / (2 * pi) <= 0.01);
  CHECK(e.tail_coeff == doctest::Approx(1.0).epsilon(0.05));

  const auto own = i_alpha(s.profile, 0, 1.0);
  CHECK(own.verdict == Finiteness::Finite);
  REQUIRE(own.tail_exponent.has_value());
  CHECK(*own.tail_exponent == doctest::Approx(-2.0).epsilon(0.1));

  const auto wrong = i_alpha(s.profile, 0, 0.5);
  CHECK(wrong.verdict == Finiteness::Infinite);
  CHECK_THROWS_AS(i_alpha(s.profile, 1, 1.0), std::invalid_argument);
}

TEST_CASE("degree two quantisation") {
  const auto s = vortex(2);
  const auto r = energy_report(s.profile, s.p);
  CHECK(r.rel_error <= 0.015);
  CHECK(r.quantized_target == doctest::Approx(8 * pi).epsilon(1e-15));
  CHECK(r.lambda_d2[0] == 4.0);
  CHECK(r.h_infinity == 1.0);
}

TEST_CASE("gradient energy grows by 2 pi ln 2 per doubling") {
  const auto s = vortex(1);
  Eigen::VectorXd radii(2);
  radii << 40.0, 80.0;
  const auto ladder = gradient_energy_ladder(s.profile, s.p, radii);
  const double jump = ladder.per_component(0, 1) - ladder.per_component(0, 0);
  CHECK(jump == doctest::Approx(2 * pi * std::log(2.0)).epsilon(0.02));
  Eigen::VectorXd beyond(1);
  beyond << 101.0;
  CHECK_THROWS_AS(gradient_energy_ladder(s.profile, s.p, beyond), std::invalid_argument);
}

TEST_CASE("ladder is nondecreasing and grows at most linearly") {
  const auto s = vortex(1);
  const auto radii = geometric_radii(0.5, 100.0, 24);
  const auto ladder = gradient_energy_ladder(s.profile, s.p, radii);
  const Eigen::VectorXd total = ladder.total();
  for (Eigen::Index l = 1; l < total.size(); ++l) CHECK(total[l] >= total[l - 1]);
  const double first = total[0] / radii[0];
  for (Eigen::Index l = 0; l < total.size(); ++l) CHECK(total[l] / radii[l] <= 10.0 * first);
}

TEST_CASE("log-growth slope of the single vortex") {
  const auto s = vortex(1);
  const auto ladder = gradient_energy_ladder(s.profile, s.p, geometric_radii(20, 100, 16));
  const auto slope = log_growth_slope(ladder, 20, 100);
  CHECK(slope.points == 16);
  CHECK(std::abs(slope.total - 2 * pi) / (2 * pi) <= 0.02);
  CHECK(slope.weighted == doctest::Approx(slope.total).epsilon(1e-15));
  CHECK_THROWS_AS(log_growth_slope(ladder, 20, 21), RefusedInput);
  CHECK_THROWS_AS(log_growth_slope(ladder, 5, 100), RefusedInput);
}

TEST_CASE("oracle pair: weighted slope and energy agree") {
  const auto p = make_params({1, 1}, {1, 1}, {1, 1}, 100);
  const auto g = make_grid(100.0, 2000);
  const auto o = scaled_oracle(2, 1.0, 1, g);
  REQUIRE(o.report.converged);
  const auto r = energy_report(o.profile, p);
  CHECK(r.rel_error <= 0.01);
  REQUIRE(r.slope.has_value());
  CHECK(r.slope->weighted == doctest::Approx(4 * pi).epsilon(0.02));
  CHECK(std::abs(r.slope->weighted - r.potential.e_estimate) / r.potential.e_estimate <= 0.05);
  for (Eigen::Index l = 1; l < r.energy_at_ladder.size(); ++l)
    CHECK(r.energy_at_ladder[l] >= r.energy_at_ladder[l - 1]);
  for (const auto& ia : r.i_alpha) CHECK(ia.value_truncated >= 0.0);
}

TEST_CASE("Pohozaev residual refines at second order") {
  const auto coarse = vortex(1, 2000);
  const auto fine = vortex(1, 4000);
  const auto a = pohozaev_residual(coarse.profile, coarse.p);
  const auto b = pohozaev_residual(fine.profile, fine.p);
  CHECK(a.max_abs <= 1e-4);
  CHECK(a.max_abs / b.max_abs >= 3.0);
  CHECK(a.residual[0] == 0.0);
  CHECK(a.argmax >= 5);
}

TEST_CASE("Pohozaev residual flags the swirl moduli") {
  const auto p = make_params({1, 1}, {0, 0}, {1, 1}, 2.0);
  const auto g = make_grid(2.0, 400);
  Eigen::MatrixXd values(2, g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const double rho = g[k] * g[k];
    values(0, k) = std::sqrt(2.0) * std::abs(std::sin(rho));
    values(1, k) = std::sqrt(2.0) * std::abs(std::cos(rho));
  }
  const auto swirl = make_profile(g, values, p.degrees);
  CHECK(pohozaev_residual(swirl, p).max_abs >= 0.1);
}

TEST_CASE("unconverged profiles are refused") {
  const auto p = make_params({1}, {1}, {1}, 10);
  const auto g = make_grid(10.0, 64);
  const auto bad = make_profile(g, Eigen::MatrixXd::Ones(1, g.size()), p.degrees, Provenance::Unconverged);
  CHECK_THROWS_AS(potential_energy(bad, p), RefusedInput);
  CHECK_THROWS_AS(pohozaev_residual(bad, p), RefusedInput);
  CHECK_THROWS_AS(energy_report(bad, p), RefusedInput);
}

TEST_CASE("mixed lambda run: quantised if it converges") {
  const auto p = make_params({1, 4}, {2, 1}, {1, 1}, 100);
  const auto c = continuation_solve(p, ContinuationSchedule::radius_ramp(25.0, 100.0, 2000));
  if (!c.report.converged) {
    CHECK(c.report.failure_kind != FailureKind::None);
    return;
  }
  const auto r = energy_report(c.profile, p, EnergyOptions{geometric_radii(20, 100, 16)});
  CHECK(r.quantized_target == doctest::Approx(16 * pi).epsilon(1e-15));
  CHECK(r.rel_error <= 0.02);
  REQUIRE(r.slope.has_value());
  CHECK(std::abs(r.slope->weighted - r.potential.e_estimate) / r.potential.e_estimate <= 0.05);
}
