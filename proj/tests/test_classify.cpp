#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "glvortex/classify.hpp"

#include <cmath>
#include <numbers>

using namespace glv;
using std::numbers::pi;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

constexpr Finiteness F = Finiteness::Finite;
constexpr Finiteness I = Finiteness::Infinite;
constexpr Finiteness U = Finiteness::Inconclusive;

ProfileSet fake_pair(const RadialGrid& g) {
  const auto a = single_gl_solve(1.0, 1, g);
  const auto b = single_gl_solve(1.0, 2, g);
  REQUIRE(a.report.converged);
  REQUIRE(b.report.converged);
  Eigen::MatrixXd values(2, g.size());
  values.row(0) = a.profile.values.row(0);
  values.row(1) = b.profile.values.row(0);
  Eigen::VectorXi d(2);
  d << 1, 2;
  return make_profile(g, values, d);
}

}  // namespace

TEST_CASE("classification examples") {
  auto r = classify({F, F}, vec({1, 1}));
  CHECK(r.label == CaseLabel::P1);
  CHECK(r.l == 2);
  CHECK(r.k == 0);

  r = classify({F, I}, vec({1, 1}));
  CHECK(r.label == CaseLabel::InvalidK1);
  CHECK(to_string(r.label) == "invalid(k=1)");

  r = classify({F, I, I}, vec({std::sqrt(3.0), 0, 0}));
  CHECK(r.label == CaseLabel::P3);
  CHECK(r.l == 1);
  CHECK(r.k == 2);

  r = classify({F, F}, vec({std::sqrt(2.0), 0}));
  CHECK(r.label == CaseLabel::P2);
  CHECK(r.l == 1);

  r = classify({F, F}, vec({std::sqrt(2.0), 1e-7}));
  CHECK(r.label == CaseLabel::P2);

  CHECK(classify({I, I}, vec({1, 1})).label == CaseLabel::P4);
  CHECK(classify({F, U}, vec({1, 1})).label == CaseLabel::Inconclusive);
  CHECK(classify({F, F}, vec({0, 0})).label == CaseLabel::Inconclusive);
}

TEST_CASE("exactly the k = 1 flag vectors are rejected") {
  const Finiteness all[] = {F, I, U};
  int rejected = 0;
  int expected = 0;
  for (int n = 1; n <= 4; ++n) {
    int combos = 1;
    for (int k = 0; k < n; ++k) combos *= 3;
    for (int code = 0; code < combos; ++code) {
      std::vector<Finiteness> flags;
      int c = code;
      for (int k = 0; k < n; ++k, c /= 3) flags.push_back(all[c % 3]);
      const int infinite = static_cast<int>(std::count(flags.begin(), flags.end(), I));
      const bool open = std::count(flags.begin(), flags.end(), U) > 0;
      const auto r = classify(flags, Eigen::VectorXd::Ones(n));
      const bool is_k1 = infinite == 1 && !open;
      expected += is_k1;
      rejected += r.label == CaseLabel::InvalidK1;
      CHECK((r.label == CaseLabel::InvalidK1) == is_k1);
      if (r.label == CaseLabel::P3) {
        CHECK(r.l <= n - 2);
        CHECK(r.k >= 2);
      }
      if (open) CHECK(r.label == CaseLabel::Inconclusive);
    }
  }
  CHECK(rejected == expected);
  CHECK(rejected == 1 + 2 + 3 + 4);
}

TEST_CASE("P3 never occurs for two components") {
  for (auto a : {F, I})
    for (auto b : {F, I}) CHECK(classify({a, b}, vec({1, 1})).label != CaseLabel::P3);
}

TEST_CASE("estimate_alpha") {
  const auto g = make_grid(100.0, 2000);
  const auto flat = make_profile(g, Eigen::MatrixXd::Constant(2, g.size(), 1.0), Eigen::VectorXi::Zero(2),
                                 Provenance::Solved);
  const auto exact = estimate_alpha(flat);
  CHECK(exact.alpha_hat[0] == 1.0);
  CHECK(exact.deviation == 0.0);

  const auto one = single_gl_solve(1.0, 1, g);
  CHECK(std::abs(estimate_alpha(one.profile).alpha_hat[0] - 1.0) <= 1e-3);

  const auto oracle = scaled_oracle(2, 1.0, 1, g);
  const auto a = estimate_alpha(oracle.profile);
  CHECK(std::abs(a.alpha_hat[0] - 1.0) <= 1e-3);
  CHECK(std::abs(a.alpha_hat[1] - 1.0) <= 1e-3);
  CHECK(std::abs(a.deviation) <= 5e-3);

  const auto bad = make_profile(g, Eigen::MatrixXd::Ones(1, g.size()), Eigen::VectorXi::Zero(1),
                                Provenance::Unconverged);
  CHECK_THROWS_AS(estimate_alpha(bad), RefusedInput);
}

TEST_CASE("classify_profile on a single vortex") {
  const auto g = make_grid(100.0, 2000);
  const auto s = single_gl_solve(1.0, 1, g);
  const auto r = classify_profile(s.profile);
  CHECK(r.label == CaseLabel::P1);
  CHECK(r.flags.size() == 1);
}

TEST_CASE("Wronskian identity") {
  const auto g = make_grid(100.0, 2000);
  const auto p = make_params({1, 1}, {1, 1}, {1, 1}, 100);
  const auto oracle = scaled_oracle(2, 1.0, 1, g);
  CHECK(wronskian_identity_check(oracle.profile, p, 0, 1).max_residual <= 1e-8);
  CHECK_THROWS_AS(wronskian_identity_check(oracle.profile, p, 1, 1), std::invalid_argument);

  const auto q = make_params({1, 1}, {1, 2}, {1, 1}, 100);
  CHECK(wronskian_identity_check(fake_pair(g), q, 0, 1).max_residual >= 0.1);
}

TEST_CASE("Wronskian identity refines on the mixed solve") {
  const auto p = make_params({1, 4}, {2, 1}, {1, 1}, 100);
  double prev = 0.0;
  for (int m : {1000, 2000}) {
    const auto c = continuation_solve(p, ContinuationSchedule::radius_ramp(25.0, 100.0, m));
    if (!c.report.converged) return;
    const double res = wronskian_identity_check(c.profile, p, 0, 1).max_residual;
    MESSAGE("M = " << m << " Wronskian residual " << res);
    if (prev > 0.0) CHECK(prev / res >= 3.0);
    prev = res;
  }
}

TEST_CASE("unequal-degree probe verdicts") {
  const auto g = make_grid(100.0, 2000);
  const auto q = make_params({1, 1}, {1, 2}, {1, 1}, 100);
  const auto fake = thm12_probe(fake_pair(g), q);
  CHECK(fake.verdict == Thm12Probe::Verdict::ContradictionDetected);
  CHECK(std::abs(fake.c0) > 3.0 * fake.c0_stderr);
  CHECK(to_string(fake.verdict) == "contradiction_detected");

  const auto p = make_params({1, 1}, {1, 1}, {1, 1}, 100);
  const auto equal = thm12_probe(scaled_oracle(2, 1.0, 1, g).profile, p);
  CHECK(equal.verdict == Thm12Probe::Verdict::NoObstruction);

  const auto mixed = make_params({1, 4}, {2, 1}, {1, 1}, 100);
  const auto refused = thm12_probe(fake_pair(g), mixed);
  CHECK(refused.verdict == Thm12Probe::Verdict::Refused);
  CHECK_FALSE(refused.reason.empty());
}

TEST_CASE("unequal-degree probe refuses a tail that dips below half the limit") {
  const auto g = make_grid(100.0, 400);
  Eigen::MatrixXd values = Eigen::MatrixXd::Ones(2, g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k)
    if (g[k] > 60.0 && g[k] < 70.0) values(1, k) = 0.2;
  Eigen::VectorXi d(2);
  d << 1, 2;
  const auto probe = thm12_probe(make_profile(g, values, d), make_params({1, 1}, {1, 2}, {1, 1}, 100));
  CHECK(probe.verdict == Thm12Probe::Verdict::Refused);
}

TEST_CASE("constants-or-growth probe: constants branch") {
  const auto g = make_grid(100.0, 2000);
  const auto probe = thm11_probe(make_params({1, 3}, {0, 0}, {1, 1}, 100), g);
  CHECK(probe.stage == "constants-solve");
  REQUIRE(probe.constants.has_value());
  CHECK(probe.passed);
  CHECK(probe.constants->gradient_energy <= 1e-8);
  CHECK(probe.constants->max_deviation <= 1e-8);
}

TEST_CASE("constants-or-growth probe: vortex branch") {
  const auto g = make_grid(100.0, 2000);
  const auto probe = thm11_probe(make_params({1}, {1}, {1}, 100), g);
  CHECK(probe.stage == "vortex-solve");
  REQUIRE(probe.growth.has_value());
  CHECK(probe.passed);
  CHECK(probe.growth->slope == doctest::Approx(2 * pi).epsilon(0.02));

  const auto p = make_params({1, 1}, {1, 1}, {1, 1}, 100);
  const auto oracle = scaled_oracle(2, 1.0, 1, g);
  const auto growth = growth_check(oracle.profile, p);
  CHECK(growth.passed);
  CHECK(growth.slope == doctest::Approx(4 * pi).epsilon(0.02));
}
