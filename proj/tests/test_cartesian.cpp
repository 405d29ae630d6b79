#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "glvortex/cartesian.hpp"

#include <cmath>

using namespace glv;

namespace {

Field plane_wave() {
  Eigen::VectorXd a(2);
  a << 1.0, std::sqrt(0.75);
  return PlaneWaveField(a, 0.5, 1.0);
}

}  // namespace

TEST_CASE("default plan is a fixed Halton set inside the box") {
  const auto a = default_plan();
  const auto b = default_plan();
  REQUIRE(a.points.size() == 64);
  CHECK(a.h == 1e-3);
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    CHECK(a.points[k] == b.points[k]);
    CHECK(a.points[k].cwiseAbs().maxCoeff() <= 3.0);
  }
  // first Halton point in bases (2, 3): (1/2, 1/3)
  CHECK(a.points[0].x() == doctest::Approx(0.0));
  CHECK(a.points[0].y() == doctest::Approx(-1.0));
}

TEST_CASE("plan validation") {
  CHECK_THROWS_AS(default_plan(1e-6), std::invalid_argument);
  CHECK_THROWS_AS(default_plan(0.2), std::invalid_argument);
  SamplePlan p{{Eigen::Vector2d(std::nan(""), 0.0)}, 1e-3};
  CHECK_THROWS_AS(validate_plan(p), std::invalid_argument);
  const auto ring = annulus_plan(0.5, 2.0, 20);
  CHECK(ring.points.size() == 20);
  for (const auto& pt : ring.points) {
    CHECK(pt.norm() >= 0.5);
    CHECK(pt.norm() <= 2.0);
  }
}

TEST_CASE("constant field residual vanishes for any lambda") {
  Eigen::VectorXcd c(3);
  c << std::complex<double>(0.6, 0.8), std::complex<double>(0.0, 1.0), 1.0;
  Eigen::VectorXd lambdas(3);
  lambdas << 0.3, 1.0, 7.0;
  CHECK(residual_2d(ConstantField(c), lambdas, default_plan()).max_residual <= 1e-12);
}

TEST_CASE("plane wave residual is second order in h") {
  const Eigen::VectorXd lambdas = Eigen::VectorXd::Ones(2);
  const double coarse = residual_2d(plane_wave(), lambdas, default_plan(1e-3)).max_residual;
  const double fine = residual_2d(plane_wave(), lambdas, default_plan(5e-4)).max_residual;
  CHECK(coarse <= 1e-5);
  CHECK(coarse / fine >= 3.0);
  // Leading stencil error: lambda omega^4 h^2 / 12 times the amplitude.
  CHECK(coarse <= 0.0625 * 1e-6 / 12.0 * 1.01);
}

TEST_CASE("plane wave with unequal lambdas is not a solution") {
  Eigen::VectorXd lambdas(2);
  lambdas << 1.0, 2.0;
  CHECK(residual_2d(plane_wave(), lambdas, default_plan()).max_residual >= 0.1);
}

TEST_CASE("swirl field is a non-solution at every step") {
  const Eigen::VectorXd lambdas = Eigen::VectorXd::Ones(2);
  double prev = 0.0;
  for (double h : {1e-3, 5e-4, 2.5e-4}) {
    const auto r = residual_2d(SwirlField(2), lambdas, annulus_plan(0.5, 2.0, 32, h));
    CHECK(r.max_residual >= 0.1);
    CHECK(r.location.norm() >= 0.5);
    if (prev > 0.0) CHECK(r.max_residual == doctest::Approx(prev).epsilon(1e-3));
    prev = r.max_residual;
  }
  CHECK(residual_2d(SwirlField(2), lambdas, default_plan()).max_residual >= 0.1);
}

TEST_CASE("lambdas must match the field") {
  CHECK_THROWS_AS(residual_2d(SwirlField(3), Eigen::VectorXd::Ones(2), default_plan()), std::invalid_argument);
}
