#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "casrough/error.hpp"
#include "casrough/quadrature.hpp"

using namespace casrough;

namespace {

constexpr double kPi = std::numbers::pi;

struct ClosedForm {
  const char* name;
  Integrand f;
  double a;
  double b;
  double exact;
};

std::vector<ClosedForm> closed_form_suite() {
  return {
      {"constant", [](double) { return 1.0; }, 0.0, 1.0, 1.0},
      {"square", [](double x) { return x * x; }, 0.0, 3.0, 9.0},
      {"exp", [](double x) { return std::exp(-x); }, 0.0, 40.0, 1.0 - std::exp(-40.0)},
      {"sqrt", [](double x) { return std::sqrt(x); }, 0.0, 1.0, 2.0 / 3.0},
      {"peak", [](double x) { return 1.0 / (1e-4 + (x - 0.3) * (x - 0.3)); }, 0.0, 1.0,
       (std::atan(0.7 / 1e-2) + std::atan(0.3 / 1e-2)) / 1e-2},
  };
}

}  // namespace

TEST_CASE("integrate_1d closed forms") {
  QuadratureSpec spec;
  SUBCASE("constant is exact") {
    const auto r = integrate_1d([](double) { return 1.0; }, 0.0, 1.0, spec);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.converged);
  }
  SUBCASE("x^2 on [0,3]") {
    const auto r = integrate_1d([](double x) { return x * x; }, 0.0, 3.0, spec);
    CHECK(std::abs(r.value - 9.0) <= 9.0 * spec.rel_tol);
  }
  SUBCASE("exp(-x) on [0,40]") {
    const auto r = integrate_1d([](double x) { return std::exp(-x); }, 0.0, 40.0, spec);
    CHECK(std::abs(r.value - (1.0 - std::exp(-40.0))) <= spec.rel_tol);
    CHECK(r.converged);
  }
}

TEST_CASE("integrate_semi_infinite closed forms") {
  QuadratureSpec spec;
  const auto e = integrate_semi_infinite([](double x) { return std::exp(-x); }, spec);
  CHECK(std::abs(e.value - 1.0) <= spec.rel_tol);
  const auto lorentz = integrate_semi_infinite(
      [](double x) { return 1.0 / ((1.0 + x * x) * (1.0 + x * x)); }, spec);
  CHECK(std::abs(lorentz.value - kPi / 4.0) <= spec.rel_tol * kPi / 4.0);
  const auto gauss = integrate_semi_infinite([](double x) { return x * x * std::exp(-x * x); }, spec);
  CHECK(std::abs(gauss.value - std::sqrt(kPi) / 4.0) <= spec.rel_tol * std::sqrt(kPi) / 4.0);

  SUBCASE("scale does not change the answer") {
    QuadratureSpec scaled = spec;
    scaled.semi_infinite_scale = 25.0;
    const auto wide = integrate_semi_infinite([](double x) { return std::exp(-x / 25.0); }, scaled);
    CHECK(wide.value == doctest::Approx(25.0).epsilon(1e-6));
  }
}

TEST_CASE("integrate_polar_2d closed forms") {
  QuadratureSpec spec;
  const auto disk = integrate_polar_2d([](double, double) { return 1.0; }, 1.0, spec);
  CHECK(disk.value == doctest::Approx(kPi).epsilon(1e-6));
  const auto gauss = integrate_polar_2d([](double r, double) { return std::exp(-r * r); }, 10.0, spec);
  CHECK(gauss.value == doctest::Approx(kPi * (1.0 - std::exp(-100.0))).epsilon(1e-6));
  const auto separable = integrate_polar_2d(
      [](double r, double t) { return std::cos(t) * std::cos(t) * std::exp(-r); }, 40.0, spec);
  CHECK(separable.value == doctest::Approx(kPi).epsilon(1e-6));

  SUBCASE("mirror symmetry halves the angular range") {
    PolarOptions opts;
    opts.mirror_symmetric = true;
    const auto half = integrate_polar_2d(
        [](double r, double t) { return std::cos(t) * std::cos(t) * std::exp(-r); }, 40.0, spec, opts);
    CHECK(half.value == doctest::Approx(kPi).epsilon(1e-6));
  }
}

TEST_CASE("tolerance honesty and converged contract") {
  QuadratureSpec spec;
  for (const auto& c : closed_form_suite()) {
    CAPTURE(c.name);
    const auto r = integrate_1d(c.f, c.a, c.b, spec);
    CHECK(r.converged);
    CHECK(r.error_estimate <= std::max(spec.abs_tol, spec.rel_tol * std::abs(r.value)));
    // Roundoff floor: the estimate cannot be smaller than a few ulps of the value.
    CHECK(std::abs(r.value - c.exact) <= 3.0 * r.error_estimate + 4e-16 * std::abs(c.exact));
  }
}

TEST_CASE("halving rel_tol does not make things worse") {
  for (const auto& c : closed_form_suite()) {
    CAPTURE(c.name);
    QuadratureSpec coarse;
    coarse.rel_tol = 1e-4;
    QuadratureSpec fine = coarse;
    fine.rel_tol = coarse.rel_tol / 2.0;
    const auto rc = integrate_1d(c.f, c.a, c.b, coarse);
    const auto rf = integrate_1d(c.f, c.a, c.b, fine);
    CHECK(std::abs(rf.value - c.exact) <= std::abs(rc.value - c.exact) + rc.error_estimate);
  }
}

TEST_CASE("determinism: identical inputs give identical bits") {
  QuadratureSpec spec;
  auto f = [](double x) { return std::sin(7.0 * x) * std::exp(-x) / (1.0 + x); };
  const auto a = integrate_1d(f, 0.0, 30.0, spec);
  const auto b = integrate_1d(f, 0.0, 30.0, spec);
  CHECK(a.value == b.value);
  CHECK(a.error_estimate == b.error_estimate);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("non-convergence is reported, not thrown") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  spec.max_subdivisions = 3;
  const auto r = integrate_1d([](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3137)); }, 0.0, 1.0, spec);
  CHECK_FALSE(r.converged);
  CHECK(std::isfinite(r.value));
  CHECK(r.value == doctest::Approx(2.0 * (std::sqrt(0.3137) + std::sqrt(1.0 - 0.3137))).epsilon(0.05));
}

TEST_CASE("non-finite integrand throws") {
  QuadratureSpec spec;
  try {
    integrate_1d([](double) { return std::numeric_limits<double>::quiet_NaN(); }, 0.0, 1.0, spec);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteIntegrand);
  }
}

TEST_CASE("spec validation") {
  QuadratureSpec bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = {};
  bad.max_subdivisions = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = {};
  bad.semi_infinite_scale = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(integrate_1d([](double) { return 1.0; }, 1.0, 0.0, QuadratureSpec{}), Error);
}

TEST_CASE("breakpoints resolve a kink") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-10;
  const std::vector<double> breaks{0.37};
  auto f = [](double x) { return std::abs(x - 0.37); };
  const auto r = integrate_1d(f, 0.0, 1.0, breaks, spec);
  CHECK(r.value == doctest::Approx((0.37 * 0.37 + 0.63 * 0.63) / 2.0).epsilon(1e-12));
  // The split panels are polynomial, so no refinement is needed.
  CHECK(r.evaluations == 42);
}
