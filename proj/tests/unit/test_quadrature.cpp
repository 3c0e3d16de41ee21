#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rcbound/quadrature.hpp"

using namespace rcb::quad;

TEST_CASE("gaussian integral over the real line") {
  const auto r = integrate([](double x) { return std::exp(-0.5 * x * x); }, Domain::full_line());
  REQUIRE(r.ok());
  CHECK(r.value == doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("half line and shifted half line") {
  auto r = integrate([](double x) { return std::exp(-x); }, Domain::half_line(0.0));
  REQUIRE(r.ok());
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  r = integrate([](double x) { return std::exp(-(x - 3.0)); }, Domain::half_line(3.0));
  REQUIRE(r.ok());
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integrable endpoint singularity") {
  const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, Domain::interval(0.0, 1.0));
  REQUIRE(r.ok());
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("kinks at breakpoints") {
  const auto r = integrate([](double x) { return std::exp(-std::abs(x - 0.7)); }, Domain::full_line(), {0.7});
  REQUIRE(r.ok());
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("divergent integrals are never reported as converged") {
  CHECK_FALSE(integrate([](double x) { return 1.0 / x; }, Domain::interval(0.0, 1.0)).ok());
  CHECK_FALSE(integrate([](double x) { return 1.0 / x; }, Domain::half_line(1.0)).ok());
  CHECK_FALSE(integrate([](double) { return 1.0; }, Domain::full_line()).ok());
}

TEST_CASE("log-space integration beyond the double range") {
  // int_0^inf y^400 e^{-y} dy = 400!, far above DBL_MAX
  const auto r = integrate_exp([](double y) { return y > 0.0 ? 400.0 * std::log(y) - y : -INFINITY; },
                               Domain::half_line(0.0));
  REQUIRE(r.ok);
  CHECK(r.log_value == doctest::Approx(std::lgamma(401.0)).epsilon(1e-11));
}

TEST_CASE("linearity") {
  const auto f = [](double x) { return std::exp(-x * x); };
  const auto g = [](double x) { return 1.0 / (1.0 + x * x); };
  for (double a : {-2.0, 0.5, 3.0}) {
    for (double b : {-1.0, 0.25, 4.0}) {
      const auto lhs = integrate([&](double x) { return a * f(x) + b * g(x); }, Domain::full_line());
      const auto rf = integrate(f, Domain::full_line());
      const auto rg = integrate(g, Domain::full_line());
      REQUIRE(lhs.ok());
      CHECK(lhs.value == doctest::Approx(a * rf.value + b * rg.value).epsilon(1e-10));
    }
  }
  CHECK(integrate(g, Domain::full_line()).value == doctest::Approx(std::numbers::pi).epsilon(1e-11));
}
