#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rcbound/errors.hpp"
#include "rcbound/families.hpp"
#include "rcbound/quadrature.hpp"

using namespace rcb;

namespace {

double fd_score(const Family& f, double x, double theta) {
  const double h = 1e-5 * std::max(1.0, std::abs(theta));
  return (f.log_density(x, theta + h) - f.log_density(x, theta - h)) / (2.0 * h);
}

struct Case {
  const char* id;
  double theta;
  std::vector<double> xs;
};

const std::vector<Case> kCases{
    {"gaussian-shift", 0.3, {-2.5, -0.4, 0.0, 1.1, 3.7}},
    {"laplace-shift", -0.5, {-3.0, -1.2, 0.2, 2.4}},
    {"exponential-scale", 1.7, {0.05, 0.8, 2.0, 6.5}},
    {"weibull-tail(4)", 0.0, {0.3, 0.9, 1.4, 2.5}},
    {"weibull-tail(2.5)", 1.0, {1.2, 1.9, 2.8}},
};

}  // namespace

TEST_CASE("scores agree with finite differences of the log-density") {
  for (const auto& c : kCases) {
    const auto f = make_family(c.id);
    for (double x : c.xs) {
      CAPTURE(c.id);
      CAPTURE(x);
      CHECK(f->score(x, c.theta) == doctest::Approx(fd_score(*f, x, c.theta)).epsilon(1e-6));
      CHECK(f->density_dtheta(x, c.theta) ==
            doctest::Approx(f->score(x, c.theta) * f->density(x, c.theta)).epsilon(1e-10));
    }
  }
}

TEST_CASE("densities integrate to one and scores to zero") {
  for (const auto& c : kCases) {
    const auto f = make_family(c.id);
    const auto sup = f->support(c.theta);
    const auto dom = std::isfinite(sup.lo) ? quad::Domain::half_line(sup.lo) : quad::Domain::full_line();
    auto bp = f->breakpoints(c.theta);
    const auto mass = quad::integrate([&](double x) { return sup.contains_closed(x) ? f->density(x, c.theta) : 0.0; },
                                      dom, bp);
    CAPTURE(c.id);
    REQUIRE(mass.ok());
    CHECK(mass.value == doctest::Approx(1.0).epsilon(1e-10));
    const auto sm = quad::integrate(
        [&](double x) { return sup.contains(x) ? f->score(x, c.theta) * f->density(x, c.theta) : 0.0; }, dom, bp);
    REQUIRE(sm.ok());
    CHECK(std::abs(sm.value) < 1e-8);
  }
}

TEST_CASE("shift and scale equivariance of the score") {
  const auto g = make_family("gaussian-shift");
  const auto l = make_family("laplace-shift");
  for (double c : {-1.5, 0.0, 2.25}) {
    for (double x : {-1.0, 0.3, 2.0}) {
      CHECK(g->score(x + c, c) == doctest::Approx(g->score(x, 0.0)));
      CHECK(l->score(x + c, 0.1 + c) == doctest::Approx(l->score(x, 0.1)));
    }
  }
  const auto e = make_family("exponential-scale");
  for (double s : {0.5, 2.0, 7.0})
    for (double x : {0.2, 1.0, 3.0}) CHECK(s * e->score(s * x, s) == doctest::Approx(e->score(x, 1.0)).epsilon(1e-12));
}

TEST_CASE("sampler moments") {
  const int n = 200000;
  auto eng = Stream{11, 12}.engine(0);
  const auto e = make_family("exponential-scale");
  double s1 = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = e->draw(2.0, eng);
    s1 += x;
    s2 += x * x;
  }
  CHECK(std::abs(s1 / n - 2.0) < 4.0 * 2.0 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 8.0) < 4.0 * std::sqrt(320.0 - 64.0) / std::sqrt(n));

  const auto l = make_family("laplace-shift");
  double v = 0;
  for (int i = 0; i < n; ++i) {
    const double x = l->draw(0.0, eng);
    v += x * x;
  }
  CHECK(std::abs(v / n - 2.0) < 4.0 * std::sqrt(24.0 - 4.0) / std::sqrt(n));
}

namespace {

// P(|X| > x) for the symmetric stable law exp(-|t|^alpha), by Fourier inversion:
// 1 - (2/pi) int_0^inf sin(t x) / t exp(-t^alpha) dt
double stable_two_sided_tail(double alpha, double x) {
  const auto r = quad::integrate(
      [&](double t) { return t == 0.0 ? x : std::sin(t * x) / t * std::exp(-std::pow(t, alpha)); },
      quad::Domain::interval(0.0, 60.0), {}, 1e-14, 1e-12);
  return 1.0 - 2.0 / std::numbers::pi * r.value;
}

}  // namespace

TEST_CASE("symmetric-stable sampler matches the Fourier tail") {
  CHECK(stable_two_sided_tail(2.0, 1.0) == doctest::Approx(std::erfc(0.5)).epsilon(1e-8));
  CHECK(stable_two_sided_tail(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-8));
  const std::size_t n = 100000;
  for (double alpha : {1.5, 1.75}) {
    auto eng = Stream{21, static_cast<std::uint64_t>(alpha * 100)}.engine(0);
    const auto xs = make_family("symmetric-stable(" + std::to_string(alpha) + ")")->sample(0.0, n, eng);
    for (double x : {0.5, 1.0, 3.0, 8.0}) {
      std::size_t hits = 0;
      for (double v : xs) hits += std::abs(v) > x ? 1 : 0;
      const double p = stable_two_sided_tail(alpha, x);
      const double freq = static_cast<double>(hits) / n;
      CAPTURE(alpha);
      CAPTURE(x);
      CHECK(std::abs(freq - p) < 4.0 * std::sqrt(p * (1 - p) / n));
    }
  }
}

TEST_CASE("tabulated family normalizes and has a consistent score") {
  const auto t = make_tabulated_family("tri", {-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
  const auto mass = quad::integrate([&](double x) { return t->density(x, 0.0); }, quad::Domain::interval(-1.0, 1.0),
                                    {0.0});
  CHECK(mass.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t->score(0.5, 0.0) == doctest::Approx(fd_score(*t, 0.5, 0.0)).epsilon(1e-6));
  CHECK(t->score(-0.3, 0.2) == doctest::Approx(fd_score(*t, -0.3, 0.2)).epsilon(1e-6));
}

TEST_CASE("regularity identities hold for the sample mean") {
  const auto g = make_family("gaussian-shift");
  const auto r = check_regularity(*g, 0.5, sample_mean, 20, 20000, Stream{3, 4}, 2);
  CHECK(std::abs(r.score_mean.mean) < 4.0 * r.score_mean.standard_error);
  CHECK(std::abs(r.unbiasedness_pairing.mean - 1.0) < 4.0 * r.unbiasedness_pairing.standard_error);
  CHECK(std::abs(r.estimator_bias.mean) < 4.0 * r.estimator_bias.standard_error);
}

TEST_CASE("family errors") {
  CHECK_THROWS_AS(make_family("no-such-family"), UsageError);
  const auto e = make_family("exponential-scale");
  CHECK_THROWS_AS(e->density(1.0, -1.0), DomainError);
  const auto s = make_family("symmetric-stable(1.5)");
  CHECK_FALSE(s->has_score());
  CHECK_THROWS_AS(s->score(0.0, 0.0), UnsupportedError);
  CHECK(make_family("weibull-tail(4)")->score_moment_limit() == 4.0);
}
