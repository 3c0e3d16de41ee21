#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rcbound/bounds.hpp"
#include "rcbound/errors.hpp"
#include "rcbound/families.hpp"
#include "rcbound/transforms.hpp"

using namespace rcb;

TEST_CASE("Young-Fenchel transforms with closed forms") {
  const auto c2 = young_fenchel(PhiFunction::phi_2());
  for (double u : {-3.0, -0.5, 0.0, 0.7, 4.0}) CHECK(c2(u) == doctest::Approx(0.5 * u * u).epsilon(1e-12));
  for (double c : {0.25, 3.0}) {
    // (c l^2)* = u^2 / (4c)
    const auto cq = young_fenchel(PhiFunction::quadratic(c));
    for (double u : {-2.0, 1.0, 5.0}) CHECK(cq(u) == doctest::Approx(u * u / (4.0 * c)).epsilon(1e-10));
  }
  const auto c4 = young_fenchel([](double l) { return l * l * l * l; }, -10.0, 10.0);
  for (double u : {0.5, 2.0, 9.0}) CHECK(c4(u) == doctest::Approx(3.0 * std::pow(u / 4.0, 4.0 / 3.0)).epsilon(1e-10));
  // cosh: conjugate u asinh u - sqrt(1 + u^2)
  const auto ch = young_fenchel([](double l) { return std::cosh(l); }, -30.0, 30.0);
  for (double u : {0.0, 1.0, 10.0})
    CHECK(ch(u) == doctest::Approx(u * std::asinh(u) - std::sqrt(1.0 + u * u)).epsilon(1e-10));
}

TEST_CASE("biconjugate recovers a convex function") {
  const auto phi = PhiFunction::power(3.0);
  const auto star = young_fenchel(phi);
  const auto ss = young_fenchel([&](double u) { return star(u); }, -100.0, 100.0);
  for (double l : {-2.0, -0.5, 0.0, 1.0, 2.5}) CHECK(ss(l) == doctest::Approx(phi(l)).epsilon(1e-7));
}

TEST_CASE("conjugate is convex and flags boundary maximizers") {
  const auto c = young_fenchel(PhiFunction::log_cosh());
  const auto grid = linear_grid(-0.99, 0.99, 41);
  const auto t = c.table(grid);
  CHECK(t.convex);
  CHECK(is_convex_sequence(t.u, t.value));
  // beyond |u| = 1 the log-cosh conjugate is infinite; the search hits its edge
  CHECK(c.evaluate(2.0).boundary);
  CHECK_FALSE(c.evaluate(0.5).boundary);
}

TEST_CASE("non-convex input is rejected") {
  const auto bad = PhiFunction::unchecked_grid({0.0, 1.0, 2.0, 3.0}, {0.0, 2.0, 2.5, 2.7});
  CHECK_THROWS_AS(young_fenchel(bad), DomainError);
  CHECK_THROWS_AS(PhiFunction::grid({0.0, 1.0, 2.0, 3.0}, {0.0, 2.0, 2.5, 2.7}), DomainError);
  CHECK_THROWS_AS(PhiFunction::power(1.5), DomainError);
}

TEST_CASE("bar phi") {
  const auto phi = PhiFunction::phi_2();
  const auto bar = phi_bar(phi);
  for (double l : default_lambda_grid()) CHECK(bar(l) == phi(l));
  const auto q = PhiFunction::quadratic(0.7);
  for (double l : {0.1, 1.0, 30.0}) CHECK(phi_bar(q)(l) == q(l));
  // n log cosh(l / sqrt n) increases to l^2 / 2
  const auto lc = phi_bar(PhiFunction::log_cosh());
  for (double l : {0.5, 2.0, 6.0}) {
    const auto v = lc.evaluate(l);
    CHECK_FALSE(v.diverged);
    CHECK(v.value >= std::log(std::cosh(l)));
    CHECK(v.value <= 0.5 * l * l * (1.0 + 1e-9));
    CHECK(v.value == doctest::Approx(0.5 * l * l).epsilon(1e-3));
  }
  // phi(l) = l^4 / 4 on small l: n phi(l / sqrt n) decreases, so bar phi = phi
  const auto p4 = PhiFunction::power(4.0);
  for (double l : {0.5, 3.0}) CHECK(phi_bar(p4)(l) == doctest::Approx(p4(l)));
}

TEST_CASE("bar phi diverges for a table linear near zero") {
  const auto lin = PhiFunction::unchecked_grid({0.0, 1e-9, 1.0, 2.0}, {0.0, 1e-9, 1.0, 2.0});
  const auto v = phi_bar(lin).evaluate(1.0);
  CHECK(v.diverged);
  CHECK(std::isinf(phi_bar(lin).as_phi()(1.0)));
}

TEST_CASE("psi transforms") {
  const auto r = psi_R(PsiFunction::constant(1.0, 16.0));
  CHECK(r.support_lo() == 2.0);
  CHECK(r.support_B() == 16.0);
  CHECK(r(2.0) == 1.0);
  CHECK(r(4.0) == doctest::Approx(rosenthal_bound(4.0)));
  CHECK(rosenthal_bound(4.0) == doctest::Approx(1.77638 * 4.0 / (std::numbers::e * std::log(4.0))));
  // phi_2^{-1}(p) = sqrt(2p), so psi_phi(p) = sqrt(p / 2)
  const auto pp = psi_from_phi(PhiFunction::phi_2());
  for (double p : {1.0, 2.0, 9.0, 50.0}) CHECK(pp(p) == doctest::Approx(std::sqrt(p / 2.0)).epsilon(1e-10));
}

TEST_CASE("natural psi") {
  const auto lap = natural_psi(make_family("laplace-shift"), {});
  for (double p : {1.0, 2.0, 7.0, 100.0}) CHECK(lap(p) == doctest::Approx(1.0).epsilon(1e-12));
  // the gaussian score is x - theta, so psi_0(p) = |Z|_p
  const auto g = natural_psi(make_family("gaussian-shift"), {});
  for (double p : {2.0, 4.0, 10.0}) {
    const double oracle =
        std::exp((0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) - 0.5 * std::log(std::numbers::pi)) / p);
    CHECK(g(p) == doctest::Approx(oracle).epsilon(1e-10));
  }
  // weibull-tail(m): the score has a pole, so the support ends below m
  const auto w = natural_psi(make_family("weibull-tail(4)"), {});
  CHECK(w.support_B() < 4.0);
  CHECK(w.support_B() > 2.0);
}

TEST_CASE("scale reduction matches the direct integral") {
  const auto e = make_family("exponential-scale");
  for (double theta : {0.5, 1.0, 3.0}) {
    const auto psi = natural_psi(e, {theta, 2.0 * theta});
    for (double p : {2.0, 3.5, 12.0, 200.0}) {
      const auto direct = natural_integral_direct(*e, theta, p);
      CHECK(psi(p) == doctest::Approx(direct.value()).epsilon(1e-9));
      CHECK(scale_reduced_integral(*e, p).value() / theta == doctest::Approx(direct.value()).epsilon(1e-9));
    }
  }
  // [int |1 - y|^2 e^{-y} dy]^{1/2} = 1
  CHECK(scale_reduced_integral(*e, 2.0).value() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("natural phi") {
  NaturalPhiOptions opts;
  opts.lambda_grid = {0.25, 0.5, 1.0, 2.0, 4.0};
  const auto g = natural_phi(make_family("gaussian-shift"), {}, opts);
  for (double l : opts.lambda_grid) {
    CHECK(g(l) == doctest::Approx(0.5 * l * l).epsilon(1e-9));
    CHECK(g(-l) == g(l));
  }
  CHECK(std::isinf(g.lambda0()));
  // laplace score is a sign: log cosh
  const auto lap = natural_phi(make_family("laplace-shift"), {}, opts);
  for (double l : opts.lambda_grid) CHECK(lap(l) == doctest::Approx(std::log(std::cosh(l))).epsilon(1e-9));
  // exponential-scale score (x/theta - 1)/theta: mgf finite for lambda < theta
  const auto e = natural_phi(make_family("exponential-scale"), {1.0}, opts);
  CHECK(e.lambda0() == 1.0);
  CHECK(e(0.5) == doctest::Approx(-0.5 - std::log(0.5)).epsilon(1e-9));
}
