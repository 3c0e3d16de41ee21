#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rcbound/bounds.hpp"
#include "rcbound/errors.hpp"
#include "rcbound/families.hpp"
#include "rcbound/fisher.hpp"

using namespace rcb;

namespace {

double gaussian_lp(double p) {
  return std::exp((0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) - 0.5 * std::log(std::numbers::pi)) / p);
}

double R(double p) { return p == 2.0 ? 1.0 : 1.77638 * p / (std::numbers::e * std::log(p)); }

}  // namespace

TEST_CASE("Lp information by quadrature") {
  const auto g = make_family("gaussian-shift");
  for (double p : {1.0, 2.0, 2.5, 3.0, 4.0, 6.0, 12.0})
    CHECK(fisher_p(*g, 0.7, p).value.value() == doctest::Approx(gaussian_lp(p)).epsilon(1e-10));
  const auto l = make_family("laplace-shift");
  for (double p : {1.0, 2.0, 9.0}) CHECK(fisher_p(*l, 0.0, p).value.value() == doctest::Approx(1.0).epsilon(1e-12));
  const auto e = make_family("exponential-scale");
  CHECK(fisher_p(*e, 2.0, 2.0).value.value() == doctest::Approx(0.5).epsilon(1e-12));
  // weibull-tail(m): E|l|^p diverges for p >= m
  const auto w = make_family("weibull-tail(3)");
  CHECK(fisher_p(*w, 0.0, 2.5).value.is_finite());
  CHECK(fisher_p(*w, 0.0, 3.0).value.is_infinite());
  CHECK_THROWS_AS(fisher_p(*e, -1.0, 2.0), DomainError);
}

TEST_CASE("information scales as 1/theta in a scale family") {
  const auto e = make_family("exponential-scale");
  for (double p : {2.0, 3.0, 5.0}) {
    const double base = fisher_p(*e, 1.0, p).value.value();
    for (double t : {0.25, 4.0}) CHECK(fisher_p(*e, t, p).value.value() == doctest::Approx(base / t).epsilon(1e-10));
  }
}

TEST_CASE("Monte Carlo information agrees with quadrature") {
  const auto g = make_family("gaussian-shift");
  const auto r = fisher_p_mc(*g, 0.0, 4.0, 200000, Stream{8, 9}, 2);
  CHECK(std::abs(r.value.value() - std::pow(3.0, 0.25)) < 4.0 * r.error_estimate);
}

TEST_CASE("GLS and B(phi) information") {
  const auto g = make_family("gaussian-shift");
  const std::vector<double> grid{2.0, 3.0, 4.0, 8.0, 16.0};
  double oracle = 0.0;
  for (double p : grid) oracle = std::max(oracle, gaussian_lp(p) / std::sqrt(p));
  const auto r = fisher_gls(g, 0.0, PsiFunction::psi_m(2.0), grid);
  CHECK(r.value.value() == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(fisher_bphi(g, 0.0, PhiFunction::phi_2()).value.value() == doctest::Approx(1.0).epsilon(1e-9));
  // mgf of the score Z is l^2/2 = phi(l tau) with phi = l^2 at tau = 1/sqrt 2
  CHECK(fisher_bphi(g, 0.0, PhiFunction::quadratic(1.0)).value.value() ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
  const auto l = make_family("laplace-shift");
  CHECK(fisher_bphi(l, 0.0, PhiFunction::phi_2()).value.value() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(fisher_bphi(make_family("weibull-tail(4)"), 0.0, PhiFunction::phi_2()), DomainError);
}

TEST_CASE("aggregated information") {
  const std::vector<double> i{1.0, 2.0, 2.0};
  const auto a = sample_fisher_agg(i, 1.5);
  CHECK(a.aggregated == doctest::Approx(1.5 * 3.0));
  CHECK(a.naive == doctest::Approx(5.0));
}

TEST_CASE("constants") {
  CHECK(rosenthal_bound(2.0) == 1.0);
  for (double p : {2.5, 3.0, 4.0, 8.0, 100.0}) CHECK(rosenthal_bound(p) == doctest::Approx(R(p)).epsilon(1e-14));
  CHECK(kb_constant(8.0) == doctest::Approx(1.7768 * 8.0 / (std::numbers::e * std::log(8.0))));
  CHECK_THROWS_AS(rosenthal_bound(1.5), DomainError);
  CHECK_THROWS_AS(kb_constant(2.0), DomainError);
}

TEST_CASE("Lp lower bound") {
  const auto g = make_family("gaussian-shift");
  const auto b2 = lower_bound_lp(*g, 0.0, 2.0);
  CHECK(b2.has_bound);
  CHECK(b2.bound == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b2.statement_norm == "L_2");
  const auto b43 = lower_bound_lp(*g, 0.0, 4.0 / 3.0);
  CHECK(b43.bound == doctest::Approx(1.0 / (R(4.0) * std::pow(3.0, 0.25))).epsilon(1e-10));
  CHECK(std::abs(b43.bound - 0.4030) < 1e-4);
  CHECK_THROWS_AS(lower_bound_lp(*g, 0.0, 2.5), DomainError);
  CHECK_THROWS_AS(lower_bound_lp(*g, 0.0, 1.0), DomainError);
  // infinite information leaves no bound
  const auto w = lower_bound_lp(*make_family("weibull-tail(2)"), 0.0, 2.0);
  CHECK_FALSE(w.has_bound);
}

TEST_CASE("lower bounds scale with theta in a scale family") {
  const auto e = make_family("exponential-scale");
  for (double q : {1.25, 1.5, 2.0}) {
    const double base = lower_bound_lp(*e, 1.0, q).bound;
    for (double t : {0.5, 3.0}) CHECK(lower_bound_lp(*e, t, q).bound == doctest::Approx(t * base).epsilon(1e-10));
  }
}

TEST_CASE("GLS and B(phi) lower bounds") {
  const auto l = make_family("laplace-shift");
  const auto b = lower_bound_gls(l, 0.0, PsiFunction::constant(1.0, 8.0));
  CHECK(b.bound == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.statement_norm == "G'(psi_R)");
  REQUIRE(b.finite_b_bound);
  CHECK(*b.finite_b_bound == doctest::Approx(1.0 / kb_constant(8.0)).epsilon(1e-12));
  const auto g = make_family("gaussian-shift");
  const auto bp = lower_bound_bphi(g, 0.0, PhiFunction::phi_2());
  CHECK(bp.bound == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(bp.statement_norm == "B'(bar phi)");
  CHECK_FALSE(bp.phi_bar_diverged.value_or(true));
  CHECK(general_lower_bound(Extended::finite(4.0)).bound == 0.25);
  CHECK_FALSE(general_lower_bound(Extended::infinity()).has_bound);
}
