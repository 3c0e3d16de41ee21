#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rcbound/distribution.hpp"
#include "rcbound/errors.hpp"
#include "rcbound/norms.hpp"

using namespace rcb;

namespace {

double gaussian_lp(double p) {
  return std::exp((0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) - 0.5 * std::log(std::numbers::pi)) / p);
}

std::vector<double> draws(const char* id, std::size_t n, std::uint64_t seed) {
  auto eng = Stream{seed, 77}.engine(0);
  return draw_sample(make_distribution(id), n, eng);
}

std::vector<double> scaled(std::vector<double> v, double c) {
  for (double& x : v) x *= c;
  return v;
}

}  // namespace

TEST_CASE("analytic Lp norms") {
  const auto z = make_distribution("normal");
  for (double p : {1.0, 2.0, 3.0, 4.0, 7.5}) CHECK(lp_norm(z, p).value() == doctest::Approx(gaussian_lp(p)).epsilon(1e-10));
  const auto u = make_distribution("uniform");
  for (double p : {1.0, 2.0, 5.0}) CHECK(lp_norm(u, p).value() == doctest::Approx(std::pow(1.0 / (p + 1.0), 1.0 / p)));
  CHECK(lp_norm(make_distribution("rademacher"), 9.0).value() == doctest::Approx(1.0));
  CHECK(lp_norm(make_distribution("symmetric-stable(1.5)"), 2.0).is_infinite());
}

TEST_CASE("empirical Lp norm is nondecreasing in p (Lyapunov)") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto x = draws("laplace", 2000, seed);
    double prev = 0.0;
    for (double p = 1.0; p <= 12.0; p += 0.5) {
      const double v = lp_norm(x, p);
      CHECK(v >= prev * (1.0 - 1e-14));
      prev = v;
    }
    const auto curve = empirical_moment_curve(x, default_p_grid(16.0));
    CHECK(is_lyapunov_monotone(curve, 1e-12));
  }
}

TEST_CASE("norms are absolutely homogeneous") {
  const auto x = draws("normal", 3000, 9);
  const NormSpec specs[] = {NormSpec::lp(1.5), NormSpec::lp(4.0), NormSpec::lorentz(2.0, 1.0),
                            NormSpec::lorentz(3.0, INFINITY), NormSpec::gls(PsiFunction::psi_m(2.0), {2, 4, 8})};
  for (const auto& s : specs) {
    const double base = empirical_norm(x, s).value.value();
    for (double c : {-3.0, 0.5, 8.0}) {
      CAPTURE(s.describe());
      CAPTURE(c);
      CHECK(empirical_norm(scaled(x, c), s).value.value() == doctest::Approx(std::abs(c) * base).epsilon(1e-7));
    }
  }
}

TEST_CASE("B(phi) homogeneity up to lambda-grid resolution") {
  const auto x = draws("normal", 3000, 9);
  const auto s = NormSpec::bphi(PhiFunction::phi_2());
  const double base = empirical_norm(x, s).value.value();
  for (double c : {-3.0, 0.5, 2.0}) {
    CAPTURE(c);
    CHECK(empirical_norm(scaled(x, c), s).value.value() == doctest::Approx(std::abs(c) * base).epsilon(0.03));
  }
}

TEST_CASE("Holder inequality bounds the pairing") {
  const auto a = draws("laplace", 5000, 1);
  const auto b = draws("centered-exponential", 5000, 2);
  for (double p : {1.5, 2.0, 3.0, 6.0}) {
    const double q = p / (p - 1.0);
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e += a[i] * b[i];
    e = std::abs(e) / static_cast<double>(a.size());
    CHECK(e <= lp_norm(a, p) * lp_norm(b, q) * (1.0 + 1e-12));
    const auto pr = associate_pairing_lb(b, {std::span<const double>(a)}, NormSpec::lp(p));
    CHECK(pr.value <= lp_norm(b, q) * (1.0 + 1e-12));
  }
}

TEST_CASE("associate pairing attains |tau|_2 when the test equals the target") {
  const auto t = draws("normal", 4000, 3);
  const auto pr = associate_pairing_lb(t, {std::span<const double>(t)}, NormSpec::lp(2.0));
  CHECK(pr.value == doctest::Approx(lp_norm(t, 2.0)).epsilon(1e-12));
}

TEST_CASE("GLS norm of the normal law") {
  const auto z = make_distribution("normal");
  const auto grid = default_p_grid(64.0);
  const auto psi = PsiFunction::psi_m(2.0);
  double oracle = 0.0;
  for (double p : grid) oracle = std::max(oracle, gaussian_lp(p) / std::sqrt(p));
  const auto g = gls_norm(analytic_moment_curve(z, grid), psi);
  CHECK(g.value.value() == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(psi(g.argmax_p) > 0.0);
  // constant psi on [1,2] gives the L2 norm
  CHECK(gls_norm(analytic_moment_curve(z, std::vector<double>{1.0, 1.5, 2.0}), PsiFunction::constant(1.0, 2.0))
            .value.value() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("GLS norm is infinite when a moment diverges") {
  const auto s = make_distribution("symmetric-stable(1.5)");
  const auto g = gls_norm(analytic_moment_curve(s, std::vector<double>{1.0, 1.2, 2.0}), PsiFunction::constant(1.0, 4.0));
  CHECK(g.value.is_infinite());
}

TEST_CASE("B(phi) norms") {
  const auto grid = default_lambda_grid();
  const auto normal = bphi_norm(MgfSource::analytic(make_distribution("normal")), PhiFunction::phi_2(), grid);
  CHECK(normal.value.value() == doctest::Approx(1.0).epsilon(1e-9));
  // log cosh(l) <= l^2 / 2 with equality to second order at 0; the smallest
  // grid lambda limits the resolution
  const auto rad = bphi_norm(MgfSource::analytic(make_distribution("rademacher")), PhiFunction::phi_2(), grid);
  CHECK(rad.value.value() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rad.value.value() <= 1.0 + 1e-12);
  const auto lap = bphi_norm(MgfSource::analytic(make_distribution("laplace")), PhiFunction::phi_2(), grid);
  CHECK(lap.value.is_infinite());
}

TEST_CASE("Lorentz quasinorms") {
  for (double p : {1.0, 2.0, 3.0}) {
    const auto x = draws("laplace", 1000, static_cast<std::uint64_t>(p));
    CHECK(lorentz_quasinorm(x, p, p) == doctest::Approx(lp_norm(x, p)).epsilon(1e-12));
  }
  CHECK(lorentz_quasinorm(make_distribution("uniform"), 1.0, INFINITY).value() == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(lorentz_quasinorm(make_distribution("point-mass(2.5)"), 2.0, INFINITY).value() == doctest::Approx(2.5));
  // weak L1 of the uniform law for p = 2: sup t (1 - t)^{1/2} = 2 / (3 sqrt 3)
  CHECK(lorentz_quasinorm(make_distribution("uniform"), 2.0, INFINITY).value() ==
        doctest::Approx(2.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-8));
  CHECK(lorentz_quasinorm(make_distribution("uniform"), 2.0, 2.0).value() ==
        doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-9));
}

TEST_CASE("Lorentz classification") {
  CHECK(lorentz_snri_classify(3.0, 3.0) == NormalClass::StrongNormal);
  CHECK(lorentz_snri_classify(2.0, 2.0) == NormalClass::StrongNormal);
  CHECK(lorentz_snri_classify(4.0, INFINITY) == NormalClass::StrongNormal);
  CHECK(lorentz_snri_classify(1.0, INFINITY) == NormalClass::NotStrongNormal);
  CHECK(lorentz_snri_classify(3.0, 1.5) == NormalClass::NotStrongNormal);
  CHECK_THROWS(lorentz_snri_classify(0.5, 1.0));
}

TEST_CASE("moment growth test separates light and heavy tails") {
  const auto heavy = draws("symmetric-stable(1.5)", 200000, 4);
  const auto light = draws("normal", 200000, 5);
  CHECK(moment_growth_test(heavy, 2.0).diverges);
  CHECK_FALSE(moment_growth_test(light, 4.0).diverges);
}

TEST_CASE("GLS tail envelope decreases") {
  const auto env = gls_tail_bound(Extended::finite(1.0), 2.0);
  double prev = INFINITY;
  for (double x = env.threshold; x < 50.0; x += 1.0) {
    const double v = env(x);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("norm spec validation") {
  CHECK_THROWS_AS(NormSpec::lp(0.5).validate(), DomainError);
  CHECK_THROWS_AS(NormSpec::gls(PsiFunction::constant(1.0, 4.0), {8.0}).validate(), DomainError);
  CHECK_THROWS_AS(NormSpec::gls(PsiFunction::psi_m(2.0), {4.0, 2.0}).validate(), DomainError);
  CHECK(NormSpec::lp(3.0).describe() == "L_3");
}
