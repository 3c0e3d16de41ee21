#include <cmath>

#include "doctest.h"
#include "rcbound/bounds.hpp"
#include "rcbound/config.hpp"
#include "rcbound/distribution.hpp"
#include "rcbound/errors.hpp"
#include "rcbound/families.hpp"
#include "rcbound/montecarlo.hpp"

using namespace rcb;

TEST_CASE("maximum likelihood on small samples") {
  const std::vector<double> a{0.0, 1.0, 2.0};
  CHECK(mle_estimate(*make_family("gaussian-shift"), a) == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<double> b{1.0, 3.0};
  CHECK(mle_estimate(*make_family("exponential-scale"), b) == doctest::Approx(2.0).epsilon(1e-12));
  const std::vector<double> c{0.0, 0.0, 5.0};
  CHECK(mle_estimate(*make_family("laplace-shift"), c) == 0.0);
  // the gaussian MLE is the sample mean
  auto eng = Stream{1, 1}.engine(0);
  const auto xs = make_family("gaussian-shift")->sample(0.3, 257, eng);
  CHECK(mle_estimate(*make_family("gaussian-shift"), xs) == doctest::Approx(sample_mean(xs)).epsilon(1e-12));
}

TEST_CASE("deviation norms against exact laws") {
  const auto g = make_family("gaussian-shift");
  for (std::size_t n : {1u, 7u, 50u}) {
    const auto d = deviation_norm(*g, 0.0, EstimatorKind::SampleMean, n, NormSpec::lp(2.0), 40000, Stream{2, n}, 2);
    CHECK(std::abs(d.value.value() - 1.0) < 4.0 * d.standard_error);
  }
  const auto e = make_family("exponential-scale");
  const auto d = deviation_norm(*e, 1.0, EstimatorKind::SampleMean, 400, NormSpec::lp(2.0), 20000, Stream{3, 3}, 2);
  CHECK(std::abs(d.value.value() - 1.0) < 4.0 * d.standard_error);
}

TEST_CASE("CLT norm of Rademacher sums") {
  const std::vector<std::size_t> grid{1, 2, 4, 8, 16, 32, 64};
  const auto est = clt_norm_estimate(make_distribution("rademacher"), NormSpec::lp(4.0), grid, 40000, Stream{4, 4}, 2);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double exact = std::pow(3.0 - 2.0 / static_cast<double>(grid[i]), 0.25);
    CAPTURE(grid[i]);
    if (est.standard_errors[i] == 0.0)
      CHECK(est.values[i].value() == doctest::Approx(exact));
    else
      CHECK(std::abs(est.values[i].value() - exact) < 4.0 * est.standard_errors[i]);
  }
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(est.running_sup[i].value() >= est.running_sup[i - 1].value());
  CHECK_FALSE(est.diverged);
}

TEST_CASE("CLT norm requires a centered law") {
  CHECK_THROWS_AS(clt_norm_estimate(make_distribution("uniform"), NormSpec::lp(2.0), {1, 2}, 1000, Stream{1, 1}),
                  DomainError);
}

TEST_CASE("probe verdicts") {
  const std::vector<std::size_t> grid{1, 4, 16, 64, 256};
  const auto ok = wnri_probe(make_distribution("normal"), NormSpec::lp(2.0), grid, 20000, Stream{5, 5});
  CHECK(ok.verdict == ProbeVerdict::WNRIConsistent);
  const auto bad = wnri_probe(make_distribution("symmetric-stable(1.25)"), NormSpec::lp(1.0),
                              {1, 4, 16, 64, 256, 1024}, 20000, Stream{6, 6});
  CHECK(bad.verdict == ProbeVerdict::DivergenceDetected);
  // 1/alpha - 1/2
  CHECK(std::abs(bad.estimate.growth_exponent - 0.3) < 0.1);
}

TEST_CASE("Rosenthal ratios for Rademacher p = 4") {
  const std::vector<std::size_t> grid{1, 4, 16, 64};
  const auto r = rosenthal_empirical_check(make_distribution("rademacher"), 4.0, grid, 40000, Stream{7, 7});
  CHECK(r.constant == doctest::Approx(rosenthal_bound(4.0)));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double exact = std::pow(3.0 - 2.0 / static_cast<double>(grid[i]), 0.25) / rosenthal_bound(4.0);
    if (r.ratio_se[i] > 0.0) CHECK(std::abs(r.ratios[i] - exact) < 4.0 * r.ratio_se[i]);
  }
  CHECK(r.max_ratio < 1.0);
}

namespace {

Scenario small_scenario() {
  Scenario s;
  s.family = "gaussian-shift";
  s.n_grid = {5, 20};
  s.reps = 4000;
  s.seed = 99;
  return s;
}

}  // namespace

TEST_CASE("verify_bound is bit-identical across worker counts") {
  const auto s = small_scenario();
  const auto ref = to_json_line(report_to_json(verify_bound(s, 1)));
  for (int w : {2, 3, 8}) CHECK(to_json_line(report_to_json(verify_bound(s, w))) == ref);
}

TEST_CASE("verify_bound equality case never reports a violation") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    auto s = small_scenario();
    s.seed = seed;
    const auto r = verify_bound(s, 2);
    CHECK(r.verdict != Verdict::Violated);
    CHECK(r.rhs == doctest::Approx(1.0));
  }
}

TEST_CASE("seeds and stream identity") {
  auto s = small_scenario();
  s.seed.reset();
  CHECK_THROWS_AS(scenario_stream(s), UsageError);
  CHECK_THROWS_AS(verify_bound(s), UsageError);
  auto a = small_scenario();
  auto b = small_scenario();
  b.jsonl_path = "elsewhere.jsonl";
  CHECK(scenario_stream(a).tag == scenario_stream(b).tag);
  b.reps += 1;
  CHECK(scenario_stream(a).tag != scenario_stream(b).tag);
}

TEST_CASE("scenario validation") {
  auto s = small_scenario();
  s.reps = 999;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = small_scenario();
  s.q = 2.5;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = small_scenario();
  s.n_grid = {20, 5};
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = small_scenario();
  s.pairing = PairingKind::GLS;
  CHECK_THROWS_AS(s.validate(), UsageError);
}

TEST_CASE("pairing modes report Holds or Inconclusive only") {
  auto s = small_scenario();
  s.family = "laplace-shift";
  s.pairing = PairingKind::GLS;
  s.psi.expr = "const(1,8)";
  s.p_grid = {2, 4, 8};
  const auto r = verify_bound(s, 2);
  CHECK((r.verdict == Verdict::Holds || r.verdict == Verdict::Inconclusive));
  CHECK(r.rows.size() == 2);
  s.pairing = PairingKind::Bphi;
  s.family = "gaussian-shift";
  s.phi.expr = "phi_2";
  const auto rb = verify_bound(s, 2);
  CHECK((rb.verdict == Verdict::Holds || rb.verdict == Verdict::Inconclusive));
}

TEST_CASE("upper mode flags no trend for the gaussian MLE") {
  auto s = small_scenario();
  s.mode = VerifyMode::Upper;
  s.estimator = EstimatorKind::MLE;
  s.n_grid = {8, 32, 128, 512};
  s.reps = 5000;
  const auto r = verify_bound(s, 2);
  REQUIRE(r.trend_slope);
  CHECK(std::abs(*r.trend_slope) < 0.05);
  CHECK(r.verdict == Verdict::Holds);
}
