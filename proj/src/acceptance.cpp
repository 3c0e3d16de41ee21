#include "rcbound/acceptance.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "rcbound/bounds.hpp"
#include "rcbound/config.hpp"
#include "rcbound/distribution.hpp"
#include "rcbound/errors.hpp"
#include "rcbound/families.hpp"
#include "rcbound/fisher.hpp"
#include "rcbound/montecarlo.hpp"
#include "rcbound/norms.hpp"
#include "rcbound/transforms.hpp"

namespace rcb {

namespace {

using Clock = std::chrono::steady_clock;

std::string num(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

std::vector<std::size_t> pow2_grid(std::size_t hi) {
  std::vector<std::size_t> g;
  for (std::size_t n = 1; n <= hi; n *= 2) g.push_back(n);
  return g;
}

// E|Z|^p for a standard normal Z
double gaussian_abs_moment(double p) {
  return std::exp(0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) - 0.5 * std::log(std::numbers::pi));
}

struct Outcome {
  bool passed = false;
  std::string detail;
};

Scenario criterion1_scenario(std::uint64_t seed) {
  Scenario s;
  s.family = "gaussian-shift";
  s.theta0 = 0.0;
  s.estimator = EstimatorKind::SampleMean;
  s.pairing = PairingKind::Lp;
  s.q = 2.0;
  s.n_grid = {10, 100, 1000};
  s.reps = 100000;
  s.seed = seed;
  return s;
}

Outcome c1_rao_cramer(const AcceptanceOptions& o) {
  const auto t0 = Clock::now();
  const auto r = verify_bound(criterion1_scenario(o.seed), o.workers);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  Outcome out{true, ""};
  for (const auto& row : r.rows) {
    const double ratio = row.lhs / r.rhs;
    if (!(ratio >= 0.99 && ratio <= 1.01)) out.passed = false;
    out.detail += "n=" + std::to_string(row.n) + " lhs/rhs=" + num(ratio) + " ";
  }
  if (r.verdict == Verdict::Violated) out.passed = false;
  if (secs >= 60.0) out.passed = false;
  out.detail += "verdict=" + std::string(to_string(r.verdict)) + " runtime=" + num(secs, 3) + "s (< 60s)";
  return out;
}

Outcome c2_strict(const AcceptanceOptions& o) {
  Scenario s = criterion1_scenario(o.seed);
  s.q = 4.0 / 3.0;
  s.n_grid = {100};
  const auto r = verify_bound(s, o.workers);
  const double lhs = r.rows.at(0).lhs;
  const bool ok = std::abs(lhs - 0.8703) <= 0.01 && std::abs(r.rhs - 0.4030) <= 1e-4 && r.verdict == Verdict::Holds;
  return {ok, "lhs=" + num(lhs) + " (0.8703 +- 0.01) rhs=" + num(r.rhs) + " (0.4030 +- 1e-4) verdict=" +
                  std::string(to_string(r.verdict))};
}

Outcome c3_fisher(const AcceptanceOptions&) {
  const auto fam = make_family("gaussian-shift");
  double worst = 0.0;
  for (double p : {2.0, 2.5, 3.0, 4.0, 6.0}) {
    const auto v = fisher_p(*fam, 0.0, p).value;
    const double oracle = std::pow(gaussian_abs_moment(p), 1.0 / p);
    const double rel = v.is_infinite() ? INFINITY : std::abs(v.value() - oracle) / oracle;
    worst = std::max(worst, rel);
  }
  return {worst <= 1e-6, "max relative error " + num(worst, 3) + " over p in {2,2.5,3,4,6} (<= 1e-6)"};
}

Outcome c4_natural(const AcceptanceOptions&) {
  const auto grid = default_p_grid();
  const auto laplace = natural_psi(make_family("laplace-shift"), {});
  double worst_l = 0.0;
  for (double p : grid) worst_l = std::max(worst_l, std::abs(laplace(p) - 1.0));

  const auto expo = make_family("exponential-scale");
  const std::vector<double> thetas{0.5, 1.0, 1.5, 2.0, 4.0};
  double worst_e = 0.0;
  std::size_t checked = 0;
  for (double t : thetas) {
    const auto psi = natural_psi(expo, {t});
    for (double p : grid) {
      if (p > psi.support_B()) break;
      const auto direct = natural_integral_direct(*expo, t, p);
      if (direct.is_infinite()) {
        worst_e = INFINITY;
        continue;
      }
      worst_e = std::max(worst_e, std::abs(psi(p) - direct.value()) / direct.value());
      ++checked;
    }
  }
  const bool ok = worst_l <= 1e-8 && worst_e <= 1e-8 && checked > 0;
  return {ok, "laplace max |psi-1|=" + num(worst_l, 3) + "; exponential reduced vs direct max rel=" + num(worst_e, 3) +
                  " over " + std::to_string(checked) + " (theta,p) points (<= 1e-8)"};
}

Outcome c5_young_fenchel(const AcceptanceOptions&) {
  const auto conj2 = young_fenchel(PhiFunction::phi_2());
  double e2 = 0.0;
  for (double u = -5.0; u <= 5.0; u += 0.25) e2 = std::max(e2, std::abs(conj2(u) - 0.5 * u * u));

  const auto conj4 = young_fenchel([](double l) { return l * l * l * l; }, -10.0, 10.0);
  double e4 = 0.0;
  for (double u = -20.0; u <= 20.0; u += 0.5)
    e4 = std::max(e4, std::abs(conj4(u) - 3.0 * std::pow(std::abs(u) / 4.0, 4.0 / 3.0)));

  const auto phi = PhiFunction::log_cosh();
  const auto star = young_fenchel(phi);
  const auto star_star = young_fenchel([&](double u) { return star(u); }, -1.0 + 1e-9, 1.0 - 1e-9);
  double ess = 0.0;
  for (double l = -2.0; l <= 2.0; l += 0.125) ess = std::max(ess, std::abs(star_star(l) - phi(l)));

  const bool ok = e2 <= 1e-8 && e4 <= 1e-6 && ess <= 1e-6;
  return {ok, "phi_2 self-conjugacy " + num(e2, 3) + " (<= 1e-8); lambda^4 conjugate " + num(e4, 3) +
                  " (<= 1e-6); log-cosh biconjugate " + num(ess, 3) + " (<= 1e-6)"};
}

Outcome c6_phi_bar(const AcceptanceOptions&) {
  const auto phi = PhiFunction::phi_2();
  const auto bar = phi_bar(phi);
  std::size_t mismatches = 0;
  const auto grid = default_lambda_grid();
  for (double l : grid)
    for (double s : {-1.0, 1.0})
      if (bar(s * l) != phi(s * l)) ++mismatches;
  return {mismatches == 0, std::to_string(mismatches) + " mismatches over " + std::to_string(2 * grid.size()) +
                               " signed grid points (exact equality)"};
}

Outcome c7_rosenthal(const AcceptanceOptions& o) {
  const std::vector<double> ps{2.0, 3.0, 4.0, 8.0};
  Outcome out{true, ""};
  for (const char* id : {"rademacher", "normal", "centered-exponential"}) {
    const auto dist = make_distribution(id);
    const auto reports = rosenthal_empirical_check(dist, ps, pow2_grid(1024), 100000,
                                                   Stream{o.seed, hash_string(std::string("rosenthal/") + id)}, o.workers);
    double max_hi = 0.0;
    double worst_z2 = 0.0;
    for (const auto& r : reports) {
      if (r.p == 2.0) {
        for (std::size_t i = 0; i < r.ratios.size(); ++i) {
          const double dev = std::abs(r.ratios[i] - 1.0);
          // a Rademacher sum at n = 1 has |S|^2 = 1 on every replicate
          const double z = r.ratio_se[i] > 0.0 ? dev / r.ratio_se[i] : (dev <= 1e-12 ? 0.0 : INFINITY);
          worst_z2 = std::max(worst_z2, z);
        }
      } else {
        max_hi = std::max(max_hi, r.max_ratio);
      }
    }
    if (!(max_hi < 1.0) || !(worst_z2 <= 3.0)) out.passed = false;
    out.detail += std::string(id) + ": max ratio p>2 " + num(max_hi, 4) + ", p=2 worst |r-1|/SE " + num(worst_z2, 3) + "; ";
  }
  return out;
}

Outcome c8_stable(const AcceptanceOptions& o) {
  const auto t0 = Clock::now();
  const auto pr = wnri_probe(make_distribution("symmetric-stable(1.5)"), NormSpec::lp(1.0), pow2_grid(4096), 100000,
                             Stream{o.seed, hash_string("probe/symmetric-stable(1.5)/lp(1)")}, o.workers);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const double g = pr.estimate.growth_exponent;
  const bool ok =
      pr.verdict == ProbeVerdict::DivergenceDetected && std::abs(g - 1.0 / 6.0) <= 0.05 && secs < 300.0;
  return {ok, std::string(to_string(pr.verdict)) + " exponent=" + num(g, 4) + " +- " +
                  num(pr.estimate.growth_exponent_se, 2) + " (1/6 +- 0.05) runtime=" + num(secs, 3) + "s (< 300s)"};
}

Outcome c9_clt_gaussian(const AcceptanceOptions& o) {
  const auto est = clt_norm_estimate(make_distribution("normal"), NormSpec::lp(4.0), pow2_grid(1024), 100000,
                                     Stream{o.seed, hash_string("clt/normal/lp(4)")}, o.workers);
  const double target = std::pow(3.0, 0.25);
  double worst = 0.0;
  for (std::size_t i = 0; i < est.values.size(); ++i) {
    if (est.values[i].is_infinite()) return {false, "infinite estimate"};
    worst = std::max(worst, std::abs(est.values[i].value() - target) / est.standard_errors[i]);
  }
  return {worst <= 3.0, "worst |value - 3^(1/4)|/SE = " + num(worst, 3) + " over " +
                            std::to_string(est.values.size()) + " n values (<= 3)"};
}

Outcome c10_mle_trend(const AcceptanceOptions& o) {
  Scenario s;
  s.family = "gaussian-shift";
  s.estimator = EstimatorKind::MLE;
  s.mode = VerifyMode::Upper;
  s.upper_norm = "lp(4)";
  s.n_grid = {16, 32, 64, 128, 256, 512, 1024};
  s.reps = 10000;
  s.seed = o.seed;
  const auto r = verify_bound(s, o.workers);
  const double slope = r.trend_slope.value_or(INFINITY);
  return {std::abs(slope) <= 0.02,
          "slope=" + num(slope, 4) + " +- " + num(r.trend_slope_se.value_or(0.0), 2) + " (|slope| <= 0.02)"};
}

Outcome c11_lorentz(const AcceptanceOptions& o) {
  auto eng = Stream{o.seed, hash_string("lorentz/sample")}.engine(0);
  const auto sample = draw_sample(make_distribution("laplace"), 5000, eng);
  double worst = 0.0;
  for (double p : {1.0, 2.0, 3.0}) {
    const double a = lorentz_quasinorm(sample, p, p);
    const double b = lp_norm(sample, p);
    worst = std::max(worst, std::abs(a - b) / b);
  }
  const auto weak = lorentz_quasinorm(make_distribution("uniform"), 1.0, INFINITY);
  const double werr = weak.is_infinite() ? INFINITY : std::abs(weak.value() - 0.25);
  return {worst <= 1e-12 && werr <= 1e-8, "L(p,p) vs Lp max rel " + num(worst, 3) +
                                              " (<= 1e-12); uniform L(1,inf) error " + num(werr, 3) + " (<= 1e-8)"};
}

Outcome c12_determinism(const AcceptanceOptions& o) {
  const auto s = criterion1_scenario(o.seed);
  std::vector<std::string> lines;
  for (int w : {1, 4, 16}) lines.push_back(to_json_line(report_to_json(verify_bound(s, w))));
  const bool ok = lines[0] == lines[1] && lines[0] == lines[2];
  return {ok, ok ? "reports identical for workers 1, 4, 16" : "reports differ across worker counts"};
}

struct Criterion {
  int id;
  const char* title;
  Outcome (*run)(const AcceptanceOptions&);
};

const Criterion kCriteria[] = {
    {1, "Rao-Cramer equality, q=2", c1_rao_cramer},
    {2, "strict inequality, q=4/3", c2_strict},
    {3, "Fisher quadrature vs Gaussian moments", c3_fisher},
    {4, "natural psi identities", c4_natural},
    {5, "Young-Fenchel battery", c5_young_fenchel},
    {6, "phi-bar fixed point at phi_2", c6_phi_bar},
    {7, "Rosenthal empirical check", c7_rosenthal},
    {8, "stable(1.5) in L1 diverges", c8_stable},
    {9, "CLT norm Gaussian fixed point", c9_clt_gaussian},
    {10, "MLE upper-bound trend", c10_mle_trend},
    {11, "Lorentz consistency", c11_lorentz},
    {12, "determinism across workers", c12_determinism},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<CriterionResult> results;
  for (const auto& c : kCriteria) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), c.id) == options.only.end())
      continue;
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    const auto t0 = Clock::now();
    try {
      const auto out = c.run(options);
      r.passed = out.passed;
      r.detail = out.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (options.on_result) options.on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  char head[32];
  std::snprintf(head, sizeof head, "%s [%2d] ", r.passed ? "PASS" : "FAIL", r.id);
  return head + r.title + ": " + r.detail + " (" + num(r.seconds, 3) + " s)";
}

}  // namespace rcb
