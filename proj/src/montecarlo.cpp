#include "rcbound/montecarlo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "rcbound/bounds.hpp"
#include "rcbound/errors.hpp"
#include "rcbound/parallel.hpp"
#include "rcbound/stats.hpp"
#include "rcbound/transforms.hpp"

namespace rcb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void check_n_grid(const std::vector<std::size_t>& n_grid) {
  if (n_grid.empty()) throw DomainError("n_grid must be nonempty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw DomainError("sample sizes must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw DomainError("n_grid must be strictly ascending");
  }
}

void check_centered(const Distribution& dist) {
  if (!dist.sampler) throw UnsupportedError(dist.id + ": no sampler");
  if (std::abs(dist.mean) > 1e-8) throw DomainError(dist.id + " is not centered (mean " + num(dist.mean) + ")");
}

// sums[k][r] = (eta_1 + ... + eta_{n_k}) / sqrt(n_k) for replicate r.
std::vector<std::vector<double>> normalized_walks(const Distribution& dist, const std::vector<std::size_t>& n_grid,
                                                  std::size_t reps, const Stream& stream, int workers) {
  std::vector<std::vector<double>> sums(n_grid.size(), std::vector<double>(reps));
  parallel_for(reps, workers, [&](std::size_t r) {
    auto eng = stream.engine(r);
    double s = 0.0;
    std::size_t drawn = 0;
    for (std::size_t k = 0; k < n_grid.size(); ++k) {
      for (; drawn < n_grid[k]; ++drawn) s += dist.sampler(eng);
      sums[k][r] = s / std::sqrt(static_cast<double>(n_grid[k]));
    }
  });
  return sums;
}

struct SlopeFit {
  double slope = 0.0;
  double se = 0.0;
};

// log(value) against log(n) with value standard errors propagated.
SlopeFit loglog_slope(const std::vector<double>& n, const std::vector<double>& value, const std::vector<double>& se) {
  std::vector<double> x, y, yse;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(value[i] > 0.0) || !std::isfinite(value[i])) continue;
    x.push_back(std::log(n[i]));
    y.push_back(std::log(value[i]));
    yse.push_back(se[i] / value[i]);
  }
  SlopeFit f;
  if (x.size() < 2) return f;
  const auto line = fit_line(x, y);
  f.slope = line.slope;
  f.se = std::max(line.slope_se, propagated_slope_se(x, yse));
  return f;
}

bool slope_diverges(const SlopeFit& f) { return f.slope > 3.0 * f.se && f.slope > kFlatSlopeTolerance; }

double he(int k, double z) {
  // probabilists' Hermite polynomials by recursion
  double a = 1.0, b = z;
  if (k == 0) return a;
  for (int j = 1; j < k; ++j) {
    const double c = z * b - static_cast<double>(j) * a;
    a = b;
    b = c;
  }
  return b;
}

void append(std::string& out, std::string_view key, const std::string& value) {
  out.append(key);
  out.push_back('=');
  out.append(value);
  out.push_back(';');
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += num(x) + ",";
  return s;
}

}  // namespace

std::string_view to_string(EstimatorKind k) { return k == EstimatorKind::SampleMean ? "sample-mean" : "mle"; }

std::string_view to_string(PairingKind k) {
  switch (k) {
    case PairingKind::Lp:
      return "lp";
    case PairingKind::GLS:
      return "gls";
    case PairingKind::Bphi:
      return "bphi";
  }
  return "lp";
}

std::string_view to_string(VerifyMode m) { return m == VerifyMode::Lower ? "lower" : "upper"; }

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "Holds";
    case Verdict::HoldsWithinNoise:
      return "HoldsWithinNoise";
    case Verdict::Violated:
      return "Violated";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

std::string_view to_string(ProbeVerdict v) {
  return v == ProbeVerdict::WNRIConsistent ? "WNRIConsistent" : "DivergenceDetected";
}

// ---------------------------------------------------------------------------

CltNormEstimate clt_norm_estimate(const Distribution& dist, const NormSpec& norm, std::vector<std::size_t> n_grid,
                                  std::size_t reps, const Stream& stream, int workers) {
  check_centered(dist);
  check_n_grid(n_grid);
  norm.validate();
  if (reps < 2) throw DomainError("clt_norm_estimate needs at least 2 replicates");
  const auto sums = normalized_walks(dist, n_grid, reps, stream, workers);

  CltNormEstimate est;
  est.distribution = dist.id;
  est.norm = norm;
  est.n_grid = n_grid;
  est.reps = reps;
  Extended sup = Extended::finite(0.0);
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    const auto e = empirical_norm(sums[k], norm, true);
    est.values.push_back(e.value);
    est.standard_errors.push_back(e.standard_error);
    if (sup.is_finite() && (e.value.is_infinite() || e.value.value() > sup.value())) sup = e.value;
    est.running_sup.push_back(sup);
  }
  est.sup = sup;
  if (sup.is_infinite()) {
    est.diverged = true;
    return est;
  }
  const std::size_t K = n_grid.size();
  const std::size_t start = K >= 3 ? std::min(K / 2, K - 3) : 0;
  std::vector<double> n, v, se;
  for (std::size_t k = start; k < K; ++k) {
    n.push_back(static_cast<double>(n_grid[k]));
    v.push_back(est.values[k].value());
    se.push_back(est.standard_errors[k]);
  }
  if (n.size() >= 3) {
    const auto fit = loglog_slope(n, v, se);
    est.growth_exponent = fit.slope;
    est.growth_exponent_se = fit.se;
    est.diverged = slope_diverges(fit);
  }
  return est;
}

ProbeResult wnri_probe(const Distribution& dist, const NormSpec& norm, std::vector<std::size_t> n_grid,
                       std::size_t reps, const Stream& stream, int workers) {
  ProbeResult r;
  r.estimate = clt_norm_estimate(dist, norm, std::move(n_grid), reps, stream, workers);
  r.verdict = r.estimate.diverged ? ProbeVerdict::DivergenceDetected : ProbeVerdict::WNRIConsistent;
  return r;
}

// ---------------------------------------------------------------------------

std::vector<RosenthalReport> rosenthal_empirical_check(const Distribution& dist, std::span<const double> ps,
                                                       std::vector<std::size_t> n_grid, std::size_t reps,
                                                       const Stream& stream, int workers) {
  check_centered(dist);
  check_n_grid(n_grid);
  if (reps < 2) throw DomainError("rosenthal_empirical_check needs at least 2 replicates");
  for (double p : ps) rosenthal_bound(p);  // validates p >= 2
  const auto sums = normalized_walks(dist, n_grid, reps, stream, workers);
  std::vector<RosenthalReport> out;
  for (double p : ps) {
    RosenthalReport r;
    r.distribution = dist.id;
    r.p = p;
    r.constant = rosenthal_bound(p);
    r.n_grid = n_grid;
    r.reps = reps;
    const auto single = lp_norm(dist, p);
    if (single.is_infinite()) throw DomainError(dist.id + ": |eta|_" + num(p) + " is infinite");
    r.single_norm = single.value();
    if (!(r.single_norm > 0.0)) throw DomainError(dist.id + ": |eta|_p is zero");
    // |S_n|_p / (R sqrt(n) |eta|_p) = |S_n / sqrt(n)|_p / (R |eta|_p)
    const double denom = r.constant * r.single_norm;
    for (std::size_t k = 0; k < n_grid.size(); ++k) {
      const auto e = empirical_norm(sums[k], NormSpec::lp(p), true);
      r.ratios.push_back(e.value.value() / denom);
      r.ratio_se.push_back(e.standard_error / denom);
    }
    r.max_ratio = *std::max_element(r.ratios.begin(), r.ratios.end());
    out.push_back(std::move(r));
  }
  return out;
}

RosenthalReport rosenthal_empirical_check(const Distribution& dist, double p, std::vector<std::size_t> n_grid,
                                          std::size_t reps, const Stream& stream, int workers) {
  const double ps[] = {p};
  return rosenthal_empirical_check(dist, ps, std::move(n_grid), reps, stream, workers).front();
}

// ---------------------------------------------------------------------------

double mle_estimate(const Family& family, std::span<const double> sample) {
  if (sample.empty()) throw DomainError("mle_estimate: empty sample");
  if (!family.has_score()) throw UnsupportedError(family.id() + ": score is undefined");
  const Interval dom = family.param_domain();
  auto S = [&](double t) {
    double s = 0.0;
    for (double x : sample) s += family.score(x, t);
    return s;
  };
  auto dS = [&](double t) {
    double s = 0.0;
    for (double x : sample) s += family.score_derivative(x, t);
    return s;
  };
  auto [mn, mx] = std::minmax_element(sample.begin(), sample.end());
  double lo = *mn, hi = *mx;
  if (family.kind() == FamilyKind::Scale) {
    if (!(lo > 0.0)) throw DomainError("mle_estimate: sample outside the scale-family support");
  }
  if (lo == hi) {
    if (dom.contains(lo) && S(lo) == 0.0) return lo;
    lo = lo - std::max(1.0, std::abs(lo));
    hi = hi + std::max(1.0, std::abs(hi));
  }
  auto clip = [&](double t) { return std::clamp(t, std::nextafter(dom.lo, dom.hi), std::nextafter(dom.hi, dom.lo)); };
  lo = clip(lo);
  hi = clip(hi);
  double flo = S(lo), fhi = S(hi);
  double width = std::max(hi - lo, 1.0);
  for (int i = 0; i < 64 && flo * fhi > 0.0; ++i) {
    if (family.kind() == FamilyKind::Scale) {
      lo = clip(lo / 2.0);
      hi = clip(hi * 2.0);
    } else {
      lo = clip(lo - width);
      hi = clip(hi + width);
      width *= 2.0;
    }
    flo = S(lo);
    fhi = S(hi);
  }
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw DomainError("mle_estimate: score sum has no sign change (estimation failure)");

  double x = 0.0;
  {
    double mean = 0.0;
    for (double v : sample) mean += v;
    mean /= static_cast<double>(sample.size());
    x = (mean > lo && mean < hi) ? mean : 0.5 * (lo + hi);
  }
  double fx = S(x);
  for (int it = 0; it < 200 && fx != 0.0; ++it) {
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    const double d = dS(x);
    double next = 0.5 * (lo + hi);
    if (d != 0.0 && std::isfinite(d)) {
      const double newton = x - fx / d;
      if (newton > lo && newton < hi) next = newton;
    }
    if (next == x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) {
      x = next;
      break;
    }
    x = next;
    fx = S(x);
  }
  // Score sums with jumps (Laplace) have their root at a data point.
  const auto nearest = std::min_element(sample.begin(), sample.end(),
                                        [&](double a, double b) { return std::abs(a - x) < std::abs(b - x); });
  if (*nearest != x && dom.contains(*nearest) && std::abs(S(*nearest)) <= std::abs(S(x))) return *nearest;
  return x;
}

double apply_estimator(EstimatorKind kind, const Family& family, std::span<const double> sample) {
  if (kind == EstimatorKind::SampleMean) return sample_mean(sample);
  return mle_estimate(family, sample);
}

EstimatorDraws simulate_estimator(const Family& family, double theta0, EstimatorKind estimator, std::size_t n,
                                  std::size_t reps, const Stream& stream, int workers, bool with_score_sum) {
  if (n < 1 || reps < 2) throw DomainError("simulate_estimator needs n >= 1 and reps >= 2");
  if (!family.param_domain().contains(theta0)) throw DomainError(family.id() + ": theta0 outside the parameter domain");
  if (with_score_sum && !family.has_score()) throw UnsupportedError(family.id() + ": score is undefined");
  EstimatorDraws d;
  d.tau.assign(reps, 0.0);
  if (with_score_sum) d.score_sum.assign(reps, 0.0);
  const double root_n = std::sqrt(static_cast<double>(n));
  std::string first_error;
  parallel_for(reps, workers, [&](std::size_t r) {
    auto eng = stream.engine(r);
    const auto xs = family.sample(theta0, n, eng);
    try {
      d.tau[r] = root_n * (apply_estimator(estimator, family, xs) - theta0);
    } catch (const Error&) {
      d.tau[r] = kNaN;
    }
    if (with_score_sum) {
      double s = 0.0;
      for (double x : xs) s += family.score(x, theta0);
      d.score_sum[r] = s / root_n;
    }
  });
  std::size_t kept = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    if (std::isnan(d.tau[r])) {
      ++d.failures;
      continue;
    }
    d.tau[kept] = d.tau[r];
    if (with_score_sum) d.score_sum[kept] = d.score_sum[r];
    ++kept;
  }
  if (static_cast<double>(d.failures) > 0.001 * static_cast<double>(reps))
    throw NonConvergenceError(family.id() + ": estimator failed on " + std::to_string(d.failures) + " of " +
                              std::to_string(reps) + " replicates at n=" + std::to_string(n));
  d.tau.resize(kept);
  if (with_score_sum) d.score_sum.resize(kept);
  return d;
}

DeviationEstimate deviation_norm(const Family& family, double theta0, EstimatorKind estimator, std::size_t n,
                                 const NormSpec& norm, std::size_t reps, const Stream& stream, int workers) {
  norm.validate();
  const auto draws = simulate_estimator(family, theta0, estimator, n, reps, stream, workers);
  DeviationEstimate out;
  out.failures = draws.failures;
  out.value = empirical_norm(draws.tau, norm).value;
  if (out.value.is_finite()) {
    out.standard_error = jackknife_se(draws.tau, 20, [&](std::span<const double> sub) {
      return empirical_norm(sub, norm).value.value_or(std::numeric_limits<double>::infinity());
    });
  }
  return out;
}

// ---------------------------------------------------------------------------

void Scenario::validate() const {
  if (family.empty()) throw UsageError("scenario: family is required");
  check_n_grid(n_grid);
  if (reps < 1000) throw DomainError("scenario: reps must be >= 1000 for verification runs");
  if (hermite_degree < 1 || hermite_degree > 8) throw DomainError("scenario: hermite_degree must be in [1, 8]");
  if (mode == VerifyMode::Lower) {
    switch (pairing) {
      case PairingKind::Lp:
        if (!(q > 1.0) || !(q <= 2.0)) throw DomainError("scenario: q must lie in (1, 2]");
        break;
      case PairingKind::GLS:
        if (psi.empty()) throw UsageError("scenario: GLS pairing needs psi");
        break;
      case PairingKind::Bphi:
        if (phi.empty()) throw UsageError("scenario: Bphi pairing needs phi");
        break;
    }
  } else if (upper_norm.empty()) {
    throw UsageError("scenario: upper mode needs upper_norm");
  }
}

Stream scenario_stream(const Scenario& s) {
  if (!s.seed) throw UsageError("a seed is required");
  std::string id;
  append(id, "family", s.family);
  append(id, "theta0", num(s.theta0));
  append(id, "estimator", std::string(to_string(s.estimator)));
  append(id, "mode", std::string(to_string(s.mode)));
  append(id, "pairing", std::string(to_string(s.pairing)));
  append(id, "q", num(s.q));
  append(id, "psi", s.psi.expr + "|" + join(s.psi.x) + "|" + join(s.psi.values));
  append(id, "phi", s.phi.expr + "|" + join(s.phi.x) + "|" + join(s.phi.values));
  append(id, "upper_norm", s.upper_norm);
  std::string ns;
  for (auto n : s.n_grid) ns += std::to_string(n) + ",";
  append(id, "n_grid", ns);
  append(id, "reps", std::to_string(s.reps));
  append(id, "p_grid", join(s.p_grid));
  append(id, "lambda_grid", join(s.lambda_grid));
  append(id, "theta_grid", join(s.theta_grid));
  append(id, "hermite_degree", std::to_string(s.hermite_degree));
  return Stream{*s.seed, hash_string(id)};
}

namespace {

// Margins are graded in standard errors: below -3 is a violation, between -3
// and -2 is a shortfall the noise can still explain.
Verdict lp_verdict(const std::vector<BoundRow>& rows, double rhs) {
  bool marginal = false;
  for (const auto& r : rows) {
    if (r.lhs + 3.0 * r.standard_error < rhs) return Verdict::Violated;
    if (r.lhs + 2.0 * r.standard_error < rhs) marginal = true;
  }
  return marginal ? Verdict::HoldsWithinNoise : Verdict::Holds;
}

std::vector<std::vector<double>> test_dictionary(const std::vector<double>& score_sum, int degree) {
  std::vector<std::vector<double>> dict;
  dict.push_back(score_sum);
  if (degree < 2) return dict;
  const auto s = summarize_sample(score_sum);
  const double sd = s.standard_deviation > 0.0 ? s.standard_deviation : 1.0;
  for (int k = 2; k <= degree; ++k) {
    std::vector<double> v(score_sum.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = he(k, (score_sum[i] - s.mean) / sd);
    dict.push_back(std::move(v));
  }
  return dict;
}

}  // namespace

BoundReport verify_bound(const Scenario& scenario, int workers) {
  scenario.validate();
  const auto family = resolve_family(scenario.family);
  const Stream stream = scenario_stream(scenario);
  BoundReport rep;
  rep.scenario = scenario;

  if (scenario.mode == VerifyMode::Upper) {
    const bool lambda_norm = parse_call(scenario.upper_norm).name == "bphi";
    const auto norm =
        parse_norm(scenario.upper_norm, lambda_norm ? scenario.lambda_grid : scenario.p_grid, scenario.theta_grid);
    rep.lhs_norm = norm.describe();
    rep.statement_norm = norm.describe();
    std::vector<double> ns, vs, ses;
    for (std::size_t n : scenario.n_grid) {
      const auto d = deviation_norm(*family, scenario.theta0, scenario.estimator, n, norm, scenario.reps,
                                    stream.derive(static_cast<std::uint64_t>(n)), workers);
      BoundRow row;
      row.n = n;
      row.lhs = d.value.value_or(std::numeric_limits<double>::infinity());
      row.standard_error = d.standard_error;
      row.failures = d.failures;
      rep.rows.push_back(row);
      ns.push_back(static_cast<double>(n));
      vs.push_back(row.lhs);
      ses.push_back(row.standard_error);
    }
    const bool any_inf = std::any_of(vs.begin(), vs.end(), [](double v) { return !std::isfinite(v); });
    if (any_inf) {
      rep.verdict = Verdict::Violated;
      rep.note = "normalized deviation is infinite";
      return rep;
    }
    if (ns.size() < 2) {
      rep.verdict = Verdict::Inconclusive;
      rep.note = "trend needs at least two sample sizes";
      return rep;
    }
    const auto fit = loglog_slope(ns, vs, ses);
    rep.trend_slope = fit.slope;
    rep.trend_slope_se = fit.se;
    rep.verdict = slope_diverges(fit) ? Verdict::Violated : Verdict::Holds;
    return rep;
  }

  if (scenario.pairing == PairingKind::Lp) {
    const auto b = lower_bound_lp(*family, scenario.theta0, scenario.q);
    const auto norm = NormSpec::lp(scenario.q);
    rep.lhs_norm = norm.describe();
    rep.statement_norm = b.statement_norm;
    if (!b.has_bound) {
      rep.verdict = Verdict::Inconclusive;
      rep.note = "no bound: " + b.reason;
      return rep;
    }
    rep.has_rhs = true;
    rep.rhs = b.bound;
    for (std::size_t n : scenario.n_grid) {
      const auto d = deviation_norm(*family, scenario.theta0, scenario.estimator, n, norm, scenario.reps,
                                    stream.derive(static_cast<std::uint64_t>(n)), workers);
      BoundRow row;
      row.n = n;
      row.lhs = d.value.value_or(std::numeric_limits<double>::infinity());
      row.standard_error = d.standard_error;
      row.margin = row.lhs - rep.rhs;
      row.failures = d.failures;
      rep.rows.push_back(row);
    }
    rep.verdict = lp_verdict(rep.rows, rep.rhs);
    return rep;
  }

  // Associate-norm pairings: lhs is a lower estimate of the G'(psi_R) or
  // B'(bar phi) norm, so a shortfall proves nothing.
  NormSpec dual;
  BoundResult b;
  if (scenario.pairing == PairingKind::GLS) {
    const auto psi = resolve_psi(scenario.psi, scenario.theta_grid);
    b = lower_bound_gls(family, scenario.theta0, psi, scenario.p_grid);
    std::vector<double> grid;
    for (double p : NormSpec::gls(psi, scenario.p_grid).resolved_grid())
      if (p >= 2.0) grid.push_back(p);
    dual = NormSpec::gls(psi_R(psi), grid);
  } else {
    const auto phi = resolve_phi(scenario.phi, scenario.theta_grid);
    b = lower_bound_bphi(family, scenario.theta0, phi, scenario.lambda_grid);
    if (b.phi_bar_diverged.value_or(false))
      throw DomainError("bar(" + phi.name() + ") diverges on the lambda grid; the B'(bar phi) pairing is degenerate");
    dual = NormSpec::bphi(phi_bar(phi).as_phi(), scenario.lambda_grid);
  }
  rep.lhs_norm = "pairing lower estimate against " + dual.describe();
  rep.statement_norm = b.statement_norm;
  if (!b.has_bound) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "no bound: " + b.reason;
    return rep;
  }
  rep.has_rhs = true;
  rep.rhs = b.bound;
  bool all_above = true;
  for (std::size_t n : scenario.n_grid) {
    const auto draws = simulate_estimator(*family, scenario.theta0, scenario.estimator, n, scenario.reps,
                                          stream.derive(static_cast<std::uint64_t>(n)), workers, true);
    const auto dict = test_dictionary(draws.score_sum, scenario.hermite_degree);
    std::vector<std::span<const double>> views(dict.begin(), dict.end());
    const auto pr = associate_pairing_lb(draws.tau, views, dual);
    BoundRow row;
    row.n = n;
    row.lhs = pr.value;
    row.margin = row.lhs - rep.rhs;
    row.failures = draws.failures;
    row.best_test_index = pr.best_index;
    rep.rows.push_back(row);
    all_above = all_above && row.margin >= 0.0;
  }
  rep.verdict = all_above ? Verdict::Holds : Verdict::Inconclusive;
  rep.note = "lhs is a lower estimate of the associate norm";
  return rep;
}

}  // namespace rcb
