#include "rcbound/norms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "rcbound/errors.hpp"
#include "rcbound/parallel.hpp"
#include "rcbound/quadrature.hpp"
#include "rcbound/stats.hpp"

namespace rcb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double max_abs(std::span<const double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

// log(mean(exp(v))) for a vector of log-values.
double log_mean_exp(std::span<const double> logs) {
  double hi = -kInf;
  for (double v : logs) hi = std::max(hi, v);
  if (hi == -kInf) return -kInf;
  CompensatedSum acc;
  for (double v : logs) acc.add(std::exp(v - hi));
  return hi + std::log(acc.value() / static_cast<double>(logs.size()));
}

double median_inplace(std::vector<double>& v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    m = 0.5 * (m + lower);
  }
  return m;
}

// Golden-section maximization of a unimodal f on [a, b].
std::pair<double, double> golden_max(const std::function<double(double)>& f, double a, double b, int iters = 200) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > 1e-15 * std::max(1.0, std::abs(a) + std::abs(b)); ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

}  // namespace

std::string_view to_string(NormTag tag) {
  switch (tag) {
    case NormTag::Lp:
      return "Lp";
    case NormTag::GLS:
      return "GLS";
    case NormTag::Bphi:
      return "Bphi";
    case NormTag::Lorentz:
      return "Lorentz";
  }
  return "Lp";
}

std::string_view to_string(NormalClass c) {
  return c == NormalClass::StrongNormal ? "StrongNormal" : "NotStrongNormal";
}

// ---------------------------------------------------------------------------

NormSpec NormSpec::lp(double p) {
  NormSpec s;
  s.tag = NormTag::Lp;
  s.p = p;
  s.validate();
  return s;
}

NormSpec NormSpec::lorentz(double p, double q) {
  NormSpec s;
  s.tag = NormTag::Lorentz;
  s.p = p;
  s.q = q;
  s.validate();
  return s;
}

NormSpec NormSpec::gls(PsiFunction psi, std::vector<double> p_grid) {
  NormSpec s;
  s.tag = NormTag::GLS;
  s.psi = std::move(psi);
  s.grid = std::move(p_grid);
  s.validate();
  return s;
}

NormSpec NormSpec::bphi(PhiFunction phi, std::vector<double> lambda_grid) {
  NormSpec s;
  s.tag = NormTag::Bphi;
  s.phi = std::move(phi);
  s.grid = std::move(lambda_grid);
  s.validate();
  return s;
}

std::vector<double> NormSpec::resolved_grid() const {
  if (!grid.empty()) return grid;
  if (tag == NormTag::GLS && psi) {
    auto g = default_p_grid(psi->support_B());
    if (psi->support_lo() > 2.0) throw DomainError("GLS default grid starts at 2, outside supp(psi)");
    return g;
  }
  if (tag == NormTag::Bphi && phi) return default_lambda_grid(phi->lambda0());
  return {};
}

void NormSpec::validate() const {
  switch (tag) {
    case NormTag::Lp:
      if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("Lp norm requires finite p >= 1");
      break;
    case NormTag::Lorentz:
      if (!(p >= 1.0) || !std::isfinite(p) || !(q >= 1.0)) throw DomainError("Lorentz quasinorm requires p, q >= 1");
      break;
    case NormTag::GLS: {
      if (!psi) throw DomainError("GLS norm requires psi");
      const auto g = resolved_grid();
      if (g.empty()) throw DomainError("GLS norm requires a nonempty p-grid");
      if (!std::is_sorted(g.begin(), g.end())) throw DomainError("GLS p-grid must be sorted");
      for (double p_i : g)
        if (!psi->supports(p_i)) throw DomainError("GLS p-grid point " + num(p_i) + " outside supp(psi)");
      break;
    }
    case NormTag::Bphi: {
      if (!phi) throw DomainError("B(phi) norm requires phi");
      const auto g = resolved_grid();
      if (g.empty()) throw DomainError("B(phi) norm requires a nonempty lambda-grid");
      if (!std::is_sorted(g.begin(), g.end())) throw DomainError("lambda-grid must be sorted");
      for (double l : g)
        if (!(std::abs(l) < phi->lambda0())) throw DomainError("lambda-grid point " + num(l) + " outside (-lambda0, lambda0)");
      break;
    }
  }
}

std::string NormSpec::describe() const {
  switch (tag) {
    case NormTag::Lp:
      return "L_" + num(p);
    case NormTag::Lorentz:
      return "L_{" + num(p) + "," + num(q) + "}";
    case NormTag::GLS:
      return "G(" + (psi ? psi->name() : std::string("?")) + ")";
    case NormTag::Bphi:
      return "B(" + (phi ? phi->name() : std::string("?")) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------

EmpiricalSample::EmpiricalSample(std::vector<double> values, Provenance provenance)
    : values_(std::move(values)), provenance_(std::move(provenance)) {
  if (values_.empty()) throw DomainError("empirical sample must be nonempty");
}

std::span<const double> EmpiricalSample::sorted_abs() const {
  if (sorted_abs_.empty()) {
    sorted_abs_.reserve(values_.size());
    for (double v : values_) sorted_abs_.push_back(std::abs(v));
    std::sort(sorted_abs_.begin(), sorted_abs_.end());
  }
  return sorted_abs_;
}

MomentCurve analytic_moment_curve(const Distribution& d, std::span<const double> p_grid) {
  MomentCurve c;
  c.p_grid.assign(p_grid.begin(), p_grid.end());
  c.source = MomentSource::Analytic;
  c.norms.reserve(p_grid.size());
  for (double p : p_grid) c.norms.push_back(lp_norm(d, p));
  return c;
}

MomentCurve empirical_moment_curve(std::span<const double> sample, std::span<const double> p_grid,
                                   const EmpiricalMomentOptions& options) {
  if (sample.empty()) throw DomainError("empirical moment curve: empty sample");
  MomentCurve c;
  c.p_grid.assign(p_grid.begin(), p_grid.end());
  c.source = MomentSource::Empirical;
  c.reps = sample.size();
  for (double p : p_grid) {
    if (options.detect_divergence && moment_growth_test(sample, p, options.min_growth_slope).diverges) {
      c.norms.push_back(Extended::infinity());
    } else {
      c.norms.push_back(Extended::finite(lp_norm(sample, p)));
    }
  }
  return c;
}

bool is_lyapunov_monotone(const MomentCurve& curve, double tol) {
  for (std::size_t i = 1; i < curve.norms.size(); ++i) {
    const auto& a = curve.norms[i - 1];
    const auto& b = curve.norms[i];
    if (b.is_infinite()) continue;
    if (a.is_infinite()) return false;
    if (b.value() < a.value() * (1.0 - tol)) return false;
  }
  return true;
}

MomentGrowth moment_growth_test(std::span<const double> sample, double p, double min_slope) {
  MomentGrowth g;
  const std::size_t n = sample.size();
  std::vector<double> logs(n);
  for (std::size_t i = 0; i < n; ++i) logs[i] = sample[i] == 0.0 ? -kInf : p * std::log(std::abs(sample[i]));
  std::vector<double> xs, ys;
  for (std::size_t blocks = 8; n / blocks >= 32; blocks *= 2) {
    const std::size_t b = n / blocks;
    std::vector<double> block_logs(blocks);
    for (std::size_t k = 0; k < blocks; ++k)
      block_logs[k] = log_mean_exp(std::span<const double>(logs).subspan(k * b, b));
    xs.push_back(std::log(static_cast<double>(b)));
    ys.push_back(median_inplace(block_logs));
  }
  if (xs.size() < 3) return g;
  const auto fit = fit_line(xs, ys);
  g.slope = fit.slope;
  g.slope_se = fit.slope_se;
  g.diverges = g.slope > 3.0 * g.slope_se && g.slope > min_slope;
  return g;
}

// ---------------------------------------------------------------------------

Extended lp_norm(const Distribution& d, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm requires p >= 1");
  const auto m = abs_moment(d, p);
  if (m.is_infinite()) return m;
  return Extended::finite(std::pow(m.value(), 1.0 / p));
}

double lp_norm(std::span<const double> sample, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm requires p >= 1");
  if (sample.empty()) throw DomainError("lp_norm: empty sample");
  const double m = max_abs(sample);
  if (m == 0.0) return 0.0;
  CompensatedSum acc;
  if (p == 2.0) {
    for (double x : sample) {
      const double r = x / m;
      acc.add(r * r);
    }
  } else {
    for (double x : sample) acc.add(std::pow(std::abs(x) / m, p));
  }
  return m * std::pow(acc.value() / static_cast<double>(sample.size()), 1.0 / p);
}

// ---------------------------------------------------------------------------

GlsResult gls_norm(const MomentCurve& curve, const PsiFunction& psi, const GlsOptions& options) {
  if (curve.p_grid.empty() || curve.p_grid.size() != curve.norms.size())
    throw DomainError("gls_norm: malformed moment curve");
  GlsResult r;
  double best = -1.0;
  for (std::size_t i = 0; i < curve.p_grid.size(); ++i) {
    const double p = curve.p_grid[i];
    if (!psi.supports(p)) throw DomainError("gls_norm: grid point p=" + num(p) + " outside supp(psi)");
    const double w = psi(p);
    if (!(w > 0.0)) throw DomainError("gls_norm: psi must be positive on the grid");
    if (curve.norms[i].is_infinite()) {
      r.ratios.push_back(kInf);
      if (r.value.is_finite()) {
        r.value = Extended::infinity();
        r.argmax_p = p;
      }
      continue;
    }
    const double ratio = curve.norms[i].value() / w;
    r.ratios.push_back(ratio);
    if (r.value.is_finite() && ratio > best) {
      best = ratio;
      r.argmax_p = p;
    }
  }
  if (r.value.is_infinite()) return r;
  r.value = Extended::finite(best);
  const std::size_t k = r.ratios.size();
  if (std::isinf(psi.support_B()) && k >= 2 && r.argmax_p == curve.p_grid.back() && r.ratios[k - 1] > r.ratios[k - 2] &&
      best > options.ceiling) {
    r.value = Extended::infinity();
  }
  return r;
}

// ---------------------------------------------------------------------------

MgfSource MgfSource::analytic(const Distribution& d) {
  MgfSource s;
  s.kind = "analytic:" + d.id;
  s.mean = d.mean;
  s.mean_tolerance = 1e-8;
  s.log_mgf = [d](double lambda) { return rcb::log_mgf(d, lambda); };
  return s;
}

MgfSource MgfSource::empirical(std::span<const double> sample, double exponent_cap) {
  if (sample.empty()) throw DomainError("empirical mgf: empty sample");
  const auto summary = summarize_sample(sample);
  // centered plug-in: the sample mean is only checked to be zero within noise
  auto data = std::make_shared<std::vector<double>>(sample.begin(), sample.end());
  for (double& x : *data) x -= summary.mean;
  MgfSource s;
  s.kind = "empirical";
  s.mean = summary.mean;
  s.mean_tolerance = 4.0 * summary.standard_error + 1e-12;
  const double m = max_abs(*data);
  s.max_abs_lambda = m > 0.0 ? exponent_cap / m : kInf;
  s.log_mgf = [data](double lambda) {
    std::vector<double> logs(data->size());
    for (std::size_t i = 0; i < data->size(); ++i) logs[i] = lambda * (*data)[i];
    return Extended::finite(log_mean_exp(logs));
  };
  return s;
}

BphiResult bphi_norm(const MgfSource& mgf, const PhiFunction& phi, std::span<const double> lambda_grid,
                     const BphiOptions& options) {
  if (lambda_grid.empty()) throw DomainError("bphi_norm: empty lambda grid");
  if (std::abs(mgf.mean) > mgf.mean_tolerance)
    throw DomainError("bphi_norm: input is not centered (mean " + num(mgf.mean) + ")");
  BphiResult r;
  std::vector<double> lambdas, logs;
  bool diverged = false;
  double diverged_at = 0.0;
  for (double l : lambda_grid) {
    if (l == 0.0) continue;
    if (std::abs(l) > mgf.max_abs_lambda) {
      r.truncated_lambdas.push_back(l);
      continue;
    }
    const auto v = mgf.log_mgf(l);
    if (v.is_infinite()) {
      if (!diverged) diverged_at = l;
      diverged = true;
      r.truncated_lambdas.push_back(l);
      continue;
    }
    lambdas.push_back(l);
    logs.push_back(v.value());
  }
  // An infinite mgf inside the domain of phi cannot be dominated by any tau
  // when phi is finite everywhere.
  if (diverged && std::isinf(phi.lambda0())) {
    r.value = Extended::infinity();
    r.binding_lambda = diverged_at;
    return r;
  }
  auto feasible = [&](double tau) {
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const double bound = phi(lambdas[i] * tau);
      if (!(logs[i] <= bound + 1e-15 * std::abs(bound))) return false;
    }
    return true;
  };
  if (feasible(0.0)) {
    r.value = Extended::finite(0.0);
    return r;
  }
  double lo = 0.0, hi = 1.0;
  while (!feasible(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > options.ceiling) {
      r.value = Extended::infinity();
      return r;
    }
  }
  for (int it = 0; it < 200 && (hi - lo) > options.rel_tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  r.value = Extended::finite(hi);
  double tightest = kInf;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double slack = phi(lambdas[i] * hi) - logs[i];
    if (slack < tightest) {
      tightest = slack;
      r.binding_lambda = lambdas[i];
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

Extended lorentz_quasinorm(const Distribution& d, double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("lorentz_quasinorm requires p, q >= 1");
  std::vector<double> kinks;
  for (const auto& [v, w] : d.atoms) kinks.push_back(std::abs(v));
  for (double b : d.breakpoints) kinks.push_back(std::abs(b));
  if (d.domain.kind != quad::DomainKind::FullLine) {
    kinks.push_back(std::abs(d.domain.a));
    if (d.domain.kind == quad::DomainKind::Interval) kinks.push_back(std::abs(d.domain.b));
  }
  if (std::isinf(q)) {
    auto f = [&](double x) { return x * std::pow(tail_probability(d, x), 1.0 / p); };
    // Scale: the point where the tail drops to 1/2.
    double lo = 1e-12, hi = 1.0;
    while (tail_probability(d, hi) > 0.5 && hi < 1e12) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = std::sqrt(lo * hi);
      if (tail_probability(d, mid) > 0.5) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double scale = std::max(hi, 1e-300);
    const auto grid = geometric_grid(scale * 1e-6, scale * 1e6, 2001);
    double best_x = 0.0, best = 0.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = f(grid[i]);
      if (v > best) {
        best = v;
        best_x = grid[i];
        best_i = i;
      }
    }
    if (best_i + 1 == grid.size() && f(grid.back() * 10.0) > best) return Extended::infinity();
    for (double k : kinks) {
      if (k > 0.0) {
        const double v = f(k);
        if (v > best) {
          best = v;
          best_x = k;
        }
      }
    }
    const double a = best_i > 0 ? grid[best_i - 1] : grid.front();
    const double b = best_i + 1 < grid.size() ? grid[best_i + 1] : grid.back();
    const auto [xr, vr] = golden_max(f, a, b);
    if (vr > best) {
      best = vr;
      best_x = xr;
    }
    (void)best_x;
    return Extended::finite(best);
  }
  quad::Request req;
  req.integrand = [&](double x) {
    if (x <= 0.0) return 0.0;
    const double t = tail_probability(d, x);
    if (t <= 0.0) return 0.0;
    return q * std::exp((q - 1.0) * std::log(x) + (q / p) * std::log(t));
  };
  req.domain = quad::Domain::half_line(0.0);
  for (double k : kinks)
    if (k > 0.0) req.breakpoints.push_back(k);
  req.abs_tol = 1e-14;
  req.rel_tol = 1e-12;
  const auto res = quad::integrate(req);
  if (!res.ok()) return Extended::infinity();
  return Extended::finite(std::pow(res.value, 1.0 / q));
}

double lorentz_quasinorm(std::span<const double> sample, double p, double q) {
  EmpiricalSample s(std::vector<double>(sample.begin(), sample.end()));
  return lorentz_quasinorm(s, p, q);
}

double lorentz_quasinorm(const EmpiricalSample& sample, double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("lorentz_quasinorm requires p, q >= 1");
  const auto a = sample.sorted_abs();
  const std::size_t n = a.size();
  const double dn = static_cast<double>(n);
  // On (a_{k-1}, a_k] the tail P(|X| >= x) equals (n - k) / n for 0-based k.
  if (std::isinf(q)) {
    double best = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double tail = static_cast<double>(n - k) / dn;
      best = std::max(best, a[k] * std::pow(tail, 1.0 / p));
    }
    return best;
  }
  const double m = a.back();
  if (m == 0.0) return 0.0;
  CompensatedSum acc;
  double prev = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double cur = std::pow(a[k] / m, q);
    const double tail = static_cast<double>(n - k) / dn;
    acc.add(std::pow(tail, q / p) * (cur - prev));
    prev = cur;
  }
  return m * std::pow(acc.value(), 1.0 / q);
}

NormalClass lorentz_snri_classify(double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("lorentz_snri_classify requires p, q >= 1");
  const double r = std::min(p, q);
  return (r > 2.0 || (q == 2.0 && p >= 2.0)) ? NormalClass::StrongNormal : NormalClass::NotStrongNormal;
}

// ---------------------------------------------------------------------------

Extended analytic_norm(const Distribution& d, const NormSpec& spec) {
  spec.validate();
  switch (spec.tag) {
    case NormTag::Lp:
      return lp_norm(d, spec.p);
    case NormTag::Lorentz:
      return lorentz_quasinorm(d, spec.p, spec.q);
    case NormTag::GLS: {
      const auto g = spec.resolved_grid();
      return gls_norm(analytic_moment_curve(d, g), *spec.psi).value;
    }
    case NormTag::Bphi: {
      const auto g = spec.resolved_grid();
      return bphi_norm(MgfSource::analytic(d), *spec.phi, g).value;
    }
  }
  return Extended::infinity();
}

namespace {

Extended empirical_norm_value(std::span<const double> sample, const NormSpec& spec, const std::vector<double>& grid) {
  switch (spec.tag) {
    case NormTag::Lp:
      return Extended::finite(lp_norm(sample, spec.p));
    case NormTag::Lorentz:
      return Extended::finite(lorentz_quasinorm(sample, spec.p, spec.q));
    case NormTag::GLS:
      return gls_norm(empirical_moment_curve(sample, grid), *spec.psi).value;
    case NormTag::Bphi:
      return bphi_norm(MgfSource::empirical(sample), *spec.phi, grid).value;
  }
  return Extended::infinity();
}

}  // namespace

NormEstimate empirical_norm(std::span<const double> sample, const NormSpec& spec, bool with_se) {
  spec.validate();
  if (sample.empty()) throw DomainError("empirical_norm: empty sample");
  const auto grid = spec.resolved_grid();
  NormEstimate est;
  est.value = empirical_norm_value(sample, spec, grid);
  if (!with_se || est.value.is_infinite() || sample.size() < 40) return est;
  if (spec.tag == NormTag::Lp) {
    const double m = max_abs(sample);
    if (m == 0.0) return est;
    std::vector<double> powers(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) powers[i] = std::pow(std::abs(sample[i]) / m, spec.p);
    const auto s = summarize_sample(powers);
    // value = m * mean^{1/p}; d value / d mean = value / (p * mean)
    est.standard_error = s.mean > 0.0 ? est.value.value() * s.standard_error / (spec.p * s.mean) : 0.0;
    return est;
  }
  est.standard_error = jackknife_se(sample, 20, [&](std::span<const double> sub) {
    return empirical_norm_value(sub, spec, grid).value_or(kInf);
  });
  return est;
}

// ---------------------------------------------------------------------------

PairingResult associate_pairing_lb(std::span<const double> target,
                                   const std::vector<std::span<const double>>& dictionary, const NormSpec& norm) {
  if (dictionary.empty()) throw DomainError("associate_pairing_lb: empty test dictionary");
  if (target.empty()) throw DomainError("associate_pairing_lb: empty target");
  PairingResult r;
  r.value = 0.0;
  for (std::size_t j = 0; j < dictionary.size(); ++j) {
    const auto zeta = dictionary[j];
    if (zeta.size() != target.size())
      throw DomainError("associate_pairing_lb: test variables must share the target's replicates");
    CompensatedSum acc;
    for (std::size_t i = 0; i < target.size(); ++i) acc.add(zeta[i] * target[i]);
    const double pairing = std::abs(acc.value() / static_cast<double>(target.size()));
    const auto z_norm = empirical_norm(zeta, norm).value;
    double ratio = 0.0;
    if (z_norm.is_finite() && z_norm.value() > 0.0) ratio = pairing / z_norm.value();
    r.per_entry.push_back(ratio);
    if (j == 0 || ratio > r.value) {
      r.value = ratio;
      r.best_index = j;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

double TailEnvelope::operator()(double x) const {
  if (x <= 0.0) return 1.0;
  if (norm == 0.0) return 0.0;
  const double p_star = std::pow(x / norm, m) / std::exp(1.0);
  const double p = std::clamp(p_star, p_lo, p_hi);
  // log bound = p * log(N p^{1/m} / x)
  const double log_bound = p * (std::log(norm) + std::log(p) / m - std::log(x));
  return std::min(1.0, std::exp(log_bound));
}

TailEnvelope gls_tail_bound(const Extended& gls_norm_value, double m, double p_lo, double p_hi) {
  if (gls_norm_value.is_infinite()) throw DomainError("gls_tail_bound: infinite G(psi_m) norm gives no tail bound");
  if (!(m > 0.0)) throw DomainError("gls_tail_bound: m must be positive");
  if (!(p_lo > 0.0) || !(p_hi >= p_lo)) throw DomainError("gls_tail_bound: need 0 < p_lo <= p_hi");
  TailEnvelope env;
  env.norm = gls_norm_value.value();
  env.m = m;
  env.p_lo = p_lo;
  env.p_hi = p_hi;
  if (env.norm > 0.0) {
    env.C = 1.0 / (std::exp(1.0) * m * std::pow(env.norm, m));
    env.threshold = env.norm * std::pow(std::exp(1.0) * p_lo, 1.0 / m);
  } else {
    env.C = kInf;
    env.threshold = 0.0;
  }
  return env;
}

}  // namespace rcb
