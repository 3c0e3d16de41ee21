#include "rcbound/fisher.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "rcbound/distribution.hpp"
#include "rcbound/errors.hpp"
#include "rcbound/parallel.hpp"
#include "rcbound/quadrature.hpp"

namespace rcb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_abs(double x) { return x == 0.0 ? -kInf : std::log(std::abs(x)); }

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void require_theta(const Family& family, double theta) {
  if (!family.has_score()) throw UnsupportedError(family.id() + ": score is undefined");
  if (!family.param_domain().contains(theta))
    throw DomainError(family.id() + ": theta=" + num(theta) + " outside the parameter domain");
}

}  // namespace

std::string_view to_string(FisherMethod m) { return m == FisherMethod::Quadrature ? "quadrature" : "monte-carlo"; }

FisherReport fisher_p(const Family& family, double theta, double p) {
  require_theta(family, theta);
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("fisher_p requires finite p >= 1");
  FisherReport r;
  r.family = family.id();
  r.theta = theta;
  r.norm = NormSpec::lp(p);
  r.method = FisherMethod::Quadrature;
  if (const auto limit = family.score_moment_limit(); limit && p >= *limit) {
    r.value = Extended::infinity();
    return r;
  }

  const auto res =
      log_integrate_log_weighted(family, theta, [&](double x) { return p * log_abs(family.score(x, theta)); });
  if (!res.ok) {
    r.value = Extended::infinity();
    return r;
  }
  const double v = std::exp(res.log_value / p);
  r.value = Extended::finite(v);
  // d(m^{1/p}) = m^{1/p} dm / (p m)
  r.error_estimate = v * res.rel_error / p;
  return r;
}

FisherReport fisher_p_mc(const Family& family, double theta, double p, std::size_t reps, const Stream& stream,
                         int workers) {
  require_theta(family, theta);
  if (reps < 2) throw DomainError("fisher_p_mc needs at least 2 replicates");
  std::vector<double> scores(reps);
  parallel_for(reps, workers, [&](std::size_t i) {
    auto eng = stream.engine(i);
    scores[i] = family.score(family.draw(theta, eng), theta);
  });
  const auto est = empirical_norm(scores, NormSpec::lp(p), true);
  FisherReport r;
  r.family = family.id();
  r.theta = theta;
  r.norm = NormSpec::lp(p);
  r.method = FisherMethod::MonteCarlo;
  r.reps = reps;
  r.value = est.value;
  r.error_estimate = est.standard_error;
  return r;
}

FisherReport fisher_gls(FamilyPtr family, double theta, const PsiFunction& psi, std::vector<double> p_grid) {
  require_theta(*family, theta);
  FisherReport r;
  r.family = family->id();
  r.theta = theta;
  r.norm = NormSpec::gls(psi, std::move(p_grid));
  const auto grid = r.norm.resolved_grid();
  const auto curve = analytic_moment_curve(score_distribution(family, theta), grid);
  const auto g = gls_norm(curve, psi);
  r.value = g.value;
  r.argopt = g.argmax_p;
  return r;
}

FisherReport fisher_bphi(FamilyPtr family, double theta, const PhiFunction& phi, std::vector<double> lambda_grid) {
  require_theta(*family, theta);
  FisherReport r;
  r.family = family->id();
  r.theta = theta;
  r.norm = NormSpec::bphi(phi, std::move(lambda_grid));
  const auto grid = r.norm.resolved_grid();
  const auto b = bphi_norm(MgfSource::analytic(score_distribution(family, theta)), phi, grid);
  if (b.value.is_infinite() && b.binding_lambda != 0.0)
    throw DomainError(family->id() + ": Cramer condition fails, score mgf diverges at lambda=" + num(b.binding_lambda));
  r.value = b.value;
  r.argopt = b.binding_lambda;
  return r;
}

AggregatedInformation sample_fisher_agg(std::span<const double> informations, double K) {
  if (!(K >= 1.0)) throw DomainError("sample_fisher_agg: K must be >= 1");
  double scale = 0.0;
  for (double i : informations) {
    if (!(i >= 0.0) || !std::isfinite(i)) throw DomainError("sample_fisher_agg: informations must be finite and >= 0");
    scale = std::max(scale, i);
  }
  AggregatedInformation a;
  if (scale == 0.0) return a;
  CompensatedSum squares, plain;
  for (double i : informations) {
    squares.add((i / scale) * (i / scale));
    plain.add(i);
  }
  a.aggregated = K * scale * std::sqrt(squares.value());
  a.naive = plain.value();
  return a;
}

}  // namespace rcb
