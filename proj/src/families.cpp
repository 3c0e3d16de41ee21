#include "rcbound/families.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>

#include "json.hpp"

#include "rcbound/errors.hpp"
#include "rcbound/parallel.hpp"
#include "rcbound/stats.hpp"

namespace rcb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr Interval kRealLine{-kInf, kInf};
constexpr Interval kPositive{0.0, kInf};

double random_sign(Philox4x32& eng) { return (eng() >> 63) ? -1.0 : 1.0; }

class GaussianShift final : public Family {
 public:
  GaussianShift() : Family("gaussian-shift", FamilyKind::Shift, kRealLine) {}
  Interval support(double) const override { return kRealLine; }

  std::optional<double> score_lp_closed_form(double p, double) const override {
    // E|Z|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi)
    const double log_moment = 0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) - 0.5 * std::log(std::numbers::pi);
    return std::exp(log_moment / p);
  }

 protected:
  double log_density_impl(double x, double theta) const override {
    const double u = x - theta;
    return -0.5 * u * u - 0.5 * std::log(2.0 * std::numbers::pi);
  }
  double score_impl(double x, double theta) const override { return x - theta; }
  double score_derivative_impl(double, double) const override { return -1.0; }
  double density_dtheta_impl(double x, double theta) const override {
    const double u = x - theta;
    return u * std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
  }
  double draw_impl(double theta, Philox4x32& eng) const override { return theta + standard_normal(eng); }
};

class LaplaceShift final : public Family {
 public:
  LaplaceShift() : Family("laplace-shift", FamilyKind::Shift, kRealLine) {}
  Interval support(double) const override { return kRealLine; }
  std::vector<double> breakpoints(double theta) const override { return {theta}; }
  std::optional<double> score_lp_closed_form(double, double) const override { return 1.0; }

 protected:
  double log_density_impl(double x, double theta) const override { return -std::abs(x - theta) - std::log(2.0); }
  double score_impl(double x, double theta) const override {
    const double u = x - theta;
    return u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
  }
  double score_derivative_impl(double, double) const override { return 0.0; }
  double density_dtheta_impl(double x, double theta) const override {
    const double u = x - theta;
    const double s = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
    return 0.5 * s * std::exp(-std::abs(u));
  }
  double draw_impl(double theta, Philox4x32& eng) const override {
    const double sign = random_sign(eng);
    return theta + sign * standard_exponential(eng);
  }
};

class ExponentialScale final : public Family {
 public:
  ExponentialScale() : Family("exponential-scale", FamilyKind::Scale, kPositive) {}
  Interval support(double) const override { return kPositive; }
  double base_density(double y) const override { return y > 0.0 ? std::exp(-y) : 0.0; }
  double base_density_derivative(double y) const override { return y > 0.0 ? -std::exp(-y) : 0.0; }

 protected:
  double log_density_impl(double x, double theta) const override { return -std::log(theta) - x / theta; }
  double score_impl(double x, double theta) const override { return (x / theta - 1.0) / theta; }
  double score_derivative_impl(double x, double theta) const override {
    return 1.0 / (theta * theta) - 2.0 * x / (theta * theta * theta);
  }
  double density_dtheta_impl(double x, double theta) const override {
    // d/dtheta [theta^-1 h(x/theta)] = -theta^-2 (h(y) + y h'(y)), y = x/theta
    const double y = x / theta;
    return -(base_density(y) + y * base_density_derivative(y)) / (theta * theta);
  }
  double draw_impl(double theta, Philox4x32& eng) const override { return theta * standard_exponential(eng); }
};

// Symmetric law with P(|eta| > x) = exp(-x^m); base density
// g0(u) = (m/2) |u|^{m-1} exp(-|u|^m).
class WeibullTail final : public Family {
 public:
  explicit WeibullTail(double m) : Family(make_id(m), FamilyKind::Shift, kRealLine), m_(m) {}
  Interval support(double) const override { return kRealLine; }
  std::vector<double> breakpoints(double theta) const override { return {theta}; }
  double exponent() const { return m_; }
  // |l|^p g ~ |u|^{m-1-p} at the center.
  std::optional<double> score_moment_limit() const override { return m_; }

 protected:
  double log_density_impl(double x, double theta) const override {
    const double a = std::abs(x - theta);
    if (a == 0.0) return -kInf;
    return std::log(0.5 * m_) + (m_ - 1.0) * std::log(a) - std::pow(a, m_);
  }
  double score_impl(double x, double theta) const override {
    const double u = x - theta;
    const double a = std::abs(u);
    if (a < 1e-12) return 0.0;  // removable-singularity convention
    const double s = u > 0.0 ? 1.0 : -1.0;
    return s * m_ * std::pow(a, m_ - 1.0) - (m_ - 1.0) / u;
  }
  double density_dtheta_impl(double x, double theta) const override {
    const double u = x - theta;
    const double a = std::abs(u);
    if (a < 1e-12) return 0.0;
    const double s = u > 0.0 ? 1.0 : -1.0;
    const double dg0 = 0.5 * m_ * s * ((m_ - 1.0) * std::pow(a, m_ - 2.0) - m_ * std::pow(a, 2.0 * m_ - 2.0)) *
                       std::exp(-std::pow(a, m_));
    return -dg0;
  }
  double draw_impl(double theta, Philox4x32& eng) const override {
    const double sign = random_sign(eng);
    return theta + sign * std::pow(standard_exponential(eng), 1.0 / m_);
  }

 private:
  static std::string make_id(double m);
  double m_;
};

class SymmetricStable final : public Family {
 public:
  explicit SymmetricStable(double alpha) : Family(make_id(alpha), FamilyKind::Shift, kRealLine), alpha_(alpha) {}
  Interval support(double) const override { return kRealLine; }
  bool has_density() const override { return false; }
  bool has_score() const override { return false; }

 protected:
  double log_density_impl(double, double) const override {
    throw UnsupportedError(id() + ": no closed-form density");
  }
  double score_impl(double, double) const override { throw UnsupportedError(id() + ": score is undefined"); }
  double density_dtheta_impl(double, double) const override {
    throw UnsupportedError(id() + ": no closed-form density");
  }
  double draw_impl(double theta, Philox4x32& eng) const override {
    return theta + symmetric_stable_draw(alpha_, eng);
  }

 private:
  static std::string make_id(double alpha);
  double alpha_;
};

std::string format_param(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string WeibullTail::make_id(double m) { return "weibull-tail(" + format_param(m) + ")"; }
std::string SymmetricStable::make_id(double alpha) { return "symmetric-stable(" + format_param(alpha) + ")"; }

class Tabulated final : public Family {
 public:
  Tabulated(std::string name, std::vector<double> knots, std::vector<double> log_density)
      : Family(std::move(name), FamilyKind::Shift, kRealLine), knots_(std::move(knots)), logd_(std::move(log_density)) {
    if (knots_.size() < 2 || knots_.size() != logd_.size())
      throw DomainError("tabulated family: need >= 2 knots and one log-density value per knot");
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
      if (!(knots_[i + 1] > knots_[i])) throw DomainError("tabulated family: knots must be strictly increasing");
    for (double v : logd_)
      if (!std::isfinite(v)) throw DomainError("tabulated family: log-density values must be finite");
    // Exact mass of exp(linear) on every segment, then normalize.
    slopes_.resize(knots_.size() - 1);
    cumulative_.assign(knots_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
      const double width = knots_[i + 1] - knots_[i];
      slopes_[i] = (logd_[i + 1] - logd_[i]) / width;
      cumulative_[i + 1] = cumulative_[i] + segment_mass(i, width);
    }
    log_norm_ = std::log(cumulative_.back());
    for (double& c : cumulative_) c /= cumulative_.back();
  }

  Interval support(double theta) const override { return {knots_.front() + theta, knots_.back() + theta}; }
  std::vector<double> breakpoints(double theta) const override {
    std::vector<double> out;
    for (double k : knots_) out.push_back(k + theta);
    return out;
  }

 protected:
  double log_density_impl(double x, double theta) const override {
    const double u = x - theta;
    const std::size_t i = segment(u);
    return logd_[i] + slopes_[i] * (u - knots_[i]) - log_norm_;
  }
  double score_impl(double x, double theta) const override { return -slopes_[segment(x - theta)]; }
  double score_derivative_impl(double, double) const override { return 0.0; }
  double density_dtheta_impl(double x, double theta) const override {
    const double u = x - theta;
    const std::size_t i = segment(u);
    return -slopes_[i] * std::exp(logd_[i] + slopes_[i] * (u - knots_[i]) - log_norm_);
  }
  double draw_impl(double theta, Philox4x32& eng) const override {
    const double r = uniform_open(eng);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
    std::size_t i = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
    i = std::clamp<std::size_t>(i, 1, knots_.size() - 1) - 1;
    // Invert the within-segment CDF of exp(a + b (u - x_i)).
    const double mass = (r - cumulative_[i]) * std::exp(log_norm_);
    const double a = logd_[i];
    const double b = slopes_[i];
    const double width = knots_[i + 1] - knots_[i];
    double offset;
    if (std::abs(b) * width < 1e-12) {
      offset = mass * std::exp(-a);
    } else {
      offset = std::log1p(b * mass * std::exp(-a)) / b;
    }
    return theta + knots_[i] + std::clamp(offset, 0.0, width);
  }

 private:
  double segment_mass(std::size_t i, double width) const {
    const double b = slopes_[i];
    if (std::abs(b) * width < 1e-12) return std::exp(logd_[i]) * width;
    return std::exp(logd_[i]) * std::expm1(b * width) / b;
  }
  std::size_t segment(double u) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), u);
    std::size_t i = static_cast<std::size_t>(std::distance(knots_.begin(), it));
    return std::clamp<std::size_t>(i, 1, knots_.size() - 1) - 1;
  }

  std::vector<double> knots_;
  std::vector<double> logd_;
  std::vector<double> slopes_;
  std::vector<double> cumulative_;
  double log_norm_ = 0.0;
};

double parse_parameter(std::string_view id, std::string_view prefix) {
  // "<prefix>(<number>)"
  if (id.size() < prefix.size() + 3 || id.substr(0, prefix.size()) != prefix || id[prefix.size()] != '(' ||
      id.back() != ')')
    throw UsageError("malformed family id: " + std::string(id));
  const std::string_view inner = id.substr(prefix.size() + 1, id.size() - prefix.size() - 2);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), v);
  if (ec != std::errc() || ptr != inner.data() + inner.size())
    throw UsageError("malformed family parameter in: " + std::string(id));
  return v;
}

}  // namespace

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Shift:
      return "shift";
    case FamilyKind::Scale:
      return "scale";
    case FamilyKind::General:
      return "general";
  }
  return "general";
}

void Family::check_theta(double theta) const {
  if (!std::isfinite(theta) || !param_domain_.contains(theta))
    throw DomainError(id_ + ": theta=" + format_param(theta) + " outside the parameter domain");
}

void Family::check_point(double x, double theta) const {
  check_theta(theta);
  if (std::isnan(x) || !support(theta).contains_closed(x))
    throw DomainError(id_ + ": x=" + format_param(x) + " outside the support");
}

void Family::require_score() const {
  if (!has_score()) throw UnsupportedError(id_ + ": score is undefined for this family");
}

double Family::density(double x, double theta) const {
  check_point(x, theta);
  return std::exp(log_density_impl(x, theta));
}

double Family::log_density(double x, double theta) const {
  check_point(x, theta);
  return log_density_impl(x, theta);
}

double Family::score(double x, double theta) const {
  require_score();
  check_point(x, theta);
  return score_impl(x, theta);
}

double Family::score_derivative(double x, double theta) const {
  require_score();
  check_point(x, theta);
  return score_derivative_impl(x, theta);
}

double Family::score_derivative_impl(double x, double theta) const {
  const double h = 1e-6 * std::max(1.0, std::abs(theta));
  return (score_impl(x, theta + h) - score_impl(x, theta - h)) / (2.0 * h);
}

double Family::density_dtheta(double x, double theta) const {
  require_score();
  check_point(x, theta);
  return density_dtheta_impl(x, theta);
}

double Family::draw(double theta, Philox4x32& eng) const {
  check_theta(theta);
  return draw_impl(theta, eng);
}

std::vector<double> Family::sample(double theta, std::size_t n, Philox4x32& eng) const {
  check_theta(theta);
  if (n == 0) throw DomainError("sample: n must be >= 1");
  std::vector<double> out(n);
  for (auto& v : out) v = draw_impl(theta, eng);
  return out;
}

double Family::base_density(double) const {
  throw UnsupportedError(id_ + ": base density is defined only for scale families");
}

double Family::base_density_derivative(double) const {
  throw UnsupportedError(id_ + ": base density is defined only for scale families");
}

double symmetric_stable_draw(double alpha, Philox4x32& eng) {
  const double v = std::numbers::pi * (uniform_open(eng) - 0.5);
  const double w = standard_exponential(eng);
  if (alpha == 1.0) return std::tan(v);
  const double a = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha);
  const double b = std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
  return a * b;
}

FamilyPtr make_family(std::string_view id) {
  if (id == "gaussian-shift") return std::make_shared<GaussianShift>();
  if (id == "laplace-shift") return std::make_shared<LaplaceShift>();
  if (id == "exponential-scale") return std::make_shared<ExponentialScale>();
  if (id.starts_with("weibull-tail")) {
    const double m = parse_parameter(id, "weibull-tail");
    if (!(m >= 1.0) || !std::isfinite(m)) throw DomainError("weibull-tail: exponent m must be >= 1");
    return std::make_shared<WeibullTail>(m);
  }
  if (id.starts_with("symmetric-stable")) {
    const double alpha = parse_parameter(id, "symmetric-stable");
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("symmetric-stable: alpha must lie in (0, 2)");
    return std::make_shared<SymmetricStable>(alpha);
  }
  throw UsageError("unknown family: " + std::string(id));
}

std::vector<std::string> builtin_family_ids() {
  return {"gaussian-shift", "laplace-shift", "exponential-scale", "weibull-tail(m)", "symmetric-stable(alpha)"};
}

FamilyPtr make_tabulated_family(std::string name, std::vector<double> knots, std::vector<double> log_density) {
  return std::make_shared<Tabulated>(std::move(name), std::move(knots), std::move(log_density));
}

FamilyPtr load_tabulated_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open family table: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("family table " + path + ": " + e.what());
  }
  for (const auto& [key, _] : doc.items())
    if (key != "name" && key != "kind" && key != "x" && key != "log_density")
      throw UsageError("family table " + path + ": unknown key '" + key + "'");
  if (doc.value("kind", std::string("shift")) != "shift")
    throw UsageError("family table " + path + ": only kind \"shift\" is supported");
  try {
    return make_tabulated_family(doc.value("name", std::string("table")), doc.at("x").get<std::vector<double>>(),
                                 doc.at("log_density").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("family table " + path + ": " + e.what());
  }
}

FamilyPtr resolve_family(std::string_view id_or_table) {
  if (id_or_table.starts_with("table:")) return load_tabulated_family(std::string(id_or_table.substr(6)));
  return make_family(id_or_table);
}

double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("sample_mean: empty sample");
  return compensated_sum(xs) / static_cast<double>(xs.size());
}

RegularityReport check_regularity(const Family& family, double theta, const Estimator& estimator, std::size_t n,
                                  std::size_t reps, const Stream& stream, int workers) {
  if (!family.has_score()) throw UnsupportedError(family.id() + ": regularity check needs a score");
  if (n == 0 || reps < 2) throw DomainError("check_regularity: need n >= 1 and reps >= 2");
  std::vector<double> score_means(reps), pairings(reps), biases(reps);
  parallel_for(reps, resolve_workers(workers), [&](std::size_t r) {
    auto eng = stream.engine(r);
    const auto xs = family.sample(theta, n, eng);
    CompensatedSum score_sum;
    for (double x : xs) score_sum.add(family.score(x, theta));
    const double est = estimator(xs);
    score_means[r] = score_sum.value() / static_cast<double>(n);
    pairings[r] = (est - theta) * score_sum.value();
    biases[r] = est - theta;
  });
  auto summarize = [](const std::vector<double>& v) {
    const auto s = summarize_sample(v);
    return MeanEstimate{s.mean, s.standard_error};
  };
  RegularityReport rep;
  rep.family = family.id();
  rep.theta = theta;
  rep.n = n;
  rep.reps = reps;
  rep.score_mean = summarize(score_means);
  rep.unbiasedness_pairing = summarize(pairings);
  rep.estimator_bias = summarize(biases);
  return rep;
}

}  // namespace rcb
