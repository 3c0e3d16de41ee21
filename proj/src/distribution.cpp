#include "rcbound/distribution.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "rcbound/errors.hpp"

namespace rcb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_arg(std::string_view id, std::string_view prefix) {
  if (!id.starts_with(prefix) || id.size() < prefix.size() + 3 || id[prefix.size()] != '(' || id.back() != ')')
    throw UsageError("malformed distribution id: " + std::string(id));
  const std::string_view inner = id.substr(prefix.size() + 1, id.size() - prefix.size() - 2);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), v);
  if (ec != std::errc() || ptr != inner.data() + inner.size())
    throw UsageError("malformed distribution parameter: " + std::string(id));
  return v;
}

Extended quadrature_moment(const Distribution& d, const std::function<double(double)>& log_weight) {
  quad::Request req;
  req.integrand = [&](double x) {
    const double lp = d.log_pdf(x);
    if (lp == -kInf) return 0.0;
    const double lw = log_weight(x);
    if (lw == -kInf) return 0.0;
    return std::exp(lw + lp);
  };
  req.domain = d.domain;
  req.breakpoints = d.breakpoints;
  req.breakpoints.push_back(0.0);
  req.abs_tol = 1e-14;
  req.rel_tol = 1e-12;
  const auto res = quad::integrate(req);
  if (!res.ok()) return Extended::infinity();
  return Extended::finite(res.value);
}

double log_abs(double x) { return x == 0.0 ? -kInf : std::log(std::abs(x)); }

double gaussian_abs_moment(double p) {
  return std::exp(0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) - 0.5 * std::log(std::numbers::pi));
}

}  // namespace

quad::Domain domain_of(const Interval& support) {
  if (std::isinf(support.lo) && std::isinf(support.hi)) return quad::Domain::full_line();
  if (std::isfinite(support.lo) && std::isinf(support.hi)) return quad::Domain::half_line(support.lo);
  if (std::isfinite(support.lo) && std::isfinite(support.hi)) return quad::Domain::interval(support.lo, support.hi);
  throw UnsupportedError("support unbounded below only is not supported by the quadrature layer");
}

quad::LogResult log_integrate_log_weighted(const Family& family, double theta,
                                           const std::function<double(double)>& log_f) {
  const Interval support = family.support(theta);
  auto breaks = family.breakpoints(theta);
  if (support.contains(theta)) breaks.push_back(theta);
  auto log_integrand = [&](double x) {
    if (!support.contains_closed(x)) return -kInf;
    const double lg = family.log_density(x, theta);
    if (lg == -kInf) return -kInf;
    const double lf = log_f(x);
    if (lf == -kInf) return -kInf;
    return lf + lg;
  };
  return quad::integrate_exp(log_integrand, domain_of(support), breaks);
}

Extended integrate_log_weighted(const Family& family, double theta, const std::function<double(double)>& log_f) {
  const auto r = log_integrate_log_weighted(family, theta, log_f);
  if (!r.ok) return Extended::infinity();
  return Extended::finite(std::exp(r.log_value));
}

Extended abs_moment(const Distribution& d, double p) {
  if (!(p > 0.0)) throw DomainError("abs_moment: p must be positive");
  if (d.tail_index && p >= *d.tail_index) return Extended::infinity();
  if (d.abs_moment_closed) return d.abs_moment_closed(p);
  double total = 0.0;
  for (const auto& [v, w] : d.atoms) total += w * std::pow(std::abs(v), p);
  if (d.log_pdf) {
    const auto cont = quadrature_moment(d, [p](double x) { return p * log_abs(x); });
    if (cont.is_infinite()) return cont;
    total += cont.value();
  } else if (d.atoms.empty()) {
    throw UnsupportedError(d.id + ": no analytic law for moments");
  }
  return Extended::finite(total);
}

Extended log_mgf(const Distribution& d, double lambda) {
  if (d.log_mgf_closed) return d.log_mgf_closed(lambda);
  if (lambda == 0.0) return Extended::finite(0.0);
  if (d.tail_index) return Extended::infinity();
  // log-sum-exp over atoms and the continuous part
  double shift = -kInf;
  for (const auto& [v, w] : d.atoms)
    if (w > 0.0) shift = std::max(shift, lambda * v);
  if (d.log_pdf) {
    const auto cont = quadrature_moment(d, [lambda](double x) { return lambda * x; });
    if (cont.is_infinite()) return cont;
    double total = cont.value();
    for (const auto& [v, w] : d.atoms) total += w * std::exp(lambda * v);
    if (!(total > 0.0) || !std::isfinite(total)) return Extended::infinity();
    return Extended::finite(std::log(total));
  }
  if (d.atoms.empty()) throw UnsupportedError(d.id + ": no analytic law for the mgf");
  double acc = 0.0;
  for (const auto& [v, w] : d.atoms) acc += w * std::exp(lambda * v - shift);
  return Extended::finite(shift + std::log(acc));
}

double tail_probability(const Distribution& d, double x) {
  if (x <= 0.0) return 1.0;
  if (d.tail_closed) return d.tail_closed(x);
  double total = 0.0;
  for (const auto& [v, w] : d.atoms)
    if (std::abs(v) >= x) total += w;
  if (d.log_pdf) {
    quad::Request req;
    req.integrand = [&](double y) { return std::abs(y) >= x ? std::exp(d.log_pdf(y)) : 0.0; };
    req.domain = d.domain;
    req.breakpoints = d.breakpoints;
    req.breakpoints.push_back(x);
    req.breakpoints.push_back(-x);
    const auto res = quad::integrate(req);
    if (!res.ok()) throw NonConvergenceError(d.id + ": tail quadrature did not converge");
    total += res.value;
  } else if (d.atoms.empty()) {
    throw UnsupportedError(d.id + ": no analytic tail function");
  }
  return total;
}

std::vector<double> draw_sample(const Distribution& d, std::size_t n, Philox4x32& eng) {
  if (!d.sampler) throw UnsupportedError(d.id + ": no sampler");
  std::vector<double> out(n);
  for (auto& v : out) v = d.sampler(eng);
  return out;
}

Distribution make_distribution(std::string_view id) {
  Distribution d;
  d.id = std::string(id);
  if (id == "normal") {
    d.log_pdf = [](double x) { return -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi); };
    d.abs_moment_closed = [](double p) { return Extended::finite(gaussian_abs_moment(p)); };
    d.log_mgf_closed = [](double l) { return Extended::finite(0.5 * l * l); };
    d.tail_closed = [](double x) { return std::erfc(x / std::numbers::sqrt2); };
    d.sampler = [](Philox4x32& e) { return standard_normal(e); };
    return d;
  }
  if (id == "rademacher") {
    d.atoms = {{-1.0, 0.5}, {1.0, 0.5}};
    d.log_mgf_closed = [](double l) {
      const double a = std::abs(l);
      return Extended::finite(a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0));
    };
    d.sampler = [](Philox4x32& e) { return (e() >> 63) ? 1.0 : -1.0; };
    return d;
  }
  if (id == "centered-exponential") {
    d.log_pdf = [](double x) { return x < -1.0 ? -kInf : -(x + 1.0); };
    d.domain = quad::Domain::half_line(-1.0);
    d.breakpoints = {0.0, 1.0};
    d.log_mgf_closed = [](double l) {
      if (l >= 1.0) return Extended::infinity();
      return Extended::finite(-l - std::log1p(-l));
    };
    d.tail_closed = [](double x) { return std::exp(-(1.0 + x)) + (x < 1.0 ? -std::expm1(-(1.0 - x)) : 0.0); };
    d.sampler = [](Philox4x32& e) { return standard_exponential(e) - 1.0; };
    return d;
  }
  if (id == "uniform") {
    d.mean = 0.5;
    d.log_pdf = [](double x) { return (x >= 0.0 && x <= 1.0) ? 0.0 : -kInf; };
    d.domain = quad::Domain::interval(0.0, 1.0);
    d.abs_moment_closed = [](double p) { return Extended::finite(1.0 / (p + 1.0)); };
    d.tail_closed = [](double x) { return x >= 1.0 ? 0.0 : 1.0 - x; };
    d.sampler = [](Philox4x32& e) { return uniform_open(e); };
    return d;
  }
  if (id == "zero") {
    d.atoms = {{0.0, 1.0}};
    d.sampler = [](Philox4x32&) { return 0.0; };
    return d;
  }
  if (id.starts_with("point-mass")) {
    const double c = parse_arg(id, "point-mass");
    d.mean = c;
    d.atoms = {{c, 1.0}};
    d.sampler = [c](Philox4x32&) { return c; };
    return d;
  }
  if (id == "laplace") {
    d.log_pdf = [](double x) { return -std::abs(x) - std::log(2.0); };
    d.breakpoints = {0.0};
    d.abs_moment_closed = [](double p) { return Extended::finite(std::tgamma(p + 1.0)); };
    d.log_mgf_closed = [](double l) {
      if (std::abs(l) >= 1.0) return Extended::infinity();
      return Extended::finite(-std::log1p(-l * l));
    };
    d.tail_closed = [](double x) { return std::exp(-x); };
    d.sampler = [](Philox4x32& e) {
      const double s = (e() >> 63) ? 1.0 : -1.0;
      return s * standard_exponential(e);
    };
    return d;
  }
  if (id.starts_with("symmetric-stable")) {
    const double alpha = parse_arg(id, "symmetric-stable");
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("symmetric-stable: alpha must lie in (0, 2)");
    d.tail_index = alpha;
    d.abs_moment_closed = [alpha](double p) {
      if (p >= alpha) return Extended::infinity();
      // E|X|^p = 2^p Gamma((1+p)/2) Gamma(1 - p/alpha) / (Gamma(1 - p/2) sqrt(pi))
      const double lm = p * std::log(2.0) + std::lgamma(0.5 * (1.0 + p)) + std::lgamma(1.0 - p / alpha) -
                        std::lgamma(1.0 - 0.5 * p) - 0.5 * std::log(std::numbers::pi);
      return Extended::finite(std::exp(lm));
    };
    d.log_mgf_closed = [](double l) { return l == 0.0 ? Extended::finite(0.0) : Extended::infinity(); };
    d.sampler = [alpha](Philox4x32& e) { return symmetric_stable_draw(alpha, e); };
    return d;
  }
  if (id.starts_with("weibull-tail")) {
    const double m = parse_arg(id, "weibull-tail");
    if (!(m >= 1.0)) throw DomainError("weibull-tail: m must be >= 1");
    d.log_pdf = [m](double x) {
      const double a = std::abs(x);
      if (a == 0.0) return m == 1.0 ? std::log(0.5) : -kInf;
      return std::log(0.5 * m) + (m - 1.0) * std::log(a) - std::pow(a, m);
    };
    d.breakpoints = {0.0};
    d.abs_moment_closed = [m](double p) { return Extended::finite(std::tgamma(p / m + 1.0)); };
    d.tail_closed = [m](double x) { return std::exp(-std::pow(x, m)); };
    d.sampler = [m](Philox4x32& e) {
      const double s = (e() >> 63) ? 1.0 : -1.0;
      return s * std::pow(standard_exponential(e), 1.0 / m);
    };
    return d;
  }
  throw UsageError("unknown distribution: " + std::string(id));
}

Distribution scaled(const Distribution& d, double c) {
  if (c == 0.0) {
    Distribution z = make_distribution("zero");
    z.id = "0*" + d.id;
    return z;
  }
  Distribution s;
  s.id = std::to_string(c) + "*" + d.id;
  s.mean = c * d.mean;
  const double ac = std::abs(c);
  if (d.log_pdf) {
    auto base = d.log_pdf;
    s.log_pdf = [base, c, ac](double x) { return base(x / c) - std::log(ac); };
    if (d.domain.kind == quad::DomainKind::Interval) {
      const double a = c * d.domain.a, b = c * d.domain.b;
      s.domain = quad::Domain::interval(std::min(a, b), std::max(a, b));
    } else if (d.domain.kind == quad::DomainKind::HalfLine && c > 0.0) {
      s.domain = quad::Domain::half_line(c * d.domain.a);
    } else {
      s.domain = quad::Domain::full_line();
      if (d.domain.kind == quad::DomainKind::HalfLine) s.breakpoints.push_back(c * d.domain.a);
    }
    for (double b : d.breakpoints) s.breakpoints.push_back(c * b);
  }
  for (const auto& [v, w] : d.atoms) s.atoms.emplace_back(c * v, w);
  if (d.abs_moment_closed) {
    auto base = d.abs_moment_closed;
    s.abs_moment_closed = [base, ac](double p) {
      const auto m = base(p);
      return m.is_infinite() ? m : Extended::finite(std::pow(ac, p) * m.value());
    };
  }
  if (d.log_mgf_closed) {
    auto base = d.log_mgf_closed;
    s.log_mgf_closed = [base, c](double l) { return base(c * l); };
  }
  if (d.tail_closed) {
    auto base = d.tail_closed;
    s.tail_closed = [base, ac](double x) { return base(x / ac); };
  }
  s.tail_index = d.tail_index;
  if (d.sampler) {
    auto base = d.sampler;
    s.sampler = [base, c](Philox4x32& e) { return c * base(e); };
  }
  return s;
}

Distribution score_distribution(FamilyPtr family, double theta) {
  if (!family->has_score()) throw UnsupportedError(family->id() + ": score is undefined");
  Distribution d;
  d.id = "score:" + family->id();
  d.mean = 0.0;
  d.tail_index = family->score_moment_limit();
  d.abs_moment_closed = [family, theta](double p) {
    if (auto closed = family->score_lp_closed_form(p, theta)) return Extended::finite(std::pow(*closed, p));
    return integrate_log_weighted(*family, theta, [&](double x) { return p * log_abs(family->score(x, theta)); });
  };
  d.log_mgf_closed = [family, theta](double l) {
    if (l == 0.0) return Extended::finite(0.0);
    const auto m = integrate_log_weighted(*family, theta, [&](double x) { return l * family->score(x, theta); });
    if (m.is_infinite() || !(m.value() > 0.0)) return Extended::infinity();
    return Extended::finite(std::log(m.value()));
  };
  d.sampler = [family, theta](Philox4x32& e) { return family->score(family->draw(theta, e), theta); };
  return d;
}

Distribution family_distribution(FamilyPtr family, double theta) {
  Distribution d;
  d.id = family->id();
  if (family->has_density()) {
    d.log_pdf = [family, theta](double x) {
      const Interval s = family->support(theta);
      if (!s.contains_closed(x)) return -kInf;
      return family->log_density(x, theta);
    };
    d.domain = domain_of(family->support(theta));
    d.breakpoints = family->breakpoints(theta);
    d.breakpoints.push_back(theta);
    quad::Request req;
    req.integrand = [&](double x) { return x * std::exp(d.log_pdf(x)); };
    req.domain = d.domain;
    req.breakpoints = d.breakpoints;
    const auto res = quad::integrate(req);
    d.mean = res.ok() ? res.value : theta;
  } else {
    d.mean = theta;
  }
  d.sampler = [family, theta](Philox4x32& e) { return family->draw(theta, e); };
  return d;
}

}  // namespace rcb
