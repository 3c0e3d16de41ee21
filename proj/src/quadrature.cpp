#include "rcbound/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "rcbound/errors.hpp"

namespace rcb::quad {

namespace {

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

// Integrand in the mapped parameter t, Jacobian included.
class Mapped {
 public:
  Mapped(const Request& req, Result& res) : req_(req), res_(res) {}

  double operator()(double t) const {
    ++res_.evaluations;
    double x = t;
    double jac = 1.0;
    switch (req_.domain.kind) {
      case DomainKind::FullLine: {
        const double d = 1.0 - t * t;
        x = t / d;
        jac = (1.0 + t * t) / (d * d);
        break;
      }
      case DomainKind::HalfLine: {
        const double d = 1.0 - t;
        x = req_.domain.a + t / d;
        jac = 1.0 / (d * d);
        break;
      }
      case DomainKind::Interval:
        break;
    }
    const double fx = req_.integrand(x);
    if (fx == 0.0) return 0.0;
    const double v = fx * jac;
    if (!std::isfinite(v)) res_.finite = false;
    return v;
  }

  double to_t(double x) const {
    switch (req_.domain.kind) {
      case DomainKind::FullLine:
        return 2.0 * x / (1.0 + std::sqrt(1.0 + 4.0 * x * x));
      case DomainKind::HalfLine: {
        const double y = x - req_.domain.a;
        return y / (1.0 + y);
      }
      case DomainKind::Interval:
        return x;
    }
    return x;
  }

  std::pair<double, double> t_range() const {
    switch (req_.domain.kind) {
      case DomainKind::FullLine:
        return {-1.0, 1.0};
      case DomainKind::HalfLine:
        return {0.0, 1.0};
      case DomainKind::Interval:
        return {req_.domain.a, req_.domain.b};
    }
    return {-1.0, 1.0};
  }

 private:
  const Request& req_;
  Result& res_;
};

Segment gauss_kronrod(const Mapped& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double res_gauss = 0.0;
  double res_kronrod = fc * kWgk[10];
  double res_abs = std::abs(res_kronrod);
  std::array<double, 10> fv1{}, fv2{};
  for (int j = 0; j < 5; ++j) {
    const int k = 2 * j + 1;
    const double dx = half * kXgk[k];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[k] = f1;
    fv2[k] = f2;
    res_gauss += kWg[j] * (f1 + f2);
    res_kronrod += kWgk[k] * (f1 + f2);
    res_abs += kWgk[k] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 5; ++j) {
    const int k = 2 * j;
    const double dx = half * kXgk[k];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[k] = f1;
    fv2[k] = f2;
    res_kronrod += kWgk[k] * (f1 + f2);
    res_abs += kWgk[k] * (std::abs(f1) + std::abs(f2));
  }
  const double mean = 0.5 * res_kronrod;
  double res_asc = kWgk[10] * std::abs(fc - mean);
  for (int k = 0; k < 10; ++k) res_asc += kWgk[k] * (std::abs(fv1[k] - mean) + std::abs(fv2[k] - mean));

  const double value = res_kronrod * half;
  res_abs *= std::abs(half);
  res_asc *= std::abs(half);
  double err = std::abs((res_kronrod - res_gauss) * half);
  if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * res_abs, err);
  return {lo, hi, value, err};
}

}  // namespace

Result integrate(const Request& req) {
  if (!req.integrand) throw DomainError("quadrature: empty integrand");
  if (!(req.abs_tol > 0.0) || !(req.rel_tol > 0.0)) throw DomainError("quadrature: tolerances must be positive");
  if (req.max_subdivisions < 1) throw DomainError("quadrature: max_subdivisions must be >= 1");
  if (req.domain.kind == DomainKind::Interval && !(req.domain.b >= req.domain.a))
    throw DomainError("quadrature: interval requires a <= b");

  Result res;
  Mapped f(req, res);
  const auto [t_lo, t_hi] = f.t_range();
  if (t_lo == t_hi) {
    res.converged = true;
    return res;
  }

  std::vector<double> cuts{t_lo};
  for (double x : req.breakpoints) {
    if (!std::isfinite(x)) continue;
    const double t = f.to_t(x);
    if (t > t_lo && t < t_hi) cuts.push_back(t);
  }
  cuts.push_back(t_hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Segment> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment s = gauss_kronrod(f, cuts[i], cuts[i + 1]);
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }
  res.subdivisions = static_cast<int>(heap.size());

  auto target = [&] { return std::max(req.abs_tol, req.rel_tol * std::abs(total)); };
  while (res.finite && total_err > target() && res.subdivisions < req.max_subdivisions) {
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break;  // cannot bisect further
    heap.pop();
    Segment left = gauss_kronrod(f, worst.lo, mid);
    Segment right = gauss_kronrod(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++res.subdivisions;
  }

  // Re-sum from the segments to shed drift from the incremental updates.
  double sum = 0.0;
  double err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  res.value = sum;
  res.error_estimate = err;
  res.converged = res.finite && std::isfinite(sum) && err <= std::max(req.abs_tol, req.rel_tol * std::abs(sum));
  if (!std::isfinite(sum)) res.finite = false;
  return res;
}

Result integrate(std::function<double(double)> f, Domain domain, std::vector<double> breakpoints, double abs_tol,
                 double rel_tol) {
  Request req;
  req.integrand = std::move(f);
  req.domain = domain;
  req.breakpoints = std::move(breakpoints);
  req.abs_tol = abs_tol;
  req.rel_tol = rel_tol;
  return integrate(req);
}

namespace {

std::vector<double> probe_points(const Domain& d, const std::vector<double>& breakpoints) {
  std::vector<double> pts(breakpoints);
  std::vector<double> mags;
  for (int i = 0; i <= 160; ++i) mags.push_back(std::pow(10.0, -4.0 + 0.05 * i));
  switch (d.kind) {
    case DomainKind::FullLine:
      pts.push_back(0.0);
      for (double m : mags) {
        pts.push_back(m);
        pts.push_back(-m);
      }
      break;
    case DomainKind::HalfLine:
      pts.push_back(d.a);
      for (double m : mags) pts.push_back(d.a + m);
      break;
    case DomainKind::Interval:
      for (int i = 0; i <= 200; ++i) pts.push_back(d.a + (d.b - d.a) * i / 200.0);
      break;
  }
  return pts;
}

}  // namespace

LogResult integrate_exp(const std::function<double(double)>& log_f, Domain domain, std::vector<double> breakpoints,
                        double rel_tol) {
  double shift = -std::numeric_limits<double>::infinity();
  double peak = std::numeric_limits<double>::quiet_NaN();
  for (double x : probe_points(domain, breakpoints)) {
    const double v = log_f(x);
    if (std::isfinite(v) && v > shift) {
      shift = v;
      peak = x;
    }
  }
  if (!std::isfinite(shift)) shift = 0.0;
  // a narrow bump far from the origin can slip between the first Kronrod nodes
  if (std::isfinite(peak)) {
    breakpoints.push_back(peak);
    // bracket the bump at multiples of its curvature width
    const double h = 1e-3 * std::max(std::abs(peak), 1e-3);
    const double c = -(log_f(peak + h) - 2.0 * log_f(peak) + log_f(peak - h)) / (h * h);
    if (std::isfinite(c) && c > 0.0) {
      const double sigma = 1.0 / std::sqrt(c);
      for (double k : {1.0, 3.0, 6.0, 10.0, 20.0, 40.0}) {
        breakpoints.push_back(peak - k * sigma);
        breakpoints.push_back(peak + k * sigma);
      }
    }
  }
  Request req;
  req.integrand = [&](double x) {
    const double v = log_f(x);
    if (v == -std::numeric_limits<double>::infinity()) return 0.0;
    return std::exp(v - shift);
  };
  req.domain = domain;
  req.breakpoints = std::move(breakpoints);
  req.abs_tol = 1e-15;
  req.rel_tol = rel_tol;
  const auto res = integrate(req);
  LogResult out;
  out.ok = res.ok();
  if (!out.ok) return out;
  out.log_value = res.value > 0.0 ? shift + std::log(res.value) : -std::numeric_limits<double>::infinity();
  out.rel_error = res.value > 0.0 ? res.error_estimate / res.value : 0.0;
  return out;
}

}  // namespace rcb::quad
