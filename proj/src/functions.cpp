#include "rcbound/functions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "rcbound/errors.hpp"

namespace rcb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(std::distance(xs.begin(), it)) - 1;
  const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
  return ys[i] + t * (ys[i + 1] - ys[i]);
}

void check_table(const std::vector<double>& xs, const std::vector<double>& ys, const char* what) {
  if (xs.size() < 2 || xs.size() != ys.size())
    throw DomainError(std::string(what) + ": need >= 2 points and matching value count");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (!(xs[i + 1] > xs[i])) throw DomainError(std::string(what) + ": abscissae must be strictly increasing");
  for (double y : ys)
    if (!std::isfinite(y)) throw DomainError(std::string(what) + ": values must be finite");
}

}  // namespace

std::string_view to_string(FunctionForm form) {
  switch (form) {
    case FunctionForm::Analytic:
      return "analytic";
    case FunctionForm::Grid:
      return "grid";
    case FunctionForm::Natural:
      return "natural";
  }
  return "analytic";
}

PsiFunction::PsiFunction(std::string name, FunctionForm form, double support_lo, double support_B,
                         std::function<double(double)> eval)
    : name_(std::move(name)),
      form_(form),
      lo_(support_lo),
      B_(support_B),
      eval_(std::make_shared<const std::function<double(double)>>(std::move(eval))) {
  if (!(support_lo >= 1.0) || !(support_B > support_lo))
    throw DomainError("psi " + name_ + ": support must satisfy 1 <= lo < B");
}

double PsiFunction::operator()(double p) const {
  if (!supports(p)) throw DomainError("psi " + name_ + ": p=" + num(p) + " outside its support");
  return (*eval_)(p);
}

PsiFunction PsiFunction::psi_m(double m) {
  if (!(m > 0.0)) throw DomainError("psi_m: m must be positive");
  return PsiFunction("psi_m(" + num(m) + ")", FunctionForm::Analytic, 1.0, kInf,
                     [m](double p) { return std::pow(p, 1.0 / m); });
}

PsiFunction PsiFunction::constant(double c, double B) {
  if (!(c > 0.0)) throw DomainError("constant psi must be positive");
  return PsiFunction("const(" + num(c) + ")", FunctionForm::Analytic, 1.0, B, [c](double) { return c; });
}

PsiFunction PsiFunction::power(double Q) {
  return PsiFunction("power(" + num(Q) + ")", FunctionForm::Analytic, 1.0, kInf,
                     [Q](double p) { return std::pow(p, Q); });
}

PsiFunction PsiFunction::grid(std::vector<double> p, std::vector<double> values, std::string name) {
  check_table(p, values, "psi grid");
  for (double v : values)
    if (!(v > 0.0)) throw DomainError("psi grid: values must be positive");
  const double lo = std::max(1.0, p.front());
  const double hi = p.back();
  return PsiFunction(std::move(name), FunctionForm::Grid, lo, hi,
                     [p = std::move(p), values = std::move(values)](double x) { return interpolate(p, values, x); });
}

void PsiFunction::validate_on(std::span<const double> p_grid) const {
  double inf_value = kInf;
  for (double p : p_grid) {
    const double v = (*this)(p);
    if (!std::isfinite(v) || !(v > 0.0)) throw DomainError("psi " + name_ + ": not positive at p=" + num(p));
    inf_value = std::min(inf_value, v);
  }
  if (!(inf_value > 0.0)) throw DomainError("psi " + name_ + ": infimum is not positive");
}

PhiFunction::PhiFunction(std::string name, FunctionForm form, double lambda0, double second_derivative_at_zero,
                         std::function<double(double)> eval_nonnegative)
    : name_(std::move(name)),
      form_(form),
      lambda0_(lambda0),
      d2_(second_derivative_at_zero),
      eval_(std::make_shared<const std::function<double(double)>>(std::move(eval_nonnegative))) {
  if (!(lambda0 > 0.0)) throw DomainError("phi " + name_ + ": lambda0 must be positive");
}

double PhiFunction::operator()(double lambda) const {
  const double a = std::abs(lambda);
  if (a >= lambda0_) return kInf;
  return (*eval_)(a);
}

PhiFunction PhiFunction::phi_2() {
  return PhiFunction("phi_2", FunctionForm::Analytic, kInf, 1.0, [](double l) { return 0.5 * l * l; });
}

PhiFunction PhiFunction::power(double Q) {
  if (!(Q >= 2.0)) throw DomainError("phi power(Q): Q must be >= 2 (phi''(0) would be infinite)");
  const double d2 = Q == 2.0 ? 2.0 : 0.0;
  return PhiFunction("power(" + num(Q) + ")", FunctionForm::Analytic, kInf, d2,
                     [Q](double l) { return Q == 2.0 ? l * l : std::pow(l, Q); });
}

PhiFunction PhiFunction::quadratic(double c) {
  if (!(c > 0.0)) throw DomainError("phi quadratic: c must be positive");
  return PhiFunction("quadratic(" + num(c) + ")", FunctionForm::Analytic, kInf, 2.0 * c,
                     [c](double l) { return c * l * l; });
}

PhiFunction PhiFunction::log_cosh() {
  return PhiFunction("log_cosh", FunctionForm::Analytic, kInf, 1.0, [](double l) {
    const double a = std::abs(l);
    if (a < 1.0) {
      const double s = std::sinh(0.5 * a);
      return std::log1p(2.0 * s * s);
    }
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
  });
}

PhiFunction PhiFunction::unchecked_grid(std::vector<double> lambda, std::vector<double> values, std::string name) {
  check_table(lambda, values, "phi grid");
  if (lambda.front() != 0.0) throw DomainError("phi grid: first abscissa must be 0");
  // Second derivative at 0 from the first two segments (parabola fit).
  double d2 = 0.0;
  if (lambda.size() >= 2) d2 = 2.0 * (values[1] - values[0]) / (lambda[1] * lambda[1]);
  const double lambda0 = kInf;
  return PhiFunction(std::move(name), FunctionForm::Grid, lambda0, d2,
                     [lambda = std::move(lambda), values = std::move(values)](double l) {
                       return phi_table_value(lambda, values, l);
                     });
}

PhiFunction PhiFunction::grid(std::vector<double> lambda, std::vector<double> values, std::string name) {
  check_table(lambda, values, "phi grid");
  if (lambda.front() != 0.0 || values.front() != 0.0) throw DomainError("phi grid: need phi(0) = 0 at lambda = 0");
  const std::vector<double> pts = lambda;
  PhiFunction phi = unchecked_grid(std::move(lambda), std::move(values), std::move(name));
  if (!phi.is_convex_on(pts)) throw DomainError("phi grid: values are not convex");
  if (pts.size() >= 3) {
    // the parabola on the first segment must not outgrow the next chord
    const double left = 2.0 * phi(pts[1]) / pts[1];
    const double right = (phi(pts[2]) - phi(pts[1])) / (pts[2] - pts[1]);
    if (right < left * (1.0 - 1e-12)) throw DomainError("phi grid: values are not convex near 0");
  }
  if (!(phi.second_derivative_at_zero() > 0.0) || !std::isfinite(phi.second_derivative_at_zero()))
    throw DomainError("phi grid: phi''(0) must be finite and positive");
  return phi;
}

bool PhiFunction::is_convex_on(std::span<const double> lambda_grid, double tol) const {
  std::vector<double> pts;
  for (double l : lambda_grid)
    if (l >= 0.0 && l < lambda0_) pts.push_back(l);
  std::sort(pts.begin(), pts.end());
  if (!pts.empty() && pts.front() == 0.0 && std::abs((*this)(0.0)) > tol) return false;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double a = pts[i - 1], b = pts[i], c = pts[i + 1];
    const double fa = (*this)(a), fb = (*this)(b), fc = (*this)(c);
    // chord above the middle point
    const double chord = fa + (fc - fa) * (b - a) / (c - a);
    if (fb > chord + tol * std::max(1.0, std::abs(chord))) return false;
  }
  return true;
}

double phi_table_value(const std::vector<double>& knots, const std::vector<double>& values, double lambda) {
  const double l = std::abs(lambda);
  if (l <= knots[1]) {
    const double t = l / knots[1];
    return values[0] + (values[1] - values[0]) * t * t;
  }
  if (l > knots.back()) {
    const std::size_t k = knots.size() - 1;
    const double slope = (values[k] - values[k - 1]) / (knots[k] - knots[k - 1]);
    return values[k] + slope * (l - knots[k]);
  }
  return interpolate(knots, values, l);
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw DomainError("geometric_grid: need 0 < lo <= hi, count >= 1");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double ratio = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo * std::exp(ratio * static_cast<double>(i));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (!(hi >= lo) || count == 0) throw DomainError("linear_grid: need lo <= hi, count >= 1");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  out.back() = hi;
  return out;
}

std::vector<double> default_p_grid(double B) { return geometric_grid(2.0, std::min(B, 256.0), 64); }

std::vector<double> default_lambda_grid(double lambda0) {
  const double hi = std::min(0.999 * lambda0, 16.0);
  const auto pos = geometric_grid(std::min(1e-3, hi), hi, 32);
  std::vector<double> out;
  out.reserve(64);
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) out.push_back(-*it);
  out.insert(out.end(), pos.begin(), pos.end());
  return out;
}

}  // namespace rcb
