#pragma once

#include <functional>
#include <vector>

namespace rcb::quad {

enum class DomainKind { FullLine, HalfLine, Interval };

/// Integration domain: (-inf, inf), [a, inf) or [a, b].
struct Domain {
  DomainKind kind = DomainKind::FullLine;
  double a = 0.0;
  double b = 0.0;

  static Domain full_line() { return {DomainKind::FullLine, 0.0, 0.0}; }
  static Domain half_line(double a) { return {DomainKind::HalfLine, a, 0.0}; }
  static Domain interval(double a, double b) { return {DomainKind::Interval, a, b}; }
};

struct Request {
  std::function<double(double)> integrand;
  Domain domain = Domain::full_line();
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  int max_subdivisions = 4000;
  // Points (in x) where the integrand has kinks or integrable singularities.
  // Segments are split there before adaptation starts.
  std::vector<double> breakpoints;
};

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  // False when the integrand returned inf/nan somewhere (treated as divergence).
  bool finite = true;
  int subdivisions = 0;
  int evaluations = 0;

  bool ok() const { return converged && finite; }
};

/// Globally adaptive 21-point Gauss-Kronrod integration with bisection of the
/// worst segment. Infinite ranges are mapped to a finite parameter range:
/// full line via x = t / (1 - t^2), t in (-1, 1); half line via
/// x = a + t / (1 - t), t in [0, 1). Never returns a silent wrong answer:
/// `converged` is false whenever the error target was not met.
Result integrate(const Request& request);

/// Shorthand for the common case.
Result integrate(std::function<double(double)> f, Domain domain, std::vector<double> breakpoints = {},
                 double abs_tol = 1e-13, double rel_tol = 1e-11);

struct LogResult {
  double log_value = 0.0;  // -inf for a zero integral
  double rel_error = 0.0;
  bool ok = false;
};

/// log of the integral of exp(log_f(x)). The integrand is rescaled by its
/// largest sampled value first, so integrals beyond the double range stay
/// representable.
LogResult integrate_exp(const std::function<double(double)>& log_f, Domain domain, std::vector<double> breakpoints = {},
                        double rel_tol = 1e-12);

}  // namespace rcb::quad
