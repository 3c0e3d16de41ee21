#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace rcb {

enum class FunctionForm { Analytic, Grid, Natural };

std::string_view to_string(FunctionForm form);

/// Generating function psi(p) of a Grand Lebesgue space, positive and
/// continuous on its support [lo, B] (B may be +inf). Values outside the
/// support are a DomainError.
class PsiFunction {
 public:
  PsiFunction(std::string name, FunctionForm form, double support_lo, double support_B,
              std::function<double(double)> eval);

  double operator()(double p) const;

  const std::string& name() const { return name_; }
  FunctionForm form() const { return form_; }
  double support_lo() const { return lo_; }
  double support_B() const { return B_; }
  bool supports(double p) const { return p >= lo_ && p <= B_; }

  /// p^{1/m} on [1, inf).
  static PsiFunction psi_m(double m);
  /// The constant c on [1, B].
  static PsiFunction constant(double c, double B);
  /// p^Q on [1, inf).
  static PsiFunction power(double Q);
  /// Piecewise-linear interpolation through (p_i, v_i); support [p_0, p_last].
  static PsiFunction grid(std::vector<double> p, std::vector<double> values, std::string name = "grid");

  /// Positivity and finiteness on the given points; inf > 0.
  void validate_on(std::span<const double> p_grid) const;

 private:
  std::string name_;
  FunctionForm form_;
  double lo_;
  double B_;
  std::shared_ptr<const std::function<double(double)>> eval_;
};

/// Even convex function phi(lambda), phi(0) = 0, finite on (-lambda0, lambda0).
/// Evaluations at |lambda| >= lambda0 return +inf.
class PhiFunction {
 public:
  PhiFunction(std::string name, FunctionForm form, double lambda0, double second_derivative_at_zero,
              std::function<double(double)> eval_nonnegative);

  double operator()(double lambda) const;

  const std::string& name() const { return name_; }
  FunctionForm form() const { return form_; }
  double lambda0() const { return lambda0_; }
  double second_derivative_at_zero() const { return d2_; }

  /// lambda^2 / 2, the subgaussian generator.
  static PhiFunction phi_2();
  /// |lambda|^Q, Q >= 2 (Q < 2 has an infinite second derivative at 0 and is rejected).
  static PhiFunction power(double Q);
  /// c * lambda^2.
  static PhiFunction quadratic(double c);
  /// log cosh(lambda), the log-mgf of a Rademacher sign.
  static PhiFunction log_cosh();
  /// Piecewise-linear in |lambda| through (lambda_i, v_i), lambda_0 = 0 required;
  /// checked for phi(0) = 0, convexity and positive curvature at 0.
  static PhiFunction grid(std::vector<double> lambda, std::vector<double> values, std::string name = "grid");
  /// Same as grid() without the class checks (for deliberately invalid inputs).
  static PhiFunction unchecked_grid(std::vector<double> lambda, std::vector<double> values,
                                    std::string name = "grid");

  /// Discrete convexity and phi(0) = 0 on the given nonnegative points.
  bool is_convex_on(std::span<const double> lambda_grid, double tol = 1e-12) const;

 private:
  std::string name_;
  FunctionForm form_;
  double lambda0_;
  double d2_;
  std::shared_ptr<const std::function<double(double)>> eval_;
};

/// Tabulated phi at |lambda|, knots starting at 0: a parabola through the
/// first two knots, linear between later knots and beyond the last one.
double phi_table_value(const std::vector<double>& knots, const std::vector<double>& values, double lambda);

/// Geometric grid of `count` points on [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, std::size_t count);
/// Uniform grid of `count` points on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t count);
/// Default p-grid for sup-over-p evaluations: 64 geometric points on [2, min(B, 256)].
std::vector<double> default_p_grid(double B = std::numeric_limits<double>::infinity());
/// Default lambda-grid: 32 geometric magnitudes in [1e-3, min(0.999 lambda0, 16)], both signs.
std::vector<double> default_lambda_grid(double lambda0 = std::numeric_limits<double>::infinity());

}  // namespace rcb
