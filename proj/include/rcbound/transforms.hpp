#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "rcbound/extended.hpp"
#include "rcbound/families.hpp"
#include "rcbound/functions.hpp"

namespace rcb {

// ---------------------------------------------------------------------------
// Young-Fenchel conjugate

struct ConjugatePoint {
  double value = 0.0;
  double argmax = 0.0;
  // The maximizer sits on the edge of the search interval, so the true
  // supremum may be larger (or infinite).
  bool boundary = false;
};

struct ConjugateTable {
  std::vector<double> u;
  std::vector<double> value;
  std::vector<double> argmax;
  std::vector<bool> boundary;
  bool convex = true;
};

/// f*(u) = sup_{lambda in [lo, hi]} (lambda u - f(lambda)) for a convex f,
/// evaluated lazily by golden-section search on the concave objective.
class ConjugateFunction {
 public:
  ConjugateFunction(std::function<double(double)> f, double lo, double hi);

  ConjugatePoint evaluate(double u) const;
  double operator()(double u) const { return evaluate(u).value; }
  ConjugateTable table(std::span<const double> u_grid) const;

  double search_lo() const { return lo_; }
  double search_hi() const { return hi_; }

 private:
  std::function<double(double)> f_;
  double lo_;
  double hi_;
};

struct YoungFenchelOptions {
  // Half-width of the lambda search interval (clipped to lambda0).
  double lambda_max = 1e3;
};

/// Young-Fenchel transform of phi; throws DomainError when phi fails the
/// discrete convexity check on a probe grid.
ConjugateFunction young_fenchel(const PhiFunction& phi, const YoungFenchelOptions& options = {});
/// Conjugate of an arbitrary convex function on [lo, hi] (used for phi**).
ConjugateFunction young_fenchel(std::function<double(double)> f, double lo, double hi);

/// Discrete midpoint convexity of sampled values on a sorted grid.
bool is_convex_sequence(std::span<const double> x, std::span<const double> y, double tol = 1e-9);

// ---------------------------------------------------------------------------
// phi-bar

struct PhiBarOptions {
  std::size_t n_max = std::size_t{1} << 20;
  // Every n up to this value is evaluated, then n doubles.
  std::size_t dense_n = 64;
  std::size_t stable_doublings = 8;
  // Relative improvement below which the running max counts as stable.
  double tolerance = 1e-12;
};

struct PhiBarValue {
  double value = 0.0;
  std::size_t n_argmax = 1;
  bool diverged = false;
};

/// bar phi(lambda) = sup_n n phi(lambda / sqrt(n)).
class PhiBar {
 public:
  explicit PhiBar(PhiFunction phi, PhiBarOptions options = {});

  PhiBarValue evaluate(double lambda) const;
  double operator()(double lambda) const { return evaluate(lambda).value; }
  /// As a PhiFunction (lambda0 and phi''(0) carry over from phi).
  PhiFunction as_phi() const;
  const PhiFunction& base() const { return phi_; }

 private:
  PhiFunction phi_;
  PhiBarOptions options_;
};

PhiBar phi_bar(const PhiFunction& phi, PhiBarOptions options = {});

// ---------------------------------------------------------------------------
// psi transforms

/// p -> R(p) psi(p) on supp(psi) intersected with [2, B].
PsiFunction psi_R(const PsiFunction& psi);

/// psi_phi(p) = p / phi^{-1}(p); requires lambda0 = inf.
PsiFunction psi_from_phi(const PhiFunction& phi);

// ---------------------------------------------------------------------------
// Natural functions of a family

struct NaturalPsiOptions {
  // Grid used to locate the support end B (first divergent integral).
  std::vector<double> p_grid;  // empty: default_p_grid()
};

/// psi_0(p) = sup_theta [int |dg/dtheta|^p g^{1-p}]^{1/p}. Shift families use
/// the theta-free base integral, scale families the factored form at the
/// smallest theta of the grid, general families the direct sup over the grid.
/// The returned function evaluates by quadrature on demand.
PsiFunction natural_psi(FamilyPtr family, std::vector<double> theta_grid, const NaturalPsiOptions& options = {});

/// [int |dg/dtheta|^p g^{1-p} dx]^{1/p} at one theta, from the density
/// derivative (no shortcut); infinite when the integral diverges.
Extended natural_integral_direct(const Family& family, double theta, double p);

/// [int_0^inf |h(y) + y h'(y)|^p h(y)^{1-p} dy]^{1/p} for a scale family.
Extended scale_reduced_integral(const Family& family, double p);

struct NaturalPhiOptions {
  std::vector<double> lambda_grid;  // positive magnitudes; empty: from default_lambda_grid()
};

/// phi_0(lambda) = sup_theta log E exp(lambda l(eta, theta)), tabulated at the
/// grid magnitudes and made even by taking the larger of the two signs.
/// When the mgf diverges the function is +inf from the first divergent
/// magnitude on (reported as lambda0).
PhiFunction natural_phi(FamilyPtr family, std::vector<double> theta_grid, const NaturalPhiOptions& options = {});

}  // namespace rcb
