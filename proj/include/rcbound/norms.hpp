#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rcbound/distribution.hpp"
#include "rcbound/extended.hpp"
#include "rcbound/functions.hpp"

namespace rcb {

// ---------------------------------------------------------------------------
// Norm specifications

enum class NormTag { Lp, GLS, Bphi, Lorentz };

std::string_view to_string(NormTag tag);

/// Tagged choice of rearrangement-invariant norm. Only the fields required by
/// the tag are meaningful: Lp uses p; Lorentz uses p and q (q may be +inf);
/// GLS uses psi and a p-grid; Bphi uses phi and a lambda-grid. Empty grids
/// mean "use the default grid".
struct NormSpec {
  NormTag tag = NormTag::Lp;
  double p = 2.0;
  double q = 2.0;
  std::optional<PsiFunction> psi;
  std::optional<PhiFunction> phi;
  std::vector<double> grid;

  static NormSpec lp(double p);
  static NormSpec lorentz(double p, double q);
  static NormSpec gls(PsiFunction psi, std::vector<double> p_grid = {});
  static NormSpec bphi(PhiFunction phi, std::vector<double> lambda_grid = {});

  /// Throws DomainError when required fields are missing or out of range.
  void validate() const;
  /// The grid actually used (default grid when `grid` is empty).
  std::vector<double> resolved_grid() const;
  std::string describe() const;
};

// ---------------------------------------------------------------------------
// Samples and moment curves

struct Provenance {
  std::string family;
  double theta = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::size_t reps = 0;
};

/// Nonempty vector of draws plus what is needed to regenerate it.
class EmpiricalSample {
 public:
  explicit EmpiricalSample(std::vector<double> values, Provenance provenance = {});

  std::span<const double> values() const { return values_; }
  const Provenance& provenance() const { return provenance_; }
  std::size_t size() const { return values_.size(); }
  /// |values| sorted ascending, computed once.
  std::span<const double> sorted_abs() const;

 private:
  std::vector<double> values_;
  Provenance provenance_;
  mutable std::vector<double> sorted_abs_;
};

enum class MomentSource { Analytic, Empirical };

/// |eta|_p on a p-grid. For empirical curves `divergent[i]` records whether
/// the block-growth test says the p_i-th moment does not exist.
struct MomentCurve {
  std::vector<double> p_grid;
  std::vector<Extended> norms;
  MomentSource source = MomentSource::Analytic;
  std::size_t reps = 0;
};

MomentCurve analytic_moment_curve(const Distribution& d, std::span<const double> p_grid);

struct EmpiricalMomentOptions {
  // Run the block-growth divergence test at each p.
  bool detect_divergence = false;
  double min_growth_slope = 0.05;
};

MomentCurve empirical_moment_curve(std::span<const double> sample, std::span<const double> p_grid,
                                   const EmpiricalMomentOptions& options = {});

/// Nondecreasing within `tol` relative (Lyapunov inequality).
bool is_lyapunov_monotone(const MomentCurve& curve, double tol);

/// Growth test for the existence of E|X|^p from a sample: block means of
/// |x|^p for geometrically increasing block sizes; a finite moment gives a
/// flat median, an infinite one a positive log-log slope.
struct MomentGrowth {
  double slope = 0.0;
  double slope_se = 0.0;
  bool diverges = false;
};

MomentGrowth moment_growth_test(std::span<const double> sample, double p, double min_slope = 0.05);

// ---------------------------------------------------------------------------
// Lebesgue-Riesz

/// (E|X|^p)^{1/p}; infinite when the moment diverges.
Extended lp_norm(const Distribution& d, double p);
/// Plug-in (mean |x|^p)^{1/p}; overflow-safe.
double lp_norm(std::span<const double> sample, double p);

// ---------------------------------------------------------------------------
// Grand Lebesgue

struct GlsOptions {
  // Ratio ceiling for the +inf verdict when B = inf and the ratio is still rising.
  double ceiling = 1e6;
};

struct GlsResult {
  Extended value = Extended::finite(0.0);
  double argmax_p = 0.0;
  std::vector<double> ratios;  // |eta|_p / psi(p); +inf entries for divergent moments
};

/// sup_p |eta|_p / psi(p) over the curve's p-grid.
GlsResult gls_norm(const MomentCurve& curve, const PsiFunction& psi, const GlsOptions& options = {});

// ---------------------------------------------------------------------------
// Exponential Orlicz B(phi)

/// Log-mgf oracle for the B(phi) norm: analytic (closed form or quadrature)
/// or empirical plug-in.
struct MgfSource {
  std::string kind;
  std::function<Extended(double)> log_mgf;
  double mean = 0.0;
  double mean_tolerance = 1e-8;
  // Empirical sources only: |lambda| * max|x| must stay below this.
  double max_abs_lambda = std::numeric_limits<double>::infinity();

  static MgfSource analytic(const Distribution& d);
  static MgfSource empirical(std::span<const double> sample, double exponent_cap = 40.0);
};

struct BphiOptions {
  double ceiling = 1e6;
  double rel_tol = 1e-12;
};

struct BphiResult {
  Extended value = Extended::finite(0.0);
  double binding_lambda = 0.0;          // lambda whose constraint is tightest at the optimum
  std::vector<double> truncated_lambdas;  // grid points dropped (mgf infinite or overflow guard)
};

/// inf { tau > 0 : log E exp(lambda eta) <= phi(lambda tau) for all lambda in the grid }.
BphiResult bphi_norm(const MgfSource& mgf, const PhiFunction& phi, std::span<const double> lambda_grid,
                     const BphiOptions& options = {});

// ---------------------------------------------------------------------------
// Lorentz

/// Quasinorm (int_0^inf P(|X| >= x)^{q/p} d(x^q))^{1/q}; q = inf gives
/// sup_x x P(|X| >= x)^{1/p}.
Extended lorentz_quasinorm(const Distribution& d, double p, double q);
/// Empirical version on the exact step tail function of the sample.
double lorentz_quasinorm(std::span<const double> sample, double p, double q);
double lorentz_quasinorm(const EmpiricalSample& sample, double p, double q);

enum class NormalClass { StrongNormal, NotStrongNormal };

std::string_view to_string(NormalClass c);

/// L_{p,q} is strong normal iff min(p, q) > 2 or q = 2 <= p.
NormalClass lorentz_snri_classify(double p, double q);

// ---------------------------------------------------------------------------
// Generic evaluation

/// Analytic norm of a law.
Extended analytic_norm(const Distribution& d, const NormSpec& spec);

struct NormEstimate {
  Extended value = Extended::finite(0.0);
  double standard_error = 0.0;
};

/// Plug-in norm of a sample. `with_se` adds a standard error: delta method
/// for Lp, delete-a-group jackknife (20 groups) otherwise.
NormEstimate empirical_norm(std::span<const double> sample, const NormSpec& spec, bool with_se = false);

// ---------------------------------------------------------------------------
// Associate-space pairing

struct PairingResult {
  double value = 0.0;
  std::size_t best_index = 0;
  std::vector<double> per_entry;
};

/// max over dictionary entries zeta of |E(zeta * tau)| / ||zeta||_Y, a lower
/// estimate of the associate norm ||tau||_{Y'}. All samples must be realized
/// on the same replicates (equal length, index-aligned).
PairingResult associate_pairing_lb(std::span<const double> target,
                                   const std::vector<std::span<const double>>& dictionary, const NormSpec& norm);

// ---------------------------------------------------------------------------
// Tail envelope from a G(psi_m) norm

/// Markov bound P(|eta| > x) <= (N p^{1/m} / x)^p optimized over p in
/// [p_lo, p_hi]. At the unconstrained optimum p = (x / N)^m / e this is
/// exp(-C x^m) with C = 1 / (e m N^m), valid for x >= threshold.
struct TailEnvelope {
  double norm = 0.0;
  double m = 2.0;
  double p_lo = 2.0;
  double p_hi = std::numeric_limits<double>::infinity();
  double C = 0.0;
  double threshold = 0.0;

  double operator()(double x) const;
};

TailEnvelope gls_tail_bound(const Extended& gls_norm_value, double m, double p_lo = 2.0,
                            double p_hi = std::numeric_limits<double>::infinity());

}  // namespace rcb
