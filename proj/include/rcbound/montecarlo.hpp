#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rcbound/distribution.hpp"
#include "rcbound/extended.hpp"
#include "rcbound/families.hpp"
#include "rcbound/norms.hpp"
#include "rcbound/random.hpp"
#include "rcbound/specs.hpp"

namespace rcb {

enum class EstimatorKind { SampleMean, MLE };
enum class PairingKind { Lp, GLS, Bphi };
enum class VerifyMode { Lower, Upper };
enum class Verdict { Holds, HoldsWithinNoise, Violated, Inconclusive };

std::string_view to_string(EstimatorKind k);
std::string_view to_string(PairingKind k);
std::string_view to_string(VerifyMode m);
std::string_view to_string(Verdict v);

// ---------------------------------------------------------------------------
// CLT norm and w.n.r.i. probing

/// Per-n estimates of ||n^{-1/2} (eta_1 + ... + eta_n)||_Y.
struct CltNormEstimate {
  std::string distribution;
  NormSpec norm;
  std::vector<std::size_t> n_grid;
  std::size_t reps = 0;
  std::vector<Extended> values;
  std::vector<double> standard_errors;
  std::vector<Extended> running_sup;
  Extended sup = Extended::finite(0.0);
  // log-log fit of value against n over the upper half of the grid
  double growth_exponent = 0.0;
  double growth_exponent_se = 0.0;
  bool diverged = false;
};

/// Replicates are cumulative walks: replicate r draws eta_1, eta_2, ... once
/// and records the normalized partial sum at every n of the grid.
CltNormEstimate clt_norm_estimate(const Distribution& dist, const NormSpec& norm, std::vector<std::size_t> n_grid,
                                  std::size_t reps, const Stream& stream, int workers = 1);

enum class ProbeVerdict { WNRIConsistent, DivergenceDetected };

std::string_view to_string(ProbeVerdict v);

struct ProbeResult {
  ProbeVerdict verdict = ProbeVerdict::WNRIConsistent;
  CltNormEstimate estimate;
};

ProbeResult wnri_probe(const Distribution& dist, const NormSpec& norm, std::vector<std::size_t> n_grid,
                       std::size_t reps, const Stream& stream, int workers = 1);

/// Divergence rule shared by the CLT probe and the MLE trend check: a
/// log-log slope above both 3 standard errors and `flat_tolerance`.
inline constexpr double kFlatSlopeTolerance = 0.02;

// ---------------------------------------------------------------------------
// Rosenthal check

struct RosenthalReport {
  std::string distribution;
  double p = 2.0;
  double constant = 1.0;      // R(p)
  double single_norm = 0.0;   // |eta|_p
  std::vector<std::size_t> n_grid;
  std::vector<double> ratios;  // |S_n|_p / (R(p) sqrt(n) |eta|_p)
  std::vector<double> ratio_se;
  double max_ratio = 0.0;
  std::size_t reps = 0;
};

/// One simulation shared by all orders in `ps`.
std::vector<RosenthalReport> rosenthal_empirical_check(const Distribution& dist, std::span<const double> ps,
                                                       std::vector<std::size_t> n_grid, std::size_t reps,
                                                       const Stream& stream, int workers = 1);
RosenthalReport rosenthal_empirical_check(const Distribution& dist, double p, std::vector<std::size_t> n_grid,
                                          std::size_t reps, const Stream& stream, int workers = 1);

// ---------------------------------------------------------------------------
// Estimators

/// Root of sum_i l(x_i, theta) = 0: bracketing, then safeguarded Newton
/// (bisection where the score sum has no usable derivative). Throws
/// DomainError when no sign change can be bracketed.
double mle_estimate(const Family& family, std::span<const double> sample);

double apply_estimator(EstimatorKind kind, const Family& family, std::span<const double> sample);

/// sqrt(n) (theta_hat - theta0) per replicate and, optionally, the
/// normalized score sum n^{-1/2} sum_i l(x_i, theta0) on the same draws.
struct EstimatorDraws {
  std::vector<double> tau;
  std::vector<double> score_sum;
  std::size_t failures = 0;
};

/// Failure rate above 0.1% raises NonConvergenceError; failed replicates are
/// dropped otherwise.
EstimatorDraws simulate_estimator(const Family& family, double theta0, EstimatorKind estimator, std::size_t n,
                                  std::size_t reps, const Stream& stream, int workers = 1, bool with_score_sum = false);

struct DeviationEstimate {
  Extended value = Extended::finite(0.0);
  double standard_error = 0.0;  // 20-group jackknife
  std::size_t failures = 0;
};

DeviationEstimate deviation_norm(const Family& family, double theta0, EstimatorKind estimator, std::size_t n,
                                 const NormSpec& norm, std::size_t reps, const Stream& stream, int workers = 1);

// ---------------------------------------------------------------------------
// Scenarios and verification

struct Scenario {
  std::string family = "gaussian-shift";
  double theta0 = 0.0;
  EstimatorKind estimator = EstimatorKind::SampleMean;
  VerifyMode mode = VerifyMode::Lower;
  PairingKind pairing = PairingKind::Lp;
  double q = 2.0;      // Lp pairing
  FunctionRef psi;     // GLS pairing
  FunctionRef phi;     // Bphi pairing
  std::string upper_norm = "lp(4)";  // upper mode
  std::vector<std::size_t> n_grid{10, 100, 1000};
  std::size_t reps = 100000;
  std::optional<std::uint64_t> seed;
  std::vector<double> p_grid;       // empty: default grid
  std::vector<double> lambda_grid;  // empty: default grid
  std::vector<double> theta_grid;   // for natural functions
  int hermite_degree = 3;
  // Output locations; not part of the simulation identity.
  std::string jsonl_path;
  std::string csv_path;

  /// Throws DomainError / UsageError on inconsistent settings.
  void validate() const;
};

struct BoundRow {
  std::size_t n = 0;
  double lhs = 0.0;
  double standard_error = 0.0;
  double margin = 0.0;  // lhs - rhs (lower mode)
  std::size_t failures = 0;
  std::size_t best_test_index = 0;  // pairing modes
};

struct BoundReport {
  Scenario scenario;
  std::string lhs_norm;
  std::string statement_norm;
  bool has_rhs = false;
  double rhs = 0.0;
  std::vector<BoundRow> rows;
  Verdict verdict = Verdict::Inconclusive;
  // upper mode
  std::optional<double> trend_slope;
  std::optional<double> trend_slope_se;
  std::string note;
};

/// Stream identity of a scenario: its seed and a hash of every field that
/// affects the simulation (outputs excluded).
Stream scenario_stream(const Scenario& scenario);

BoundReport verify_bound(const Scenario& scenario, int workers = 1);

}  // namespace rcb
