#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rcbound/random.hpp"

namespace rcb {

enum class FamilyKind { Shift, Scale, General };

std::string_view to_string(FamilyKind kind);

/// Open interval (lo, hi); infinite ends allowed.
struct Interval {
  double lo;
  double hi;

  bool contains(double x) const { return x > lo && x < hi; }
  bool contains_closed(double x) const { return x >= lo && x <= hi; }
};

/// One-parameter family of densities g(x, theta) with its score
/// l(x, theta) = d log g / d theta and a sampler.
///
/// Shift families satisfy g(x, theta) = g0(x - theta); scale families
/// g(x, theta) = h(x / theta) / theta with theta > 0. Derived classes
/// implement the unchecked `*_impl` hooks; the public methods validate
/// arguments and throw DomainError / UnsupportedError.
class Family {
 public:
  virtual ~Family() = default;

  const std::string& id() const { return id_; }
  FamilyKind kind() const { return kind_; }
  const Interval& param_domain() const { return param_domain_; }
  virtual Interval support(double theta) const = 0;

  virtual bool has_density() const { return true; }
  virtual bool has_score() const { return true; }

  double density(double x, double theta) const;
  double log_density(double x, double theta) const;
  double score(double x, double theta) const;
  // d/dtheta of the score; used by Newton refinement in the MLE.
  double score_derivative(double x, double theta) const;
  // d g / d theta computed from the density directly (not as score * density).
  double density_dtheta(double x, double theta) const;

  double draw(double theta, Philox4x32& eng) const;
  std::vector<double> sample(double theta, std::size_t n, Philox4x32& eng) const;

  /// Kinks of x -> g(x, theta) to hand to the quadrature.
  virtual std::vector<double> breakpoints(double /*theta*/) const { return {}; }

  /// Closed-form |l(., theta)|_p when known.
  virtual std::optional<double> score_lp_closed_form(double /*p*/, double /*theta*/) const { return std::nullopt; }

  /// Score moments E|l|^p are infinite for p at or above this order.
  virtual std::optional<double> score_moment_limit() const { return std::nullopt; }

  /// Base density h and h' of a scale family (only meaningful for Scale kind).
  virtual double base_density(double y) const;
  virtual double base_density_derivative(double y) const;

 protected:
  Family(std::string id, FamilyKind kind, Interval param_domain)
      : id_(std::move(id)), kind_(kind), param_domain_(param_domain) {}

  virtual double log_density_impl(double x, double theta) const = 0;
  virtual double score_impl(double x, double theta) const = 0;
  virtual double score_derivative_impl(double x, double theta) const;
  virtual double density_dtheta_impl(double x, double theta) const = 0;
  virtual double draw_impl(double theta, Philox4x32& eng) const = 0;

  void check_theta(double theta) const;
  void check_point(double x, double theta) const;
  void require_score() const;

 private:
  std::string id_;
  FamilyKind kind_;
  Interval param_domain_;
};

using FamilyPtr = std::shared_ptr<const Family>;

/// Built-in identifiers: gaussian-shift, laplace-shift, exponential-scale,
/// weibull-tail(m), symmetric-stable(alpha).
FamilyPtr make_family(std::string_view id);
std::vector<std::string> builtin_family_ids();

/// Shift family whose base log-density is piecewise linear on `knots`
/// (strictly increasing) and zero outside [knots.front(), knots.back()].
/// The tabulated values need not be normalized.
FamilyPtr make_tabulated_family(std::string name, std::vector<double> knots, std::vector<double> log_density);

/// Loads a tabulated family from a JSON document (see docs/families.md).
FamilyPtr load_tabulated_family(const std::string& path);

/// Resolves a built-in id, or "table:<path>" for a tabulated family file.
FamilyPtr resolve_family(std::string_view id_or_table);

/// Symmetric alpha-stable draw with characteristic function exp(-|t|^alpha)
/// (Chambers-Mallows-Stuck).
double symmetric_stable_draw(double alpha, Philox4x32& eng);

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Monte Carlo check of the two identities the lower bounds rest on:
/// E l(eta, theta) = 0 and E[(theta_hat - theta) * sum_i l(x_i, theta)] = 1.
struct RegularityReport {
  std::string family;
  double theta = 0.0;
  std::size_t n = 0;
  std::size_t reps = 0;
  MeanEstimate score_mean;        // per-observation score mean, should be ~0
  MeanEstimate unbiasedness_pairing;  // should be ~1
  MeanEstimate estimator_bias;        // should be ~0
};

using Estimator = std::function<double(std::span<const double>)>;

RegularityReport check_regularity(const Family& family, double theta, const Estimator& estimator, std::size_t n,
                                  std::size_t reps, const Stream& stream, int workers = 1);

double sample_mean(std::span<const double> xs);

}  // namespace rcb
