#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rcbound/extended.hpp"
#include "rcbound/families.hpp"
#include "rcbound/quadrature.hpp"
#include "rcbound/random.hpp"

namespace rcb {

/// Law of a real random variable, described by whatever is available:
/// a log-density for quadrature, atoms, closed forms, and a sampler.
/// Analytic queries use closed forms first, then atoms, then quadrature.
struct Distribution {
  std::string id;
  double mean = 0.0;

  // Continuous part.
  std::function<double(double)> log_pdf;
  quad::Domain domain = quad::Domain::full_line();
  std::vector<double> breakpoints;

  // Discrete part: (value, probability).
  std::vector<std::pair<double, double>> atoms;

  // Closed forms, each optional.
  std::function<Extended(double)> abs_moment_closed;  // p -> E|X|^p
  std::function<Extended(double)> log_mgf_closed;     // lambda -> log E exp(lambda X)
  std::function<double(double)> tail_closed;         // x -> P(|X| >= x)
  // Moments of order >= tail_index are infinite.
  std::optional<double> tail_index;

  std::function<double(Philox4x32&)> sampler;

  bool has_analytic_law() const { return static_cast<bool>(log_pdf) || !atoms.empty(); }
};

/// E|X|^p; infinite when the moment diverges.
Extended abs_moment(const Distribution& d, double p);
/// log E exp(lambda X); infinite when the mgf diverges.
Extended log_mgf(const Distribution& d, double lambda);
/// P(|X| >= x).
double tail_probability(const Distribution& d, double x);

std::vector<double> draw_sample(const Distribution& d, std::size_t n, Philox4x32& eng);

/// Built-in laws: normal, rademacher, centered-exponential, uniform (on (0,1)),
/// zero, point-mass(c), laplace, symmetric-stable(alpha), weibull-tail(m).
Distribution make_distribution(std::string_view id);

/// Law of c * X.
Distribution scaled(const Distribution& d, double c);

/// Law of the score l(eta, theta) when eta ~ g(., theta).
Distribution score_distribution(FamilyPtr family, double theta);

/// Law of eta ~ g(., theta).
Distribution family_distribution(FamilyPtr family, double theta);

/// Quadrature domain matching a support interval.
quad::Domain domain_of(const Interval& support);

/// Integral of exp(log_f(x) + log g(x, theta)) over the family support, with
/// the family's kinks as breakpoints; infinite when the quadrature diverges.
Extended integrate_log_weighted(const Family& family, double theta, const std::function<double(double)>& log_f);
/// Same integral in log space; `ok` is false when it diverges.
quad::LogResult log_integrate_log_weighted(const Family& family, double theta,
                                           const std::function<double(double)>& log_f);

}  // namespace rcb
