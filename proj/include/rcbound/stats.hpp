#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rcb {

struct SampleSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double standard_deviation = 0.0;
  double standard_error = 0.0;
};

/// Mean, standard deviation (n-1) and standard error of the mean, computed
/// with compensated sums in index order.
SampleSummary summarize_sample(std::span<const double> xs);

/// Ordinary least squares y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;  // from residuals; 0 when fewer than 3 points
  std::size_t points = 0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Standard error of the slope when each y_i carries an independent error
/// y_se_i (worst case for positively correlated errors).
double propagated_slope_se(std::span<const double> x, std::span<const double> y_se);

/// Delete-a-group jackknife: partitions `values` into `groups` contiguous
/// blocks and returns the jackknife standard error of `statistic`.
double jackknife_se(std::span<const double> values, std::size_t groups,
                    const std::function<double(std::span<const double>)>& statistic);

}  // namespace rcb
