#include "rcbound/stats.hpp"

#include <cmath>

#include "rcbound/errors.hpp"
#include "rcbound/parallel.hpp"

namespace rcb {

SampleSummary summarize_sample(std::span<const double> xs) {
  SampleSummary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  s.mean = compensated_sum(xs) / static_cast<double>(xs.size());
  if (xs.size() < 2) return s;
  CompensatedSum ss;
  for (double x : xs) ss.add((x - s.mean) * (x - s.mean));
  s.standard_deviation = std::sqrt(ss.value() / static_cast<double>(xs.size() - 1));
  s.standard_error = s.standard_deviation / std::sqrt(static_cast<double>(xs.size()));
  return s;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_line: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw DomainError("fit_line: x values are all equal");
  LineFit fit;
  fit.points = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return fit;
}

double propagated_slope_se(std::span<const double> x, std::span<const double> y_se) {
  if (x.size() != y_se.size() || x.size() < 2) throw DomainError("propagated_slope_se: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  for (double v : x) mx += v;
  mx /= n;
  double sxx = 0.0;
  for (double v : x) sxx += (v - mx) * (v - mx);
  double var = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = (x[i] - mx) / sxx;
    var += w * w * y_se[i] * y_se[i];
  }
  return std::sqrt(var);
}

double jackknife_se(std::span<const double> values, std::size_t groups,
                    const std::function<double(std::span<const double>)>& statistic) {
  if (groups < 2 || values.size() < groups) throw DomainError("jackknife_se: need >= 2 groups and one value per group");
  const std::size_t n = values.size();
  std::vector<double> leave_out(groups);
  std::vector<double> buffer;
  buffer.reserve(n);
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t begin = g * n / groups;
    const std::size_t end = (g + 1) * n / groups;
    buffer.clear();
    buffer.insert(buffer.end(), values.begin(), values.begin() + static_cast<std::ptrdiff_t>(begin));
    buffer.insert(buffer.end(), values.begin() + static_cast<std::ptrdiff_t>(end), values.end());
    leave_out[g] = statistic(buffer);
  }
  double mean = 0.0;
  for (double v : leave_out) mean += v;
  mean /= static_cast<double>(groups);
  double ss = 0.0;
  for (double v : leave_out) ss += (v - mean) * (v - mean);
  const double k = static_cast<double>(groups);
  return std::sqrt((k - 1.0) / k * ss);
}

}  // namespace rcb
