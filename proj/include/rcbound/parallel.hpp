#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <span>

namespace rcb {

/// Worker count: explicit value if > 0, else RCBOUND_WORKERS, else the
/// hardware concurrency (at least 1).
int resolve_workers(int requested = 0);

/// Runs body(i) for i in [0, count) on `workers` threads, contiguous chunks.
/// The first exception thrown by any body is rethrown after all threads join.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

/// Neumaier-compensated sum, always in index order. Replicate results are
/// stored by replicate index and reduced with this, which is what makes
/// aggregates independent of the worker count.
double compensated_sum(std::span<const double> values);

/// Accumulator form of the same summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

}  // namespace rcb
