#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace cms {

// Deterministic balanced pairwise summation: the reduction tree depends only
// on the length, so results are independent of threading and chunk sizes.
double pairwise_sum(std::span<const double> values);

inline double pairwise_mean(std::span<const double> values) {
  return values.empty() ? 0.0 : pairwise_sum(values) / static_cast<double>(values.size());
}

// Mean and standard error of a time series via non-overlapping batch means.
// Autocorrelation within a trajectory inflates the naive i.i.d. error; batch
// averages decorrelate at moderate lag, so their spread gives a usable error
// bar. Falls back to fewer batches when the series is short.
struct MeanWithError {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::size_t batches = 0;
};

MeanWithError batch_means(std::span<const double> series, std::size_t batches = 30);

// Mean and standard error treating entries as i.i.d. replicates.
MeanWithError replicate_mean(std::span<const double> values);

// Runs fn(i) for i in [0, n) across `jobs` worker threads. Each call must
// write only to its own slot; iteration order is unspecified but the result
// layout is fixed, so output is independent of the worker count.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

// |v| clipped to [-bound, bound]; increments count when clipping occurs.
double clip_value(double v, double bound, std::uint64_t& clip_count);

inline constexpr double kDefaultClipBound = 1e12;

}  // namespace cms
