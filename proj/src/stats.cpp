#include "cms/stats.hpp"

#include <cmath>
#include <thread>

namespace cms {

namespace {

double pairwise_sum_rec(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_sum_rec(v, half) + pairwise_sum_rec(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_rec(values.data(), values.size());
}

MeanWithError batch_means(std::span<const double> series, std::size_t batches) {
  MeanWithError out;
  out.n = series.size();
  if (series.empty()) return out;
  out.mean = pairwise_mean(series);
  if (batches < 2) batches = 2;
  if (series.size() < 2 * batches) batches = series.size() >= 2 ? 2 : 1;
  if (batches < 2) return out;  // single observation: no error estimate
  std::size_t m = series.size() / batches;  // equal batches, tail ignored for the error bar
  std::vector<double> bm(batches);
  for (std::size_t b = 0; b < batches; ++b)
    bm[b] = pairwise_mean(series.subspan(b * m, m));
  double center = pairwise_mean(bm);
  std::vector<double> sq(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    double d = bm[b] - center;
    sq[b] = d * d;
  }
  double var = pairwise_sum(sq) / static_cast<double>(batches - 1);
  out.std_error = std::sqrt(var / static_cast<double>(batches));
  out.batches = batches;
  return out;
}

MeanWithError replicate_mean(std::span<const double> values) {
  MeanWithError out;
  out.n = values.size();
  if (values.empty()) return out;
  out.mean = pairwise_mean(values);
  if (values.size() < 2) return out;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double d = values[i] - out.mean;
    sq[i] = d * d;
  }
  double var = pairwise_sum(sq) / static_cast<double>(values.size() - 1);
  out.std_error = std::sqrt(var / static_cast<double>(values.size()));
  out.batches = values.size();
  return out;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (jobs > n) jobs = static_cast<unsigned>(n);
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  // Fixed block partition: worker w handles [w*n/jobs, (w+1)*n/jobs).
  for (unsigned w = 0; w < jobs; ++w) {
    std::size_t lo = n * w / jobs, hi = n * (w + 1) / jobs;
    workers.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

double clip_value(double v, double bound, std::uint64_t& clip_count) {
  if (v > bound) {
    ++clip_count;
    return bound;
  }
  if (v < -bound) {
    ++clip_count;
    return -bound;
  }
  return v;
}

}  // namespace cms
