#pragma once

#include <cstdint>

namespace cms {

// Counter-based splittable generator.
//
// Every draw is a pure function of (master_seed, stream_id, counter): the
// stream key mixes master_seed and stream_id through the splitmix64
// finalizer, and draw k hashes key + (k+1)*GOLDEN with the same finalizer.
// Streams with distinct ids are statistically independent, any draw can be
// reproduced without replaying earlier ones, and results are identical
// across platforms and thread schedules.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : key_(stream_key(master_seed, stream_id)) {}

  // 64 mixed bits for the current counter position, then advance.
  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGolden); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Uniform integer in [0, n), n >= 1.
  std::uint64_t next_index(std::uint64_t n) {
    std::uint64_t v = static_cast<std::uint64_t>(next_unit() * static_cast<double>(n));
    return v >= n ? n - 1 : v;
  }

  std::uint64_t counter() const { return counter_; }

  // Stateless access: the value RngStream(master, stream) yields on draw k
  // (k counts from 0).
  static double unit_at(std::uint64_t master_seed, std::uint64_t stream_id,
                        std::uint64_t k) {
    return static_cast<double>(mix(stream_key(master_seed, stream_id) +
                                   (k + 1) * kGolden) >> 11) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  // splitmix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  static std::uint64_t stream_key(std::uint64_t master, std::uint64_t stream) {
    return mix(master ^ mix(stream ^ 0x5851f42d4c957f2dULL));
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cms
