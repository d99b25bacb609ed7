#pragma once

#include <cstdint>
#include <random>

namespace tidecoh {

/// Seedable, splittable pseudo-random stream.
///
/// A stream is identified by (master seed, path of split indices). Child
/// streams are derived by hashing, so trajectory i always sees the same
/// numbers regardless of how many workers run or in which order.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0);

  // Independent child stream; split(i) on equal streams yields equal children.
  RngStream split(std::uint64_t index) const;

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform();

  // Exponential with the given rate (> 0).
  double exponential(double rate);

  std::uint64_t id() const { return id_; }

  using result_type = std::uint64_t;
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

 private:
  std::uint64_t id_;
  std::mt19937_64 engine_;
};

}  // namespace tidecoh
