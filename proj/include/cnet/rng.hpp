#pragma once

#include <cstdint>
#include <random>

namespace cnet {

/// Seeded 64-bit Mersenne Twister with an explicit, portable mapping to
/// doubles (the standard distributions are implementation-defined).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    ++counter_;
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::mt19937_64 engine_;
};

/// Final-goods price shock, uniform on (0, 2).
inline double draw_price(RngStream& rng) { return 2.0 * rng.uniform_open(); }

}  // namespace cnet
