#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace sparsinv {

struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(Seed, Seed) = default;
};

// SplitMix64 finalizer: a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream identifiers so that independent random objects of one trial (the
// matrix, a test vector, a support draw...) never share a stream.
enum class StreamTag : std::uint64_t {
  Matrix = 1,
  Vector = 2,
  Support = 3,
  Hyperplane = 4,
  Column = 5,
  Net = 6,
  Coverage = 7,
  Signal = 8,
  Moments = 9,
  Misc = 10,
};

// xoshiro256** keyed by (seed, trial, tag).
//
// The key is hashed through mix64 into the 256-bit state, so any
// (seed, trial, tag) triple addresses its own stream with no sequential
// dependence on other trials. Integer output is bit-identical on every
// platform. Floating-point helpers below are this module's own documented
// transforms:
//   uniform()      (next() >> 11) * 2^-53            in [0, 1)
//   normal()       Marsaglia polar method, spare value cached
// Satisfies std::uniform_random_bit_generator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key) noexcept;
  static Rng stream(Seed seed, std::uint64_t trial, StreamTag tag) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept { return next(); }

  std::uint64_t next() noexcept;
  double uniform() noexcept;
  // Uniform on the open interval (0, 1).
  double uniform_open() noexcept;
  double normal() noexcept;
  // Uniform integer in [0, bound); bound > 0. Unbiased (rejection).
  std::uint64_t below(std::uint64_t bound) noexcept;
  // +1.0 or -1.0 with equal probability, from the top bit.
  double sign() noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sparsinv
