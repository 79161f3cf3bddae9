#include "sparsinv/rng.hpp"

#include <cmath>

namespace sparsinv {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace

Rng::Rng(std::uint64_t key) noexcept {
  std::uint64_t state = key;
  for (auto& word : s_) {
    state += kGolden;
    word = mix64(state);
  }
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

Rng Rng::stream(Seed seed, std::uint64_t trial, StreamTag tag) noexcept {
  std::uint64_t key = mix64(seed.value + kGolden);
  key = mix64(key ^ (trial * 0xD1B54A32D192ED03ULL + 1));
  key = mix64(key ^ (static_cast<std::uint64_t>(tag) * 0xAEF17502108EF2D9ULL));
  return Rng(key);
}

std::uint64_t Rng::next() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() noexcept {
  return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52;
}

double Rng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double r2 = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    r2 = u * u + v * v;
  } while (r2 >= 1.0 || r2 == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(r2) / r2);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
  const std::uint64_t threshold = (0 - bound) % bound;
  std::uint64_t x = 0;
  do {
    x = next();
  } while (x < threshold);
  return x % bound;
}

double Rng::sign() noexcept {
  return (next() >> 63) ? 1.0 : -1.0;
}

}  // namespace sparsinv
