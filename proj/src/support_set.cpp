#include "sparsinv/support_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sparsinv/errors.hpp"
#include "sparsinv/rng.hpp"

namespace sparsinv {

SupportSet::SupportSet(std::vector<std::size_t> indices, std::size_t ambient)
    : indices_(std::move(indices)), ambient_(ambient) {
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] >= ambient_) throw DomainError("support index out of range");
    if (k > 0 && indices_[k] <= indices_[k - 1]) throw DomainError("support indices must be strictly increasing");
  }
}

SupportSet SupportSet::first(std::size_t s, std::size_t ambient) {
  if (s > ambient) throw DomainError("support size exceeds ambient dimension");
  std::vector<std::size_t> idx(s);
  for (std::size_t k = 0; k < s; ++k) idx[k] = k;
  return SupportSet(std::move(idx), ambient);
}

SupportSet SupportSet::unrank(std::uint64_t rank, std::size_t s, std::size_t ambient) {
  if (s > ambient) throw DomainError("support size exceeds ambient dimension");
  const auto total = binomial(ambient, s);
  if (!total || rank >= *total) throw DomainError("support rank out of range");
  std::vector<std::size_t> idx;
  idx.reserve(s);
  std::size_t next = 0;
  for (std::size_t k = 0; k < s; ++k) {
    // Smallest first element c such that the rank falls inside its block.
    for (std::size_t c = next;; ++c) {
      const std::uint64_t block = *binomial(ambient - c - 1, s - k - 1);
      if (rank < block) {
        idx.push_back(c);
        next = c + 1;
        break;
      }
      rank -= block;
    }
  }
  return SupportSet(std::move(idx), ambient);
}

SupportSet SupportSet::random(std::size_t s, std::size_t ambient, Rng& rng) {
  if (s > ambient) throw DomainError("support size exceeds ambient dimension");
  std::vector<std::size_t> chosen;
  chosen.reserve(s);
  for (std::size_t j = ambient - s; j < ambient; ++j) {
    const auto t = static_cast<std::size_t>(rng.below(j + 1));
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
      chosen.push_back(t);
    } else {
      chosen.push_back(j);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return SupportSet(std::move(chosen), ambient);
}

bool SupportSet::contains(std::size_t i) const noexcept {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

bool SupportSet::next() {
  const std::size_t s = indices_.size();
  for (std::size_t k = s; k-- > 0;) {
    if (indices_[k] < ambient_ - (s - k)) {
      ++indices_[k];
      for (std::size_t j = k + 1; j < s; ++j) indices_[j] = indices_[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::uint64_t SupportSet::rank() const {
  const std::size_t s = indices_.size();
  std::uint64_t r = 0;
  std::size_t prev = 0;
  for (std::size_t k = 0; k < s; ++k) {
    for (std::size_t c = prev; c < indices_[k]; ++c) r += *binomial(ambient_ - c - 1, s - k - 1);
    prev = indices_[k] + 1;
  }
  return r;
}

std::string SupportSet::to_string() const {
  std::string out = "{";
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(indices_[k]);
  }
  return out + "}";
}

std::optional<std::uint64_t> binomial(std::size_t n, std::size_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr std::uint64_t kLimit = std::numeric_limits<std::uint64_t>::max() >> 1;
  std::uint64_t acc = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // acc * (n - k + i) is divisible by i; cancel before multiplying.
    const std::uint64_t g = std::gcd(acc, std::uint64_t{i});
    const std::uint64_t factor = (n - k + i) / (i / g);
    acc /= g;
    if (acc > kLimit / factor) return std::nullopt;
    acc *= factor;
  }
  return acc;
}

double log_binomial(std::size_t n, std::size_t k) noexcept {
  if (k > n) return -std::numeric_limits<double>::infinity();
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0);
}

}  // namespace sparsinv
