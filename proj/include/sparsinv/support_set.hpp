#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sparsinv {

class Rng;

// Sorted set of column indices in [0, ambient). Indices are zero-based.
class SupportSet {
 public:
  SupportSet() = default;
  // Validates: strictly increasing, all < ambient. Throws DomainError.
  SupportSet(std::vector<std::size_t> indices, std::size_t ambient);

  // {0, 1, ..., s-1}: the lexicographically first support of size s.
  static SupportSet first(std::size_t s, std::size_t ambient);
  // The support of lexicographic rank `rank` among all s-subsets.
  static SupportSet unrank(std::uint64_t rank, std::size_t s, std::size_t ambient);
  // Uniformly random s-subset (Floyd's algorithm).
  static SupportSet random(std::size_t s, std::size_t ambient, Rng& rng);

  std::span<const std::size_t> indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  std::size_t ambient() const noexcept { return ambient_; }
  bool contains(std::size_t i) const noexcept;

  // Advances to the lexicographic successor; false after the last subset.
  bool next();
  std::uint64_t rank() const;

  std::string to_string() const;

  friend bool operator==(const SupportSet&, const SupportSet&) = default;
  friend auto operator<=>(const SupportSet& a, const SupportSet& b) { return a.indices_ <=> b.indices_; }

 private:
  std::vector<std::size_t> indices_;
  std::size_t ambient_ = 0;
};

// C(n, k) when it fits in 63 bits; std::nullopt on overflow.
std::optional<std::uint64_t> binomial(std::size_t n, std::size_t k) noexcept;
// log C(n, k) via lgamma.
double log_binomial(std::size_t n, std::size_t k) noexcept;

}  // namespace sparsinv
