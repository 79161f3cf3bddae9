#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "sparsinv/matrix.hpp"
#include "sparsinv/rng.hpp"

namespace sparsinv {

// Entry laws. All are standardized to mean 0, variance 1.
//   Gaussian         N(0, 1), Marsaglia polar
//   Rademacher       +-1 with probability 1/2
//   UniformCentered  U[-sqrt(3), sqrt(3)]
//   HeavyTail4       Student t with 5 d.o.f. scaled by sqrt(3/5); E x^4 = 9
//   Identity         not random: the identity matrix (debug hook)
enum class Distribution { Gaussian, Rademacher, UniformCentered, HeavyTail4, Identity };

enum class Normalization { Raw, ScaledByInvSqrtRows };

// Fourth moment of the standardized t(5) law: 3 nu^2 / ((nu-2)(nu-4)) divided
// by the squared variance nu/(nu-2), at nu = 5.
inline constexpr double kHeavyTailFourthMomentBound = 9.0;
inline constexpr int kHeavyTailDegreesOfFreedom = 5;

struct EnsembleSpec {
  Distribution distribution = Distribution::Gaussian;
  std::size_t rows = 0;
  std::size_t cols = 0;
  Normalization normalization = Normalization::Raw;

  friend bool operator==(const EnsembleSpec&, const EnsembleSpec&) = default;
};

std::string_view to_string(Distribution d) noexcept;
std::string_view to_string(Normalization n) noexcept;
// Throws DomainError on an unknown name.
Distribution parse_distribution(std::string_view name);
Normalization parse_normalization(std::string_view name);

// Exact fourth moment of the standardized law (B for HeavyTail4).
double fourth_moment(Distribution d);

// One standardized draw. Not defined for Identity.
double sample_entry(Distribution d, Rng& rng);

// Deterministic in (spec, seed, trial): entries are drawn in row-major order
// from Rng::stream(seed, trial, StreamTag::Matrix).
Matrix sample_matrix(const EnsembleSpec& spec, Seed seed, std::size_t trial);
// Same, but from an explicit stream tag (independent objects within a trial).
Matrix sample_matrix(const EnsembleSpec& spec, Seed seed, std::size_t trial, StreamTag tag);
// Fills a vector with i.i.d. standardized draws (no normalization applied).
Vector sample_vector(Distribution d, std::size_t length, Rng& rng);

struct MomentCheck {
  double estimate = 0.0;
  double lower = 0.0;  // estimate -/+ 3 standard errors
  double upper = 0.0;
  double expected = 0.0;
  bool flagged = false;
};

struct MomentReport {
  Distribution distribution = Distribution::Gaussian;
  std::size_t samples = 0;
  MomentCheck mean;
  MomentCheck variance;  // second moment about the known mean 0
  MomentCheck fourth;
  // For HeavyTail4 the fourth-moment check is one-sided (flag only if the
  // lower band edge exceeds B): x^4 has infinite variance for t(5), so a
  // two-sided normal-theory band is not meaningful.
  bool fourth_one_sided = false;
  bool any_flagged() const noexcept { return mean.flagged || variance.flagged || fourth.flagged; }
};

inline constexpr std::size_t kMinMomentSamples = 10000;

MomentReport validate_ensemble(Distribution distribution, std::size_t samples, Seed seed);

}  // namespace sparsinv
