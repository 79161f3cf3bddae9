#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "sparsinv/matrix.hpp"
#include "sparsinv/rng.hpp"

namespace sparsinv {

enum class NetTarget { FullSphere, SparseSphere };

// Finite set of unit vectors meant to eps-cover its target set.
//
// Points are greedy maximal eps-separated subsets of random candidates. For
// a sparse target the net is the union of one such subset per support, so the
// separation certificate holds inside each support block.
struct EpsNet {
  std::size_t dimension = 0;
  double epsilon = 0.0;
  NetTarget target = NetTarget::FullSphere;
  std::size_t sparsity = 0;  // s for SparseSphere, N for FullSphere
  std::size_t candidates = 0;
  std::vector<Vector> points;

  std::size_t size() const noexcept { return points.size(); }
  // Smallest pairwise distance (within support blocks for sparse targets).
  double min_separation() const;
};

// Greedy eps-net of the sphere in R^n from `budget` random candidates.
EpsNet sphere_net(std::size_t n, double eps, Seed seed, std::size_t budget);

// Union over all C(N, s) supports of s-dimensional sphere nets, each built
// from `budget_per_support` candidates. Requires 1 <= s <= N/2.
EpsNet sparse_sphere_net(std::size_t n, std::size_t s, double eps, Seed seed,
                         std::size_t budget_per_support = 2000);

struct CoverageCertificate {
  std::size_t samples = 0;
  std::size_t uncovered = 0;  // fresh samples farther than eps from every net point
  double worst_distance = 0.0;
  bool passed() const noexcept { return uncovered == 0; }
};

inline constexpr std::size_t kCoverageSamples = 10000;

// Draws fresh uniform points of the net's target set and checks each lies
// within eps of some net point.
CoverageCertificate certify_coverage(const EpsNet& net, std::size_t samples, Seed seed);

// Builds and certifies, doubling the candidate budget after a failed
// certificate, up to `max_rebuilds` times. The last net is returned either way.
struct CertifiedNet {
  EpsNet net;
  CoverageCertificate certificate;
  std::size_t rebuilds = 0;
};
CertifiedNet certified_sphere_net(std::size_t n, double eps, Seed seed, std::size_t budget,
                                  std::size_t max_rebuilds = 6);
CertifiedNet certified_sparse_sphere_net(std::size_t n, std::size_t s, double eps, Seed seed,
                                         std::size_t budget_per_support, std::size_t max_rebuilds = 6);

// CSV: header x0,...,x{N-1}; one unit vector per row, 17 significant digits.
void write_net_csv(const EpsNet& net, std::ostream& out);

}  // namespace sparsinv
