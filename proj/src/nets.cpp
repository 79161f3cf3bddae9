#include "sparsinv/nets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "sparsinv/csv.hpp"
#include "sparsinv/errors.hpp"
#include "sparsinv/sparse_geometry.hpp"
#include "sparsinv/support_set.hpp"

namespace sparsinv {

namespace {

double squared_distance(const Vector& a, const Vector& b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Greedy maximal eps-separated subset of `budget` candidates drawn by `draw`.
template <typename Draw>
std::vector<Vector> greedy_separated(std::size_t budget, double eps, Draw&& draw) {
  const double eps2 = eps * eps;
  std::vector<Vector> accepted;
  for (std::size_t c = 0; c < budget; ++c) {
    Vector candidate = draw();
    const bool separated = std::all_of(accepted.begin(), accepted.end(), [&](const Vector& p) {
      return squared_distance(p, candidate) > eps2;
    });
    if (separated) accepted.push_back(std::move(candidate));
  }
  return accepted;
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps <= 2.0)) throw DomainError("net radius must be in (0, 2]");
}

std::vector<std::size_t> support_of(const Vector& v) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) idx.push_back(i);
  }
  return idx;
}

}  // namespace

double EpsNet::min_separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto si = target == NetTarget::SparseSphere ? support_of(points[i]) : std::vector<std::size_t>{};
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (target == NetTarget::SparseSphere && support_of(points[j]) != si) continue;
      best = std::min(best, std::sqrt(squared_distance(points[i], points[j])));
    }
  }
  return best;
}

EpsNet sphere_net(std::size_t n, double eps, Seed seed, std::size_t budget) {
  check_eps(eps);
  if (n == 0) throw DimensionError("net dimension must be positive");
  if (budget == 0) throw DomainError("candidate budget must be >= 1");
  Rng rng = Rng::stream(seed, 0, StreamTag::Net);
  EpsNet net;
  net.dimension = n;
  net.epsilon = eps;
  net.target = NetTarget::FullSphere;
  net.sparsity = n;
  net.candidates = budget;
  net.points = greedy_separated(budget, eps, [&] { return random_unit_vector(n, rng); });
  return net;
}

EpsNet sparse_sphere_net(std::size_t n, std::size_t s, double eps, Seed seed, std::size_t budget_per_support) {
  check_eps(eps);
  if (s < 1 || 2 * s > n) throw DomainError("sparse net needs 1 <= s <= N/2");
  if (budget_per_support == 0) throw DomainError("candidate budget must be >= 1");
  EpsNet net;
  net.dimension = n;
  net.epsilon = eps;
  net.target = NetTarget::SparseSphere;
  net.sparsity = s;
  SupportSet support = SupportSet::first(s, n);
  std::uint64_t rank = 0;
  do {
    Rng rng = Rng::stream(seed, rank, StreamTag::Net);
    auto block = greedy_separated(budget_per_support, eps, [&] { return random_unit_vector(s, rng); });
    for (const Vector& local : block) {
      Vector p(n, 0.0);
      for (std::size_t k = 0; k < s; ++k) p[support.indices()[k]] = local[k];
      net.points.push_back(std::move(p));
    }
    net.candidates += budget_per_support;
    ++rank;
  } while (support.next());
  return net;
}

CoverageCertificate certify_coverage(const EpsNet& net, std::size_t samples, Seed seed) {
  Rng rng = Rng::stream(seed, 0, StreamTag::Coverage);
  const double eps2 = net.epsilon * net.epsilon;
  CoverageCertificate cert;
  cert.samples = samples;
  for (std::size_t t = 0; t < samples; ++t) {
    Vector x;
    if (net.target == NetTarget::FullSphere) {
      x = random_unit_vector(net.dimension, rng);
    } else {
      x = random_sparse_unit_vector(SupportSet::random(net.sparsity, net.dimension, rng), rng);
    }
    double best = std::numeric_limits<double>::infinity();
    for (const Vector& p : net.points) {
      best = std::min(best, squared_distance(p, x));
      if (best <= eps2) break;
    }
    if (best > eps2) {
      ++cert.uncovered;
      cert.worst_distance = std::max(cert.worst_distance, std::sqrt(best));
    } else {
      cert.worst_distance = std::max(cert.worst_distance, std::min(std::sqrt(best), net.epsilon));
    }
  }
  return cert;
}

CertifiedNet certified_sphere_net(std::size_t n, double eps, Seed seed, std::size_t budget,
                                  std::size_t max_rebuilds) {
  CertifiedNet out;
  for (;;) {
    out.net = sphere_net(n, eps, seed, budget);
    out.certificate = certify_coverage(out.net, kCoverageSamples, seed);
    if (out.certificate.passed() || out.rebuilds == max_rebuilds) return out;
    ++out.rebuilds;
    budget *= 2;
  }
}

CertifiedNet certified_sparse_sphere_net(std::size_t n, std::size_t s, double eps, Seed seed,
                                         std::size_t budget_per_support, std::size_t max_rebuilds) {
  CertifiedNet out;
  for (;;) {
    out.net = sparse_sphere_net(n, s, eps, seed, budget_per_support);
    out.certificate = certify_coverage(out.net, kCoverageSamples, seed);
    if (out.certificate.passed() || out.rebuilds == max_rebuilds) return out;
    ++out.rebuilds;
    budget_per_support *= 2;
  }
}

void write_net_csv(const EpsNet& net, std::ostream& out) {
  for (std::size_t i = 0; i < net.dimension; ++i) out << (i ? "," : "") << 'x' << i;
  out << '\n';
  for (const Vector& p : net.points) {
    for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << format_double(p[i]);
    out << '\n';
  }
}

}  // namespace sparsinv
