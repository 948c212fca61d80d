#include "torusperc/torus_model.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "torusperc/errors.hpp"

namespace torusperc {

namespace {

void check_distance(int n, int d) {
  if (d < 1 || d > n) {
    throw ValidationError("distance " + std::to_string(d) + " outside [1, N=" + std::to_string(n) + "]");
  }
}

int wrap_delta(int delta, int n) noexcept {
  const int a = std::abs(delta) % n;
  return a < n - a ? a : n - a;
}

}  // namespace

TorusParams::TorusParams(int n, double c, double alpha) : n_(n), c_(c), alpha_(alpha) {
  if (n < 3) {
    throw ValidationError("torus side must satisfy N >= 3, got N=" + std::to_string(n));
  }
  if (!std::isfinite(c) || c < 0.0) {
    throw ValidationError("edge-density constant must satisfy c >= 0");
  }
  if (alpha != 1.0) {
    throw ValidationError("only alpha = 1 is supported");
  }
  // Largest probability is at d = 2.
  if (c / (2.0 * n) >= 1.0) {
    throw ValidationError("c / (2N) < 1 is required so that every p_d < 1");
  }
}

double TorusParams::poisson_lambda() const noexcept { return 4.0 * c_ * std::log(2.0); }

Vertex translate(Vertex v, Offset o, int n) noexcept {
  return {(v.x + o.dx) % n, (v.y + o.dy) % n};
}

int torus_distance(Vertex u, Vertex v, int n) noexcept {
  return wrap_delta(u.x - v.x, n) + wrap_delta(u.y - v.y, n);
}

std::int64_t lambda_size(int n, int d) {
  check_distance(n, d);
  if (n % 2 == 1) {
    return d <= n / 2 ? 4LL * d : 4LL * (n - d);
  }
  if (2 * d < n) return 4LL * d;
  if (2 * d == n) return 4LL * d - 2;
  if (d < n) return 4LL * (n - d);
  return 1;
}

std::int64_t pair_count(int n, int d) {
  return static_cast<std::int64_t>(n) * n * lambda_size(n, d) / 2;
}

std::vector<Offset> offsets_at_distance(int n, int d) {
  check_distance(n, d);
  std::vector<Offset> out;
  out.reserve(static_cast<std::size_t>(lambda_size(n, d)));
  for (int dx = 0; dx < n; ++dx) {
    const int ax = wrap_delta(dx, n);
    if (ax > d) continue;
    for (int dy = 0; dy < n; ++dy) {
      if (ax + wrap_delta(dy, n) == d) out.push_back({dx, dy});
    }
  }
  return out;
}

double long_edge_prob(const TorusParams& params, int d) {
  if (d < 2) {
    throw ValidationError("long edges require distance d >= 2, got d=" + std::to_string(d));
  }
  check_distance(params.n(), d);
  return params.c() / (static_cast<double>(params.n()) * d);
}

DistanceClasses::DistanceClasses(int n) : n_(n), classes_(static_cast<std::size_t>(n) + 1) {
  if (n < 1) throw ValidationError("DistanceClasses requires N >= 1");
  for (int dx = 0; dx < n; ++dx) {
    for (int dy = 0; dy < n; ++dy) {
      const int d = wrap_delta(dx, n) + wrap_delta(dy, n);
      if (d > 0) classes_[static_cast<std::size_t>(d)].push_back({dx, dy});
    }
  }
}

const std::vector<Offset>& DistanceClasses::at(int d) const {
  check_distance(n_, d);
  return classes_[static_cast<std::size_t>(d)];
}

}  // namespace torusperc
