#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace torusperc {

/// Geometry and long-edge law of the N x N torus with extra random edges.
///
/// A pair at wrapped-L1 distance d >= 2 carries a long edge with probability
/// c / (N * d^alpha). Only alpha = 1 is supported. c = 0 is accepted and
/// yields the bare torus.
class TorusParams {
 public:
  TorusParams(int n, double c, double alpha = 1.0);

  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] double c() const noexcept { return c_; }
  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] std::size_t vertex_count() const noexcept {
    return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  }
  /// lambda = 4 c ln 2, the limiting mean long-edge degree.
  [[nodiscard]] double poisson_lambda() const noexcept;

  friend bool operator==(const TorusParams&, const TorusParams&) = default;

 private:
  int n_;
  double c_;
  double alpha_;
};

struct Vertex {
  int x = 0;
  int y = 0;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Offset {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

using VertexId = std::uint32_t;

/// Row-major-by-x vertex numbering: id = x * N + y. Lexicographic order of
/// (x, y) coincides with numeric order of ids.
[[nodiscard]] constexpr VertexId vertex_id(Vertex v, int n) noexcept {
  return static_cast<VertexId>(v.x) * static_cast<VertexId>(n) + static_cast<VertexId>(v.y);
}
[[nodiscard]] constexpr Vertex vertex_at(VertexId id, int n) noexcept {
  return {static_cast<int>(id / static_cast<VertexId>(n)), static_cast<int>(id % static_cast<VertexId>(n))};
}

/// Vertex reached from `v` by `o`, reduced mod N.
[[nodiscard]] Vertex translate(Vertex v, Offset o, int n) noexcept;

/// Wrapped Manhattan distance, equal to the grid-graph distance on the torus.
[[nodiscard]] int torus_distance(Vertex u, Vertex v, int n) noexcept;

/// Number of vertices at distance exactly d from a fixed vertex, 1 <= d <= N.
[[nodiscard]] std::int64_t lambda_size(int n, int d);

/// All offsets (dx, dy) in [0, N)^2 at distance d from the origin.
[[nodiscard]] std::vector<Offset> offsets_at_distance(int n, int d);

/// Probability c / (N d) of a long edge between a pair at distance d >= 2.
[[nodiscard]] double long_edge_prob(const TorusParams& params, int d);

/// Number of unordered vertex pairs at distance d: N^2 |Lambda_d| / 2.
[[nodiscard]] std::int64_t pair_count(int n, int d);

/// Offsets of every distance class, built once in O(N^2).
class DistanceClasses {
 public:
  explicit DistanceClasses(int n);

  [[nodiscard]] int n() const noexcept { return n_; }
  [[nodiscard]] const std::vector<Offset>& at(int d) const;

 private:
  int n_;
  std::vector<std::vector<Offset>> classes_;  // index d, 0..N
};

}  // namespace torusperc
