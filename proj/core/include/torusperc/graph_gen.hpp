#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "torusperc/rng.hpp"
#include "torusperc/torus_model.hpp"

namespace torusperc {

/// Unordered long edge stored canonically with u < v.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// The torus with its random long edges.
///
/// Short (lattice) edges are implicit; only long edges are stored, both as a
/// sorted edge list and as a CSR adjacency. Immutable after construction.
class Graph {
 public:
  /// Validates and canonicalizes `edges`. Throws ValidationError on self
  /// loops, duplicates, out-of-range ids or pairs at distance < 2.
  Graph(TorusParams params, std::uint64_t seed, std::vector<Edge> edges);

  [[nodiscard]] const TorusParams& params() const noexcept { return params_; }
  [[nodiscard]] int n() const noexcept { return params_.n(); }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::size_t vertex_count() const noexcept { return params_.vertex_count(); }

  [[nodiscard]] std::span<const Edge> long_edges() const noexcept { return edges_; }
  [[nodiscard]] std::span<const VertexId> long_neighbors(VertexId v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  [[nodiscard]] std::size_t long_degree(VertexId v) const noexcept {
    return offsets_[v + 1] - offsets_[v];
  }

  /// The four lattice neighbours (+x, -x, +y, -y).
  [[nodiscard]] std::array<VertexId, 4> short_neighbors(VertexId v) const noexcept {
    const auto n = static_cast<VertexId>(params_.n());
    const VertexId x = v / n;
    const VertexId y = v % n;
    return {((x + 1) % n) * n + y, ((x + n - 1) % n) * n + y, x * n + (y + 1) % n,
            x * n + (y + n - 1) % n};
  }

  /// Visits the open neighbourhood: 4 short neighbours then long ones.
  template <class Fn>
  void for_each_neighbor(VertexId v, Fn&& fn) const {
    for (VertexId u : short_neighbors(v)) fn(u);
    for (VertexId u : long_neighbors(v)) fn(u);
  }

 private:
  TorusParams params_;
  std::uint64_t seed_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> adjacency_;
};

/// Samples the long edges exactly in distribution: per distance class d a
/// Binomial(M_d, p_d) count, then that many distinct uniform pairs.
[[nodiscard]] std::vector<Edge> sample_long_edges(const TorusParams& params, RngSeed seed);

/// Exact finite-N expectation sum_{d=2}^{N} M_d p_d of the long-edge count.
/// Asymptotically 2 c ln2 N^2 + O(N).
[[nodiscard]] double expected_long_edge_count(const TorusParams& params);

[[nodiscard]] Graph build_graph(const TorusParams& params, RngSeed seed);

enum class ParseErrorKind {
  malformed_header,
  invalid_params,
  malformed_edge,
  coordinate_out_of_range,
  duplicate_edge,
  short_edge,
};

[[nodiscard]] std::string_view to_string(ParseErrorKind kind) noexcept;

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail);

  [[nodiscard]] ParseErrorKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

// Text format: header "N c seed", then one "x1 y1 x2 y2" line per long edge
// with (x1, y1) < (x2, y2), lines sorted lexicographically. LF endings.
void write_graph(std::ostream& os, const Graph& graph);
[[nodiscard]] std::string serialize(const Graph& graph);
[[nodiscard]] Graph parse_graph(std::string_view text);
[[nodiscard]] Graph read_graph(std::istream& is);

}  // namespace torusperc
