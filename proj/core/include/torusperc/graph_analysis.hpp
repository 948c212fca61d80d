#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "torusperc/graph_gen.hpp"
#include "torusperc/rng.hpp"

namespace torusperc {

enum class DegreeKind { empirical, exact_convolution, poisson };

[[nodiscard]] std::string_view to_string(DegreeKind kind) noexcept;

/// PMF of the long-edge degree W, indexed by degree 0..pmf.size()-1.
struct DegreeDistribution {
  std::vector<double> pmf;
  DegreeKind kind = DegreeKind::empirical;
  std::optional<double> lambda;  ///< set for kind == poisson

  [[nodiscard]] double total() const noexcept;
  [[nodiscard]] double mean() const noexcept;
  [[nodiscard]] double at(std::size_t k) const noexcept { return k < pmf.size() ? pmf[k] : 0.0; }
};

/// Normalized histogram of long-edge degrees over all N^2 vertices.
[[nodiscard]] DegreeDistribution long_degree_histogram(const Graph& graph);

/// Exact law of W = sum_{d=2}^{N} Binomial(|Lambda_d|, p_d), obtained by
/// convolving the per-class binomials. Throws ValidationError if `k_max`
/// leaves more than `tail_tolerance` of mass above the support.
[[nodiscard]] DegreeDistribution exact_long_degree_distribution(int n, double c, int k_max,
                                                                double tail_tolerance = 1e-12);
/// Same, with k_max grown until the tail is below 1e-12.
[[nodiscard]] DegreeDistribution exact_long_degree_distribution(int n, double c);

/// Po(lambda) truncated at k_max (no renormalization).
[[nodiscard]] DegreeDistribution poisson_pmf(double lambda, int k_max);

/// Half the L1 distance; shorter PMFs are padded with zeros.
[[nodiscard]] double tv_distance(const DegreeDistribution& a, const DegreeDistribution& b);

/// Unit-weight BFS distances over short plus long edges.
[[nodiscard]] std::vector<int> bfs_distances(const Graph& graph, VertexId source);

[[nodiscard]] int bfs_eccentricity(const Graph& graph, VertexId source);

enum class DiameterMethod { all_pairs, double_sweep };

[[nodiscard]] std::string_view to_string(DiameterMethod method) noexcept;

struct DiameterReport {
  int value = 0;
  DiameterMethod method = DiameterMethod::all_pairs;
  int sources_used = 0;
};

inline constexpr int kExactDiameterMaxN = 64;

/// Max eccentricity over all vertices. Rejects N > 64.
[[nodiscard]] DiameterReport exact_diameter(const Graph& graph, unsigned threads = 0);

/// Double-sweep lower bound: BFS from a random source, then from the farthest
/// vertex found; repeated `num_sources` times, keeping the maximum.
[[nodiscard]] DiameterReport estimate_diameter(const Graph& graph, int num_sources, RngSeed seed);

}  // namespace torusperc
