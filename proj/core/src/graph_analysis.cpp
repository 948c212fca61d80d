#include "torusperc/graph_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "torusperc/errors.hpp"
#include "torusperc/parallel.hpp"

namespace torusperc {

std::string_view to_string(DegreeKind kind) noexcept {
  switch (kind) {
    case DegreeKind::empirical: return "empirical";
    case DegreeKind::exact_convolution: return "exact_convolution";
    case DegreeKind::poisson: return "poisson";
  }
  return "unknown";
}

std::string_view to_string(DiameterMethod method) noexcept {
  return method == DiameterMethod::all_pairs ? "all_pairs" : "double_sweep";
}

double DegreeDistribution::total() const noexcept {
  return std::accumulate(pmf.begin(), pmf.end(), 0.0);
}

double DegreeDistribution::mean() const noexcept {
  double m = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) m += static_cast<double>(k) * pmf[k];
  return m;
}

DegreeDistribution long_degree_histogram(const Graph& graph) {
  std::vector<std::size_t> counts;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    const std::size_t deg = graph.long_degree(v);
    if (deg >= counts.size()) counts.resize(deg + 1, 0);
    ++counts[deg];
  }
  DegreeDistribution out;
  out.kind = DegreeKind::empirical;
  out.pmf.resize(counts.size());
  const auto total = static_cast<double>(graph.vertex_count());
  for (std::size_t k = 0; k < counts.size(); ++k) out.pmf[k] = static_cast<double>(counts[k]) / total;
  return out;
}

namespace {

// Binomial(trials, p) PMF on 0..min(trials, k_max) via the ratio recurrence.
std::vector<double> binomial_pmf(std::int64_t trials, double p, int k_max) {
  const auto top = static_cast<std::size_t>(std::min<std::int64_t>(trials, k_max));
  std::vector<double> pmf(top + 1, 0.0);
  pmf[0] = std::exp(static_cast<double>(trials) * std::log1p(-p));
  const double ratio = p / (1.0 - p);
  for (std::size_t j = 0; j < top; ++j) {
    pmf[j + 1] = pmf[j] * static_cast<double>(trials - static_cast<std::int64_t>(j)) /
                 static_cast<double>(j + 1) * ratio;
  }
  return pmf;
}

}  // namespace

DegreeDistribution exact_long_degree_distribution(int n, double c, int k_max, double tail_tolerance) {
  if (k_max < 0) throw ValidationError("k_max must be nonnegative");
  const TorusParams params(n, c);
  std::vector<double> law(static_cast<std::size_t>(k_max) + 1, 0.0);
  law[0] = 1.0;
  if (c > 0.0) {
    std::vector<double> next(law.size());
    for (int d = 2; d <= n; ++d) {
      const std::int64_t size = lambda_size(n, d);
      if (size == 0) continue;
      const auto factor = binomial_pmf(size, long_edge_prob(params, d), k_max);
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t i = 0; i < law.size(); ++i) {
        if (law[i] == 0.0) continue;
        const std::size_t jmax = std::min(factor.size(), law.size() - i);
        for (std::size_t j = 0; j < jmax; ++j) next[i + j] += law[i] * factor[j];
      }
      law.swap(next);
    }
  }
  DegreeDistribution out{std::move(law), DegreeKind::exact_convolution, std::nullopt};
  const double tail = 1.0 - out.total();
  if (tail > tail_tolerance) {
    throw ValidationError("k_max=" + std::to_string(k_max) + " leaves tail mass " + std::to_string(tail) +
                          " above tolerance");
  }
  return out;
}

DegreeDistribution exact_long_degree_distribution(int n, double c) {
  const TorusParams params(n, c);
  const double lambda = params.poisson_lambda();
  int k_max = static_cast<int>(std::ceil(lambda + 12.0 * std::sqrt(lambda) + 20.0));
  for (;;) {
    try {
      return exact_long_degree_distribution(n, c, k_max);
    } catch (const ValidationError&) {
      if (k_max > 100000) throw;
      k_max *= 2;
    }
  }
}

DegreeDistribution poisson_pmf(double lambda, int k_max) {
  if (!(lambda > 0.0)) throw ValidationError("Poisson rate must be positive");
  if (k_max < 0) throw ValidationError("k_max must be nonnegative");
  DegreeDistribution out;
  out.kind = DegreeKind::poisson;
  out.lambda = lambda;
  out.pmf.resize(static_cast<std::size_t>(k_max) + 1);
  const double log_lambda = std::log(lambda);
  for (int k = 0; k <= k_max; ++k) {
    out.pmf[static_cast<std::size_t>(k)] = std::exp(-lambda + k * log_lambda - std::lgamma(k + 1.0));
  }
  return out;
}

double tv_distance(const DegreeDistribution& a, const DegreeDistribution& b) {
  const std::size_t size = std::max(a.pmf.size(), b.pmf.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < size; ++k) sum += std::abs(a.at(k) - b.at(k));
  return 0.5 * sum;
}

namespace {

// Returns the eccentricity of `source` and the farthest vertex reached.
std::pair<int, VertexId> bfs_sweep(const Graph& graph, VertexId source, std::vector<int>& dist,
                                   std::vector<VertexId>& queue) {
  std::fill(dist.begin(), dist.end(), -1);
  queue.clear();
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    const int next = dist[v] + 1;
    graph.for_each_neighbor(v, [&](VertexId u) {
      if (dist[u] < 0) {
        dist[u] = next;
        queue.push_back(u);
      }
    });
  }
  const VertexId far = queue.back();
  return {dist[far], far};
}

}  // namespace

std::vector<int> bfs_distances(const Graph& graph, VertexId source) {
  std::vector<int> dist(graph.vertex_count());
  std::vector<VertexId> queue;
  queue.reserve(graph.vertex_count());
  bfs_sweep(graph, source, dist, queue);
  return dist;
}

int bfs_eccentricity(const Graph& graph, VertexId source) {
  std::vector<int> dist(graph.vertex_count());
  std::vector<VertexId> queue;
  queue.reserve(graph.vertex_count());
  return bfs_sweep(graph, source, dist, queue).first;
}

DiameterReport exact_diameter(const Graph& graph, unsigned threads) {
  if (graph.n() > kExactDiameterMaxN) {
    throw ValidationError("exact_diameter supports N <= 64; use estimate_diameter for N=" +
                          std::to_string(graph.n()));
  }
  const std::size_t vertices = graph.vertex_count();
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, vertices));

  // One contiguous block of sources per worker, each with private scratch.
  std::vector<int> best(threads, 0);
  parallel_for(threads, threads, [&](std::size_t w) {
    std::vector<int> dist(vertices);
    std::vector<VertexId> queue;
    queue.reserve(vertices);
    for (std::size_t s = w; s < vertices; s += threads) {
      best[w] = std::max(best[w], bfs_sweep(graph, static_cast<VertexId>(s), dist, queue).first);
    }
  });
  return {*std::max_element(best.begin(), best.end()), DiameterMethod::all_pairs,
          static_cast<int>(vertices)};
}

DiameterReport estimate_diameter(const Graph& graph, int num_sources, RngSeed seed) {
  if (num_sources < 1) throw ValidationError("estimate_diameter needs num_sources >= 1");
  Engine engine = make_engine(seed);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(graph.vertex_count() - 1));
  std::vector<int> dist(graph.vertex_count());
  std::vector<VertexId> queue;
  queue.reserve(graph.vertex_count());
  int value = 0;
  for (int i = 0; i < num_sources; ++i) {
    const auto [ecc, far] = bfs_sweep(graph, pick(engine), dist, queue);
    value = std::max({value, ecc, bfs_sweep(graph, far, dist, queue).first});
  }
  return {value, DiameterMethod::double_sweep, num_sources};
}

}  // namespace torusperc
