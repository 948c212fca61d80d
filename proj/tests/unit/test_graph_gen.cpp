#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <oracles.hpp>
#include <torusperc/errors.hpp>
#include <torusperc/graph_gen.hpp>

using namespace torusperc;

namespace {

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double sd_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1));
}

void check_invariants(const Graph& g) {
  const int n = g.n();
  std::set<Edge> seen;
  for (Edge e : g.long_edges()) {
    CHECK(e.u < e.v);
    CHECK(torus_distance(vertex_at(e.u, n), vertex_at(e.v, n), n) >= 2);
    CHECK(seen.insert(e).second);
  }
  std::size_t adjacency_total = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    for (VertexId u : g.long_neighbors(v)) {
      CHECK(seen.count(Edge{std::min(u, v), std::max(u, v)}) == 1);
    }
    adjacency_total += g.long_degree(v);
  }
  CHECK(adjacency_total == 2 * seen.size());
}

}  // namespace

TEST_CASE("c = 0 gives no long edges") {
  CHECK(sample_long_edges(TorusParams(16, 0.0), {1, 0}).empty());
  CHECK(expected_long_edge_count(TorusParams(16, 0.0)) == 0.0);
}

TEST_CASE("expected_long_edge_count by hand summation, N=4 c=1") {
  // d=2: 48 pairs * 1/8, d=3: 32 pairs * 1/12, d=4: 8 pairs * 1/16.
  const double by_hand = 48.0 / 8.0 + 32.0 / 12.0 + 8.0 / 16.0;
  CHECK(expected_long_edge_count(TorusParams(4, 1.0)) == doctest::Approx(by_hand).epsilon(1e-14));
}

TEST_CASE("expected_long_edge_count approaches 2 c ln2 N^2 at rate 1/N") {
  const double limit = 2.0 * std::log(2.0);
  auto rel_gap = [&](int n) { return expected_long_edge_count(TorusParams(n, 1.0)) / (double(n) * n) / limit - 1.0; };
  CHECK(std::abs(rel_gap(256)) < 0.01);
  CHECK(std::abs(rel_gap(512)) < 0.005);
  const double ratio = rel_gap(128) / rel_gap(256);
  CHECK(ratio > 1.8);
  CHECK(ratio < 2.2);
  // Linear in c.
  CHECK(expected_long_edge_count(TorusParams(64, 3.0)) ==
        doctest::Approx(3.0 * expected_long_edge_count(TorusParams(64, 1.0))).epsilon(1e-12));
}

TEST_CASE("sampled edge count concentrates around the exact expectation, N=256 c=1") {
  const TorusParams params(256, 1.0);
  std::vector<double> counts;
  for (std::uint64_t s = 0; s < 50; ++s) counts.push_back(double(sample_long_edges(params, {s, 0}).size()));
  const double expected = expected_long_edge_count(params);
  CHECK(std::abs(mean_of(counts) / expected - 1.0) < 0.01);
  CHECK(sd_of(counts) / mean_of(counts) < 0.02);
}

TEST_CASE("marginal probability of a fixed distance-3 pair, N=8 c=0.5") {
  const TorusParams params(8, 0.5);
  const Edge target{vertex_id({1, 1}, 8), vertex_id({3, 2}, 8)};
  REQUIRE(torus_distance({1, 1}, {3, 2}, 8) == 3);
  const int trials = 100000;
  int hits = 0;
  for (int s = 0; s < trials; ++s) {
    const auto edges = sample_long_edges(params, {0xabcdef, static_cast<std::uint64_t>(s)});
    hits += std::binary_search(edges.begin(), edges.end(), target) ? 1 : 0;
  }
  const double p = 0.5 / (8.0 * 3.0);
  const double sigma = std::sqrt(p * (1 - p) / trials);
  CHECK(std::abs(double(hits) / trials - p) < 3.0 * sigma);
}

TEST_CASE("per-class edge counts follow Binomial(M_d, p_d)") {
  for (auto [n, c] : {std::pair{5, 1.0}, std::pair{8, 1.0}, std::pair{6, 3.0}}) {
    const TorusParams params(n, c);
    const int seeds = 10000;
    std::vector<std::vector<double>> hist(static_cast<std::size_t>(n) + 1);
    for (int s = 0; s < seeds; ++s) {
      const Graph g = build_graph(params, {77, static_cast<std::uint64_t>(s)});
      std::vector<std::size_t> per_class(static_cast<std::size_t>(n) + 1, 0);
      for (Edge e : g.long_edges()) ++per_class[static_cast<std::size_t>(torus_distance(vertex_at(e.u, n), vertex_at(e.v, n), n))];
      for (int d = 2; d <= n; ++d) {
        auto& h = hist[static_cast<std::size_t>(d)];
        const std::size_t k = per_class[static_cast<std::size_t>(d)];
        if (h.size() <= k) h.resize(k + 1, 0.0);
        h[k] += 1.0;
      }
    }
    for (int d = 2; d <= n; ++d) {
      const std::int64_t pairs = pair_count(n, d);
      if (pairs == 0) continue;
      const auto probs = oracle::binomial_probs(pairs, long_edge_prob(params, d), 200);
      const double pvalue = oracle::chi_square_pvalue(hist[static_cast<std::size_t>(d)], probs, seeds);
      INFO("N=" << n << " c=" << c << " d=" << d << " p=" << pvalue);
      CHECK(pvalue > 0.01);
    }
  }
}

TEST_CASE("build_graph invariants and determinism") {
  for (auto [n, c] : {std::pair{3, 1.0}, std::pair{4, 5.0}, std::pair{8, 1.0}, std::pair{33, 2.0}}) {
    const Graph g = build_graph(TorusParams(n, c), {5, 1});
    check_invariants(g);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      const auto nb = g.short_neighbors(v);
      std::set<VertexId> distinct(nb.begin(), nb.end());
      CHECK(distinct.size() == 4);
      for (VertexId u : nb) CHECK(torus_distance(vertex_at(u, n), vertex_at(v, n), n) == 1);
    }
  }
  const Graph a = build_graph(TorusParams(8, 1.0), {9, 0});
  const Graph b = build_graph(TorusParams(8, 1.0), {9, 0});
  CHECK(std::equal(a.long_edges().begin(), a.long_edges().end(), b.long_edges().begin(), b.long_edges().end()));
  const Graph other = build_graph(TorusParams(8, 1.0), {9, 1});
  CHECK_FALSE(std::equal(a.long_edges().begin(), a.long_edges().end(), other.long_edges().begin(),
                         other.long_edges().end()));
}

TEST_CASE("Graph constructor rejects invalid edges") {
  const TorusParams p(5, 1.0);
  CHECK_THROWS_AS(Graph(p, 0, {{0, 0}}), ValidationError);
  CHECK_THROWS_AS(Graph(p, 0, {{0, 1}}), ValidationError);   // distance 1
  CHECK_THROWS_AS(Graph(p, 0, {{0, 12}, {12, 0}}), ValidationError);
  CHECK_THROWS_AS(Graph(p, 0, {{0, 25}}), ValidationError);
}

TEST_CASE("serialize / parse round trip") {
  SUBCASE("empty graph") {
    const Graph g(TorusParams(7, 0.0), 3, {});
    CHECK(serialize(g) == "7 0 3\n");
    CHECK(serialize(parse_graph(serialize(g))) == serialize(g));
  }
  SUBCASE("single edge") {
    const Graph g(TorusParams(5, 1.5), 42, {{vertex_id({2, 2}, 5), vertex_id({0, 0}, 5)}});
    CHECK(serialize(g) == "5 1.5 42\n0 0 2 2\n");
    const Graph back = parse_graph(serialize(g));
    CHECK(back.long_edges().size() == 1);
    CHECK(back.seed() == 42);
    CHECK(back.params() == g.params());
  }
  SUBCASE("random graphs round trip exactly") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Graph g = build_graph(TorusParams(3 + static_cast<int>(s), 0.1 + 0.37 * s), {s, 0});
      const Graph back = parse_graph(serialize(g));
      CHECK(back.params() == g.params());
      CHECK(std::equal(g.long_edges().begin(), g.long_edges().end(), back.long_edges().begin(),
                       back.long_edges().end()));
    }
  }
}

TEST_CASE("serialized edges are sorted lexicographically") {
  const std::string text = serialize(build_graph(TorusParams(12, 2.0), {3, 0}));
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  std::vector<std::array<int, 4>> rows;
  std::array<int, 4> r{};
  while (is >> r[0] >> r[1] >> r[2] >> r[3]) {
    CHECK(std::pair(r[0], r[1]) < std::pair(r[2], r[3]));
    rows.push_back(r);
  }
  CHECK(!rows.empty());
  CHECK(std::is_sorted(rows.begin(), rows.end()));
}

TEST_CASE("parse errors carry distinct kinds") {
  auto kind_of = [](std::string_view text) {
    try {
      (void)parse_graph(text);
    } catch (const ParseError& e) {
      return e.kind();
    }
    FAIL("expected a parse error");
    return ParseErrorKind::malformed_header;
  };
  CHECK(kind_of("") == ParseErrorKind::malformed_header);
  CHECK(kind_of("5 1.0\n") == ParseErrorKind::malformed_header);
  CHECK(kind_of("five 1.0 3\n") == ParseErrorKind::malformed_header);
  CHECK(kind_of("2 1.0 3\n") == ParseErrorKind::invalid_params);
  CHECK(kind_of("5 1.0 3\n0 0 2\n") == ParseErrorKind::malformed_edge);
  CHECK(kind_of("5 1.0 3\n0 0 x 2\n") == ParseErrorKind::malformed_edge);
  CHECK(kind_of("5 1.0 3\n0 0 5 2\n") == ParseErrorKind::coordinate_out_of_range);
  CHECK(kind_of("5 1.0 3\n0 0 2 2\n2 2 0 0\n") == ParseErrorKind::duplicate_edge);
  CHECK(kind_of("5 1.0 3\n0 0 0 1\n") == ParseErrorKind::short_edge);
  CHECK_THROWS_WITH((void)parse_graph("5 1.0 3\n0 0 5 2\n"), doctest::Contains("coordinate out of range"));
}
