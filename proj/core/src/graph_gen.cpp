#include "torusperc/graph_gen.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "torusperc/errors.hpp"

namespace torusperc {

namespace {

Edge canonical(VertexId a, VertexId b) noexcept { return a < b ? Edge{a, b} : Edge{b, a}; }

std::uint64_t edge_key(Edge e) noexcept { return (static_cast<std::uint64_t>(e.u) << 32) | e.v; }

// Dense classes (small N) enumerate the class and take a uniform subset;
// sparse classes draw (vertex, offset) pairs and reject repeats. Both give a
// uniformly random `count`-subset of the class's pairs.
void sample_class(const TorusParams& params, const std::vector<Offset>& offsets, std::int64_t pairs,
                  std::int64_t count, Engine& engine, std::vector<Edge>& out) {
  const int n = params.n();
  const auto vertices = static_cast<VertexId>(params.vertex_count());

  if (count * 4 >= pairs) {
    std::vector<Edge> all;
    all.reserve(static_cast<std::size_t>(pairs));
    for (VertexId u = 0; u < vertices; ++u) {
      const Vertex pu = vertex_at(u, n);
      for (Offset o : offsets) {
        const VertexId v = vertex_id(translate(pu, o, n), n);
        if (u < v) all.push_back({u, v});
      }
    }
    for (std::int64_t i = 0; i < count; ++i) {
      std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i), all.size() - 1);
      std::swap(all[static_cast<std::size_t>(i)], all[pick(engine)]);
    }
    out.insert(out.end(), all.begin(), all.begin() + count);
    return;
  }

  std::uniform_int_distribution<VertexId> pick_vertex(0, vertices - 1);
  std::uniform_int_distribution<std::size_t> pick_offset(0, offsets.size() - 1);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(static_cast<std::size_t>(count) * 2);
  while (static_cast<std::int64_t>(seen.size()) < count) {
    const VertexId u = pick_vertex(engine);
    const Offset o = offsets[pick_offset(engine)];
    const Edge e = canonical(u, vertex_id(translate(vertex_at(u, n), o, n), n));
    if (seen.insert(edge_key(e)).second) out.push_back(e);
  }
}

}  // namespace

Graph::Graph(TorusParams params, std::uint64_t seed, std::vector<Edge> edges)
    : params_(params), seed_(seed), edges_(std::move(edges)) {
  const int n = params_.n();
  const auto vertices = params_.vertex_count();
  for (Edge& e : edges_) {
    if (e.u >= vertices || e.v >= vertices) throw ValidationError("long edge endpoint out of range");
    if (e.u == e.v) throw ValidationError("long edge is a self-loop");
    e = canonical(e.u, e.v);
    if (torus_distance(vertex_at(e.u, n), vertex_at(e.v, n), n) < 2) {
      throw ValidationError("long edge joins a pair at distance < 2");
    }
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw ValidationError("duplicate long edge");
  }

  offsets_.assign(vertices + 1, 0);
  for (Edge e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (Edge e : edges_) {
    adjacency_[cursor[e.u]++] = e.v;
    adjacency_[cursor[e.v]++] = e.u;
  }
}

std::vector<Edge> sample_long_edges(const TorusParams& params, RngSeed seed) {
  std::vector<Edge> edges;
  if (params.c() == 0.0) return edges;

  const int n = params.n();
  Engine engine = make_engine(seed);
  const DistanceClasses classes(n);
  edges.reserve(static_cast<std::size_t>(expected_long_edge_count(params) * 1.1) + 16);

  for (int d = 2; d <= n; ++d) {
    const std::int64_t pairs = pair_count(n, d);
    if (pairs == 0) continue;
    std::binomial_distribution<std::int64_t> count_dist(pairs, long_edge_prob(params, d));
    const std::int64_t count = count_dist(engine);
    if (count > 0) sample_class(params, classes.at(d), pairs, count, engine, edges);
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

double expected_long_edge_count(const TorusParams& params) {
  if (params.c() == 0.0) return 0.0;
  double total = 0.0;
  for (int d = 2; d <= params.n(); ++d) {
    total += static_cast<double>(pair_count(params.n(), d)) * long_edge_prob(params, d);
  }
  return total;
}

Graph build_graph(const TorusParams& params, RngSeed seed) {
  return Graph(params, seed.seed, sample_long_edges(params, seed));
}

std::string_view to_string(ParseErrorKind kind) noexcept {
  switch (kind) {
    case ParseErrorKind::malformed_header: return "malformed header";
    case ParseErrorKind::invalid_params: return "invalid parameters";
    case ParseErrorKind::malformed_edge: return "malformed edge line";
    case ParseErrorKind::coordinate_out_of_range: return "coordinate out of range";
    case ParseErrorKind::duplicate_edge: return "duplicate edge";
    case ParseErrorKind::short_edge: return "edge at distance < 2";
  }
  return "unknown";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail)
    : std::runtime_error("line " + std::to_string(line) + ": " + std::string(to_string(kind)) +
                         (detail.empty() ? "" : " (" + detail + ")")),
      kind_(kind),
      line_(line) {}

void write_graph(std::ostream& os, const Graph& graph) {
  const int n = graph.n();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", graph.params().c());
  os << n << ' ' << buf << ' ' << graph.seed() << '\n';
  for (Edge e : graph.long_edges()) {
    const Vertex a = vertex_at(e.u, n);
    const Vertex b = vertex_at(e.v, n);
    os << a.x << ' ' << a.y << ' ' << b.x << ' ' << b.y << '\n';
  }
}

std::string serialize(const Graph& graph) {
  std::ostringstream os;
  write_graph(os, graph);
  return os.str();
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <class T>
bool parse_number(std::string_view field, T& out) {
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

Graph parse_graph(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!split_fields(line).empty()) return true;
    }
    return false;
  };

  std::string_view line;
  if (!next_line(line)) throw ParseError(ParseErrorKind::malformed_header, 1, "empty input");
  const auto header = split_fields(line);
  int n = 0;
  double c = 0.0;
  std::uint64_t seed = 0;
  if (header.size() != 3 || !parse_number(header[0], n) || !parse_number(header[1], c) ||
      !parse_number(header[2], seed)) {
    throw ParseError(ParseErrorKind::malformed_header, line_no, "expected \"N c seed\"");
  }
  std::optional<TorusParams> params;
  try {
    params.emplace(n, c);
  } catch (const ValidationError& e) {
    throw ParseError(ParseErrorKind::invalid_params, line_no, e.what());
  }

  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> seen;
  while (next_line(line)) {
    const auto fields = split_fields(line);
    std::array<int, 4> coords{};
    if (fields.size() != 4) throw ParseError(ParseErrorKind::malformed_edge, line_no, "expected 4 fields");
    for (std::size_t i = 0; i < 4; ++i) {
      if (!parse_number(fields[i], coords[i])) {
        throw ParseError(ParseErrorKind::malformed_edge, line_no, "non-integer coordinate");
      }
      if (coords[i] < 0 || coords[i] >= n) {
        throw ParseError(ParseErrorKind::coordinate_out_of_range, line_no, std::string(fields[i]));
      }
    }
    const Vertex a{coords[0], coords[1]};
    const Vertex b{coords[2], coords[3]};
    if (torus_distance(a, b, n) < 2) throw ParseError(ParseErrorKind::short_edge, line_no, "");
    const Edge e = canonical(vertex_id(a, n), vertex_id(b, n));
    if (!seen.insert(edge_key(e)).second) throw ParseError(ParseErrorKind::duplicate_edge, line_no, "");
    edges.push_back(e);
  }
  return Graph(*params, seed, std::move(edges));
}

Graph read_graph(std::istream& is) {
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return parse_graph(text);
}

}  // namespace torusperc
