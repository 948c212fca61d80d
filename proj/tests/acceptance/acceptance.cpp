// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <oracles.hpp>
#include <torusperc/torusperc.hpp>

using namespace torusperc;

namespace {

const double kLn2 = std::log(2.0);

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
  }
};

std::string fmt(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

// 1. Long-degree law.
void degree_law(Verdict& v) {
  double mean = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) mean += long_degree_histogram(build_graph(TorusParams(256, 1.0), {s, 0})).mean();
  mean /= 50.0;
  const double lambda = 4.0 * kLn2;
  const double rel = std::abs(mean / lambda - 1.0);
  v.require(rel <= 0.02, "mean degree " + fmt(mean) + " vs 4 ln2, rel " + fmt(rel, 3));

  const auto po = poisson_pmf(lambda, 80);
  const double tv128 = tv_distance(exact_long_degree_distribution(128, 1.0), po);
  const double tv256 = tv_distance(exact_long_degree_distribution(256, 1.0), po);
  const double ratio = tv128 / tv256;
  v.require(ratio >= 1.5 && ratio <= 2.5, "TV(128)/TV(256) = " + fmt(tv128, 4) + "/" + fmt(tv256, 4) + " = " + fmt(ratio, 4));
}

// 2. Long-edge count.
void edge_count(Verdict& v) {
  const int n = 256;
  const TorusParams params(n, 1.0);
  double mean = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) mean += static_cast<double>(build_graph(params, {s, 0}).long_edges().size());
  mean /= 50.0 * n * n;
  const double exact = expected_long_edge_count(params) / (double(n) * n);
  const double rel_mc = std::abs(mean / exact - 1.0);
  const double rel_limit = std::abs(exact / (2.0 * kLn2) - 1.0);
  v.require(rel_mc <= 0.01, "MC " + fmt(mean) + " vs exact " + fmt(exact) + ", rel " + fmt(rel_mc, 3));
  v.require(rel_limit <= 0.005, "exact vs 2 ln2 = " + fmt(2 * kLn2) + ", rel " + fmt(rel_limit, 3));
}

// 3. Diameter scaling.
void diameter(Verdict& v) {
  double lo = 1e9, hi = 0.0;
  bool below = true;
  std::ostringstream per_n;
  auto record = [&](int n, int value) {
    const double r = value / std::log(double(n));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    // Bare torus diameter is 2 floor(N/2).
    below = below && value < 2 * (n / 2);
  };
  for (int n : {16, 32, 64}) {
    int max_v = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
      const int d = exact_diameter(build_graph(TorusParams(n, 1.0), {s, 0})).value;
      record(n, d);
      max_v = std::max(max_v, d);
    }
    per_n << "N=" << n << ":" << max_v << " ";
  }
  for (int n : {128, 256}) {
    int max_v = 0;
    for (std::uint64_t s = 0; s < 3; ++s) {
      const int d = estimate_diameter(build_graph(TorusParams(n, 1.0), {s, 0}), 8, {s, 1}).value;
      record(n, d);
      max_v = std::max(max_v, d);
    }
    per_n << "N=" << n << ":" << max_v << " ";
  }
  v.require(hi / lo <= 2.0, per_n.str() + "value/lnN in [" + fmt(lo, 4) + ", " + fmt(hi, 4) + "]");
  v.require(below, "all c=1 diameters below bare torus");
}

// 4. Fixed points.
void fixed_points(Verdict& v) {
  const double r = 235.0 + 6.0 * std::sqrt(1473.0);
  const double radical = 11.0 / 12.0 - std::cbrt(r) / 12.0 - 13.0 / 12.0 / std::cbrt(r);
  v.require(p_c(0.0, 3) == 0.5, "x3(0) = " + fmt(p_c(0.0, 3), 17));
  v.require(std::abs(p_c(0.0, 2) - radical) <= 1e-9, "x2(0) = " + fmt(p_c(0.0, 2), 12) + " vs " + fmt(radical, 12));
  bool counts = true;
  for (double lambda : {0.01, 0.1, 1.0, 4.0, 10.0, 50.0}) {
    for (int k = 0; k <= 3; ++k) {
      const std::size_t want = k == 0 ? 1 : k == 1 ? 2 : 3;
      counts = counts && find_fixed_points(lambda, k).size() == want;
    }
  }
  v.require(counts, "fixed-point counts {1,2,3,3}");
}

std::vector<double> log_grid(double a, double b, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(a * std::pow(b / a, i / double(n - 1)));
  return g;
}

// 5. Monotonicity of p_c.
void monotonicity(Verdict& v) {
  const auto grid = log_grid(0.01, 50.0, 100);
  for (int k : {2, 3}) {
    const auto curve = pc_curve(grid, k);
    bool mono = true, neg = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (i > 0) mono = mono && curve[i].p_c <= curve[i - 1].p_c + 1e-12;
      const double lambda = grid[i];
      const double d = dpc_dlambda(lambda, k);
      neg = neg && d < 0.0;
      const double h = 1e-5 * lambda;
      const double fd = (p_c(lambda + h, k) - p_c(lambda - h, k)) / (2 * h);
      worst = std::max(worst, std::abs(d - fd) / std::abs(fd));
    }
    const std::string tag = "k=" + std::to_string(k) + " ";
    v.require(mono, tag + "non-increasing");
    v.require(neg, tag + "dp_c/dlambda < 0");
    v.require(worst <= 1e-4, tag + "max rel FD error " + fmt(worst, 3));
  }
}

// 6. Mean-field chain phase transition.
void phase_transition(Verdict& v) {
  const int n = 300;
  auto count = [&](int k, double p, RunStatus want, std::uint64_t stream) {
    const auto model = MeanFieldModel::poisson(2.0, k);
    int hits = 0;
    for (std::uint64_t r = 0; r < 100; ++r) {
      hits += mf_chain_run(n, {k, p, 1.0, 10000}, model, RngSeed{stream, 0}.child(r)).status == want;
    }
    return hits;
  };
  for (int k : {2, 3}) {
    const double pc = p_c(2.0, k);
    const int up = count(k, pc + 0.05, RunStatus::all_active, 10 + k);
    const int down = count(k, pc - 0.05, RunStatus::all_inactive, 20 + k);
    const std::string tag = "k=" + std::to_string(k) + " ";
    v.require(up >= 95, tag + "p_c+0.05 -> 1: " + std::to_string(up) + "/100");
    v.require(down >= 95, tag + "p_c-0.05 -> 0: " + std::to_string(down) + "/100");
  }
  const auto k0 = mf_chain_run(n, {0, 0.3, 1.0, 10}, MeanFieldModel::poisson(2.0, 0), {30, 0});
  v.require(k0.status == RunStatus::all_active && k0.steps_taken == 1, "k=0 absorbs at 1 in one step");
  const int k1 = count(1, 0.01, RunStatus::all_active, 31);
  v.require(k1 >= 95, "k=1 p=0.01 -> 1: " + std::to_string(k1) + "/100");
}

// 7. Poissonization error.
void poissonization(Verdict& v) {
  const double lambda = 4.0 * kLn2;
  auto gap = [&](int n) {
    const auto model = MeanFieldModel::exact(n, 1.0, 2);
    double m = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double x = i / 1000.0;
      m = std::max(m, std::abs(f_mean(x, model) - fbar_closed(x, lambda, 2)));
    }
    return m;
  };
  const double g128 = gap(128), g256 = gap(256);
  const double ratio = g128 / g256;
  v.require(ratio >= 1.5 && ratio <= 2.5, "gap(128)/gap(256) = " + fmt(g128, 4) + "/" + fmt(g256, 4) + " = " + fmt(ratio, 4));
}

// 8. Dynamics oracles.
void dynamics_oracles(Verdict& v) {
  Engine rng = make_engine({80, 0});
  int agree = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = 3 + static_cast<int>(rng() % 6);
    const double c = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
    const Graph g = build_graph(TorusParams(n, c), {rng(), 0});
    const auto s = init_state(g, {1, 0.5, 0.6, 10}, {rng(), 0});
    const int k = static_cast<int>(rng() % 6) - 1;
    const auto next = step(g, s, k);
    agree += std::vector<std::uint8_t>(next.active().begin(), next.active().end()) == oracle::reference_step(g, s, k);
  }
  v.require(agree == 100, "step == reference on " + std::to_string(agree) + "/100 instances");

  for (double c : {0.0, 1.0}) {
    int extinct = 0, tried = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
      const Graph g = build_graph(TorusParams(8, c), {s, 0});
      const auto init = init_state(g, {5, 0.5, 1.0, 100}, {s, 1});
      if (init.all_active()) continue;
      ++tried;
      const auto out = run_from(g, init, 5, 100);
      extinct += out.status == RunStatus::all_inactive && out.steps_taken <= 8;
    }
    v.require(extinct == tried, "k=5 c=" + fmt(c) + " extinct within N steps: " + std::to_string(extinct) + "/" +
                                    std::to_string(tried));
  }

  const Graph bare = build_graph(TorusParams(4, 0.0), {0, 0});
  std::vector<std::uint8_t> block(16, 0);
  for (int x : {0, 1})
    for (int y : {0, 1}) block[vertex_id({x, y}, 4)] = 1;
  ActivationState s(block, std::vector<NodeType>(16, NodeType::excitatory));
  bool persists = true;
  for (int t = 0; t < 100; ++t) {
    s = step(bare, s, 3);
    persists = persists && std::vector<std::uint8_t>(s.active().begin(), s.active().end()) == block;
  }
  v.require(persists, "2x2 block fixed for 100 steps");
}

// 9. p_c curves.
void pc_figure(Verdict& v) {
  const auto grid = log_grid(0.05, 50.0, 200);
  const auto c2 = pc_curve(grid, 2), c3 = pc_curve(grid, 3);
  const char* path = std::getenv("TORUSPERC_ACCEPTANCE_CSV");
  const std::string out_path = path ? path : "pc_curve.csv";
  {
    std::ofstream os(out_path);
    write_pc_curve_csv(os, c2, 2);
    write_pc_curve_csv(os, c3, 3, false);
    v.require(static_cast<bool>(os), "CSV written to " + out_path);
  }
  for (auto [k, curve] : {std::pair{2, &c2}, std::pair{3, &c3}}) {
    const double limit = p_c(0.0, k);
    const double first = curve->front().p_c;
    const std::string tag = "k=" + std::to_string(k) + " ";
    v.require(std::abs(p_c(1e-9, k) - limit) <= 1e-6, tag + "p_c(0+) = " + fmt(p_c(1e-9, k), 9));
    v.require(first <= limit && first >= 0.95 * limit, tag + "p_c(0.05) = " + fmt(first) + " near " + fmt(limit));
    const double drop = p_c(0.1, k) / p_c(10.0, k);
    v.require(drop >= 3.0, tag + "p_c(0.1)/p_c(10) = " + fmt(drop, 4));
  }
  bool below = true;
  for (std::size_t i = 0; i < grid.size(); ++i) below = below && c2[i].p_c < c3[i].p_c;
  v.require(below, "k=2 strictly below k=3");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"degree law", degree_law},
      {"long-edge count", edge_count},
      {"diameter scaling", diameter},
      {"mean-field fixed points", fixed_points},
      {"p_c monotonicity", monotonicity},
      {"mean-field chain phase transition", phase_transition},
      {"Poissonization error", poissonization},
      {"dynamics oracles", dynamics_oracles},
      {"p_c curves", pc_figure},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << i + 1 << " (" << criteria[i].first << ", "
              << fmt(secs, 3) << " s): " << v.detail.str() << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
