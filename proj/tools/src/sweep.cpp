#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <tuple>

#include <torusperc/torusperc.hpp>

#include "commands.hpp"
#include "torusperc_cli/cli.hpp"

namespace torusperc::cli {

namespace {

struct Cell {
  int k = 0;
  double lambda = 0.0;
  double p = 0.0;

  [[nodiscard]] auto key() const { return std::tuple{k, lambda, p}; }

  // Derived from the cell's own coordinates, so growing a grid leaves the
  // streams of existing cells untouched.
  [[nodiscard]] RngSeed seed(std::uint64_t master) const {
    std::uint64_t h = splitmix64(static_cast<std::uint64_t>(k));
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(lambda));
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(p));
    return {master, h};
  }
};

struct CellResult {
  Cell cell;
  int all_active = 0;
  int all_inactive = 0;
  int cycle_detected = 0;
  int budget_exhausted = 0;
  double mean_steps = 0.0;
  double pc_mf = std::numeric_limits<double>::quiet_NaN();
};

double frac_all_active(const CellResult& r, int replicas) { return static_cast<double>(r.all_active) / replicas; }

nlohmann::json to_json(const CellResult& r, const Options& opts) {
  return {{"lambda", r.cell.lambda},
          {"k", r.cell.k},
          {"N", opts.n},
          {"p", r.cell.p},
          {"replicas", opts.replicas},
          {"frac_all_active", frac_all_active(r, opts.replicas)},
          {"mean_steps", r.mean_steps},
          {"pc_mf", std::isnan(r.pc_mf) ? nlohmann::json(nullptr) : nlohmann::json(r.pc_mf)},
          {"counts",
           {{"all_active", r.all_active},
            {"all_inactive", r.all_inactive},
            {"cycle_detected", r.cycle_detected},
            {"budget_exhausted", r.budget_exhausted}}}};
}

CellResult from_json(const nlohmann::json& j) {
  CellResult r;
  r.cell = {j.at("k").get<int>(), j.at("lambda").get<double>(), j.at("p").get<double>()};
  r.mean_steps = j.at("mean_steps").get<double>();
  if (!j.at("pc_mf").is_null()) r.pc_mf = j.at("pc_mf").get<double>();
  const auto& c = j.at("counts");
  r.all_active = c.at("all_active").get<int>();
  r.all_inactive = c.at("all_inactive").get<int>();
  r.cycle_detected = c.at("cycle_detected").get<int>();
  r.budget_exhausted = c.at("budget_exhausted").get<int>();
  return r;
}

CellResult run_cell(const Cell& cell, const Options& opts) {
  const ActivationConfig act{cell.k, cell.p, opts.excitatory_fraction, opts.max_steps};
  const RngSeed base = cell.seed(opts.seed);
  std::vector<RunOutcome> runs(static_cast<std::size_t>(opts.replicas));

  if (opts.backend == "graph") {
    const TorusParams params(opts.n, c_from_lambda(cell.lambda));
    parallel_for(runs.size(), opts.threads, [&](std::size_t r) {
      const Graph g = build_graph(params, base.child(2 * r));
      runs[r] = run(g, act, base.child(2 * r + 1));
    });
  } else {
    const MeanFieldModel model = opts.degree_backend == "exact"
                                     ? MeanFieldModel::exact(opts.n, c_from_lambda(cell.lambda), cell.k)
                                     : MeanFieldModel::poisson(cell.lambda, cell.k);
    parallel_for(runs.size(), opts.threads,
                 [&](std::size_t r) { runs[r] = mf_chain_run(opts.n, act, model, base.child(r)); });
  }

  CellResult res;
  res.cell = cell;
  double steps = 0.0;
  for (const RunOutcome& r : runs) {
    steps += r.steps_taken;
    switch (r.status) {
      case RunStatus::all_active: ++res.all_active; break;
      case RunStatus::all_inactive: ++res.all_inactive; break;
      case RunStatus::cycle_detected: ++res.cycle_detected; break;
      case RunStatus::budget_exhausted: ++res.budget_exhausted; break;
    }
  }
  res.mean_steps = steps / static_cast<double>(runs.size());
  if (cell.k <= 3) res.pc_mf = p_c(cell.lambda, cell.k);
  return res;
}

nlohmann::json sweep_config(const Options& opts, const std::vector<double>& lambdas, const std::vector<double>& ps) {
  nlohmann::json j{{"command", "sweep"},
                   {"backend", opts.backend},
                   {"N", opts.n},
                   {"k", opts.k},
                   {"lambda_grid", lambdas},
                   {"p_grid", ps},
                   {"replicas", opts.replicas},
                   {"seed", opts.seed},
                   {"max_steps", opts.max_steps}};
  if (opts.backend == "graph") {
    j["excitatory_fraction"] = opts.excitatory_fraction;
  } else {
    j["degree_backend"] = opts.degree_backend;
  }
  return j;
}

// Cells already stored in the checkpoint, keyed by (k, lambda, p).
std::map<std::tuple<int, double, double>, CellResult> load_checkpoint(const std::string& path,
                                                                      const nlohmann::json& config) {
  std::map<std::tuple<int, double, double>, CellResult> done;
  std::ifstream is(path);
  if (!is) return done;
  std::string line;
  if (!std::getline(is, line)) return done;
  const auto head = nlohmann::json::parse(line, nullptr, false);
  if (head.is_discarded() || !head.contains("config")) throw ValidationError("checkpoint " + path + " has no config line");
  // Cells depend only on these fields, not on the grids.
  for (const char* field : {"backend", "N", "replicas", "seed", "max_steps", "excitatory_fraction", "degree_backend"}) {
    if (head["config"].value(field, nlohmann::json()) != config.value(field, nlohmann::json())) {
      throw ValidationError("checkpoint " + path + " was written with a different '" + field + "'");
    }
  }
  while (std::getline(is, line)) {
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) break;  // torn final line from an interrupted run
    CellResult r = from_json(j);
    done[r.cell.key()] = r;
  }
  return done;
}

}  // namespace

int cmd_sweep(const Options& opts, std::ostream& out) {
  const auto lambdas = parse_grid(opts.lambda_grid);
  const auto ps = parse_grid(opts.p_grid);
  for (double l : lambdas) {
    if (!(l > 0.0)) throw ValidationError("lambda grid values must be positive");
  }
  for (double p : ps) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p grid values must lie in [0, 1]");
  }
  if (opts.replicas < 1) throw ValidationError("replicas must be >= 1");
  for (int k : opts.k) {
    if (k < 0) throw ValidationError("threshold k must be nonnegative");
  }
  ActivationConfig{0, 0.0, opts.excitatory_fraction, opts.max_steps}.validate();
  if (opts.backend == "graph") (void)TorusParams(opts.n, c_from_lambda(lambdas.back()));
  if (opts.n < 1) throw ValidationError("N must be positive");

  const auto config = sweep_config(opts, lambdas, ps);
  std::map<std::tuple<int, double, double>, CellResult> done;
  std::ofstream checkpoint;
  if (!opts.checkpoint.empty()) {
    done = load_checkpoint(opts.checkpoint, config);
    const bool fresh = !std::filesystem::exists(opts.checkpoint) || std::filesystem::file_size(opts.checkpoint) == 0;
    checkpoint.open(opts.checkpoint, std::ios::app);
    if (!checkpoint) throw std::runtime_error("cannot open checkpoint " + opts.checkpoint);
    if (fresh) checkpoint << nlohmann::json{{"config", config}}.dump() << '\n' << std::flush;
  }

  std::vector<CellResult> results;
  for (int k : opts.k) {
    for (double l : lambdas) {
      for (double p : ps) {
        const Cell cell{k, l, p};
        if (auto it = done.find(cell.key()); it != done.end()) {
          results.push_back(it->second);
          continue;
        }
        results.push_back(run_cell(cell, opts));
        if (checkpoint.is_open()) checkpoint << to_json(results.back(), opts).dump() << '\n' << std::flush;
      }
    }
  }

  Sink sink(opts, out);
  std::ostream& os = sink.stream();
  if (opts.format == "json") {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& r : results) cells.push_back(to_json(r, opts));
    os << nlohmann::json{{"config", config}, {"cells", std::move(cells)}}.dump(2) << '\n';
  } else {
    write_csv_preamble(os, config);
    os << "lambda,k,N,p,replicas,frac_all_active,mean_steps,pc_mf\n";
    for (const auto& r : results) {
      os << format_double(r.cell.lambda) << ',' << r.cell.k << ',' << opts.n << ',' << format_double(r.cell.p) << ','
         << opts.replicas << ',' << format_double(frac_all_active(r, opts.replicas)) << ','
         << format_double(r.mean_steps) << ',' << (std::isnan(r.pc_mf) ? "" : format_double(r.pc_mf)) << '\n';
    }
  }
  sink.finish();
  return kOk;
}

}  // namespace torusperc::cli
