#include "torusperc_cli/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <torusperc/torusperc.hpp>

#include "commands.hpp"

namespace torusperc::cli {

namespace {

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ValidationError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  for (;;) {
    const auto pos = s.find(sep);
    parts.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) return parts;
    s.remove_prefix(pos + 1);
  }
}

std::string_view extension(const Options& opts) {
  if (opts.command == "generate") return "txt";
  return opts.format == "json" ? "json" : "csv";
}

bool json_out(const Options& opts) { return opts.format == "json"; }

int single_k(const Options& opts) {
  if (opts.k.size() != 1) throw ValidationError(opts.command + " takes a single --k value");
  return opts.k.front();
}

Graph load_graph(const Options& opts) {
  if (!opts.graph.empty()) {
    std::ifstream is(opts.graph);
    if (!is) throw std::runtime_error("cannot open graph file " + opts.graph);
    return read_graph(is);
  }
  return build_graph(TorusParams(opts.n, opts.c), {opts.seed, 0});
}

nlohmann::json graph_config(const Options& opts, const Graph& g) {
  nlohmann::json j{{"command", opts.command}, {"N", g.n()}, {"c", g.params().c()}, {"seed", g.seed()}};
  if (!opts.graph.empty()) j["graph"] = opts.graph;
  return j;
}

nlohmann::json activation_json(const ActivationConfig& a) {
  return {{"k", a.k}, {"p", a.p_init}, {"excitatory_fraction", a.excitatory_fraction}, {"max_steps", a.max_steps}};
}

std::string optional_int(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

// --- commands ---

int cmd_generate(const Options& opts, std::ostream& out) {
  const Graph g = build_graph(TorusParams(opts.n, opts.c), {opts.seed, 0});
  Sink sink(opts, out);
  write_graph(sink.stream(), g);
  sink.finish();
  return kOk;
}

int cmd_stats(const Options& opts, std::ostream& out) {
  const Graph g = load_graph(opts);
  const auto hist = long_degree_histogram(g);
  const double lambda = lambda_from_c(g.params().c());
  DegreeDistribution ref;
  if (opts.degree_backend == "exact") {
    ref = exact_long_degree_distribution(g.n(), g.params().c());
  } else if (lambda > 0.0) {
    ref = poisson_pmf(lambda, std::max<int>(60, static_cast<int>(hist.pmf.size()) + 20));
  } else {
    ref = {{1.0}, DegreeKind::poisson, 0.0};
  }
  auto config = graph_config(opts, g);
  config["degree_backend"] = opts.degree_backend;

  Sink sink(opts, out);
  if (json_out(opts)) {
    nlohmann::json j{{"config", config},
                     {"long_edges", g.long_edges().size()},
                     {"expected_long_edges", expected_long_edge_count(g.params())},
                     {"mean_degree", hist.mean()},
                     {"lambda", lambda},
                     {"histogram", hist.pmf},
                     {"reference", {{"kind", std::string(to_string(ref.kind))}, {"pmf", ref.pmf}}},
                     {"tv_distance", tv_distance(hist, ref)}};
    sink.stream() << j.dump(2) << '\n';
  } else {
    write_csv_preamble(sink.stream(), config);
    write_histogram_csv(sink.stream(), hist);
  }
  sink.finish();
  return kOk;
}

int cmd_diameter(const Options& opts, std::ostream& out) {
  const Graph g = load_graph(opts);
  const DiameterReport report = g.n() <= kExactDiameterMaxN
                                    ? exact_diameter(g, opts.threads)
                                    : estimate_diameter(g, opts.sources, {g.seed(), 2});
  const auto record = diameter_record(g, report);
  Sink sink(opts, out);
  if (json_out(opts)) {
    nlohmann::json j = record;
    j["sources_used"] = report.sources_used;
    sink.stream() << j.dump(2) << '\n';
  } else {
    write_csv_preamble(sink.stream(), graph_config(opts, g));
    sink.stream() << "N,c,seed,method,value\n"
                  << g.n() << ',' << format_double(g.params().c()) << ',' << g.seed() << ','
                  << to_string(report.method) << ',' << report.value << '\n';
  }
  sink.finish();
  return kOk;
}

// Shared by simulate and mfchain: one trajectory, or one row per replica.
void emit_runs(const Options& opts, const nlohmann::json& config, const std::vector<RunOutcome>& runs,
               std::ostream& out) {
  Sink sink(opts, out);
  std::ostream& os = sink.stream();
  if (json_out(opts)) {
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& r : runs) {
      auto rec = outcome_record(r);
      rec["rho_final"] = r.trajectory.back();
      if (runs.size() == 1) rec["trajectory"] = r.trajectory;
      reps.push_back(std::move(rec));
    }
    os << nlohmann::json{{"config", config}, {"replicas", std::move(reps)}}.dump(2) << '\n';
  } else if (runs.size() == 1) {
    write_csv_preamble(os, config);
    os << "# outcome: " << outcome_record(runs.front()).dump() << '\n';
    write_trajectory_csv(os, runs.front());
  } else {
    write_csv_preamble(os, config);
    os << "replica,status,steps,cycle_length,rho_final\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
      os << i << ',' << to_string(runs[i].status) << ',' << runs[i].steps_taken << ','
         << optional_int(runs[i].cycle_length) << ',' << format_double(runs[i].trajectory.back()) << '\n';
    }
  }
  sink.finish();
}

ActivationConfig activation(const Options& opts) {
  ActivationConfig a{single_k(opts), opts.p, opts.excitatory_fraction, opts.max_steps};
  a.validate();
  return a;
}

int cmd_simulate(const Options& opts, std::ostream& out) {
  const Graph g = load_graph(opts);
  const ActivationConfig act = activation(opts);
  std::vector<RunOutcome> runs(static_cast<std::size_t>(opts.replicas));
  const RngSeed base{opts.seed, 1};
  parallel_for(runs.size(), opts.threads, [&](std::size_t r) { runs[r] = run(g, act, base.child(r)); });

  auto config = graph_config(opts, g);
  config["activation"] = activation_json(act);
  config["replicas"] = opts.replicas;
  emit_runs(opts, config, runs, out);
  return kOk;
}

int cmd_mfchain(const Options& opts, std::ostream& out) {
  const ActivationConfig act = activation(opts);
  const double lambda = opts.lambda > 0.0 ? opts.lambda : lambda_from_c(opts.c);
  const MeanFieldModel model = opts.degree_backend == "exact"
                                   ? MeanFieldModel::exact(opts.n, c_from_lambda(lambda), act.k)
                                   : MeanFieldModel::poisson(lambda, act.k);
  std::vector<RunOutcome> runs(static_cast<std::size_t>(opts.replicas));
  const RngSeed base{opts.seed, 3};
  parallel_for(runs.size(), opts.threads,
               [&](std::size_t r) { runs[r] = mf_chain_run(opts.n, act, model, base.child(r)); });

  nlohmann::json config{{"command", opts.command},
                        {"N", opts.n},
                        {"lambda", lambda},
                        {"degree_backend", opts.degree_backend},
                        {"seed", opts.seed},
                        {"replicas", opts.replicas},
                        {"activation", activation_json(act)}};
  emit_runs(opts, config, runs, out);
  return kOk;
}

int cmd_meanfield(const Options& opts, std::ostream& out) {
  const auto grid = parse_grid(opts.lambda_grid.empty() ? "log:0.05:50:100" : opts.lambda_grid);
  for (int k : opts.k) {
    if (k < 0 || k > 3) throw ValidationError("meanfield supports k in {0,1,2,3}, got " + std::to_string(k));
  }
  std::vector<std::vector<PcPoint>> curves;
  for (int k : opts.k) curves.push_back(pc_curve(grid, k, opts.threads));

  const nlohmann::json config{{"command", opts.command}, {"k", opts.k}, {"lambda_grid", grid}};
  Sink sink(opts, out);
  if (json_out(opts)) {
    nlohmann::json jc = nlohmann::json::array(), jf = nlohmann::json::array();
    for (std::size_t i = 0; i < opts.k.size(); ++i) {
      nlohmann::json pts = nlohmann::json::array();
      for (const auto& pt : curves[i]) pts.push_back({{"lambda", pt.lambda}, {"p_c", pt.p_c}});
      jc.push_back({{"k", opts.k[i]}, {"points", std::move(pts)}});
      for (double l : grid) jf.push_back(fixed_point_report(l, opts.k[i], find_fixed_points(l, opts.k[i])));
    }
    sink.stream() << nlohmann::json{{"config", config}, {"curves", jc}, {"fixed_points", jf}}.dump(2) << '\n';
  } else {
    write_csv_preamble(sink.stream(), config);
    for (std::size_t i = 0; i < opts.k.size(); ++i) write_pc_curve_csv(sink.stream(), curves[i], opts.k[i], i == 0);
  }
  sink.finish();
  return kOk;
}

// --- option wiring ---

void add_output_options(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_option("--out", o.out, std::string("Output file ('-' for stdout; default $") + kOutDirEnv +
                                      "/<command>.<ext> if set, else stdout)");
}

void add_graph_options(CLI::App* sub, Options& o) {
  sub->add_option("--n", o.n, "Torus side N")->capture_default_str();
  sub->add_option("--c", o.c, "Long-edge constant c")->capture_default_str();
  sub->add_option("--seed", o.seed, "Master seed")->capture_default_str();
}

void add_activation_options(CLI::App* sub, Options& o) {
  sub->add_option("--k", o.k, "Activation threshold")->capture_default_str();
  sub->add_option("--p", o.p, "Initial activation probability")->capture_default_str();
  sub->add_option("--excitatory-fraction", o.excitatory_fraction, "Probability a vertex is excitatory")
      ->capture_default_str();
  sub->add_option("--max-steps", o.max_steps, "Step budget per run")->capture_default_str();
  sub->add_option("--replicas", o.replicas, "Independent runs")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

}  // namespace

Sink::Sink(const Options& opts, std::ostream& fallback) : os_(&fallback) {
  std::filesystem::path path;
  if (!opts.out.empty() && opts.out != "-") {
    path = opts.out;
  } else if (opts.out.empty()) {
    if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') {
      path = std::filesystem::path(dir) / (opts.command + "." + std::string(extension(opts)));
    }
  }
  if (path.empty()) return;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  file_ = std::make_unique<std::ofstream>(path);
  if (!*file_) throw std::runtime_error("cannot open output file " + path.string());
  os_ = file_.get();
  path_ = path.string();
}

void Sink::finish() {
  os_->flush();
  if (!*os_) throw std::runtime_error("write failed" + (path_.empty() ? std::string() : ": " + path_));
}

double lambda_from_c(double c) { return 4.0 * c * std::log(2.0); }
double c_from_lambda(double lambda) { return lambda / (4.0 * std::log(2.0)); }

void write_csv_preamble(std::ostream& os, const nlohmann::json& config) { os << "# config: " << config.dump() << '\n'; }

std::vector<double> parse_grid(std::string_view text) {
  if (text.empty()) throw ValidationError("empty grid");
  const auto parts = split(text, ':');
  std::vector<double> grid;
  if (parts.size() == 1) {
    for (auto item : split(text, ',')) grid.push_back(parse_number(item));
    return grid;
  }
  if (parts.size() != 4 || (parts[0] != "lin" && parts[0] != "log")) {
    throw ValidationError("grid must be 'a,b,...', 'lin:a:b:n' or 'log:a:b:n', got '" + std::string(text) + "'");
  }
  const double a = parse_number(parts[1]), b = parse_number(parts[2]);
  const double count = parse_number(parts[3]);
  if (count < 1 || count != std::floor(count)) throw ValidationError("grid point count must be a positive integer");
  const int n = static_cast<int>(count);
  const bool log = parts[0] == "log";
  if (log && !(a > 0.0 && b > 0.0)) throw ValidationError("log grid endpoints must be positive");
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    const double v = log ? a * std::pow(b / a, t) : a + (b - a) * t;
    // Drop accumulated rounding so "lin:0:0.4:5" yields 0.3, not 0.30000000000000004.
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    grid.push_back(std::strtod(buf, nullptr));
  }
  grid.back() = n == 1 ? a : b;
  return grid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Long-range percolation on the 2D torus: graphs, activation dynamics, mean-field theory", "torusperc"};
  app.require_subcommand(1);
  Options o;

  auto* generate = app.add_subcommand("generate", "Sample a graph and write it in the edge-list format");
  add_graph_options(generate, o);
  generate->add_option("--out", o.out, "Output file");

  auto* stats = app.add_subcommand("stats", "Long-degree histogram of a graph");
  add_graph_options(stats, o);
  stats->add_option("--graph", o.graph, "Read the graph from this file instead of sampling");
  stats->add_option("--degree-backend", o.degree_backend, "Reference degree law")
      ->check(CLI::IsMember({"poisson", "exact"}));
  add_output_options(stats, o);

  auto* diameter = app.add_subcommand("diameter", "Exact (N <= 64) or double-sweep diameter");
  add_graph_options(diameter, o);
  diameter->add_option("--graph", o.graph, "Read the graph from this file instead of sampling");
  diameter->add_option("--sources", o.sources, "Double-sweep repetitions")->check(CLI::PositiveNumber);
  diameter->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  add_output_options(diameter, o);

  auto* simulate = app.add_subcommand("simulate", "Run the activation process on a graph");
  add_graph_options(simulate, o);
  simulate->add_option("--graph", o.graph, "Read the graph from this file instead of sampling");
  add_activation_options(simulate, o);
  add_output_options(simulate, o);

  auto* mfchain = app.add_subcommand("mfchain", "Run the mean-field Markov chain on densities");
  add_graph_options(mfchain, o);
  mfchain->add_option("--lambda", o.lambda, "Mean long degree (default 4 c ln 2)")->check(CLI::PositiveNumber);
  mfchain->add_option("--degree-backend", o.degree_backend, "Degree law")->check(CLI::IsMember({"poisson", "exact"}));
  add_activation_options(mfchain, o);
  add_output_options(mfchain, o);

  auto* meanfield = app.add_subcommand("meanfield", "Critical probability curves and fixed points");
  meanfield->add_option("--k", o.k, "Thresholds (comma separated)")->delimiter(',');
  meanfield->add_option("--lambda-grid", o.lambda_grid, "Grid of lambda values (default log:0.05:50:100)");
  meanfield->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  add_output_options(meanfield, o);

  auto* sweep = app.add_subcommand("sweep", "Phase diagram over (k, lambda, p) cells");
  sweep->add_option("--n", o.n, "Torus side N")->capture_default_str();
  sweep->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  sweep->add_option("--k", o.k, "Thresholds (comma separated)")->delimiter(',');
  sweep->add_option("--lambda-grid", o.lambda_grid, "Grid of lambda values")->required();
  sweep->add_option("--p-grid", o.p_grid, "Grid of initial densities")->required();
  sweep->add_option("--replicas", o.replicas, "Runs per cell")->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_option("--max-steps", o.max_steps, "Step budget per run")->capture_default_str();
  sweep->add_option("--excitatory-fraction", o.excitatory_fraction, "Probability a vertex is excitatory (graph)");
  sweep->add_option("--backend", o.backend, "Simulation backend")
      ->check(CLI::IsMember({"graph", "mfchain"}))
      ->capture_default_str();
  sweep->add_option("--degree-backend", o.degree_backend, "Degree law (mfchain)")
      ->check(CLI::IsMember({"poisson", "exact"}));
  sweep->add_option("--checkpoint", o.checkpoint, "Append finished cells here and skip them on restart");
  sweep->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  add_output_options(sweep, o);

  std::vector<std::string> argv_store{"torusperc"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  o.command = app.get_subcommands().front()->get_name();
  try {
    if (o.command == "generate") return cmd_generate(o, out);
    if (o.command == "stats") return cmd_stats(o, out);
    if (o.command == "diameter") return cmd_diameter(o, out);
    if (o.command == "simulate") return cmd_simulate(o, out);
    if (o.command == "mfchain") return cmd_mfchain(o, out);
    if (o.command == "meanfield") return cmd_meanfield(o, out);
    return cmd_sweep(o, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace torusperc::cli
