#pragma once

#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace torusperc::cli {

struct Options {
  std::string command;
  int n = 64;
  double c = 1.0;
  std::vector<int> k{2};
  double p = 0.5;
  double lambda = 0.0;  // 0 means derive from c
  std::string lambda_grid;
  std::string p_grid;
  int replicas = 1;
  std::uint64_t seed = 1;
  int max_steps = 1000;
  double excitatory_fraction = 1.0;
  std::string format = "csv";
  std::string out;
  std::string backend = "mfchain";
  std::string degree_backend = "poisson";
  std::string graph;
  std::string checkpoint;
  int sources = 8;
  unsigned threads = 0;
};

/// Destination chosen from --out, the output-directory variable, or stdout.
class Sink {
 public:
  Sink(const Options& opts, std::ostream& fallback);
  std::ostream& stream() { return *os_; }
  void finish();

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
  std::string path_;
};

[[nodiscard]] double lambda_from_c(double c);
[[nodiscard]] double c_from_lambda(double lambda);

/// Writes "# config: {...}" ahead of CSV payloads.
void write_csv_preamble(std::ostream& os, const nlohmann::json& config);

int cmd_sweep(const Options& opts, std::ostream& out);

}  // namespace torusperc::cli
