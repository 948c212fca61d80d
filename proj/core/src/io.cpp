#include "torusperc/io.hpp"

#include <charconv>
#include <ostream>

namespace torusperc {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void write_histogram_csv(std::ostream& os, const DegreeDistribution& dist) {
  os << "degree,probability\n";
  for (std::size_t k = 0; k < dist.pmf.size(); ++k) os << k << ',' << format_double(dist.pmf[k]) << '\n';
}

nlohmann::json diameter_record(const Graph& graph, const DiameterReport& report) {
  return {{"N", graph.n()},
          {"c", graph.params().c()},
          {"seed", graph.seed()},
          {"method", std::string(to_string(report.method))},
          {"value", report.value}};
}

void write_trajectory_csv(std::ostream& os, const RunOutcome& outcome) {
  os << "t,rho\n";
  for (std::size_t t = 0; t < outcome.trajectory.size(); ++t) {
    os << t << ',' << format_double(outcome.trajectory[t]) << '\n';
  }
}

nlohmann::json outcome_record(const RunOutcome& outcome) {
  nlohmann::json j{{"status", std::string(to_string(outcome.status))}, {"steps", outcome.steps_taken}};
  if (outcome.cycle_length) j["cycle_length"] = *outcome.cycle_length;
  return j;
}

void write_pc_curve_csv(std::ostream& os, std::span<const PcPoint> curve, int k, bool header) {
  if (header) os << "lambda,p_c,k\n";
  for (const PcPoint& p : curve) os << format_double(p.lambda) << ',' << format_double(p.p_c) << ',' << k << '\n';
}

nlohmann::json fixed_point_report(double lambda, int k, std::span<const FixedPoint> points) {
  nlohmann::json arr = nlohmann::json::array();
  for (const FixedPoint& p : points) {
    arr.push_back({{"x", p.x}, {"stability", std::string(to_string(p.stability))}, {"derivative", p.derivative}});
  }
  return {{"lambda", lambda}, {"k", k}, {"points", std::move(arr)}};
}

}  // namespace torusperc
