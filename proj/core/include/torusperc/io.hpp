#pragma once

#include <iosfwd>
#include <span>

#include <nlohmann/json.hpp>

#include "torusperc/dynamics.hpp"
#include "torusperc/graph_analysis.hpp"
#include "torusperc/meanfield.hpp"

namespace torusperc {

// Plot-ready CSV/JSON emitters for the library's result types.

/// "degree,probability" rows.
void write_histogram_csv(std::ostream& os, const DegreeDistribution& dist);

/// {N, c, seed, method, value}
[[nodiscard]] nlohmann::json diameter_record(const Graph& graph, const DiameterReport& report);

/// "t,rho" rows.
void write_trajectory_csv(std::ostream& os, const RunOutcome& outcome);

/// {status, steps, cycle_length?}
[[nodiscard]] nlohmann::json outcome_record(const RunOutcome& outcome);

/// "lambda,p_c,k" rows.
void write_pc_curve_csv(std::ostream& os, std::span<const PcPoint> curve, int k, bool header = true);

/// {lambda, k, points: [{x, stability, derivative}]}
[[nodiscard]] nlohmann::json fixed_point_report(double lambda, int k, std::span<const FixedPoint> points);

/// Shortest decimal form that round-trips a double.
[[nodiscard]] std::string format_double(double value);

}  // namespace torusperc
