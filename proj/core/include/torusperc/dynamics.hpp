#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "torusperc/graph_gen.hpp"
#include "torusperc/meanfield.hpp"
#include "torusperc/rng.hpp"

namespace torusperc {

enum class NodeType : std::uint8_t { excitatory, inhibitory };

struct ActivationConfig {
  int k = 2;                          ///< activation threshold
  double p_init = 0.5;                ///< initial activation probability
  double excitatory_fraction = 1.0;   ///< probability a vertex is of type E
  int max_steps = 1000;

  /// Throws ValidationError on out-of-range fields.
  void validate() const;
};

/// Activity bits and (immutable) types of every vertex at time t.
class ActivationState {
 public:
  ActivationState(std::vector<std::uint8_t> active, std::vector<NodeType> types, int t = 0);

  [[nodiscard]] std::span<const std::uint8_t> active() const noexcept { return active_; }
  [[nodiscard]] std::span<const NodeType> types() const noexcept { return types_; }
  [[nodiscard]] int t() const noexcept { return t_; }
  [[nodiscard]] std::size_t active_count() const noexcept { return active_count_; }
  [[nodiscard]] std::size_t size() const noexcept { return active_.size(); }
  [[nodiscard]] double rho() const noexcept {
    return static_cast<double>(active_count_) / static_cast<double>(active_.size());
  }
  [[nodiscard]] bool all_active() const noexcept { return active_count_ == active_.size(); }
  [[nodiscard]] bool all_inactive() const noexcept { return active_count_ == 0; }

  /// Same activity bits (types are assumed shared).
  [[nodiscard]] bool same_activity(const ActivationState& other) const noexcept {
    return active_ == other.active_;
  }

 private:
  friend ActivationState step(const Graph&, const ActivationState&, int);

  std::vector<std::uint8_t> active_;
  std::vector<NodeType> types_;
  int t_;
  std::size_t active_count_;
};

/// Independent Bernoulli(p_init) activity and Bernoulli(excitatory_fraction) types.
[[nodiscard]] ActivationState init_state(const Graph& graph, const ActivationConfig& config, RngSeed seed);

/// One synchronous update. An E vertex sums active E minus active I vertices
/// in its closed neighbourhood; an I vertex sums all active vertices there.
/// The vertex becomes active iff the sum is at least k.
[[nodiscard]] ActivationState step(const Graph& graph, const ActivationState& state, int k);

enum class RunStatus { all_active, all_inactive, cycle_detected, budget_exhausted };

[[nodiscard]] std::string_view to_string(RunStatus status) noexcept;

struct RunOutcome {
  RunStatus status = RunStatus::budget_exhausted;
  int steps_taken = 0;
  std::vector<double> trajectory;  ///< rho_0 .. rho_{steps_taken}
  std::optional<int> cycle_length;
};

inline constexpr std::size_t kCycleWindow = 1024;

/// Iterates `step` from `initial` until a uniform absorbing state, a repeated
/// state (cycle, including fixed non-uniform configurations with length 1),
/// or `max_steps`.
[[nodiscard]] RunOutcome run_from(const Graph& graph, ActivationState initial, int k, int max_steps);

[[nodiscard]] RunOutcome run(const Graph& graph, const ActivationConfig& config, RngSeed seed);

// --- Mean-field chain on the number of active vertices. ---

/// Systems with more sites than this use a normal approximation to the
/// binomial draws (when the draw's variance is at least kNormalMinVariance).
inline constexpr std::int64_t kExactBinomialMaxSites = 1'000'000;
inline constexpr double kNormalMinVariance = 25.0;

/// Binomial(trials, p): exact draw, or the rounded normal approximation when
/// `allow_normal` and the variance is large enough.
[[nodiscard]] std::int64_t sample_binomial(std::int64_t trials, double p, Engine& engine, bool allow_normal);

/// One MF transition: Bin(active, f+(rho)) + Bin(sites - active, f-(rho)).
[[nodiscard]] std::int64_t mf_chain_step(std::int64_t sites, std::int64_t active, const MeanFieldModel& model,
                                         Engine& engine);

/// Runs the chain for an N x N system from rho_0 = round(N^2 p)/N^2 until
/// absorption at 0 or 1, or `config.max_steps`. Uses model.k().
[[nodiscard]] RunOutcome mf_chain_run(int n, const ActivationConfig& config, const MeanFieldModel& model,
                                      RngSeed seed);

}  // namespace torusperc
