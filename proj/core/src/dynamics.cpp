#include "torusperc/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <string>

#include "torusperc/errors.hpp"

namespace torusperc {

void ActivationConfig::validate() const {
  if (k < 0) throw ValidationError("threshold k must be nonnegative");
  if (!(p_init >= 0.0 && p_init <= 1.0)) throw ValidationError("p_init must lie in [0, 1]");
  if (!(excitatory_fraction >= 0.0 && excitatory_fraction <= 1.0)) {
    throw ValidationError("excitatory_fraction must lie in [0, 1]");
  }
  if (max_steps < 1) throw ValidationError("max_steps must be positive");
}

ActivationState::ActivationState(std::vector<std::uint8_t> active, std::vector<NodeType> types, int t)
    : active_(std::move(active)), types_(std::move(types)), t_(t) {
  if (active_.size() != types_.size()) throw ValidationError("activity and type vectors differ in length");
  if (active_.empty()) throw ValidationError("empty activation state");
  for (auto& a : active_) a = a ? 1 : 0;
  active_count_ = static_cast<std::size_t>(std::count(active_.begin(), active_.end(), std::uint8_t{1}));
}

std::string_view to_string(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::all_active: return "all_active";
    case RunStatus::all_inactive: return "all_inactive";
    case RunStatus::cycle_detected: return "cycle_detected";
    case RunStatus::budget_exhausted: return "budget_exhausted";
  }
  return "unknown";
}

ActivationState init_state(const Graph& graph, const ActivationConfig& config, RngSeed seed) {
  config.validate();
  Engine engine = make_engine(seed);
  std::bernoulli_distribution activity(config.p_init);
  std::bernoulli_distribution excitatory(config.excitatory_fraction);
  const std::size_t size = graph.vertex_count();
  std::vector<std::uint8_t> active(size);
  std::vector<NodeType> types(size);
  for (std::size_t v = 0; v < size; ++v) {
    active[v] = activity(engine) ? 1 : 0;
    types[v] = excitatory(engine) ? NodeType::excitatory : NodeType::inhibitory;
  }
  return {std::move(active), std::move(types), 0};
}

ActivationState step(const Graph& graph, const ActivationState& state, int k) {
  const std::size_t size = graph.vertex_count();
  if (state.size() != size) throw ValidationError("state does not match graph size");
  const auto& active = state.active_;
  const auto& types = state.types_;

  // Signed contribution of u to an E vertex: +1 if active E, -1 if active I.
  std::vector<std::int8_t> signed_activity(size);
  for (std::size_t u = 0; u < size; ++u) {
    signed_activity[u] = active[u] ? (types[u] == NodeType::excitatory ? 1 : -1) : 0;
  }

  std::vector<std::uint8_t> next(size);
  std::size_t count = 0;
  for (VertexId v = 0; v < size; ++v) {
    int sum = 0;
    if (types[v] == NodeType::excitatory) {
      sum = signed_activity[v];
      graph.for_each_neighbor(v, [&](VertexId u) { sum += signed_activity[u]; });
    } else {
      sum = active[v];
      graph.for_each_neighbor(v, [&](VertexId u) { sum += active[u]; });
    }
    next[v] = sum >= k ? 1 : 0;
    count += next[v];
  }
  ActivationState out = state;
  out.active_ = std::move(next);
  out.active_count_ = count;
  out.t_ = state.t_ + 1;
  return out;
}

namespace {

struct Fingerprint {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

std::vector<std::uint64_t> pack(std::span<const std::uint8_t> bits) {
  std::vector<std::uint64_t> words((bits.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) words[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return words;
}

Fingerprint fingerprint(const std::vector<std::uint64_t>& words) {
  Fingerprint fp{0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL};
  for (std::size_t i = 0; i < words.size(); ++i) {
    fp.lo = splitmix64(fp.lo ^ words[i]) + i;
    fp.hi = splitmix64(fp.hi + (words[i] ^ 0xa4093822299f31d0ULL)) ^ (fp.lo >> 7);
  }
  return fp;
}

struct HistoryEntry {
  Fingerprint fp;
  int t;
  std::vector<std::uint64_t> words;
};

}  // namespace

RunOutcome run_from(const Graph& graph, ActivationState initial, int k, int max_steps) {
  if (k < 0) throw ValidationError("threshold k must be nonnegative");
  if (max_steps < 1) throw ValidationError("max_steps must be positive");

  RunOutcome outcome;
  ActivationState current = std::move(initial);
  const int t0 = current.t();
  outcome.trajectory.push_back(current.rho());

  std::deque<HistoryEntry> history;
  {
    auto words = pack(current.active());
    history.push_back({fingerprint(words), t0, std::move(words)});
  }

  for (;;) {
    const int elapsed = current.t() - t0;
    ActivationState next = step(graph, current, k);
    if (next.same_activity(current)) {
      outcome.steps_taken = elapsed;
      if (current.all_active()) {
        outcome.status = RunStatus::all_active;
      } else if (current.all_inactive()) {
        outcome.status = RunStatus::all_inactive;
      } else {
        outcome.status = RunStatus::cycle_detected;
        outcome.cycle_length = 1;
      }
      return outcome;
    }
    if (elapsed >= max_steps) {
      outcome.status = RunStatus::budget_exhausted;
      outcome.steps_taken = elapsed;
      return outcome;
    }

    current = std::move(next);
    outcome.trajectory.push_back(current.rho());
    auto words = pack(current.active());
    const Fingerprint fp = fingerprint(words);
    for (const HistoryEntry& h : history) {
      if (h.fp == fp && h.words == words) {
        outcome.status = RunStatus::cycle_detected;
        outcome.steps_taken = current.t() - t0;
        outcome.cycle_length = current.t() - h.t;
        return outcome;
      }
    }
    history.push_back({fp, current.t(), std::move(words)});
    if (history.size() > kCycleWindow) history.pop_front();
  }
}

RunOutcome run(const Graph& graph, const ActivationConfig& config, RngSeed seed) {
  config.validate();
  return run_from(graph, init_state(graph, config, seed), config.k, config.max_steps);
}

std::int64_t sample_binomial(std::int64_t trials, double p, Engine& engine, bool allow_normal) {
  if (trials <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  const double mean = static_cast<double>(trials) * p;
  const double var = mean * (1.0 - p);
  if (allow_normal && var >= kNormalMinVariance) {
    std::normal_distribution<double> normal(mean, std::sqrt(var));
    const double draw = std::floor(normal(engine) + 0.5);  // continuity correction
    return static_cast<std::int64_t>(std::clamp(draw, 0.0, static_cast<double>(trials)));
  }
  std::binomial_distribution<std::int64_t> binom(trials, p);
  return binom(engine);
}

std::int64_t mf_chain_step(std::int64_t sites, std::int64_t active, const MeanFieldModel& model, Engine& engine) {
  if (sites <= 0 || active < 0 || active > sites) throw ValidationError("active count must lie in [0, sites]");
  const double rho = static_cast<double>(active) / static_cast<double>(sites);
  const bool allow_normal = sites > kExactBinomialMaxSites;
  return sample_binomial(active, f_plus(rho, model), engine, allow_normal) +
         sample_binomial(sites - active, f_minus(rho, model), engine, allow_normal);
}

RunOutcome mf_chain_run(int n, const ActivationConfig& config, const MeanFieldModel& model, RngSeed seed) {
  config.validate();
  if (n < 1) throw ValidationError("system side must be positive");
  const std::int64_t sites = static_cast<std::int64_t>(n) * n;
  std::int64_t active = std::llround(static_cast<double>(sites) * config.p_init);
  Engine engine = make_engine(seed);

  // 0 and 1 are absorbing exactly when f-(0) = 0 and f+(1) = 1.
  const bool zero_absorbs = f_minus(0.0, model) == 0.0;
  const bool one_absorbs = f_plus(1.0, model) == 1.0;

  RunOutcome outcome;
  auto rho = [&] { return static_cast<double>(active) / static_cast<double>(sites); };
  outcome.trajectory.push_back(rho());
  for (int t = 0;; ++t) {
    if (active == 0 && zero_absorbs) {
      outcome.status = RunStatus::all_inactive;
      outcome.steps_taken = t;
      return outcome;
    }
    if (active == sites && one_absorbs) {
      outcome.status = RunStatus::all_active;
      outcome.steps_taken = t;
      return outcome;
    }
    if (t >= config.max_steps) {
      outcome.status = RunStatus::budget_exhausted;
      outcome.steps_taken = t;
      return outcome;
    }
    active = mf_chain_step(sites, active, model, engine);
    outcome.trajectory.push_back(rho());
  }
}

}  // namespace torusperc
