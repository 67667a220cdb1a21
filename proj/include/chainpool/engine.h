#pragma once

#include <cstdint>
#include <vector>

#include "chainpool/gates.h"
#include "chainpool/pool.h"
#include "chainpool/rng.h"
#include "chainpool/strategies.h"

namespace chainpool {

struct SimConfig {
  GateModel gate{GateKind::kCz, 1.0};
  StrategyKind strategy = StrategyKind::kPairedGreed;
  int max_len = 50;
  std::uint64_t steps = 50'000;
  std::uint64_t burn_in = 0;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on max_len < 2, steps == 0 or burn_in >= steps.
  void validate() const;
};

struct SimResult {
  double rate = 0.0;                 // spilled_qubits / ops
  std::uint64_t spilled_qubits = 0;  // qubits spilled after burn-in
  std::uint64_t ops = 0;             // steps - burn_in
  std::uint64_t singles_drawn = 0;   // whole run
  std::uint64_t qubits_lost = 0;     // whole run
  std::vector<std::uint64_t> final_counts;  // bins 2..L

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

struct ReplicaSummary {
  std::vector<SimResult> replicas;  // index k ran with derive_seed(seed, k)
  double mean_rate = 0.0;
  double stderr_rate = 0.0;  // sample sd / sqrt(n); 0 for a single replica
};

/// Bonds chains l1 and l2 (already taken from the pool) with the given
/// outcome and puts the products back. Chains of length >= 2 are inserted,
/// measured qubits are booked as lost and any remaining single qubits return
/// to the resource.
void apply_bond(PopulationVector& pool, GateKind gate, PairSelection pair, bool success);

/// One gate attempt: select, take both chains, draw u in [0, 1) and succeed
/// iff u < p_gate.
void step(PopulationVector& pool, const GateModel& gate, StrategyKind strategy, Rng& rng);

/// Runs config.steps attempts from the empty pool.
SimResult run(const SimConfig& config);

/// Runs `replicas` independent copies of config, replica k seeded with
/// derive_seed(config.seed, k). Up to `threads` runs execute concurrently
/// (0 picks the hardware concurrency); the summary does not depend on it.
ReplicaSummary run_replicas(const SimConfig& config, std::uint64_t replicas,
                            unsigned threads = 1);

/// Mean and standard error of a set of rates, reduced in the given order.
void summarize(ReplicaSummary& summary);

}  // namespace chainpool
