#include "chainpool/engine.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace chainpool {

void SimConfig::validate() const {
  if (max_len < 2) throw std::invalid_argument("bins must be at least 2");
  if (steps == 0) throw std::invalid_argument("steps must be positive");
  if (burn_in >= steps) throw std::invalid_argument("burn-in must be smaller than steps");
}

void apply_bond(PopulationVector& pool, GateKind gate, PairSelection pair, bool success) {
  const Products products = outcome_rule(gate, pair.l1, pair.l2, success);
  const int lost = qubits_lost_by(gate, pair.l1, pair.l2, success);
  int kept = 0;
  for (int l : products) {
    if (l >= 2) {
      pool.insert_chain(l);
      kept += l;
    }
  }
  pool.record_loss(static_cast<std::uint64_t>(lost));
  for (int returned = pair.l1 + pair.l2 - lost - kept; returned > 0; --returned) {
    pool.insert_chain(1);
  }
}

void step(PopulationVector& pool, const GateModel& gate, StrategyKind strategy, Rng& rng) {
  const PairSelection pair = select_pair(strategy, pool, rng);
  pool.take_chain(pair.l1);
  pool.take_chain(pair.l2);
  const bool success = rng.uniform() < gate.p_gate();
  apply_bond(pool, gate.kind(), pair, success);
}

SimResult run(const SimConfig& config) {
  config.validate();
  PopulationVector pool(config.max_len);
  Rng rng(config.seed);
  for (std::uint64_t t = 0; t < config.burn_in; ++t) {
    step(pool, config.gate, config.strategy, rng);
  }
  const std::uint64_t spilled_at_burn_in = pool.spilled_qubits();
  for (std::uint64_t t = config.burn_in; t < config.steps; ++t) {
    step(pool, config.gate, config.strategy, rng);
  }

  SimResult result;
  result.spilled_qubits = pool.spilled_qubits() - spilled_at_burn_in;
  result.ops = config.steps - config.burn_in;
  result.rate = static_cast<double>(result.spilled_qubits) / static_cast<double>(result.ops);
  result.singles_drawn = pool.singles_drawn();
  result.qubits_lost = pool.qubits_lost();
  result.final_counts.assign(pool.counts().begin(), pool.counts().end());
  return result;
}

void summarize(ReplicaSummary& summary) {
  const auto n = static_cast<double>(summary.replicas.size());
  if (summary.replicas.empty()) {
    summary.mean_rate = summary.stderr_rate = 0.0;
    return;
  }
  double sum = 0.0;
  for (const auto& r : summary.replicas) sum += r.rate;
  summary.mean_rate = sum / n;
  if (summary.replicas.size() < 2) {
    summary.stderr_rate = 0.0;
    return;
  }
  double squares = 0.0;
  for (const auto& r : summary.replicas) {
    const double d = r.rate - summary.mean_rate;
    squares += d * d;
  }
  summary.stderr_rate = std::sqrt(squares / (n - 1.0)) / std::sqrt(n);
}

ReplicaSummary run_replicas(const SimConfig& config, std::uint64_t replicas, unsigned threads) {
  if (replicas == 0) throw std::invalid_argument("replicas must be positive");
  config.validate();

  ReplicaSummary summary;
  summary.replicas.resize(replicas);
  auto run_one = [&](std::uint64_t k) {
    SimConfig replica = config;
    replica.seed = derive_seed(config.seed, k);
    summary.replicas[k] = run(replica);
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, replicas));
  if (threads <= 1) {
    for (std::uint64_t k = 0; k < replicas; ++k) run_one(k);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::uint64_t k = next++; k < replicas; k = next++) run_one(k);
      });
    }
  }
  summarize(summary);
  return summary;
}

}  // namespace chainpool
