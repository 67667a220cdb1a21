#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainpool/gates.h"
#include "chainpool/strategies.h"

namespace chainpool::oracle {

// Exact long-run spill rate for small pools. The pool dynamics form a Markov
// chain over bin counts; enumerating every state reachable from the empty
// pool and solving for the stationary distribution of its closed class gives
// the rate the Monte-Carlo engine estimates.

/// Bin counts for lengths 2..L (index 0 is length 2).
using MarkovState = std::vector<std::uint64_t>;

struct Transition {
  double probability;
  std::size_t next;
  std::uint64_t spilled;  // qubits leaving the pool on this branch
};

struct MarkovChain {
  int max_len = 0;
  std::vector<MarkovState> states;                 // states[0] is the empty pool
  std::vector<std::vector<Transition>> transitions;  // parallel to states
  std::size_t start = 0;
};

/// Thrown when more than state_cap states are reachable.
class StateSpaceTooLarge : public std::runtime_error {
 public:
  StateSpaceTooLarge(std::size_t reached, std::size_t cap);
  std::size_t reached() const { return reached_; }

 private:
  std::size_t reached_;
};

inline constexpr std::size_t kDefaultStateCap = 100'000;

/// Breadth-first closure from the empty pool. Each state branches over
/// pair_distribution() and success/failure, applying the engine's bond rule.
/// Zero-probability branches are dropped.
MarkovChain build_chain(StrategyKind strategy, const GateModel& gate, int max_len,
                        std::size_t state_cap = kDefaultStateCap);

enum class SolveMethod { kDirect, kPowerIteration };

struct ExactRate {
  double rate = 0.0;
  std::size_t recurrent_states = 0;
  SolveMethod method = SolveMethod::kDirect;
  std::vector<double> stationary;  // over all states; zero off the closed class
};

/// Expected spilled qubits per attempt under the stationary distribution.
/// Throws std::runtime_error when the closed class is not unique or the
/// stationary system cannot be solved.
ExactRate exact_rate(const MarkovChain& chain);

/// Writes one line per branch: "state probability next spilled", with the
/// probability printed to 17 significant digits.
void write_transitions(std::ostream& out, const MarkovChain& chain);

std::string format_state(const MarkovState& state);

}  // namespace chainpool::oracle
