#include "chainpool/oracle.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "chainpool/engine.h"
#include "chainpool/pool.h"

namespace chainpool::oracle {

namespace {

constexpr std::size_t kMaxDenseStates = 3000;
constexpr double kPowerTolerance = 1e-12;
constexpr std::size_t kMaxPowerIterations = 10'000'000;

/// Strongly connected components (iterative Tarjan). Returns the component
/// id of every state.
std::vector<std::size_t> strong_components(const MarkovChain& chain, std::size_t& count) {
  const std::size_t n = chain.states.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), component(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> frames;  // (state, next edge)
  std::size_t next_index = 0;
  count = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    frames.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, edge] = frames.back();
      const auto& out = chain.transitions[v];
      if (edge < out.size()) {
        const std::size_t w = out[edge++].next;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t finished = v;
      frames.pop_back();
      if (!frames.empty()) {
        const std::size_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
      if (low[finished] == index[finished]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = count;
        } while (w != finished);
        ++count;
      }
    }
  }
  return component;
}

double stationary_residual(const MarkovChain& chain, const std::vector<std::size_t>& members,
                           const std::vector<std::size_t>& local, const Eigen::VectorXd& pi) {
  Eigen::VectorXd flow = Eigen::VectorXd::Zero(pi.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (const auto& t : chain.transitions[members[i]]) {
      flow[static_cast<Eigen::Index>(local[t.next])] +=
          pi[static_cast<Eigen::Index>(i)] * t.probability;
    }
  }
  return (flow - pi).lpNorm<Eigen::Infinity>();
}

}  // namespace

StateSpaceTooLarge::StateSpaceTooLarge(std::size_t reached, std::size_t cap)
    : std::runtime_error("state space too large: reached " + std::to_string(reached) +
                         " states (cap " + std::to_string(cap) + ")"),
      reached_(reached) {}

MarkovChain build_chain(StrategyKind strategy, const GateModel& gate, int max_len,
                        std::size_t state_cap) {
  if (state_cap == 0) throw StateSpaceTooLarge(1, 0);

  MarkovChain chain;
  chain.max_len = max_len;
  std::map<MarkovState, std::size_t> index;
  std::deque<std::size_t> frontier;

  const PopulationVector empty(max_len);
  chain.states.emplace_back(empty.counts().begin(), empty.counts().end());
  chain.transitions.emplace_back();
  index.emplace(chain.states.front(), 0);
  frontier.push_back(0);

  const double p = gate.p_gate();
  while (!frontier.empty()) {
    const std::size_t current = frontier.front();
    frontier.pop_front();
    const PopulationVector pool = PopulationVector::from_counts(max_len, chain.states[current]);
    std::vector<Transition> branches;
    for (const auto& [weight, pair] : pair_distribution(strategy, pool)) {
      for (const bool success : {true, false}) {
        const double probability = weight * (success ? p : 1.0 - p);
        if (probability <= 0.0) continue;
        PopulationVector next = pool;
        next.take_chain(pair.l1);
        next.take_chain(pair.l2);
        apply_bond(next, gate.kind(), pair, success);

        MarkovState key(next.counts().begin(), next.counts().end());
        auto [it, inserted] = index.emplace(std::move(key), chain.states.size());
        if (inserted) {
          if (chain.states.size() >= state_cap) {
            throw StateSpaceTooLarge(chain.states.size() + 1, state_cap);
          }
          chain.states.push_back(it->first);
          chain.transitions.emplace_back();
          frontier.push_back(it->second);
        }
        branches.push_back({probability, it->second, next.spilled_qubits()});
      }
    }
    chain.transitions[current] = std::move(branches);
  }
  return chain;
}

ExactRate exact_rate(const MarkovChain& chain) {
  const std::size_t n = chain.states.size();
  if (n == 0) throw std::runtime_error("empty Markov chain");

  std::size_t components = 0;
  const auto component = strong_components(chain, components);
  std::vector<bool> closed(components, true);
  for (std::size_t s = 0; s < n; ++s) {
    for (const auto& t : chain.transitions[s]) {
      if (component[t.next] != component[s]) closed[component[s]] = false;
    }
  }
  const auto closed_count = std::count(closed.begin(), closed.end(), true);
  if (closed_count != 1) {
    throw std::runtime_error("expected one recurrent class, found " +
                             std::to_string(closed_count));
  }
  const std::size_t recurrent =
      static_cast<std::size_t>(std::find(closed.begin(), closed.end(), true) - closed.begin());

  std::vector<std::size_t> members;
  std::vector<std::size_t> local(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    if (component[s] == recurrent) {
      local[s] = members.size();
      members.push_back(s);
    }
  }
  const auto m = static_cast<Eigen::Index>(members.size());

  ExactRate result;
  result.recurrent_states = members.size();
  Eigen::VectorXd pi;
  bool solved = false;

  if (members.size() <= kMaxDenseStates) {
    // Rows of (P^T - I) pi = 0, with the last replaced by sum(pi) = 1.
    Eigen::MatrixXd system = -Eigen::MatrixXd::Identity(m, m);
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (const auto& t : chain.transitions[members[i]]) {
        system(static_cast<Eigen::Index>(local[t.next]), static_cast<Eigen::Index>(i)) +=
            t.probability;
      }
    }
    system.row(m - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    rhs[m - 1] = 1.0;
    pi = system.partialPivLu().solve(rhs);
    solved = pi.allFinite() && pi.minCoeff() > -1e-12 &&
             stationary_residual(chain, members, local, pi) < 1e-10;
  }

  if (!solved) {
    // Lazy power iteration, which also converges on periodic classes.
    result.method = SolveMethod::kPowerIteration;
    pi = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
    Eigen::VectorXd next(m);
    std::size_t iteration = 0;
    for (; iteration < kMaxPowerIterations; ++iteration) {
      next = 0.5 * pi;
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (const auto& t : chain.transitions[members[i]]) {
          next[static_cast<Eigen::Index>(local[t.next])] +=
              0.5 * pi[static_cast<Eigen::Index>(i)] * t.probability;
        }
      }
      const double change = (next - pi).lpNorm<1>();
      pi.swap(next);
      if (change < kPowerTolerance) break;
    }
    if (iteration == kMaxPowerIterations) {
      throw std::runtime_error("stationary distribution did not converge over " +
                               std::to_string(members.size()) + " recurrent states");
    }
  }

  result.stationary.assign(n, 0.0);
  double rate = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const double weight = pi[static_cast<Eigen::Index>(i)];
    result.stationary[members[i]] = weight;
    for (const auto& t : chain.transitions[members[i]]) {
      rate += weight * t.probability * static_cast<double>(t.spilled);
    }
  }
  result.rate = rate;
  return result;
}

void write_transitions(std::ostream& out, const MarkovChain& chain) {
  std::ostringstream line;
  line << std::setprecision(17);
  for (std::size_t s = 0; s < chain.states.size(); ++s) {
    for (const auto& t : chain.transitions[s]) {
      line.str("");
      line << s << ' ' << t.probability << ' ' << t.next << ' ' << t.spilled << '\n';
      out << line.str();
    }
  }
}

std::string format_state(const MarkovState& state) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state[i] == 0) continue;
    if (!first) out += ", ";
    out += std::to_string(i + 2) + ":" + std::to_string(state[i]);
    first = false;
  }
  return out + "}";
}

}  // namespace chainpool::oracle
