#include "chainpool/strategies.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace chainpool {

namespace {

PairSelection ordered(int a, int b) { return a >= b ? PairSelection{a, b} : PairSelection{b, a}; }

/// Number of lengths l >= 2 with count(l) >= min_count.
std::uint64_t bins_with_at_least(const PopulationVector& pool, std::uint64_t min_count) {
  std::uint64_t n = 0;
  for (auto c : pool.counts()) n += c >= min_count ? 1 : 0;
  return n;
}

/// The index-th length (0-based, ascending) among {1} and the lengths l >= 2
/// with count(l) >= min_count, where `excluded` (if >= 2) is skipped.
int nth_length(const PopulationVector& pool, std::uint64_t min_count, std::uint64_t index,
               int excluded = 0) {
  if (index == 0) return 1;
  --index;
  const auto counts = pool.counts();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const int l = static_cast<int>(i) + 2;
    if (counts[i] < min_count || l == excluded) continue;
    if (index-- == 0) return l;
  }
  throw std::logic_error("selection index past the last eligible bin");
}

PairSelection greed(const PopulationVector& pool) {
  const int largest = pool.largest_with_at_least(1);
  if (largest == 0) return {1, 1};
  if (pool.count(largest) >= 2) return {largest, largest};
  int next = 1;
  for (int l = largest - 1; l >= 2; --l) {
    if (pool.count(l) > 0) {
      next = l;
      break;
    }
  }
  return {largest, next};
}

PairSelection modesty(const PopulationVector& pool) {
  const int smallest = pool.smallest_with_at_least(1);
  if (smallest == 0) return {1, 1};
  if (pool.count(smallest) >= 2) return {smallest, smallest};
  for (int l = smallest + 1; l <= pool.max_len(); ++l) {
    if (pool.count(l) > 0) return {l, smallest};
  }
  // A lone chain cannot be paired without singles; build a new chain instead.
  return {1, 1};
}

PairSelection paired_greed(const PopulationVector& pool) {
  const int l = pool.largest_with_at_least(2);
  return l == 0 ? PairSelection{1, 1} : PairSelection{l, l};
}

PairSelection paired_modesty(const PopulationVector& pool) {
  const int l = pool.smallest_with_at_least(2);
  return l == 0 ? PairSelection{1, 1} : PairSelection{l, l};
}

PairSelection eo_greed_paired(const PopulationVector& pool) {
  if (pool.count(2) >= 1) return {2, 1};
  return paired_greed(pool);
}

PairSelection deterministic(StrategyKind kind, const PopulationVector& pool) {
  switch (kind) {
    case StrategyKind::kGreed: return greed(pool);
    case StrategyKind::kModesty: return modesty(pool);
    case StrategyKind::kPairedGreed: return paired_greed(pool);
    case StrategyKind::kPairedModesty: return paired_modesty(pool);
    case StrategyKind::kEoGreedPaired: return eo_greed_paired(pool);
    default: break;
  }
  throw std::logic_error("strategy is randomized");
}

}  // namespace

std::string_view strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kGreed: return "greed";
    case StrategyKind::kModesty: return "modesty";
    case StrategyKind::kRandom: return "random";
    case StrategyKind::kPairedGreed: return "paired-greed";
    case StrategyKind::kPairedModesty: return "paired-modesty";
    case StrategyKind::kPairedRandom: return "paired-random";
    case StrategyKind::kEoGreedPaired: return "eo-greed-paired";
  }
  throw std::logic_error("unknown strategy kind");
}

StrategyKind parse_strategy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (StrategyKind kind : kAllStrategies) {
    if (strategy_name(kind) == lower) return kind;
  }
  throw std::invalid_argument(
      "unknown strategy '" + std::string(name) +
      "' (expected greed, modesty, random, paired-greed, paired-modesty, paired-random, "
      "eo-greed-paired)");
}

bool is_randomized(StrategyKind kind) {
  return kind == StrategyKind::kRandom || kind == StrategyKind::kPairedRandom;
}

PairSelection select_pair(StrategyKind kind, const PopulationVector& pool, Rng& rng) {
  switch (kind) {
    case StrategyKind::kRandom: {
      const std::uint64_t occupied = 1 + bins_with_at_least(pool, 1);
      const int a = nth_length(pool, 1, rng.below(occupied));
      // Removing the only chain of length a takes bin a out of the draw.
      const bool a_exhausted = a >= 2 && pool.count(a) == 1;
      const std::uint64_t remaining = occupied - (a_exhausted ? 1 : 0);
      const int b = nth_length(pool, 1, rng.below(remaining), a_exhausted ? a : 0);
      return ordered(a, b);
    }
    case StrategyKind::kPairedRandom: {
      const std::uint64_t eligible = 1 + bins_with_at_least(pool, 2);
      const int l = nth_length(pool, 2, rng.below(eligible));
      return {l, l};
    }
    default:
      return deterministic(kind, pool);
  }
}

std::vector<WeightedPair> pair_distribution(StrategyKind kind, const PopulationVector& pool) {
  if (!is_randomized(kind)) {
    return {{1.0, deterministic(kind, pool)}};
  }
  std::map<std::pair<int, int>, double> mass;
  if (kind == StrategyKind::kPairedRandom) {
    const std::uint64_t eligible = 1 + bins_with_at_least(pool, 2);
    for (std::uint64_t i = 0; i < eligible; ++i) {
      const int l = nth_length(pool, 2, i);
      mass[{l, l}] += 1.0 / static_cast<double>(eligible);
    }
  } else {
    const std::uint64_t occupied = 1 + bins_with_at_least(pool, 1);
    for (std::uint64_t i = 0; i < occupied; ++i) {
      const int a = nth_length(pool, 1, i);
      const bool a_exhausted = a >= 2 && pool.count(a) == 1;
      const std::uint64_t remaining = occupied - (a_exhausted ? 1 : 0);
      for (std::uint64_t j = 0; j < remaining; ++j) {
        const int b = nth_length(pool, 1, j, a_exhausted ? a : 0);
        const auto pair = ordered(a, b);
        mass[{pair.l1, pair.l2}] +=
            1.0 / (static_cast<double>(occupied) * static_cast<double>(remaining));
      }
    }
  }
  std::vector<WeightedPair> out;
  out.reserve(mass.size());
  for (const auto& [key, probability] : mass) {
    out.push_back({probability, {key.first, key.second}});
  }
  return out;
}

}  // namespace chainpool
