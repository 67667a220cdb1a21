#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "chainpool/pool.h"
#include "chainpool/rng.h"

namespace chainpool {

enum class StrategyKind {
  kGreed,
  kModesty,
  kRandom,
  kPairedGreed,
  kPairedModesty,
  kPairedRandom,
  kEoGreedPaired,
};

inline constexpr std::array<StrategyKind, 7> kAllStrategies = {
    StrategyKind::kGreed,         StrategyKind::kModesty,      StrategyKind::kRandom,
    StrategyKind::kPairedGreed,   StrategyKind::kPairedModesty, StrategyKind::kPairedRandom,
    StrategyKind::kEoGreedPaired,
};

/// CLI name: greed, modesty, random, paired-greed, paired-modesty,
/// paired-random, eo-greed-paired.
std::string_view strategy_name(StrategyKind kind);
/// Case-insensitive inverse of strategy_name. Throws std::invalid_argument.
StrategyKind parse_strategy(std::string_view name);

/// True for strategies whose choice consumes random draws.
bool is_randomized(StrategyKind kind);

/// Two chain lengths to bond, l1 >= l2.
struct PairSelection {
  int l1 = 1;
  int l2 = 1;
  friend bool operator==(const PairSelection&, const PairSelection&) = default;
};

struct WeightedPair {
  double probability;
  PairSelection pair;
};

/// Chooses the next pair to bond. Bin 1 is always available, so a pair always
/// exists.
///
///   greed            two largest chains, topping up with singles
///   modesty          two smallest chains of length >= 2; when fewer than two
///                    such chains exist, two singles
///   random           bin A uniform over occupied lengths (1 included), then
///                    bin B uniform over what remains after removing one A
///   paired-greed     (l, l) for the largest l >= 2 holding two chains, else (1, 1)
///   paired-modesty   (l, l) for the smallest l >= 2 holding two chains, else (1, 1)
///   paired-random    (l, l) uniform over {l >= 2 holding two chains} + {1}
///   eo-greed-paired  (2, 1) whenever a 2-chain exists, else paired-greed
///
/// Only random and paired-random read from rng.
PairSelection select_pair(StrategyKind kind, const PopulationVector& pool, Rng& rng);

/// Exact distribution of select_pair's result for this pool. Deterministic
/// strategies yield one entry of probability 1. Identical pairs reached by
/// different draws are merged; entries are sorted by (l1, l2).
std::vector<WeightedPair> pair_distribution(StrategyKind kind, const PopulationVector& pool);

}  // namespace chainpool
