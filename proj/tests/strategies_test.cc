#include "chainpool/strategies.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "chainpool/engine.h"

using namespace chainpool;

namespace {

// {l: n} literal helper, e.g. pool_of(10, {{3, 1}, {5, 2}}).
PopulationVector pool_of(int max_len, std::map<int, std::uint64_t> bins) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_len - 1), 0);
  for (auto [l, n] : bins) counts[static_cast<std::size_t>(l - 2)] = n;
  return PopulationVector::from_counts(max_len, counts);
}

PairSelection pick(StrategyKind kind, const PopulationVector& pool) {
  Rng rng(1);
  return select_pair(kind, pool, rng);
}

bool available(const PopulationVector& pool, PairSelection pair) {
  auto has = [&](int l, std::uint64_t n) { return l == 1 || pool.count(l) >= n; };
  if (pair.l1 == pair.l2) return has(pair.l1, 2);
  return has(pair.l1, 1) && has(pair.l2, 1);
}

}  // namespace

TEST(Strategies, names_round_trip) {
  for (StrategyKind kind : kAllStrategies) {
    EXPECT_EQ(parse_strategy(strategy_name(kind)), kind);
  }
  EXPECT_EQ(parse_strategy("Paired-Greed"), StrategyKind::kPairedGreed);
  EXPECT_THROW(parse_strategy("paired"), std::invalid_argument);
}

TEST(Strategies, greed) {
  EXPECT_EQ(pick(StrategyKind::kGreed, pool_of(10, {{3, 1}, {5, 2}})), (PairSelection{5, 5}));
  EXPECT_EQ(pick(StrategyKind::kGreed, pool_of(10, {{3, 1}, {5, 1}})), (PairSelection{5, 3}));
  EXPECT_EQ(pick(StrategyKind::kGreed, pool_of(10, {{7, 1}})), (PairSelection{7, 1}));
  EXPECT_EQ(pick(StrategyKind::kGreed, PopulationVector(10)), (PairSelection{1, 1}));
}

TEST(Strategies, modesty) {
  EXPECT_EQ(pick(StrategyKind::kModesty, pool_of(10, {{2, 1}, {4, 3}})), (PairSelection{4, 2}));
  EXPECT_EQ(pick(StrategyKind::kModesty, pool_of(10, {{4, 3}})), (PairSelection{4, 4}));
  EXPECT_EQ(pick(StrategyKind::kModesty, PopulationVector(10)), (PairSelection{1, 1}));
  // A lone chain waits for a second chain to be built.
  EXPECT_EQ(pick(StrategyKind::kModesty, pool_of(10, {{6, 1}})), (PairSelection{1, 1}));
}

TEST(Strategies, paired_variants) {
  EXPECT_EQ(pick(StrategyKind::kPairedGreed, pool_of(10, {{3, 1}, {4, 1}})),
            (PairSelection{1, 1}));
  EXPECT_EQ(pick(StrategyKind::kPairedGreed, pool_of(10, {{3, 2}, {4, 1}, {6, 3}})),
            (PairSelection{6, 6}));
  EXPECT_EQ(pick(StrategyKind::kPairedModesty, pool_of(10, {{3, 2}, {4, 1}, {6, 3}})),
            (PairSelection{3, 3}));
  EXPECT_EQ(pick(StrategyKind::kPairedModesty, pool_of(10, {{2, 1}, {5, 1}})),
            (PairSelection{1, 1}));
  EXPECT_EQ(pick(StrategyKind::kEoGreedPaired, pool_of(10, {{2, 1}, {4, 2}})),
            (PairSelection{2, 1}));
  EXPECT_EQ(pick(StrategyKind::kEoGreedPaired, pool_of(10, {{3, 2}, {4, 2}})),
            (PairSelection{4, 4}));
}

TEST(Strategies, paired_random_is_uniform_over_eligible_bins) {
  const auto dist = pair_distribution(StrategyKind::kPairedRandom, pool_of(10, {{3, 2}}));
  ASSERT_EQ(dist.size(), 2u);
  EXPECT_EQ(dist[0].pair, (PairSelection{1, 1}));
  EXPECT_DOUBLE_EQ(dist[0].probability, 0.5);
  EXPECT_EQ(dist[1].pair, (PairSelection{3, 3}));
  EXPECT_DOUBLE_EQ(dist[1].probability, 0.5);
}

TEST(Strategies, random_distribution_matches_hand_enumeration) {
  // Occupied {1, 2, 4} with counts {2:1, 4:2}: first bin uniform over three,
  // second uniform over what remains (bin 2 drops out once its only chain is
  // taken).
  const auto dist = pair_distribution(StrategyKind::kRandom, pool_of(6, {{2, 1}, {4, 2}}));
  const std::map<std::pair<int, int>, double> expected = {
      {{1, 1}, 1.0 / 9}, {{2, 1}, 5.0 / 18}, {{4, 1}, 2.0 / 9},
      {{4, 2}, 5.0 / 18}, {{4, 4}, 1.0 / 9}};
  ASSERT_EQ(dist.size(), expected.size());
  for (const auto& [probability, pair] : dist) {
    EXPECT_NEAR(probability, expected.at({pair.l1, pair.l2}), 1e-15);
  }
}

TEST(Strategies, sampled_frequencies_follow_the_distribution) {
  const auto pool = pool_of(8, {{2, 1}, {3, 2}, {5, 1}, {7, 3}});
  for (StrategyKind kind : {StrategyKind::kRandom, StrategyKind::kPairedRandom}) {
    const auto dist = pair_distribution(kind, pool);
    std::map<std::pair<int, int>, int> hits;
    Rng rng(2024);
    constexpr int kDraws = 200'000;
    for (int i = 0; i < kDraws; ++i) {
      const auto pair = select_pair(kind, pool, rng);
      ++hits[{pair.l1, pair.l2}];
    }
    double total = 0.0;
    for (const auto& [probability, pair] : dist) {
      total += probability;
      const double observed = hits[{pair.l1, pair.l2}] / static_cast<double>(kDraws);
      const double sd = std::sqrt(probability * (1 - probability) / kDraws);
      EXPECT_NEAR(observed, probability, 5 * sd) << strategy_name(kind);
      hits.erase({pair.l1, pair.l2});
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_TRUE(hits.empty()) << "sampled a pair outside the distribution";
  }
}

TEST(Strategies, selection_properties_along_random_trajectories) {
  for (StrategyKind strategy : kAllStrategies) {
    for (GateKind gate : {GateKind::kCz, GateKind::kKlmCz, GateKind::kEo}) {
      PopulationVector pool(12);
      Rng rng(derive_seed(5, static_cast<std::uint64_t>(strategy) * 8 + static_cast<int>(gate)));
      const GateModel model(gate, 0.6);
      for (int t = 0; t < 20'000; ++t) {
        Rng probe(static_cast<std::uint64_t>(t));
        const PairSelection pair = select_pair(strategy, pool, probe);
        ASSERT_GE(pair.l1, pair.l2);
        ASSERT_TRUE(available(pool, pair)) << strategy_name(strategy);
        if (!is_randomized(strategy)) {
          Rng other(static_cast<std::uint64_t>(t) + 99);
          ASSERT_EQ(select_pair(strategy, pool, other), pair);
        }
        switch (strategy) {
          case StrategyKind::kPairedGreed:
          case StrategyKind::kPairedModesty:
          case StrategyKind::kPairedRandom:
            ASSERT_EQ(pair.l1, pair.l2);
            break;
          case StrategyKind::kEoGreedPaired:
            ASSERT_TRUE(pair.l1 == pair.l2 || (pair == PairSelection{2, 1}));
            break;
          case StrategyKind::kModesty:
            if (pool.resident_chains() >= 2) ASSERT_GE(pair.l2, 2);
            break;
          default:
            break;
        }
        step(pool, model, strategy, rng);
      }
    }
  }
}

TEST(Strategies, greed_never_holds_more_than_one_chain) {
  // Greed only bonds two singles when the pool is empty, so it grows a single
  // chain at a time. Modesty must build second chains to differ from it.
  PopulationVector greedy(50), modest(50);
  Rng a(3), b(3);
  const GateModel gate(GateKind::kCz, 0.8);
  std::uint64_t modest_max = 0;
  for (int t = 0; t < 50'000; ++t) {
    step(greedy, gate, StrategyKind::kGreed, a);
    step(modest, gate, StrategyKind::kModesty, b);
    ASSERT_LE(greedy.resident_chains(), 1u);
    modest_max = std::max(modest_max, modest.resident_chains());
  }
  EXPECT_EQ(modest_max, 2u);
}
