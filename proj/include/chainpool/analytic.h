#pragma once

#include <map>

namespace chainpool::analytic {

// Closed-form cost estimates for growing a long chain without recycling:
// short chains of length m are built by divide and conquer (fragments are
// discarded on any failure) and then attached to the long chain. Rates are
// the reciprocal costs, directly comparable with a simulated spill rate.

/// Expected length of an N-chain after trying to attach an m-chain with the
/// EO gate: N + m p - 1.
double expected_length_after_add(int long_len, int short_len, double p);

/// Smallest m with m p > 1; short chains must be at least this long for the
/// long chain to grow on average.
int critical_length(double p);

/// True for m in {2, 3, 4, 5, 9, 17, 33, ...}.
bool is_buildable(int m);

/// Expected attempts to build an m-chain without recycling:
///   R_2 = 1/p
///   R_{k+1} = (R_k + 1) / p          k = 2, 3
///   R_{2k-1} = (2 R_k + 1) / p       k = 3, 5, 9, ...
/// Throws std::invalid_argument for m outside the buildable set.
double r_m(int m, double p);

/// Attempts per qubit added to the long chain: (R_m + 1) / (m p - 1).
/// Throws std::domain_error when m p <= 1.
double c_m(int m, double p);

/// 1 / c_m for the smallest buildable m with m p > 1. Defined for
/// 1/17 < p <= 1; throws std::domain_error below.
double barrett_kok_rate(double p);

/// The buildable m barrett_kok_rate uses at p.
int barrett_kok_length(double p);

/// 1 / C with C = (1/2) (2/p)^{log2(4/p + 1)}, the cost quoted for the
/// recycling CZ scheme.
double duan_raussendorf_rate(double p);

/// R_m for every buildable m up to max_m.
struct ChainCostTable {
  double p_gate;
  std::map<int, double> entries;
};
ChainCostTable chain_cost_table(double p, int max_m = 17);

}  // namespace chainpool::analytic
