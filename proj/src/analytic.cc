#include "chainpool/analytic.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chainpool::analytic {

namespace {

void check_probability(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("p must lie in (0, 1], got " + std::to_string(p));
  }
}

constexpr int kLargestTabulated = 17;

}  // namespace

double expected_length_after_add(int long_len, int short_len, double p) {
  check_probability(p);
  return long_len + short_len * p - 1.0;
}

int critical_length(double p) {
  check_probability(p);
  int m = static_cast<int>(std::floor(1.0 / p));
  while (m * p <= 1.0) ++m;
  while (m > 1 && (m - 1) * p > 1.0) --m;
  return m;
}

bool is_buildable(int m) {
  if (m == 2 || m == 3 || m == 4) return true;
  // 5, 9, 17, ... are 2^k + 1.
  if (m < 5) return false;
  const int n = m - 1;
  return (n & (n - 1)) == 0;
}

double r_m(int m, double p) {
  check_probability(p);
  if (!is_buildable(m)) {
    throw std::invalid_argument("chain length " + std::to_string(m) + " is not buildable");
  }
  if (m == 2) return 1.0 / p;
  if (m == 3 || m == 4) return (r_m(m - 1, p) + 1.0) / p;
  return (2.0 * r_m((m + 1) / 2, p) + 1.0) / p;
}

double c_m(int m, double p) {
  const double gain = m * p - 1.0;
  if (!(gain > 0.0)) {
    throw std::domain_error("below critical length: m p - 1 = " + std::to_string(gain));
  }
  return (r_m(m, p) + 1.0) / gain;
}

int barrett_kok_length(double p) {
  check_probability(p);
  for (int m = 2; m <= kLargestTabulated; ++m) {
    if (is_buildable(m) && m * p > 1.0) return m;
  }
  throw std::domain_error("p <= 1/17: extend the doubling table beyond m = 17");
}

double barrett_kok_rate(double p) { return 1.0 / c_m(barrett_kok_length(p), p); }

double duan_raussendorf_rate(double p) {
  check_probability(p);
  const double cost = 0.5 * std::pow(2.0 / p, std::log2(4.0 / p + 1.0));
  return 1.0 / cost;
}

ChainCostTable chain_cost_table(double p, int max_m) {
  ChainCostTable table{p, {}};
  for (int m = 2; m <= max_m; ++m) {
    if (is_buildable(m)) table.entries[m] = r_m(m, p);
  }
  return table;
}

}  // namespace chainpool::analytic
