#include "chainpool/analytic.h"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

using namespace chainpool::analytic;

namespace {

constexpr double kRel = 1e-9;

void expect_rel(double actual, double expected) {
  EXPECT_NEAR(actual, expected, kRel * std::abs(expected));
}

// The published expansions, written out term by term.
double r3_poly(double p) { return 1 / (p * p) + 1 / p; }
double r4_poly(double p) { return 1 / std::pow(p, 3) + 1 / (p * p) + 1 / p; }
double r5_poly(double p) { return 2 / std::pow(p, 3) + 2 / (p * p) + 1 / p; }
double r9_poly(double p) {
  return 4 / std::pow(p, 4) + 4 / std::pow(p, 3) + 2 / (p * p) + 1 / p;
}
double r17_poly(double p) {
  return 8 / std::pow(p, 5) + 8 / std::pow(p, 4) + 4 / std::pow(p, 3) + 2 / (p * p) + 1 / p;
}

}  // namespace

TEST(Analytic, expected_length_after_add) {
  EXPECT_DOUBLE_EQ(expected_length_after_add(10, 3, 0.5), 10.5);
  EXPECT_DOUBLE_EQ(expected_length_after_add(10, 2, 0.5), 10.0);
  EXPECT_DOUBLE_EQ(expected_length_after_add(1, 1, 1.0), 1.0);
  // Direct average over the two EO outcomes.
  const double p = 0.37;
  EXPECT_NEAR(expected_length_after_add(20, 4, p), p * (20 + 4 - 1) + (1 - p) * (20 - 1), 1e-12);
}

TEST(Analytic, critical_length) {
  EXPECT_EQ(critical_length(0.5), 3);
  EXPECT_EQ(critical_length(1.0), 2);
  EXPECT_EQ(critical_length(0.2), 6);
  EXPECT_EQ(critical_length(0.3), 4);
  EXPECT_THROW(critical_length(0.0), std::invalid_argument);
}

TEST(Analytic, buildable_set) {
  for (int m : {2, 3, 4, 5, 9, 17, 33, 65}) EXPECT_TRUE(is_buildable(m)) << m;
  for (int m : {1, 6, 7, 8, 10, 16, 18}) EXPECT_FALSE(is_buildable(m)) << m;
  EXPECT_THROW(r_m(6, 0.5), std::invalid_argument);
}

TEST(Analytic, chain_costs_at_one_half) {
  // Hand arithmetic at p = 1/2: 1/p = 2, 1/p^2 = 4, 1/p^3 = 8, 1/p^4 = 16.
  expect_rel(r_m(2, 0.5), 2);
  expect_rel(r_m(3, 0.5), 4 + 2);
  expect_rel(r_m(4, 0.5), 8 + 4 + 2);
  expect_rel(r_m(5, 0.5), 16 + 8 + 2);
  expect_rel(r_m(9, 0.5), 64 + 32 + 8 + 2);
  expect_rel(r_m(2, 1.0), 1);
}

TEST(Analytic, recursion_reproduces_the_published_expansions) {
  for (double p : {0.06, 0.1, 0.17, 0.25, 0.4, 0.5, 0.77, 1.0}) {
    expect_rel(r_m(3, p), r3_poly(p));
    expect_rel(r_m(4, p), r4_poly(p));
    expect_rel(r_m(5, p), r5_poly(p));
    expect_rel(r_m(9, p), r9_poly(p));
    expect_rel(r_m(17, p), r17_poly(p));
  }
}

TEST(Analytic, cost_per_added_qubit) {
  expect_rel(c_m(3, 0.5), 14);
  expect_rel(c_m(2, 1.0), 2);
  EXPECT_THROW(c_m(5, 0.2), std::domain_error);
  EXPECT_THROW(c_m(2, 0.5), std::domain_error);
}

TEST(Analytic, barrett_kok_regions) {
  expect_rel(barrett_kok_rate(0.5), 1.0 / 14);
  EXPECT_EQ(barrett_kok_length(0.5), 3);
  EXPECT_EQ(barrett_kok_length(0.3), 4);
  expect_rel(barrett_kok_rate(0.3), 1.0 / c_m(4, 0.3));
  EXPECT_EQ(barrett_kok_length(0.1), 17);
  expect_rel(barrett_kok_rate(0.1), 1.0 / c_m(17, 0.1));
  EXPECT_EQ(barrett_kok_length(0.25), 5);
  EXPECT_EQ(barrett_kok_length(1.0 / 9), 17);
  EXPECT_EQ(barrett_kok_length(0.2), 9);
  EXPECT_EQ(barrett_kok_length(1.0), 2);
  expect_rel(barrett_kok_rate(1.0), 0.5);
  EXPECT_THROW(barrett_kok_rate(0.05), std::domain_error);
  EXPECT_THROW(barrett_kok_rate(1.0 / 17), std::domain_error);
}

TEST(Analytic, duan_raussendorf) {
  expect_rel(duan_raussendorf_rate(1.0), 0.4);
  expect_rel(duan_raussendorf_rate(0.5), 1 / 40.5);
  EXPECT_LT(duan_raussendorf_rate(1e-3), 1e-20);
}

TEST(Analytic, monotonicity) {
  double previous_dr = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double p = i / 100.0;
    const double dr = duan_raussendorf_rate(p);
    EXPECT_GT(dr, previous_dr);
    previous_dr = dr;
    // R grows along the buildable sequence and falls with p.
    double previous_r = 0.0;
    for (int m : {2, 3, 4, 5, 9, 17}) {
      const double r = r_m(m, p);
      if (p < 1.0) EXPECT_GT(r, previous_r);
      EXPECT_GE(r, 1.0 / p * (1 - 1e-12));
      previous_r = r;
      if (i > 1) EXPECT_LT(r, r_m(m, (i - 1) / 100.0));
    }
    if (p > 1.0 / 17) {
      EXPECT_LE(barrett_kok_rate(p), 1.0);
      EXPECT_GT(barrett_kok_rate(p), 0.0);
    }
  }
  // Within one region c_m falls as p rises.
  for (double p = 0.34; p < 0.5; p += 0.01) EXPECT_GT(c_m(3, p), c_m(3, p + 0.01));
}

TEST(Analytic, cost_table) {
  const auto table = chain_cost_table(0.5);
  EXPECT_EQ(table.entries.size(), 6u);
  expect_rel(table.entries.at(9), 106);
}
