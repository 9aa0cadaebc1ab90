#include <gtest/gtest.h>

#include <cmath>

#include "polydisk/continuum.hpp"
#include "polydisk/stats.hpp"

using namespace polydisk;

namespace {

// A full disk, redrawn until C hits -1 within a moderate horizon.
DiskProcesses hit_disk(Rng& rng, double h) {
  for (;;) {
    DiskProcesses P = simulate_disk(rng, h, 10.0);
    if (P.hit) return P;
  }
}

}  // namespace

TEST(MinTable, MatchesBruteForce) {
  Rng rng(61);
  std::vector<double> v(300);
  for (auto& x : v) x = rng.normal();
  const MinTable t(v);
  for (std::size_t a = 0; a < v.size(); a += 7)
    for (std::size_t b = a; b < v.size(); b += 11)
      EXPECT_EQ(t(a, b), *std::min_element(v.begin() + a, v.begin() + b + 1));
}

TEST(HittingTime, SamplerMatchesCdf) {
  Rng rng(62);
  std::vector<double> x(20'000);
  for (auto& a : x) a = sample_A(rng);
  EXPECT_GT(ks_one_sample(x, A_cdf).p_value, 0.001);
  EXPECT_NEAR(A_cdf(1.0), std::erfc(std::sqrt(0.5)), 1e-15);
  EXPECT_EQ(A_cdf(0), 0);
}

TEST(Disk, HitProbabilityBeforeHorizon) {
  Rng rng(63);
  const int n = 2000;
  int hit = 0;
  for (int i = 0; i < n; ++i) hit += simulate_disk(rng, 1e-3, 0.5).hit;
  const double q = A_cdf(0.5);
  // Discrete monitoring misses some crossings.
  EXPECT_NEAR(hit / double(n), q, 3 * std::sqrt(q * (1 - q) / n) + 0.02);
}

TEST(Disk, PathShape) {
  Rng rng(64);
  const DiskProcesses P = hit_disk(rng, 1e-3);
  ASSERT_TRUE(P.hit);
  EXPECT_EQ(P.C.front(), 0);
  EXPECT_EQ(P.C.back(), -1);
  EXPECT_EQ(P.T_inverse.back(), 1);
  EXPECT_EQ(P.BR_T.back(), 0);
  EXPECT_EQ(P.Lambda.front(), 0);
  EXPECT_DOUBLE_EQ(P.A(), P.length());
  for (std::size_t k = 1; k < P.C.size(); ++k) EXPECT_GE(P.T_inverse[k], P.T_inverse[k - 1]);
}

TEST(Disk, SnakeVarianceMatchesHeight) {
  // E[Lambda0_s^2] = E[C_s - inf C], for the snake driven by C - inf C.
  Rng rng(65);
  const int n = 4000;
  const double s = 0.3;
  std::vector<double> sq(n), ht(n);
  for (int i = 0; i < n; ++i) {
    const DiskProcesses P = simulate_disk(rng, 1e-3, s);
    const std::size_t k = P.steps();
    double low = 0;
    for (double c : P.C) low = std::min(low, c);
    sq[i] = P.Lambda0[k] * P.Lambda0[k];
    ht[i] = P.C[k] - low;
  }
  const MeanEstimate a = mean_estimate(sq), b = mean_estimate(ht);
  EXPECT_NEAR(a.mean, b.mean, 4 * std::hypot(a.se, b.se));
}

TEST(Disk, BridgeVarianceAtHalf) {
  Rng rng(66);
  const int n = 4000;
  std::vector<double> x;
  // The bridge is independent of C, so stopping at a horizon does not bias it.
  for (int i = 0; i < n; ++i) {
    const DiskProcesses P = simulate_disk(rng, 1e-3, 10.0);
    for (std::size_t k = 0; k < P.C.size(); ++k)
      if (P.T_inverse[k] >= 0.5) {
        x.push_back(std::sqrt(3.0) * P.BR_T[k]);
        break;
      }
  }
  const MeanEstimate m = mean_estimate(x);
  // Var of 3 (BR_y)^2 at y = 1/2 is 2 (3/4)^2.
  EXPECT_NEAR(m.sd * m.sd, 0.75, 3 * 0.75 * std::sqrt(2.0 / x.size()) + 0.01);
  EXPECT_DOUBLE_EQ(bridge_marginal_sd(0.5) * bridge_marginal_sd(0.5), 0.75);
}

TEST(Disk, LabelMarginalMatchesExactDraw) {
  Rng rng(67), exact(68);
  const double s = 0.3;
  const int n = 3000;
  std::vector<double> sim(n), ref(n);
  for (int i = 0; i < n; ++i) {
    const DiskProcesses P = simulate_disk(rng, 1e-3, s);
    sim[i] = P.hit ? 0.0 : P.Lambda.back();
    ref[i] = sample_Lambda_marginal(s, exact);
  }
  EXPECT_GT(ks_two_sample(sim, ref).p_value, 0.001);
}

TEST(Distances, Basics) {
  Rng rng(69);
  const DiskProcesses P = hit_disk(rng, 1e-3);
  const double L = P.length();
  for (double s : {0.0, L / 3, L / 2}) {
    EXPECT_EQ(d_C(P, s, s), 0);
    EXPECT_EQ(d_Lambda(P, s, s), 0);
  }
  // The endpoints are both at the minimum of the contour.
  const std::size_t argmin = std::min_element(P.C.begin(), P.C.end()) - P.C.begin();
  EXPECT_EQ(d_C_index(P, argmin, P.steps()), 0);
  for (double s : {L / 5, L / 4}) {
    const double s2 = L - s / 2;
    EXPECT_EQ(d_Lambda(P, s, s2), d_Lambda(P, s2, s));
    EXPECT_EQ(d_C(P, s, s2), d_C(P, s2, s));
    EXPECT_GE(d_Lambda(P, s, s2), std::abs(P.at(P.Lambda, s) - P.at(P.Lambda, s2)));
  }
}

TEST(Distances, LambdaTriangleInequality) {
  Rng rng(70);
  const DiskProcesses P = hit_disk(rng, 1e-3);
  const std::size_t n = P.steps();
  for (std::size_t a = 0; a <= n; a += n / 7 + 1)
    for (std::size_t b = 0; b <= n; b += n / 5 + 1)
      for (std::size_t c = 0; c <= n; c += n / 3 + 1)
        EXPECT_LE(d_Lambda_index(P, a, c), d_Lambda_index(P, a, b) + d_Lambda_index(P, b, c) + 1e-12);
}

TEST(Chain, MonotoneAndBoundedByLambda) {
  Rng rng(71);
  const DiskProcesses P = hit_disk(rng, 1e-3);
  const double L = P.length();
  ChainOptions opt;
  opt.identify_tol = 0;
  for (double f : {0.1, 0.35, 0.6}) {
    const double s = f * L, s2 = (1 - f / 2) * L;
    const double d1 = chain_Dstar(P, s, s2, 1, opt);
    EXPECT_DOUBLE_EQ(d1, d_Lambda(P, s, s2));
    double prev = d1;
    for (std::int32_t k : {2, 4, 8}) {
      const double dk = chain_Dstar(P, s, s2, k);
      EXPECT_LE(dk, prev + 1e-12);
      EXPECT_GE(dk, 0);
      prev = dk;
    }
  }
}

TEST(Domain, Errors) {
  Rng rng(72);
  EXPECT_THROW(simulate_disk(rng, 0), out_of_domain);
  const DiskProcesses P = hit_disk(rng, 1e-2);
  EXPECT_THROW(P.index(-0.1), out_of_domain);
  EXPECT_THROW(P.index(P.length() + 1), out_of_domain);
  EXPECT_THROW(chain_Dstar(P, 0, P.length(), 0), out_of_domain);
}

TEST(Csv, Header) {
  Rng rng(73);
  const DiskProcesses P = hit_disk(rng, 1e-2);
  const std::string csv = disk_csv(P);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,C,Lambda");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), P.C.size() + 1);
}
