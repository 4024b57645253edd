#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rovella/core/rovella_map.hpp"
#include "rovella/measure/birkhoff.hpp"
#include "rovella/measure/conditions.hpp"
#include "rovella/measure/density.hpp"
#include "rovella/measure/orbit.hpp"
#include "rovella/measure/times.hpp"
#include "rovella/measure/ulam.hpp"

using namespace rovella;

namespace {

// Dense matrix of an Ulam operator.
std::vector<std::vector<double>> dense(const UlamOperator& U) {
  std::vector<std::vector<double>> P(U.n, std::vector<double>(U.n, 0.0));
  for (std::size_t i = 0; i < U.n; ++i)
    for (std::size_t k = U.row_ptr[i]; k < U.row_ptr[i + 1]; ++k) P[i][U.col[k]] = U.val[k];
  return P;
}

// Stationary vector by Gaussian elimination on (P^T - I) v = 0 with the last
// equation replaced by sum v = 1.
std::vector<double> stationary_by_elimination(const std::vector<std::vector<double>>& P) {
  const std::size_t n = P.size();
  std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A[i][j] = P[j][i] - (i == j ? 1.0 : 0.0);
  for (std::size_t j = 0; j < n; ++j) A[n - 1][j] = 1.0;
  A[n - 1][n] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = A[r][c] / A[c][c];
      for (std::size_t k = c; k <= n; ++k) A[r][k] -= f * A[c][k];
    }
  }
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = A[i][n] / A[i][i];
  return v;
}

}  // namespace

TEST(Orbit, EmptyOrbit) {
  const RovellaBaseMap T(default_params());
  const auto o = iterate_orbit(T, 0.3, 0);
  EXPECT_TRUE(o.samples.empty());
  EXPECT_FALSE(o.truncated);
}

TEST(Orbit, FullMapBoundaryTwoCycle) {
  const RovellaBaseMap T(default_params());
  const auto o = iterate_orbit(T, 0.5, 10);
  ASSERT_EQ(o.samples.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(o.samples[i], i % 2 ? -0.5 : 0.5, 1e-9);
  // phi = id averages to 0 on the cycle
  EXPECT_NEAR(birkhoff_average(o, [](double x) { return x; }).value, 0.0, 1e-9);
}

TEST(Orbit, DeterministicForEqualSeeds) {
  const RovellaSkewMap F(default_params());
  const auto a = random_orbit(F, 5000, 100, 77);
  const auto b = random_orbit(F, 5000, 100, 77);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_TRUE(a.samples[i] == b.samples[i]);
  EXPECT_FALSE(a.samples[0] == random_orbit(F, 1, 100, 78).samples[0]);
}

TEST(Orbit, TruncatedAtSingularPoint) {
  const RovellaBaseMap T(default_params());
  const auto o = iterate_orbit(T, 0.0, 5);
  EXPECT_TRUE(o.truncated);
  EXPECT_EQ(o.truncation_index, 1u);
  EXPECT_EQ(o.samples.size(), 1u);
  EXPECT_TRUE(birkhoff_average(o, [](double) { return 1.0; }).partial);
}

TEST(Orbit, InvariantSamplerIndependentOfThreads) {
  const RovellaSkewMap F(default_params());
  EnsembleConfig c;
  c.size = 3000;
  c.chains = 7;
  c.burn_in = 200;
  c.stride = 3;
  c.seed = 5;
  c.threads = 1;
  const auto a = sample_invariant(F, c);
  c.threads = 4;
  const auto b = sample_invariant(F, c);
  ASSERT_EQ(a.size(), 3000u);
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_TRUE(a[i] == b[i]);
}

TEST(Ulam, IdentityMapGivesIdentityMatrix) {
  const auto U = build_ulam(IdentityMap(), 10, 16, 1);
  const auto P = dense(U);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) EXPECT_DOUBLE_EQ(P[i][j], i == j ? 1.0 : 0.0);
  const auto d = invariant_density(U);
  for (double w : d.weights) EXPECT_DOUBLE_EQ(w, 0.1);
}

TEST(Ulam, DoublingMapTwoBins) {
  const auto P = dense(build_ulam(DoublingMap(), 2, 64, 3));
  for (auto& row : P)
    for (double v : row) EXPECT_DOUBLE_EQ(v, 0.5);
}

TEST(Ulam, DoublingMapDensityMatchesEliminationOracle) {
  const auto U = build_ulam(DoublingMap(), 16, 64, 4);
  const auto oracle = stationary_by_elimination(dense(U));
  const auto d = invariant_density(U);
  for (std::size_t i = 0; i < 16; ++i) {
    EXPECT_NEAR(d.weights[i], oracle[i], 1e-12);
    EXPECT_NEAR(d.weights[i] * 16, 1.0, 1e-10);
  }
}

TEST(Ulam, RovellaRowsStochastic) {
  const RovellaBaseMap T(default_params());
  const auto U = build_ulam(T, 1024, 64, 5, 2);
  for (std::size_t i = 0; i < U.n; ++i) EXPECT_NEAR(U.row_sum(i), 1.0, 1e-12);
  for (double v : U.val) EXPECT_GE(v, 0.0);
  const auto d = invariant_density(U);
  double s = 0.0;
  for (double w : d.weights) {
    EXPECT_GE(w, 0.0);
    s += w;
  }
  EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_LE(d.residual, 1e-10);
}

TEST(Ulam, BinContainingDiscontinuitySplitsMass) {
  // odd bin count puts 0 inside the middle bin; its halves map near +-1/2
  const RovellaBaseMap T(default_params());
  const auto U = build_ulam(T, 5, 64, 6);
  const auto P = dense(U);
  EXPECT_NEAR(P[2][0], 0.5, 1e-12);
  EXPECT_NEAR(P[2][4], 0.5, 1e-12);
}

TEST(Ulam, RejectsTooFewBins) { EXPECT_THROW(build_ulam(DoublingMap(), 1), ValidationError); }

TEST(Density, NonConvergenceReportsResidual) {
  // both states jump to state 0; the uniform start is not fixed
  UlamOperator U;
  U.n = 2;
  U.domain = {0, 1};
  U.row_ptr = {0, 1, 2};
  U.col = {0, 0};
  U.val = {1.0, 1.0};
  EXPECT_NO_THROW(invariant_density(U));
  try {
    invariant_density(U, 1e-300, 0);
    FAIL();
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(Birkhoff, ConstantObservable) {
  const RovellaBaseMap T(default_params());
  const auto o = random_orbit(T, 1000, 10, 3);
  EXPECT_DOUBLE_EQ(birkhoff_average(o, [](double) { return 1.0; }).value, 1.0);
}

TEST(Birkhoff, LyapunovExponentPositive) {
  const auto p = default_params();
  const RovellaBaseMap T(p);
  const auto o = random_orbit(T, 200000, 1000, 8);
  const auto avg = birkhoff_average(o, [&](double x) { return T.log_abs_derivative(x); });
  EXPECT_GT(avg.value, 0.3);
}

TEST(LogIntegral, UniformDensityExactBinIntegrals) {
  // oracle: int_{-1/2}^{1/2} -log|x| dx = 1 + log 2
  for (std::size_t n : {4096, 4095, 2}) {
    EXPECT_NEAR(log_integral(DensityEstimate::uniform(n, {-0.5, 0.5})), 1.0 + std::log(2.0), 1e-12);
  }
}

TEST(LogIntegral, OrbitAvoidingNeighbourhoodIsBounded) {
  Orbit<double> o;
  o.samples = {0.3, -0.2, 0.45, -0.1};
  EXPECT_LE(log_integral(o).value, -std::log(0.1));
}

TEST(Times, ExpansionTimeExamples) {
  const std::vector<double> good{1.0, 2.0, 0.5, 3.0};
  EXPECT_EQ(expansion_time(good, 0.1).value, 1u);
  const std::vector<double> late{-5.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  // averages: -5, -2, -1, -0.5, -0.2, 0, 1/7
  const auto e = expansion_time(late, 0.1);
  EXPECT_EQ(e.value, 7u);
  EXPECT_FALSE(e.censored);
  const std::vector<double> bad{-1.0, -1.0};
  EXPECT_TRUE(expansion_time(bad, 0.1).censored);
  EXPECT_EQ(expansion_time(bad, 0.1).value, 2u);
}

TEST(Times, RecurrenceTimeExamples) {
  const std::vector<double> far{0.3, -0.2, 0.4};
  EXPECT_EQ(recurrence_time(far, 0.05, 1e-9).value, 1u);
  const std::vector<double> close{1e-6, 0.3, 0.3, 0.3};
  // -log(1e-6) = 13.8; average drops below 5 after 3 terms
  EXPECT_EQ(recurrence_time(close, 0.05, 5.0).value, 3u);
}

TEST(Times, TailFraction) {
  std::vector<TimePair> ens{{{1, false}, {1, false}}, {{3, false}, {1, false}}, {{2, false}, {5, true}}};
  EXPECT_DOUBLE_EQ(tail_fraction(ens, 0), 1.0);
  EXPECT_DOUBLE_EQ(tail_fraction(ens, 1), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(tail_fraction(ens, 3), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(tail_fraction(ens, 100), 1.0 / 3.0);  // censored counts as exceeding
  ens.pop_back();
  EXPECT_DOUBLE_EQ(tail_fraction(ens, 3), 0.0);
}

TEST(Times, EnsembleIndependentOfThreads) {
  const RovellaBaseMap T(default_params());
  TimeEnsembleConfig c;
  c.orbits = 200;
  c.length = 500;
  c.c = 0.3;
  c.threads = 1;
  const auto a = time_ensemble(T, c);
  c.threads = 3;
  const auto b = time_ensemble(T, c);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].expansion.value, b[k].expansion.value);
    EXPECT_EQ(a[k].recurrence.value, b[k].recurrence.value);
  }
  double prev = 1.0;
  for (std::size_t n = 0; n < 500; ++n) {
    const double f = tail_fraction(a, n);
    EXPECT_LE(f, prev);
    prev = f;
  }
}

TEST(Conditions, ReportOnDefaultParameters) {
  const auto p = default_params();
  const auto r = check_rovella_conditions(p, 60);
  EXPECT_NEAR(r.c1_exponent, p.s() - 1.0, 1e-6);
  EXPECT_GT(r.c2_min_root, 1.0);
  EXPECT_GT(r.c4_fraction_visited, 0.0);
  const auto again = check_rovella_conditions(p, 60);
  EXPECT_EQ(r.c2_min_root, again.c2_min_root);
  EXPECT_EQ(r.c3_alpha_min, again.c3_alpha_min);
  EXPECT_THROW(check_rovella_conditions(p, 61), DomainError);
}

TEST(Conditions, BoundaryCycleDerivativeRoot) {
  // on the 2-cycle {1/2, -1/2}: |(T^n)'(1/2)|^(1/n) = |T'(1/2) T'(-1/2)|^(1/2) = 2.4
  const auto r = check_rovella_conditions(default_params(), 16);
  EXPECT_NEAR(r.c2_min_root, 2.4, 1e-6);
  EXPECT_NEAR(r.c3_alpha_min, std::log(2.0), 1e-9);
}
