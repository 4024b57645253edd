#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rovella/core/rng.hpp"
#include "rovella/core/rovella_map.hpp"
#include "rovella/norms/grid.hpp"
#include "rovella/norms/growth.hpp"
#include "rovella/norms/report.hpp"
#include "rovella/norms/step_function.hpp"

using namespace rovella;

namespace {

// Universal p-variation by enumerating every subsequence of values.
double exhaustive_var_p(const std::vector<double>& v, double p) {
  const std::size_t n = v.size();
  double best = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    double acc = 0.0, prev = 0.0;
    bool have = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      if (have) acc += std::pow(std::abs(v[i] - prev), p);
      prev = v[i];
      have = true;
    }
    best = std::max(best, acc);
  }
  return std::pow(best, 1.0 / p);
}

// osc_p by midpoint quadrature of the pointwise oscillation.
double quadrature_osc_p(const StepFunction& f, double eps, double p, int points) {
  double acc = 0.0;
  for (int k = 0; k < points; ++k) {
    const double x = (k + 0.5) / points;
    acc += std::pow(oscillation_at(f, eps, x), p);
  }
  return std::pow(acc / points, 1.0 / p);
}

}  // namespace

TEST(StepFunction, RejectsBadBreakpoints) {
  EXPECT_THROW(StepFunction({0.5, 0.4}, {1, 2, 3}), ValidationError);
  EXPECT_THROW(StepFunction({0.5}, {1}), ValidationError);
  EXPECT_THROW(StepFunction({1.0}, {1, 2}), ValidationError);
}

TEST(StepFunction, NormsOfSimpleFunction) {
  const StepFunction f({0.25}, {2.0, -1.0});
  EXPECT_DOUBLE_EQ(f.sup_norm(), 2.0);
  EXPECT_NEAR(f.lp_norm(1.0), 0.25 * 2 + 0.75 * 1, 1e-15);
  EXPECT_NEAR(f.lp_norm(2.0), std::sqrt(0.25 * 4 + 0.75), 1e-15);
}

TEST(StepFunction, UniversalVarPMatchesExhaustiveSearch) {
  auto rng = make_stream(11, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto f = random_step_function(rng, 12);
    for (double p : {1.0, 1.5, 2.0, 3.0}) EXPECT_NEAR(universal_var_p(f, p), exhaustive_var_p(f.values(), p), 1e-12);
  }
}

TEST(StepFunction, UniversalVarOneIsTotalVariation) {
  const StepFunction f({0.2, 0.5, 0.7}, {0.0, 1.0, -1.0, 2.0});
  EXPECT_NEAR(universal_var_p(f, 1.0), 1 + 2 + 3, 1e-15);
}

TEST(StepFunction, OscPMatchesQuadrature) {
  auto rng = make_stream(12, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_step_function(rng, 8);
    for (double eps : {0.3, 0.05, 0.01})
      for (double p : {1.0, 2.0}) EXPECT_NEAR(osc_p(f, eps, p), quadrature_osc_p(f, eps, p, 200000), 2e-4);
  }
}

TEST(StepFunction, SingleJumpOscillation) {
  // one jump of height 1 at 1/2: osc = 1 on (1/2 - eps, 1/2 + eps)
  const StepFunction f({0.5}, {0.0, 1.0});
  EXPECT_NEAR(osc_p(f, 0.1, 1.0), 0.2, 1e-15);
  EXPECT_NEAR(osc_p(f, 0.1, 2.0), std::sqrt(0.2), 1e-15);
  EXPECT_DOUBLE_EQ(osc_p(f, 0.1, INFINITY), 1.0);
  // eps^-1/2 * (2 eps)^1/2 = sqrt 2 for every eps <= 1/2
  EXPECT_NEAR(var_pr_norm(f, 2.0, 0.5).seminorm, std::sqrt(2.0), 1e-12);
}

TEST(StepFunction, ConstantHasZeroSeminorms) {
  const auto f = StepFunction::constant(0.7);
  EXPECT_DOUBLE_EQ(universal_var_p(f, 2.0), 0.0);
  const auto v = var_pr_norm(f, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(v.seminorm, 0.0);
  EXPECT_NEAR(v.norm, 0.7, 1e-15);
}

TEST(StepFunction, NormInequalitiesOnRandomCorpus) {
  for (std::uint64_t k = 0; k < 50; ++k) {
    auto rng = make_stream(5, k);
    const auto f = random_step_function(rng);
    for (double p : {1.5, 2.0, 3.0}) {
      const double a = var_pr_norm(f, 1.0, 1.0 / p).seminorm;
      const double b = var_pr_norm(f, p, 1.0 / p).seminorm;
      EXPECT_LE(a, b + 1e-9);
      EXPECT_LE(b, std::pow(2.0, 1.0 / p) * universal_var_p(f, p) + 1e-9);
    }
    for (double r : {0.5, 1.0 / 3.0}) EXPECT_LE(f.sup_norm(), var_pr_norm(f, 1.0, r).norm + 1e-9);
  }
}

TEST(Grid, HolderSeminormOfPowerFunction) {
  const auto g = GridObservable::sample_interval([](double x) { return std::sqrt(x); }, 257);
  EXPECT_NEAR(holder_seminorm(g, 0.5), 1.0, 1e-12);
  const auto lin = GridObservable::sample_interval([](double x) { return 3 * x; }, 101);
  EXPECT_NEAR(holder_seminorm(lin, 1.0), 3.0, 1e-12);
}

TEST(Grid, OscillationWindowIsOpenBall) {
  // h = 1/4: eps = 1/4 reaches no neighbour, eps slightly larger reaches one
  const auto g = GridObservable::sample_interval([](double x) { return x; }, 5);
  EXPECT_DOUBLE_EQ(oscillation(g, 0.25)[2], 0.0);
  EXPECT_DOUBLE_EQ(oscillation(g, 0.26)[2], 0.5);
}

TEST(Grid, UniversalVarPMatchesExhaustiveSearch) {
  auto rng = make_stream(13, 0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> v(12);
    for (auto& x : v) x = rng.uniform(-1, 1);
    const GridObservable g(GridDomain::interval, v.size(), 0.0, 1.0, v);
    for (double p : {1.0, 2.0, 3.0}) EXPECT_NEAR(universal_var_p(g, p), exhaustive_var_p(v, p), 1e-12);
  }
}

TEST(Grid, MollifierInequalities) {
  auto rng = make_stream(14, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_step_function(rng);
    const auto g = GridObservable::sample_interval([&](double x) { return f(x); }, 512);
    for (int k = 3; k <= 7; ++k) {
      const double eps = std::ldexp(1.0, -k);
      const auto m = mollify(g, eps);
      GridObservable d = g;
      for (std::size_t i = 0; i < d.samples.size(); ++i) d.samples[i] -= m.samples[i];
      EXPECT_LE(lp_norm(d, 1.0), osc_p(g, eps, 1.0) + 1e-12);
      for (double alpha : {1.0 / 3.0, 0.5}) EXPECT_NO_THROW(holder_bound_of_mollified(g, eps, alpha));
    }
  }
  const auto g = GridObservable::sample_interval([](double x) { return x; }, 64);
  EXPECT_THROW(mollify(g, 0.3), DomainError);
}

TEST(Grid, SquareVariationOfFiberMap) {
  const auto p = default_params();
  auto G = [&](double x, double y) { return is_singular(x) ? p.c0() : eval_G(p, x, y); };
  // jump c0 - c1 = 1/2 at x = 0 plus 2 * int_0^(1/2) (1/2) r x^(r-1) dx = 1/32
  for (std::size_t n : {256, 512}) EXPECT_NEAR(var_square(GridObservable::sample_square(G, n)), 17.0 / 32.0, 1e-12);
  const auto g = GridObservable::sample_square(G, 128);
  EXPECT_NEAR(lip_y(g), std::pow(0.5, 5), 1e-12);
}

TEST(Grid, ProjectionOfSeparableFunction) {
  // int_{-1/2}^{1/2} (x + y^2) dy = x + 1/12
  const auto g = GridObservable::sample_square([](double x, double y) { return x + y * y; }, 401);
  const auto pi = project_pi(g);
  for (std::size_t i = 0; i < pi.n; i += 50) EXPECT_NEAR(pi.samples[i], pi.coord(i) + 1.0 / 12.0, 1e-5);
}

TEST(Grid, SquareOnlyAndIntervalOnlyOperations) {
  const auto sq = GridObservable::sample_square([](double x, double) { return x; }, 8);
  const auto iv = GridObservable::sample_interval([](double x) { return x; }, 8);
  EXPECT_THROW(holder_seminorm(sq, 0.5), DomainError);
  EXPECT_THROW(var_square(iv), DomainError);
}

TEST(NormReport, FlatJsonKeys) {
  const auto iv = GridObservable::sample_interval([](double x) { return x; }, 65);
  const auto j = to_json(compute_norm_report(iv));
  EXPECT_TRUE(j.contains("sup"));
  EXPECT_TRUE(j.contains("holder_0.5"));
  EXPECT_TRUE(j.contains("var_p_2"));
  EXPECT_TRUE(j.contains("var_pr_2_0.5"));
  EXPECT_FALSE(j.contains("var_square"));
  const auto sq = GridObservable::sample_square([](double x, double y) { return x * y; }, 33);
  const auto k = to_json(compute_norm_report(sq));
  EXPECT_TRUE(k.contains("var_square"));
  EXPECT_TRUE(k.contains("lip_y"));
  EXPECT_NEAR(k["lip_y"].get<double>(), 0.5, 1e-12);
}

TEST(NormGrowth, ConstantObservableStaysConstant) {
  const RovellaSkewMap F(default_params());
  const auto g = norm_growth_series([](double, double) { return 2.0; }, F, 3, 32);
  ASSERT_EQ(g.series.size(), 4u);
  for (double v : g.series) EXPECT_NEAR(v, 2.0, 1e-12);
  ASSERT_TRUE(g.fit.has_value());
  EXPECT_NEAR(g.fit->slope, 0.0, 1e-12);
  EXPECT_THROW(norm_growth_series([](double, double) { return 0.0; }, F, 31, 8), DomainError);
}
