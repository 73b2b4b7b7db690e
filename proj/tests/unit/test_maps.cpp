#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pidyn/gallery.hpp"
#include "pidyn/maps.hpp"
#include "support.hpp"

namespace pidyn {
namespace {

TEST(PiecewiseLinearMap, RejectsInvalidLayouts) {
  EXPECT_THROW(PiecewiseLinearMap({0.0}, {0.0}), std::invalid_argument);
  EXPECT_THROW(PiecewiseLinearMap({0.0, 1.0}, {0.0}), std::invalid_argument);
  EXPECT_THROW(PiecewiseLinearMap({0.1, 1.0}, {0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(PiecewiseLinearMap({0.0, 0.9}, {0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(PiecewiseLinearMap({0.0, 0.5, 0.5, 1.0}, {0, 0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(PiecewiseLinearMap({0.0, 1.0}, {0.0, 1.5}), std::invalid_argument);
  EXPECT_THROW(PiecewiseLinearMap({0.0, 1.0}, {-0.1, 0.5}), std::invalid_argument);
  EXPECT_THROW(PiecewiseLinearMap({0.0, 1.0}, {NAN, 0.5}), std::invalid_argument);
}

TEST(Eval, Examples) {
  EXPECT_DOUBLE_EQ(eval(example1_limit(), 0.6), 0.4);
  EXPECT_DOUBLE_EQ(eval(tent(), 0.25), 0.5);
  const auto f = remark3_map();
  EXPECT_EQ(eval(f, -0.3), eval(f, 0.0));
  EXPECT_EQ(eval(f, 1.7), eval(f, 1.0));
}

TEST(Eval, ClampedExtensionAndRangeOnRandomMaps) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> wide(-2.0, 3.0);
  for (int m = 0; m < 50; ++m) {
    const auto f = testing::random_map(rng);
    const std::vector<double> xs(f.breakpoints().begin(), f.breakpoints().end());
    const std::vector<double> ys(f.values().begin(), f.values().end());
    for (int i = 0; i < 200; ++i) {
      const double x = wide(rng);
      const double y = f(x);
      EXPECT_EQ(y, f(clamp_unit(x)));
      EXPECT_GE(y, 0.0);
      EXPECT_LE(y, 1.0);
      EXPECT_NEAR(y, testing::naive_eval(xs, ys, x), 1e-12);
    }
  }
}

TEST(Iterate, Examples) {
  // oracle: bisection on tau(x) - x over [1/2, 1]
  double lo = 0.5, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (1.0 - std::abs(2.0 * mid - 1.0) - mid > 0.0 ? lo : hi) = mid;
  }
  EXPECT_NEAR(iterate(tent(), lo, 5), 2.0 / 3.0, 1e-13);
  EXPECT_EQ(iterate(tent(), 0.3, 0), 0.3);
  EXPECT_EQ(iterate(tent(), 1.4, 0), 1.0);
  const auto f = example1_limit();
  EXPECT_EQ(iterate(f, 0.9, 2), f(f(0.9)));
  EXPECT_EQ(iterate(f, 0.9, 2), 1.0);
}

TEST(ComposePrefix, Examples) {
  const auto seq = example1_seq();
  EXPECT_DOUBLE_EQ(compose_prefix(seq, 0, 1, 1.0 / 16.0), 0.5);
  EXPECT_EQ(compose_prefix(seq, 0, 2, 1.0 / 16.0), 0.0);
  EXPECT_EQ(compose_prefix(seq, 3, 0, -1.0), 0.0);
  const auto c = MapSequence::constant(tent());
  for (std::uint64_t j = 0; j < 6; ++j) {
    EXPECT_EQ(compose_prefix(c, 4, j, 0.3), iterate(tent(), 0.3, j));
  }
}

TEST(ComposePrefix, MatchesStepwiseEvaluation) {
  const auto seq = example1_seq();
  for (double x : {0.0, 0.01, 0.03, 0.2, 0.6, 0.9}) {
    double y = x;
    for (std::uint64_t n = 2; n < 7; ++n) y = example1_map(n)(y);
    EXPECT_EQ(compose_prefix(seq, 2, 5, x), y);
  }
}

TEST(SupDistance, Examples) {
  const auto f = remark3_map();
  EXPECT_EQ(sup_distance(f, f), 0.0);
  for (std::uint64_t n = 0; n <= 10; ++n) {
    EXPECT_EQ(sup_distance(example1_map(n), example1_limit()), 1.0) << n;
  }
}

TEST(SupDistance, TentVersusTruncatedTent) {
  // g is the constant tau(tau(lambda)) on [0, tau(lambda)] and tau after it;
  // the largest gap is at x = 0 where tau = 0.
  const double lambda = kFeigenbaumLambda;
  const double t1 = 1.0 - std::abs(2.0 * lambda - 1.0);
  const double t2 = 1.0 - std::abs(2.0 * t1 - 1.0);
  EXPECT_NEAR(t1, 0.350184, 1e-12);
  EXPECT_NEAR(t2, 0.700368, 1e-12);
  EXPECT_NEAR(sup_distance(tent(), truncated_tent()), t2, 1e-15);
  // dense-grid oracle
  double grid = 0.0;
  const auto g = truncated_tent();
  for (int i = 0; i <= 100000; ++i) {
    const double x = i / 100000.0;
    grid = std::max(grid, std::abs(tent()(x) - g(x)));
  }
  EXPECT_NEAR(grid, t2, 1e-12);
}

TEST(SupDistance, MetricPropertiesOnRandomTriples) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 100; ++k) {
    const auto a = testing::random_map(rng);
    const auto b = testing::random_map(rng);
    const auto c = testing::random_map(rng);
    const double ab = sup_distance(a, b);
    EXPECT_EQ(ab, sup_distance(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_EQ(sup_distance(a, a), 0.0);
    EXPECT_LE(sup_distance(a, c), ab + sup_distance(b, c) + 1e-15);
  }
}

TEST(SupDistance, ExactDominatesGridWithinSlopeBound) {
  std::mt19937_64 rng(3);
  const int cells = 2000;
  const double h = 1.0 / cells;
  for (int k = 0; k < 100; ++k) {
    const auto a = testing::random_map(rng);
    const auto b = testing::random_map(rng);
    double grid = 0.0;
    for (int i = 0; i <= cells; ++i) grid = std::max(grid, std::abs(a(i * h) - b(i * h)));
    const double exact = sup_distance(a, b);
    EXPECT_GE(exact, grid - 1e-15);
    EXPECT_LE(exact - grid, (a.max_abs_slope() + b.max_abs_slope()) * h + 1e-12);
  }
}

TEST(SupDistance, ZeroIffEqualAtUnionBreakpoints) {
  const PiecewiseLinearMap a({0.0, 0.5, 1.0}, {0.0, 0.5, 1.0});
  EXPECT_EQ(sup_distance(a, PiecewiseLinearMap::identity()), 0.0);
  const PiecewiseLinearMap b({0.0, 0.25, 1.0}, {0.0, 0.26, 1.0});
  EXPECT_GT(sup_distance(a, b), 0.0);
}

TEST(Example1Sequence, PointwiseButNotUniformConvergence) {
  const auto f = example1_limit();
  for (double x : {0.01, 0.1, 0.3, 0.6, 0.9, 1.0}) {
    for (std::uint64_t n = 0; n < 40; ++n) {
      if (1.0 / (4.0 * std::ldexp(1.0, static_cast<int>(n))) < x) {
        EXPECT_EQ(example1_map(n)(x), f(x)) << "x=" << x << " n=" << n;
      }
    }
  }
  EXPECT_EQ(sup_distance(example1_map(30), f), 1.0);
}

TEST(TailShift, ShiftsGeneratorAndKeepsLimit) {
  const auto seq = example1_seq();
  EXPECT_EQ(*seq.tail_shift(0).at(3), *seq.at(3));
  const auto shifted = tail_shift(seq, 2);
  EXPECT_EQ(*shifted.at(0), example1_map(2));
  EXPECT_EQ(shifted.at(0)->breakpoints()[2], 1.0 / 16.0);
  EXPECT_EQ(shifted.at(0)->breakpoints()[1], 1.0 / 32.0);
  EXPECT_EQ(shifted.limit(), seq.limit());
  EXPECT_EQ(*shifted.tail_shift(3).at(1), example1_map(6));

  const auto c = MapSequence::constant(tent());
  EXPECT_EQ(*tail_shift(c, 17).at(4), tent());
  EXPECT_EQ(tail_shift(c, 17).kind(), SequenceKind::constant);
}

TEST(MapSequence, GeneratorIsDeterministic) {
  const auto seq = example1_seq();
  EXPECT_EQ(*seq.at(12), *seq.at(12));
  const auto w = seq.window(5, 3);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(*w[2], example1_map(7));
  EXPECT_EQ(example1_map(5000), example1_limit());
}

TEST(Image, ExactOnPiecewiseLinearMaps) {
  const auto t = tent();
  auto near = [](Interval a, Interval b) {
    return std::abs(a.lo - b.lo) < 1e-15 && std::abs(a.hi - b.hi) < 1e-15;
  };
  EXPECT_TRUE(near(t.image({0.2, 0.7}), {0.4, 1.0}));
  EXPECT_TRUE(near(t.image({0.6, 0.9}), {0.2, 0.8}));
  EXPECT_TRUE(near(t.image({-1.0, 0.1}), {0.0, 0.2}));
}

}  // namespace
}  // namespace pidyn
