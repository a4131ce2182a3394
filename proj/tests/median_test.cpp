#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace medosc;

namespace {

GridFunction on4(std::vector<double> v) { return GridFunction(Grid(1, 2), std::move(v)); }

}  // namespace

TEST(Median, WorkedValues) {
  auto q = rootCube(Grid(1, 2));
  EXPECT_EQ(maximalMedian(on4({1, 2, 3, 4}), 0.5, q), 3.0);
  EXPECT_EQ(maximalMedian(on4({5, 1, 1, 1}), 0.75, q), 5.0);
  EXPECT_EQ(maximalMedian(on4({2, 2, 2, 2}), 0.3, q), 2.0);
}

TEST(Oscillation, WorkedValues) {
  auto q = rootCube(Grid(1, 2));
  EXPECT_EQ(localOscillation(on4({0, 0, 0, 10}), 0.5, q), 0.0);
  EXPECT_EQ(localOscillation(on4({0, 0, 0, 10}), 0.25, q), 5.0);
  EXPECT_EQ(localOscillation(on4({3, 3, 3, 3}), 0.25, q), 0.0);
}

TEST(MedianSharp, WorkedValues) {
  Grid g(1, 1);
  EXPECT_EQ(medianSharp(GridFunction(g, {0, 10}), 0.25, rootCube(g)), 5.0);
  EXPECT_EQ(medianSharp(GridFunction(g, {4, 4}), 0.25, rootCube(g)), 0.0);
}

TEST(MedianMeanGap, WorkedValues) {
  auto q = rootCube(Grid(1, 2));
  auto r = medianMeanGap(on4({0, 0, 1, 1}), 0.5, q);
  EXPECT_DOUBLE_EQ(r.gap, 0.5);
  EXPECT_DOUBLE_EQ(r.meanOsc, 0.5);
  auto c = medianMeanGap(on4({7, 7, 7, 7}), 0.5, q);
  EXPECT_EQ(c.gap, 0.0);
  EXPECT_EQ(c.meanOsc, 0.0);
}

TEST(ParentMedianBound, WorkedValue) {
  auto [m, mp] = parentMedianBound(on4({10, 0, 0, 0}), 0.5, DyadicCube{1, {0, 0}});
  EXPECT_EQ(m, 10.0);
  EXPECT_EQ(mp, 10.0);
}

TEST(Median, RejectsBadParameters) {
  auto f = on4({1, 2, 3, 4});
  auto q = rootCube(f.grid());
  EXPECT_THROW(maximalMedian(f, 1.0, q), PreconditionError);
  EXPECT_THROW(localOscillation(f, 0.0, q), PreconditionError);
  EXPECT_THROW(medianSharp(f, 0.5, q), PreconditionError);
}

// every cube of every binary function at L=3 against the brute-force definitions
TEST(MedianOracle, ExhaustiveBinary) {
  Grid g(1, 3);
  auto cubes = enumerateCubes(g, CubeMode::gridAligned);
  for (unsigned bits = 0; bits < 256; ++bits) {
    auto f = oracle::binary(g, bits);
    for (const auto& q : cubes) {
      auto v = oracle::valuesOn(f, q);
      for (double t : {0.25, 0.5, 0.6, 0.75})
        ASSERT_EQ(maximalMedian(f, t, q), oracle::median(v, t)) << bits;
      for (double s : {0.125, 0.25, 0.375, 0.5})
        ASSERT_EQ(localOscillation(f, s, q), oracle::oscillation(v, s)) << bits;
      for (double s : {0.125, 0.25, 0.4})
        ASSERT_EQ(medianSharp(f, s, q), oracle::medianSharp(v, s)) << bits;
    }
    for (int l = 1; l <= 3; ++l)
      for (int i = 0; i < (1 << l); ++i) {
        auto [m, mp] = parentMedianBound(f, 0.5, DyadicCube{l, {i, 0}});
        ASSERT_LE(m, mp);
      }
  }
}

class MedianProperty : public ::testing::TestWithParam<int> {};

TEST_P(MedianProperty, RandomAgainstOracle) {
  Rng rng(streamSeed(1234, GetParam()));
  Grid g(1, 4);
  bool ties = GetParam() % 2 == 0;
  GridFunction f(g, ties ? oracle::randomLevels(rng, g.size()) : oracle::randomValues(rng, g.size()));
  for (const auto& q : enumerateCubes(g, CubeMode::gridAligned)) {
    auto v = oracle::valuesOn(f, q);
    double t = rng.uniform(0.05, 0.95), s = rng.uniform(0.01, 0.49);
    ASSERT_EQ(maximalMedian(f, t, q), oracle::median(v, t));
    ASSERT_EQ(localOscillation(f, s, q), oracle::oscillation(v, s));
    double ref = oracle::medianSharp(v, s);
    if (ties)
      ASSERT_EQ(medianSharp(f, s, q), ref);
    else
      ASSERT_NEAR(medianSharp(f, s, q), ref, 1e-12 * std::max(1.0, ref));
  }
}

TEST_P(MedianProperty, Invariants) {
  Rng rng(streamSeed(99, GetParam()));
  Grid g(1, 5);
  auto vals = GetParam() % 2 ? oracle::randomValues(rng, g.size()) : oracle::randomLevels(rng, g.size(), 3);
  GridFunction f(g, vals);
  double c = rng.uniform(-3, 3), k = rng.uniform(0.1, 4);
  std::vector<double> shifted(vals), scaled(vals), absv(vals);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    shifted[i] += c;
    scaled[i] *= k;
    absv[i] = std::fabs(absv[i]);
  }
  GridFunction fs(g, shifted), fk(g, scaled), fa(g, absv);
  for (int trial = 0; trial < 40; ++trial) {
    int side = 1 + int(rng.below(g.n()));
    GridCube q{{int(rng.below(g.n() - side + 1)), 0}, side};
    double t = rng.uniform(0.05, 0.95), t2 = rng.uniform(t, 0.99);
    double s = rng.uniform(0.02, 0.45), s2 = rng.uniform(s, 0.5);
    double m = maximalMedian(f, t, q);
    EXPECT_DOUBLE_EQ(maximalMedian(fs, t, q), m + c);
    EXPECT_DOUBLE_EQ(maximalMedian(fk, t, q), k * m);
    EXPECT_LE(m, maximalMedian(f, t2, q));
    auto v = oracle::valuesOn(f, q);
    EXPECT_NE(std::find(v.begin(), v.end(), m), v.end());
    double w = localOscillation(f, s, q);
    EXPECT_GE(w, localOscillation(f, s2, q));
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    EXPECT_LE(w, (*hi - *lo) / 2.0);
    double th = rng.uniform(0.5, 0.95);
    EXPECT_LE(std::fabs(maximalMedian(f, th, q)), maximalMedian(fa, th, q));
    // m#_f(1-s) <= m_{|f - m_f(1-s)|}(1-s) <= 2 m#_f(1-s)
    double ss = std::min(s, 0.45);
    double sharp = medianSharp(f, ss, q);
    double mid = maximalMedian(f, 1.0 - ss, q);
    std::vector<double> dev;
    for (auto cell : cells(g, q)) dev.push_back(std::fabs(f[cell] - mid));
    double centered = oracle::median(dev, 1.0 - ss);
    EXPECT_LE(sharp, centered + 1e-12);
    EXPECT_LE(centered, 2.0 * sharp + 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, MedianProperty, ::testing::Range(0, 24));

TEST(MedianMeanGap, BoundedOnRandomCorpus) {
  Rng rng(5);
  Grid g(1, 6);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    GridFunction f(g, oracle::randomValues(rng, g.size()));
    int side = 2 + int(rng.below(g.n() - 1));
    GridCube q{{int(rng.below(g.n() - side + 1)), 0}, side};
    auto r = medianMeanGap(f, 0.5, q);
    if (r.meanOsc > 0) worst = std::max(worst, r.gap / r.meanOsc);
  }
  EXPECT_TRUE(std::isfinite(worst));
  EXPECT_LT(worst, 4.0);
}
