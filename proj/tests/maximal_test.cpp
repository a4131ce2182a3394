#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace medosc;

TEST(Maximal, HardyLittlewoodWorkedValue) {
  Grid g(1, 2);
  GridFunction f(g, {1, 0, 0, 0});
  EXPECT_DOUBLE_EQ(hlMaximal(f, 3, rootCube(g), 1.0, CubeMode::gridAligned), 0.25);
  EXPECT_DOUBLE_EQ(hlMaximal(GridFunction::constant(g, -2.0), 1, rootCube(g)), 2.0);
}

TEST(Maximal, SharpWorkedValue) {
  Grid g(1, 2);
  GridFunction f(g, {0, 0, 1, 1});
  // singletons and pairs inside a half contribute 0; {1,2} contributes 1/2 too
  for (std::size_t x = 0; x < 4; ++x) EXPECT_DOUBLE_EQ(sharpMaximal(f, x, rootCube(g), 1.0), 0.5);
  EXPECT_DOUBLE_EQ(sharpMaximal(GridFunction::constant(g, 3.0), 2, rootCube(g), 1.0), 0.0);
}

TEST(Maximal, LocalSharpWorkedValues) {
  Grid g(1, 2);
  EXPECT_DOUBLE_EQ(localSharpMaximal(GridFunction(g, {0, 0, 1, 1}), 0, rootCube(g), 0.25), 0.5);
  EXPECT_DOUBLE_EQ(localSharpMaximal(GridFunction::constant(g, 4.0), 0, rootCube(g), 0.25), 0.0);

  Grid h(1, 4);
  std::vector<double> v(16, 0.0);
  v[0] = 10.0;
  auto field = localSharpMaximalField(GridFunction(h, v), rootCube(h), 0.125, CubeMode::gridAligned);
  EXPECT_DOUBLE_EQ(field[0], 5.0);
  for (std::size_t x = 9; x < 16; ++x) EXPECT_EQ(field[x], 0.0) << x;
}

TEST(Maximal, DyadicMedianWorkedValues) {
  Grid g(1, 2);
  GridFunction f(g, {10, 0, 0, 0});
  EXPECT_EQ(dyadicMedianMaximal(f, 0, rootCube(g), 0.5), 10.0);
  EXPECT_EQ(dyadicMedianMaximal(f, 2, rootCube(g), 0.5), 0.0);
  EXPECT_EQ(dyadicMedianMaximal(GridFunction::constant(g, -3.0), 1, rootCube(g), 0.5), 3.0);
}

TEST(Maximal, OrliczPowerIsMr) {
  Rng rng(3);
  Grid g(1, 5);
  GridFunction f(g, oracle::randomValues(rng, g.size()));
  for (double p : {1.0, 1.5, 3.0}) {
    auto a = orliczMaximalField(f, rootCube(g), YoungFunction::power(p), 0.0);
    auto b = hlMaximalField(f, rootCube(g), p);
    for (std::size_t x = 0; x < g.size(); ++x) EXPECT_NEAR(a[x], b[x], 1e-9 * std::max(1.0, b[x]));
  }
}

TEST(Maximal, OrliczOfIndicator) {
  Grid g(1, 3);
  auto one = GridFunction::constant(g, 1.0);
  for (auto A : {YoungFunction::power(2.0), YoungFunction::powerLog(1.0, 1.0), YoungFunction::power(1.5, 3.0)}) {
    double expect = 1.0 / A.inverse(1.0);
    for (std::size_t x = 0; x < g.size(); ++x)
      EXPECT_NEAR(orliczMaximal(one, x, rootCube(g), A, 0.0), expect, 1e-9);
  }
}

TEST(Maximal, IteratedConstantAndMonotone) {
  Grid g(1, 4);
  auto c = GridFunction::constant(g, 2.5);
  for (int k = 1; k <= 3; ++k) EXPECT_NEAR(iteratedMaximal(c, 5, rootCube(g), k), 2.5, 1e-12);
  Rng rng(8);
  GridFunction f(g, oracle::randomValues(rng, g.size(), 0, 1));
  auto m1 = iteratedMaximalField(f, rootCube(g), 1), m2 = iteratedMaximalField(f, rootCube(g), 2);
  for (std::size_t x = 0; x < g.size(); ++x) EXPECT_GE(m2[x] + 1e-12, m1[x]);
}

TEST(Maximal, RejectsBadParameters) {
  Grid g(1, 2);
  auto f = GridFunction::constant(g, 1.0);
  EXPECT_THROW(hlMaximal(f, 0, rootCube(g), 0.5), PreconditionError);
  EXPECT_THROW(hlMaximal(f, 9, rootCube(g), 1.0), DomainError);
  EXPECT_THROW(iteratedMaximal(f, 0, rootCube(g), 0), PreconditionError);
}

class MaximalProperty : public ::testing::TestWithParam<int> {};

TEST_P(MaximalProperty, AgainstBruteForce) {
  Rng rng(streamSeed(4321, GetParam()));
  Grid g(1, 4);
  GridFunction f(g, GetParam() % 2 ? oracle::randomValues(rng, g.size()) : oracle::randomLevels(rng, g.size()));
  double r = 1.0 + 2.0 * rng.uniform(), s = rng.uniform(0.05, 0.5);
  auto hl = hlMaximalField(f, rootCube(g), r, CubeMode::gridAligned);
  auto ls = localSharpMaximalField(f, rootCube(g), s, CubeMode::gridAligned);
  for (int x = 0; x < g.n(); ++x) {
    EXPECT_NEAR(hl[x], oracle::hlMaximal(f, x, r), 1e-9 * std::max(1.0, hl[x]));
    EXPECT_EQ(ls[x], oracle::localSharp(f, x, s));
  }
}

TEST_P(MaximalProperty, Invariants) {
  Rng rng(streamSeed(777, GetParam()));
  Grid g(1, 6);
  GridFunction f(g, oracle::randomValues(rng, g.size()));
  GridFunction h(g, oracle::randomValues(rng, g.size()));
  std::vector<double> sum(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) sum[i] = f[i] + h[i];
  GridFunction fh(g, sum);
  auto root = rootCube(g);
  double s = rng.uniform(0.05, 0.4);
  auto M = hlMaximalField(f, root, 1.0, CubeMode::gridAligned);
  auto Md = hlMaximalField(f, root, 1.0, CubeMode::dyadic);
  auto M2 = hlMaximalField(f, root, 2.0, CubeMode::gridAligned);
  auto Mh = hlMaximalField(h, root, 1.0, CubeMode::gridAligned);
  auto Mfh = hlMaximalField(fh, root, 1.0, CubeMode::gridAligned);
  auto S = localSharpMaximalField(f, root, s, CubeMode::gridAligned);
  auto Sbig = localSharpMaximalField(f, root, std::min(0.5, s + 0.1), CubeMode::gridAligned);
  auto Sd = localSharpMaximalField(f, root, s, CubeMode::dyadic);
  auto LL = orliczMaximalField(f, root, YoungFunction::powerLog(1.0, 1.0), 0.0, CubeMode::gridAligned);
  for (std::size_t x = 0; x < g.size(); ++x) {
    EXPECT_GE(M[x] + 1e-12, std::fabs(f[x]));
    EXPECT_LE(Md[x], M[x] + 1e-12);
    EXPECT_GE(M2[x] + 1e-12, M[x]);
    EXPECT_LE(Mfh[x], M[x] + Mh[x] + 1e-12);
    EXPECT_LE(S[x], 2.0 * M[x] + 1e-12);
    EXPECT_LE(Sbig[x], S[x]);
    EXPECT_LE(Sd[x], S[x]);
    EXPECT_GE(LL[x], 0.0);
  }
}

TEST_P(MaximalProperty, SharpPowerBracket) {
  // M#(|f|^p)^{1/p} <= M#_p f for 0 < p < 1
  Rng rng(streamSeed(31, GetParam()));
  Grid g(1, 4);
  GridFunction f(g, oracle::randomValues(rng, g.size()));
  double p = rng.uniform(0.2, 0.9);
  std::vector<double> fp(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) fp[i] = std::pow(std::fabs(f[i]), p);
  auto lhs = sharpMaximalField(GridFunction(g, fp), rootCube(g), 1.0, CubeMode::gridAligned);
  auto rhs = sharpMaximalField(f, rootCube(g), p, CubeMode::gridAligned);
  for (std::size_t x = 0; x < g.size(); ++x) EXPECT_LE(std::pow(lhs[x], 1.0 / p), rhs[x] * (1 + 1e-6) + 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Seeds, MaximalProperty, ::testing::Range(0, 16));

TEST(Maximal, IteratedComparableToLLogL) {
  // M^2 f against M_{L log L} f: the ratio band does not drift with refinement
  std::vector<double> hi;
  for (int L : {5, 6, 7}) {
    Grid g(1, L);
    double worst = 0.0;
    for (int i = 0; i < 6; ++i) {
      auto f = harness::generateFunction(harness::parseGenerator(i % 2 ? "spike" : "random-uniform"), g, 17, i);
      auto a = iteratedMaximalField(f, rootCube(g), 2, CubeMode::dyadic);
      auto b = orliczMaximalField(f, rootCube(g), YoungFunction::powerLog(1.0, 1.0), 0.0, CubeMode::dyadic);
      for (std::size_t x = 0; x < g.size(); ++x)
        if (b[x] > 0) worst = std::max(worst, a[x] / b[x]);
    }
    hi.push_back(worst);
  }
  EXPECT_LT(classifyTrend(hi).maxGrowth, 1.25);
}
