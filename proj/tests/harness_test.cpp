#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace medosc;
using namespace medosc::harness;

TEST(Corpus, BinaryExhaustiveIsComplete) {
  Grid g(1, 3);
  auto cs = generateCorpus("binary-exhaustive", g, 1, 50);
  ASSERT_EQ(cs.size(), 256u);
  std::set<std::vector<double>> seen;
  for (const auto& c : cs) seen.insert(c.f.values());
  EXPECT_EQ(seen.size(), 256u);
  EXPECT_THROW(generateCorpus("binary-exhaustive", Grid(1, 5), 1, 50), ConfigError);
}

TEST(Corpus, SpikeFixture) {
  auto f = generateFunction(parseGenerator("spike:10:0"), Grid(1, 4), 0, 0);
  std::vector<double> expect(16, 0.0);
  expect[0] = 10.0;
  EXPECT_EQ(f.values(), expect);
}

TEST(Corpus, SeededAndHashed) {
  Grid g(1, 6);
  auto a = generateCorpus("random-uniform,trig,step", g, 42, 9);
  auto b = generateCorpus("random-uniform,trig,step", g, 42, 9);
  auto c = generateCorpus("random-uniform,trig,step", g, 43, 9);
  ASSERT_EQ(a.size(), 9u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(inputHash(a[i].f), inputHash(b[i].f));
    EXPECT_EQ(inputHash(a[i].f).size(), 16u);
  }
  EXPECT_NE(inputHash(a[0].f), inputHash(c[0].f));
  EXPECT_THROW(parseGenerator("sawtooth"), ConfigError);
  EXPECT_THROW(parseWeight("power:x", g), ConfigError);
}

TEST(Report, RatiosAndCsv) {
  bool zz = false;
  EXPECT_EQ(safeRatio(0.0, 0.0, &zz), 0.0);
  EXPECT_TRUE(zz);
  EXPECT_TRUE(std::isinf(safeRatio(1.0, 0.0, &zz)));
  EXPECT_FALSE(zz);
  EXPECT_EQ(safeRatio(1.0, 4.0), 0.25);
  EXPECT_EQ(fmt17(0.1), "0.10000000000000001");
  EXPECT_EQ(fmt17(std::numeric_limits<double>::infinity()), "inf");

  VerificationReport r;
  r.suite = "x";
  r.cases.push_back({6, 3, "trig", "h", 1.0, 0.0, std::numeric_limits<double>::infinity(), false, {}});
  r.cases.push_back({7, 4, "step", "h", 0.5, 2.0, 0.25, false, {}});
  EXPECT_EQ(toCsv(r), "suite,level,case_id,generator,lhs,rhs,ratio\nx,6,3,trig,1,0,inf\nx,7,4,step,0.5,2,0.25\n");
  auto back = reportFromJson(nlohmann::json::parse(toJson(r).dump()));
  EXPECT_EQ(toCsv(back), toCsv(r));
  EXPECT_THROW(reportFromJson(nlohmann::json::parse(R"({"suite":"x"})")), ParseError);
}

TEST(Suites, UnknownIdsAndParams) {
  SuiteConfig cfg;
  cfg.suite = "nosuch";
  EXPECT_THROW(runSuite(cfg), ConfigError);
  cfg.suite = "thm2.1";
  cfg.params = {{"bogus", 1}};
  EXPECT_THROW(runSuite(cfg), ConfigError);
  for (const auto& id : suiteIds()) EXPECT_NO_THROW(findSuite(id));
}

TEST(Suites, ExhaustiveDecomposition) {
  SuiteConfig cfg;
  cfg.suite = "thm2.1";
  cfg.levels = {3};
  cfg.corpus = "binary-exhaustive";
  auto r = runSuite(cfg);
  EXPECT_TRUE(r.exact);
  EXPECT_TRUE(r.pass);
  ASSERT_EQ(r.cases.size(), 256u);
  for (const auto& c : r.cases) {
    EXPECT_TRUE(c.violations.empty());
    EXPECT_LE(c.lhs, 0.25);
  }
}

TEST(Suites, HypothesisGateRefuses) {
  SuiteConfig cfg;
  cfg.suite = "thm5.4";
  cfg.levels = {6};
  cfg.cases = 2;
  cfg.params = {{"s", 0.2}};
  EXPECT_THROW(runSuite(cfg), ConfigError);
}

TEST(Suites, ApNegativeControl) {
  SuiteConfig cfg;
  cfg.suite = "thm5.3";
  cfg.cases = 10;
  cfg.params = {{"weight", "power:1.5"}, {"p", 2}};
  auto r = runSuite(cfg);
  EXPECT_EQ(r.expectation, "fail");
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.verdictNote(), "FAIL-as-expected");
  for (std::size_t i = 1; i < r.levels.size(); ++i) EXPECT_GT(r.levels[i].supRatio, r.levels[i - 1].supRatio);
}

class SuiteDeterminism : public ::testing::TestWithParam<std::string> {};

TEST_P(SuiteDeterminism, ThreadCountIndependent) {
  SuiteConfig cfg;
  cfg.suite = GetParam();
  cfg.cases = 6;
  auto def = findSuite(cfg.suite);
  cfg.levels = {def.levels.front()};
  cfg.threads = 1;
  auto one = toCsv(runSuite(cfg));
  cfg.threads = 4;
  auto four = runSuite(cfg);
  EXPECT_EQ(one, toCsv(four));
  EXPECT_EQ(four.cases.size(), 6u);
}

INSTANTIATE_TEST_SUITE_P(Fast, SuiteDeterminism,
                         ::testing::Values("thm3.1", "thm4.1", "thm5.2", "thm5.3", "thm6.4", "ineq1.1", "ineq1.4",
                                           "ineq1.9", "ineq1.11"),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (auto& ch : s)
                             if (ch == '.') ch = '_';
                           return s;
                         });

TEST(Parallel, ResultsByIndex) {
  std::vector<int> out(1000, -1);
  parallelFor(out.size(), 7, [&](std::size_t i) { out[i] = int(i * i % 97); });
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], int(i * i % 97));
}
