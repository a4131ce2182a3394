#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <set>

#include "oracles.hpp"

using namespace medosc;

TEST(Grid, DyadicCellsHalving) {
  Grid g(1, 3);
  EXPECT_EQ(cells(g, DyadicCube{1, {1, 0}}), (std::vector<std::size_t>{4, 5, 6, 7}));
}

TEST(Grid, GridCubeContiguousRange) {
  Grid g(1, 3);
  EXPECT_EQ(cells(g, GridCube{{2, 0}, 3}), (std::vector<std::size_t>{2, 3, 4}));
}

TEST(Grid, RootCube2D) {
  Grid g(2, 1);
  EXPECT_EQ(cells(g, DyadicCube{}).size(), 4u);
}

TEST(Grid, Averages) {
  Grid g(1, 2);
  EXPECT_DOUBLE_EQ(average(GridFunction::constant(g, 3.5), rootCube(g)), 3.5);
  EXPECT_DOUBLE_EQ(average(GridFunction(g, {0, 0, 1, 1}), rootCube(g)), 0.5);
  EXPECT_DOUBLE_EQ(average(GridFunction(g, {1, 2, 3, 4}), GridCube{{1, 0}, 2}), 2.5);
}

TEST(Grid, EnumerationCounts) {
  Grid g(1, 2);
  EXPECT_EQ(enumerateCubes(g, CubeMode::dyadic).size(), 7u);
  EXPECT_EQ(enumerateCubes(g, CubeMode::gridAligned).size(), 10u);
  EXPECT_EQ(enumerateCubes(g, CubeMode::gridAligned, std::size_t(0)).size(), 4u);
  for (int L = 1; L <= 6; ++L) {
    Grid h(1, L);
    std::size_t n = h.size();
    EXPECT_EQ(enumerateCubes(h, CubeMode::gridAligned).size(), n * (n + 1) / 2);
  }
}

TEST(Grid, EnumerationMatchesDirectContainment) {
  Grid g(1, 4);
  for (std::size_t x = 0; x < g.size(); ++x) {
    auto got = enumerateCubes(g, CubeMode::gridAligned, x);
    EXPECT_EQ(got.size(), oracle::intervalsContaining(int(x), rootCube(g)).size());
    for (const auto& q : got) EXPECT_TRUE(containsCell(g, q, x));
  }
}

TEST(Grid, ChildrenPartitionParent) {
  for (int dim : {1, 2}) {
    Grid g(dim, 3);
    DyadicCube q{1, {1, dim == 2 ? 1 : 0}};
    std::multiset<std::size_t> all;
    double m = 0.0;
    for (int k = 0; k < (1 << dim); ++k) {
      auto c = q.child(k, dim);
      EXPECT_EQ(c.parent(), q);
      for (auto cell : cells(g, c)) all.insert(cell);
      m += measure(g, toGridCube(g, c));
    }
    auto pc = cells(g, q);
    EXPECT_EQ(std::vector<std::size_t>(all.begin(), all.end()), pc);
    EXPECT_EQ(m, measure(g, toGridCube(g, q)));
  }
}

TEST(Grid, ParentAverageIsMeanOfChildren) {
  Rng rng(7);
  Grid g(2, 3);
  GridFunction f(g, oracle::randomValues(rng, g.size()));
  DyadicCube q{1, {0, 1}};
  double s = 0.0;
  for (int k = 0; k < 4; ++k) s += average(f, q.child(k, 2));
  EXPECT_NEAR(average(f, q), s / 4.0, 1e-12);
}

TEST(Grid, RejectsBadInput) {
  EXPECT_THROW(Grid(3, 2), PreconditionError);
  Grid g(1, 2);
  EXPECT_THROW(GridFunction(g, {1, 2, 3}), ParseError);
  EXPECT_THROW(GridFunction(g, {1, 2, 3, std::nan("")}), ParseError);
  EXPECT_THROW(Weight(GridFunction(g, {1, -1, 0, 0})), PreconditionError);
}

TEST(GridIo, ParsesAndRejects) {
  auto f = gridFunctionFromJson(nlohmann::json::parse(R"({"dim":1,"level":2,"values":[0,0,1,1]})"));
  EXPECT_EQ(f.values(), (std::vector<double>{0, 0, 1, 1}));
  EXPECT_THROW(gridFunctionFromJson(nlohmann::json::parse(R"({"dim":1,"level":2,"values":[0,0,1]})")), ParseError);
  EXPECT_THROW(gridFunctionFromJson(nlohmann::json::parse(R"({"dim":1,"values":[0,0,1,1]})")), ParseError);
}

TEST(GridIo, RoundTrip) {
  Rng rng(11);
  Grid g(2, 3, Domain{{-2.0, 1.0}, 4.0});
  GridFunction f(g, oracle::randomValues(rng, g.size()));
  auto path = (std::filesystem::temp_directory_path() / "medosc_roundtrip.json").string();
  writeGridFunction(f, path);
  auto h = readGridFunction(path);
  std::remove(path.c_str());
  EXPECT_EQ(h.values(), f.values());
  EXPECT_EQ(h.grid().domain(), g.domain());
  EXPECT_THROW(readGridFunction("/nonexistent/medosc.json"), std::ios_base::failure);
}
