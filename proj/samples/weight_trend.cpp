// A_2 constants of |x-1/2|^a on refining grids, classified by growth per level
#include <cmath>
#include <cstdio>
#include <vector>

#include "medosc/medosc.hpp"

using namespace medosc;

int main() {
  for (double a : {-1.5, -0.5, 0.0, 0.5, 1.5}) {
    std::vector<double> sups;
    std::printf("a=%5.2f:", a);
    for (int L = 5; L <= 8; ++L) {
      Grid g(1, L, Domain{});
      Weight w(harness::parseWeight("power:" + std::to_string(a), g));
      auto c = apConstant(w, 2.0, std::nullopt, CubeMode::gridAligned);
      sups.push_back(c.value);
      std::printf(" %10.4f", c.value);
    }
    auto tr = classifyTrend(sups);
    std::printf("  max growth %.3f  %s\n", tr.maxGrowth, toString(tr.cls).c_str());
  }
}
