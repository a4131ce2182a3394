// decomposes the 16-cell spike and prints the selected cubes and the bound at each cell
#include <cstdio>
#include <string>
#include <vector>

#include "medosc/medosc.hpp"

using namespace medosc;

int main(int argc, char** argv) {
  GridFunction f = argc > 1 ? readGridFunction(argv[1]) : [] {
    Grid g(1, 4, Domain{});
    std::vector<double> v(g.size(), 0.0);
    v[0] = 10.0;
    return GridFunction(g, v);
  }();

  auto r = decompose(f, DyadicCube{}, 0.5, 0.125);
  std::printf("rootMedian %g, %zu selected cube(s), halt: %s\n", r.rootMedian, r.selectedCount(),
              toString(r.haltReason).c_str());
  for (std::size_t v = 0; v < r.generations.size(); ++v)
    for (const auto& sc : r.generations[v]) {
      auto q = toGridCube(f.grid(), sc.cube);
      std::printf("  gen %zu: cells [%d,%d)  a=%g  threshold=%g\n", v + 1, q.offset[0], q.offset[0] + q.side, sc.a,
                  sc.threshold);
    }

  auto pw = verifyPointwiseBound(f, r);
  std::printf("cell  |f-m|  majorant\n");
  for (std::size_t c = 0; c < f.size(); ++c)
    std::printf("%4zu  %5g  %8g\n", c, std::fabs(f[c] - r.rootMedian), pw.majorant[c]);
  std::printf("pointwise bound %s\n", pw.ok() ? "holds" : "VIOLATED");
  return pw.ok() ? 0 : 1;
}
