// discrete Hilbert transform of the indicator of [0,1/2) against log|x/(x-1/2)|
#include <cmath>
#include <cstdio>
#include <vector>

#include "medosc/medosc.hpp"

using namespace medosc;

int main() {
  for (int L : {8, 10, 12}) {
    Grid g(1, L, Domain{});
    std::vector<double> v(g.size(), 0.0);
    for (std::size_t c = 0; c < g.size() / 2; ++c) v[c] = 1.0;
    GridFunction f(g, v);
    auto Hf = apply(KernelOperator::hilbert(), f);
    double worst = 0.0, sum = 0.0, cross = 0.0;
    for (std::size_t c = 0; c < g.size(); ++c) {
      double x = g.center(c, 0);
      sum += Hf[c];
      cross += f[c] * Hf[c];
      if (std::fabs(x) < 1.0 / 16 || std::fabs(x - 0.5) < 1.0 / 16 || std::fabs(x - 1.0) < 1.0 / 16) continue;
      double exact = std::log(std::fabs(x / (x - 0.5)));
      worst = std::max(worst, std::fabs(Hf[c] - exact) / std::fabs(exact));
    }
    std::printf("N=%-5zu max rel err %.4f  sum Hf %.4f  sum f*Hf %.2e\n", g.size(), worst, sum, cross);
  }
}
