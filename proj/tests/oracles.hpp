#pragma once

// Brute-force reference implementations, written straight from the definitions
// and deliberately independent of the sorted-rank fast paths in the library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "medosc/medosc.hpp"

namespace oracle {

using medosc::GridCube;
using medosc::GridFunction;

inline std::vector<double> valuesOn(const GridFunction& f, const GridCube& q) {
  std::vector<double> v;
  for (auto c : medosc::cells(f.grid(), q)) v.push_back(f[c]);
  return v;
}

// sup{M : |{f < M}| <= t|Q|}; the sup is attained at a value of f
inline double median(const std::vector<double>& v, double t) {
  double best = -std::numeric_limits<double>::infinity();
  for (double M : v) {
    std::size_t below = 0;
    for (double x : v) below += x < M;
    if (double(below) <= t * double(v.size()) + 1e-12) best = std::max(best, M);
  }
  return best;
}

// inf{alpha : |{|f - c| > alpha}| < s|Q| for some c}; optimal (c, alpha) is a pair midpoint
inline double oscillation(const std::vector<double>& v, double s) {
  double best = std::numeric_limits<double>::infinity();
  for (double a : v)
    for (double b : v) {
      double c = 0.5 * (a + b), alpha = 0.5 * std::fabs(a - b);
      std::size_t out = 0;
      for (double x : v) out += std::fabs(x - c) > alpha * (1 + 1e-12) + 1e-300;
      if (double(out) < s * double(v.size()) - 1e-12) best = std::min(best, alpha);
    }
  return best;
}

// inf_c m_{|f-c|}(1-s)
inline double medianSharp(const std::vector<double>& v, double s) {
  double best = std::numeric_limits<double>::infinity();
  for (double a : v)
    for (double b : v) {
      double c = 0.5 * (a + b);
      std::vector<double> d;
      for (double x : v) d.push_back(std::fabs(x - c));
      best = std::min(best, median(d, 1.0 - s));
    }
  return best;
}

inline std::vector<GridCube> intervalsContaining(int x, const GridCube& within) {
  std::vector<GridCube> out;
  for (int a = within.offset[0]; a <= x; ++a)
    for (int b = x + 1; b <= within.offset[0] + within.side; ++b) out.push_back({{a, 0}, b - a});
  return out;
}

inline double hlMaximal(const GridFunction& f, int x, double r) {
  double best = 0.0;
  for (const auto& q : intervalsContaining(x, medosc::rootCube(f.grid()))) {
    double s = 0.0;
    auto v = valuesOn(f, q);
    for (double y : v) s += std::pow(std::fabs(y), r);
    best = std::max(best, std::pow(s / double(v.size()), 1.0 / r));
  }
  return best;
}

inline double localSharp(const GridFunction& f, int x, double s) {
  double best = 0.0;
  for (const auto& q : intervalsContaining(x, medosc::rootCube(f.grid())))
    best = std::max(best, oscillation(valuesOn(f, q), s));
  return best;
}

inline std::vector<double> randomValues(medosc::Rng& rng, std::size_t n, double lo = -5.0, double hi = 5.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

// small integer values make ties common
inline std::vector<double> randomLevels(medosc::Rng& rng, std::size_t n, int levels = 4) {
  std::vector<double> v(n);
  for (auto& x : v) x = double(rng.below(levels));
  return v;
}

inline GridFunction binary(const medosc::Grid& g, unsigned bits) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = double((bits >> i) & 1u);
  return GridFunction(g, v);
}

}  // namespace oracle
