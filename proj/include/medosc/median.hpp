#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "grid.hpp"

namespace medosc {

namespace detail {

// guards t*m against representation error when t*m is meant to be an integer
constexpr double kCountEps = 1e-9;

inline std::vector<double> sortedValues(const GridFunction& f, const GridCube& q) {
  std::vector<double> v;
  auto cs = cells(f.grid(), q);
  v.reserve(cs.size());
  for (auto c : cs) v.push_back(f[c]);
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace detail

// 0-based position of the maximal t-median in a sorted list of m values: floor(t*m)
inline std::size_t medianRank(double t, std::size_t m) {
  auto k = std::size_t(std::floor(t * double(m) + detail::kCountEps));
  return std::min(k, m - 1);
}

// number of values that may be discarded: largest integer strictly below s*m
inline std::size_t dropCount(double s, std::size_t m) {
  double sm = s * double(m);
  double c = std::ceil(sm - detail::kCountEps);
  return c <= 0.0 ? 0 : std::size_t(c) - 1;
}

inline double medianSorted(std::span<const double> v, double t) { return v[medianRank(t, v.size())]; }

// min half-width of a window of w consecutive sorted values
inline double minWindowHalfWidth(std::span<const double> v, std::size_t w) {
  std::size_t m = v.size();
  if (w <= 1) return 0.0;
  double best = v[m - 1] - v[0];
  for (std::size_t i = 0; i + w <= m; ++i) best = std::min(best, v[i + w - 1] - v[i]);
  return best / 2.0;
}

inline double oscillationSorted(std::span<const double> v, double s) {
  std::size_t m = v.size();
  return minWindowHalfWidth(v, m - dropCount(s, m));
}

inline double medianSharpSorted(std::span<const double> v, double s) {
  std::size_t m = v.size();
  std::size_t w = std::min(m, medianRank(1.0 - s, m) + 1);
  return minWindowHalfWidth(v, w);
}

inline void requireT(double t) {
  if (!(t > 0.0 && t < 1.0)) throw PreconditionError("median parameter t must lie in (0,1)");
}
inline void requireS(double s) {
  if (!(s > 0.0 && s <= 0.5)) throw PreconditionError("oscillation parameter s must lie in (0,1/2]");
}

inline double maximalMedian(const GridFunction& f, double t, const GridCube& q) {
  requireT(t);
  auto v = detail::sortedValues(f, q);
  return medianSorted(v, t);
}
inline double maximalMedian(const GridFunction& f, double t, const DyadicCube& q) {
  return maximalMedian(f, t, toGridCube(f.grid(), q));
}

inline double localOscillation(const GridFunction& f, double s, const GridCube& q) {
  requireS(s);
  auto v = detail::sortedValues(f, q);
  return oscillationSorted(v, s);
}
inline double localOscillation(const GridFunction& f, double s, const DyadicCube& q) {
  return localOscillation(f, s, toGridCube(f.grid(), q));
}

// m#_f(1-s, Q) = inf_c m_{|f-c|}(1-s, Q)
inline double medianSharp(const GridFunction& f, double s, const GridCube& q) {
  if (!(s > 0.0 && s < 0.5)) throw PreconditionError("medianSharp: s must lie in (0,1/2)");
  auto v = detail::sortedValues(f, q);
  return medianSharpSorted(v, s);
}
inline double medianSharp(const GridFunction& f, double s, const DyadicCube& q) {
  return medianSharp(f, s, toGridCube(f.grid(), q));
}

struct MedianMeanGap {
  double gap = 0.0;      // |m_f(t,Q) - f_Q|
  double meanOsc = 0.0;  // avg |f - f_Q|
};

inline MedianMeanGap medianMeanGap(const GridFunction& f, double t, const GridCube& q) {
  if (!(t >= 0.5 && t < 1.0)) throw PreconditionError("medianMeanGap: t must lie in [1/2,1)");
  auto v = detail::sortedValues(f, q);
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  double osc = 0.0;
  for (double x : v) osc += std::fabs(x - mean);
  return {std::fabs(medianSorted(v, t) - mean), osc / double(v.size())};
}

// (m_f(t,Q), m_f(1-(1-t)/2^dim, parent(Q)))
inline std::pair<double, double> parentMedianBound(const GridFunction& f, double t, const DyadicCube& q) {
  if (q.level == 0) throw PreconditionError("parentMedianBound: root cube has no parent");
  if (!(t >= 0.5 && t < 1.0)) throw PreconditionError("parentMedianBound: t must lie in [1/2,1)");
  double tp = 1.0 - (1.0 - t) / double(1 << f.grid().dim());
  return {maximalMedian(f, t, q), maximalMedian(f, tp, q.parent())};
}

}  // namespace medosc
