#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "cube_table.hpp"
#include "grid.hpp"
#include "median.hpp"
#include "young.hpp"

namespace medosc {

namespace detail {

inline void requireCellIn(const Grid& g, const GridCube& root, std::size_t x) {
  if (x >= g.size() || !containsCell(g, root, x)) throw DomainError("cell outside root cube");
}

// inf_c avg |v - c|^p over sorted values
inline double sharpDeviation(std::span<const double> v, double p) {
  std::size_t m = v.size();
  if (m == 0 || v.front() == v.back()) return 0.0;
  auto obj = [&](double c) {
    double s = 0.0;
    for (double x : v) s += std::pow(std::fabs(x - c), p);
    return s / double(m);
  };
  if (p == 1.0) {
    // f_Q centering, the Fefferman-Stein form
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= double(m);
    double s = 0.0;
    for (double x : v) s += std::fabs(x - mean);
    return s / double(m);
  }
  if (p < 1.0) {
    // concave between data points: the minimum sits on a data value
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (i && v[i] == v[i - 1]) continue;
      best = std::min(best, obj(v[i]));
    }
    return std::pow(best, 1.0 / p);
  }
  // convex in c: golden section on [min, max]
  double a = v.front(), b = v.back();
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
  double f1 = obj(c1), f2 = obj(c2);
  for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + std::fabs(a) + std::fabs(b)); ++it) {
    if (f1 <= f2) {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - gr * (b - a);
      f1 = obj(c1);
    } else {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + gr * (b - a);
      f2 = obj(c2);
    }
  }
  return std::pow(std::min({f1, f2, obj(0.5 * (a + b))}), 1.0 / p);
}

}  // namespace detail

// (avg_Q |f|^r)^{1/r} for every cube of the family
inline CubeTable powerMeanTable(const GridFunction& f, double r, const CubeFamily& fam) {
  if (!(r > 0.0)) throw PreconditionError("maximal order r must be positive");
  std::vector<double> pw(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) pw[i] = r == 1.0 ? std::fabs(f[i]) : std::pow(std::fabs(f[i]), r);
  CubeSums sums(f.grid(), pw);
  std::vector<double> out(fam.size());
  fam.forEach([&](std::size_t i, const GridCube& q) {
    double m = std::max(0.0, sums.mean(q));
    out[i] = r == 1.0 ? m : std::pow(m, 1.0 / r);
  });
  return CubeTable(fam, std::move(out));
}

// M_r f = M(|f|^r)^{1/r} on the cells of root (0 outside)
inline GridFunction hlMaximalField(const GridFunction& f, const GridCube& root, double r = 1.0,
                                   std::optional<CubeMode> mode = {}) {
  if (r < 1.0) throw PreconditionError("hlMaximal: r must be >= 1");
  CubeFamily fam(f.grid(), mode.value_or(defaultMode(f.grid())), root);
  return GridFunction(f.grid(), powerMeanTable(f, r, fam).supContaining());
}

inline double hlMaximal(const GridFunction& f, std::size_t x, const GridCube& root, double r = 1.0,
                        std::optional<CubeMode> mode = {}) {
  detail::requireCellIn(f.grid(), root, x);
  if (r < 1.0) throw PreconditionError("hlMaximal: r must be >= 1");
  CubeFamily fam(f.grid(), mode.value_or(defaultMode(f.grid())), root);
  return powerMeanTable(f, r, fam).supContaining(x);
}

inline CubeTable sharpTable(const GridFunction& f, double p, const CubeFamily& fam) {
  if (!(p > 0.0)) throw PreconditionError("sharpMaximal: p must be positive");
  return sortedStatTable(f, fam, [p](std::span<const double> v) { return detail::sharpDeviation(v, p); });
}

// M#_p f: sup over cubes of inf_c (avg |f - c|^p)^{1/p}; p = 1 centers at f_Q
inline GridFunction sharpMaximalField(const GridFunction& f, const GridCube& root, double p = 1.0,
                                      std::optional<CubeMode> mode = {}) {
  CubeFamily fam(f.grid(), mode.value_or(defaultMode(f.grid())), root);
  return GridFunction(f.grid(), sharpTable(f, p, fam).supContaining());
}

inline double sharpMaximal(const GridFunction& f, std::size_t x, const GridCube& root, double p = 1.0,
                           std::optional<CubeMode> mode = {}) {
  detail::requireCellIn(f.grid(), root, x);
  CubeFamily fam(f.grid(), mode.value_or(defaultMode(f.grid())), root);
  return sharpTable(f, p, fam).supContaining(x);
}

// M#_{0,s,Q0} f
inline GridFunction localSharpMaximalField(const GridFunction& f, const GridCube& q0, double s,
                                           std::optional<CubeMode> mode = {}) {
  CubeFamily fam(f.grid(), mode.value_or(defaultMode(f.grid())), q0);
  return GridFunction(f.grid(), oscTable(f, s, fam).supContaining());
}

inline double localSharpMaximal(const GridFunction& f, std::size_t x, const GridCube& q0, double s,
                                std::optional<CubeMode> mode = {}) {
  detail::requireCellIn(f.grid(), q0, x);
  CubeFamily fam(f.grid(), mode.value_or(defaultMode(f.grid())), q0);
  requireS(s);
  double best = 0.0;
  std::vector<double> sv;
  fam.forEach([&](std::size_t, const GridCube& q) {
    if (!containsCell(f.grid(), q, x)) return;
    sv.clear();
    for (auto c : cells(f.grid(), q)) sv.push_back(f[c]);
    std::sort(sv.begin(), sv.end());
    best = std::max(best, oscillationSorted(sv, s));
  });
  return best;
}

// m^{t,D}_{Q0} f: max |m_f(t,Q)| over dyadic Q in D(Q0) containing x
inline GridFunction dyadicMedianMaximalField(const GridFunction& f, const GridCube& q0, double t) {
  CubeFamily fam(f.grid(), CubeMode::dyadic, q0);
  auto tab = medianTable(f, t, fam);
  std::vector<double> a(tab.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::fabs(tab[i]);
  return GridFunction(f.grid(), CubeTable(fam, std::move(a)).supContaining());
}

inline double dyadicMedianMaximal(const GridFunction& f, std::size_t x, const GridCube& q0, double t) {
  detail::requireCellIn(f.grid(), q0, x);
  return dyadicMedianMaximalField(f, q0, t)[x];
}

// |Q|^alpha ||f||_{L^A(Q)} for every cube
inline CubeTable orliczTable(const GridFunction& f, const YoungFunction& A, double alpha, const CubeFamily& fam) {
  if (alpha < 0.0) throw PreconditionError("orliczMaximal: alpha must be >= 0");
  std::vector<double> out(fam.size());
  std::vector<double> x, mu;
  fam.forEach([&](std::size_t i, const GridCube& q) {
    auto cs = cells(f.grid(), q);
    x.resize(cs.size());
    mu.assign(cs.size(), 1.0 / double(cs.size()));
    for (std::size_t k = 0; k < cs.size(); ++k) x[k] = f[cs[k]];
    double nrm = luxemburg(x, mu, A);
    out[i] = alpha == 0.0 ? nrm : std::pow(measure(f.grid(), q), alpha) * nrm;
  });
  return CubeTable(fam, std::move(out));
}

inline GridFunction orliczMaximalField(const GridFunction& f, const GridCube& root, const YoungFunction& A,
                                       double alpha = 0.0, std::optional<CubeMode> mode = {}) {
  CubeFamily fam(f.grid(), mode.value_or(defaultMode(f.grid())), root);
  return GridFunction(f.grid(), orliczTable(f, A, alpha, fam).supContaining());
}

inline double orliczMaximal(const GridFunction& f, std::size_t x, const GridCube& root, const YoungFunction& A,
                            double alpha = 0.0, std::optional<CubeMode> mode = {}) {
  detail::requireCellIn(f.grid(), root, x);
  return orliczMaximalField(f, root, A, alpha, mode)[x];
}

// M^k f
inline GridFunction iteratedMaximalField(const GridFunction& f, const GridCube& root, int k,
                                         std::optional<CubeMode> mode = {}) {
  if (k < 1) throw PreconditionError("iteratedMaximal: k must be >= 1");
  GridFunction g = f;
  for (int i = 0; i < k; ++i) g = hlMaximalField(g, root, 1.0, mode);
  return g;
}

inline double iteratedMaximal(const GridFunction& f, std::size_t x, const GridCube& root, int k,
                              std::optional<CubeMode> mode = {}) {
  detail::requireCellIn(f.grid(), root, x);
  return iteratedMaximalField(f, root, k, mode)[x];
}

// sup over cubes Q containing x of inf_{y in Q} g(y)
inline GridFunction supInfField(const GridFunction& g, const GridCube& root, std::optional<CubeMode> mode = {}) {
  CubeFamily fam(g.grid(), mode.value_or(defaultMode(g.grid())), root);
  return GridFunction(g.grid(), minTable(g, fam).supContaining());
}

}  // namespace medosc
