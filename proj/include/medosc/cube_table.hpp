#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <vector>

#include "grid.hpp"
#include "median.hpp"

namespace medosc {

// One value per cube of a family. Memoizes the sup/inf structure of the maximal operators.
class CubeTable {
 public:
  CubeTable(CubeFamily family, std::vector<double> values) : family_(std::move(family)), values_(std::move(values)) {}

  const CubeFamily& family() const { return family_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  double at(const GridCube& q) const {
    auto i = family_.indexOf(q);
    if (!i) throw DomainError("cube not in table family");
    return values_[*i];
  }

  // per cell: max over family cubes containing it; 0 outside the root
  std::vector<double> supContaining() const {
    const Grid& g = family_.grid();
    const GridCube& root = family_.root();
    std::vector<double> out(g.size(), 0.0);
    std::vector<char> seen(g.size(), 0);
    auto bump = [&](std::size_t c, double v) {
      if (!seen[c] || v > out[c]) out[c] = v;
      seen[c] = 1;
    };
    if (g.dim() == 1 && family_.mode() == CubeMode::gridAligned) {
      int o = root.offset[0], S = root.side;
      for (int l = 0; l < S; ++l) {
        double running = -std::numeric_limits<double>::infinity();
        for (int r = S - 1; r >= l; --r) {
          running = std::max(running, values_[*family_.indexOf(GridCube{{o + l, 0}, r - l + 1})]);
          bump(std::size_t(o + r), running);
        }
      }
      return out;
    }
    family_.forEach([&](std::size_t i, const GridCube& q) {
      for (auto c : cells(g, q)) bump(c, values_[i]);
    });
    return out;
  }

  // value at a single cell, without building the full field
  double supContaining(std::size_t cell) const {
    double best = -std::numeric_limits<double>::infinity();
    family_.forEach([&](std::size_t i, const GridCube& q) {
      if (containsCell(family_.grid(), q, cell)) best = std::max(best, values_[i]);
    });
    return best;
  }

 private:
  CubeFamily family_;
  std::vector<double> values_;
};

// Table of stat(sorted values of f on Q) for every cube Q of the family.
// 1D grid-aligned families use an incremental sorted sweep per left endpoint.
template <class Stat>
CubeTable sortedStatTable(const GridFunction& f, const CubeFamily& fam, Stat&& stat) {
  std::vector<double> out(fam.size(), 0.0);
  const Grid& g = fam.grid();
  if (g.dim() == 1 && fam.mode() == CubeMode::gridAligned) {
    int o = fam.root().offset[0], S = fam.root().side;
    std::vector<double> sv;
    sv.reserve(S);
    for (int l = 0; l < S; ++l) {
      sv.clear();
      for (int r = l; r < S; ++r) {
        double x = f[std::size_t(o + r)];
        sv.insert(std::upper_bound(sv.begin(), sv.end(), x), x);
        out[*fam.indexOf(GridCube{{o + l, 0}, r - l + 1})] = stat(std::span<const double>(sv));
      }
    }
    return CubeTable(fam, std::move(out));
  }
  std::vector<double> sv;
  fam.forEach([&](std::size_t i, const GridCube& q) {
    sv.clear();
    for (auto c : cells(g, q)) sv.push_back(f[c]);
    std::sort(sv.begin(), sv.end());
    out[i] = stat(std::span<const double>(sv));
  });
  return CubeTable(fam, std::move(out));
}

// localOscillation(f, s, Q) for every Q in the family
inline CubeTable oscTable(const GridFunction& f, double s, const CubeFamily& fam) {
  requireS(s);
  return sortedStatTable(f, fam, [s](std::span<const double> v) { return oscillationSorted(v, s); });
}

inline CubeTable medianTable(const GridFunction& f, double t, const CubeFamily& fam) {
  requireT(t);
  return sortedStatTable(f, fam, [t](std::span<const double> v) { return medianSorted(v, t); });
}

inline CubeTable medianSharpTable(const GridFunction& f, double s, const CubeFamily& fam) {
  return sortedStatTable(f, fam, [s](std::span<const double> v) { return medianSharpSorted(v, s); });
}

// min of f over each cube
inline CubeTable minTable(const GridFunction& f, const CubeFamily& fam) {
  return sortedStatTable(f, fam, [](std::span<const double> v) { return v.front(); });
}

inline GridFunction fieldOf(const Grid& g, std::vector<double> v) { return GridFunction(g, std::move(v)); }

}  // namespace medosc
