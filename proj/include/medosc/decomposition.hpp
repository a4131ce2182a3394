#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cube_table.hpp"
#include "grid.hpp"
#include "maximal.hpp"
#include "median.hpp"

namespace medosc {

enum class Variant { base, annular, refined };
enum class HaltReason { emptyE1, exhausted, maxDepth };

inline std::string toString(Variant v) {
  return v == Variant::base ? "base" : v == Variant::annular ? "annular" : "refined";
}
inline Variant parseVariant(const std::string& s) {
  if (s == "base") return Variant::base;
  if (s == "annular") return Variant::annular;
  if (s == "refined") return Variant::refined;
  throw ConfigError("unknown variant '" + s + "' (expected base | annular | refined)");
}
inline std::string toString(HaltReason h) {
  return h == HaltReason::emptyE1 ? "emptyE1" : h == HaltReason::exhausted ? "exhausted" : "maxDepth";
}

struct SelectedCube {
  DyadicCube cube;
  double a = 0.0;           // m_{f_P}(t, cube)
  bool continued = false;   // nonempty exceedance set inside
  double threshold = 0.0;   // tau of the enclosing active cube P
  double parentMedian = 0.0;  // m_{f_P}(t, parent(cube))
  std::size_t enclosing = npos;  // index in the previous generation; npos for Q0

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
};

struct DecompositionResult {
  Variant variant = Variant::base;
  double t = 0.5, s = 0.125;
  CubeMode mode = CubeMode::gridAligned;
  Grid grid;
  DyadicCube q0;
  double rootMedian = 0.0;
  double rootThreshold = 0.0;
  bool rootContinued = false;
  std::vector<std::vector<SelectedCube>> generations;
  std::vector<std::vector<std::size_t>> omegaSets;  // sorted cells of Omega^v, v = 1..
  HaltReason haltReason = HaltReason::emptyE1;

  std::size_t selectedCount() const {
    std::size_t n = 0;
    for (const auto& g : generations) n += g.size();
    return n;
  }
};

inline void checkDecompositionParams(double t, double s, Variant variant, int dim) {
  if (!(s > 0.0 && s < 0.5)) throw PreconditionError("decompose: s must lie in (0,1/2)");
  if (!(t >= 0.5 && t < 1.0 - s)) throw PreconditionError("decompose: t must satisfy 1/2 <= t < 1-s");
  if (variant == Variant::refined) {
    double two_n = double(1 << dim);
    if (!(s < 1.0 / (2.0 * two_n)) || !(t <= 1.0 - two_n * s))
      throw PreconditionError("decompose: refined variant needs s < 1/2^(n+1) and t <= 1 - 2^n s");
  }
}

namespace detail {

inline std::vector<double> sortedOn(const GridFunction& f, const GridCube& q) { return sortedValues(f, q); }

// tau(P) for the chosen variant
inline double stoppingThreshold(const GridFunction& f, const GridCube& P, double t, double s, Variant variant,
                                CubeMode mode) {
  const Grid& g = f.grid();
  switch (variant) {
    case Variant::base: {
      CubeFamily fam(g, mode, P);
      auto field = oscTable(f, s, fam).supContaining();
      double mn = std::numeric_limits<double>::infinity();
      for (auto c : cells(g, P)) mn = std::min(mn, field[c]);
      return 2.0 * mn;
    }
    case Variant::annular:
      return 2.0 * medianSharpSorted(sortedOn(f, P), s);
    case Variant::refined: {
      auto v = sortedOn(f, P);
      double m = medianSorted(v, t);
      for (auto& x : v) x = std::fabs(x - m);
      std::sort(v.begin(), v.end());
      return medianSorted(v, t);
    }
  }
  return 0.0;
}

}  // namespace detail

// Stopping-time local median decomposition of f on the dyadic cube q0.
inline DecompositionResult decompose(const GridFunction& f, const DyadicCube& q0, double t, double s,
                                     Variant variant = Variant::base, std::optional<CubeMode> mode = {},
                                     std::optional<int> maxGenerations = {}) {
  const Grid& g = f.grid();
  checkDecompositionParams(t, s, variant, g.dim());
  GridCube Q0 = toGridCube(g, q0);
  DecompositionResult res;
  res.variant = variant;
  res.t = t;
  res.s = s;
  res.mode = mode.value_or(defaultMode(g));
  res.grid = g;
  res.q0 = q0;
  res.rootMedian = maximalMedian(f, t, Q0);
  int cap = maxGenerations.value_or(g.level() - q0.level);

  struct Active {
    DyadicCube cube;
    std::size_t index;  // position in its generation, npos for Q0
  };
  std::vector<Active> active{{q0, SelectedCube::npos}};
  res.haltReason = HaltReason::emptyE1;

  for (int v = 1;; ++v) {
    std::vector<SelectedCube> gen;
    for (const auto& act : active) {
      GridCube P = toGridCube(g, act.cube);
      double mP = maximalMedian(f, t, P);
      double tau = detail::stoppingThreshold(f, P, t, s, variant, res.mode);
      bool nonempty = false;
      for (auto c : cells(g, P))
        if (std::fabs(f[c] - mP) > tau) {
          nonempty = true;
          break;
        }
      if (act.index == SelectedCube::npos) {
        res.rootThreshold = tau;
        res.rootContinued = nonempty;
      } else {
        res.generations[v - 2][act.index].continued = nonempty;
      }
      if (!nonempty) continue;
      if (v > cap) {
        res.haltReason = HaltReason::maxDepth;
        continue;
      }
      // top-down: first dyadic subcubes whose localized median exceeds tau
      std::vector<std::pair<DyadicCube, double>> stack;
      int kids = 1 << g.dim();
      for (int k = kids - 1; k >= 0; --k) stack.push_back({act.cube.child(k, g.dim()), 0.0});
      while (!stack.empty()) {
        auto [Q, parentMed] = stack.back();
        stack.pop_back();
        double med = maximalMedian(f, t, Q) - mP;
        if (std::fabs(med) > tau) {
          SelectedCube sc;
          sc.cube = Q;
          sc.a = med;
          sc.threshold = tau;
          sc.parentMedian = parentMed;
          sc.enclosing = act.index;
          gen.push_back(sc);
        } else if (Q.level < g.level()) {
          for (int k = kids - 1; k >= 0; --k) stack.push_back({Q.child(k, g.dim()), med});
        }
      }
    }
    if (res.haltReason == HaltReason::maxDepth) break;
    if (gen.empty()) {
      if (v > 1) res.haltReason = HaltReason::exhausted;
      break;
    }
    std::sort(gen.begin(), gen.end(),
              [](const SelectedCube& a, const SelectedCube& b) { return a.cube < b.cube; });
    std::vector<std::size_t> omega;
    active.clear();
    for (std::size_t j = 0; j < gen.size(); ++j) {
      for (auto c : cells(g, gen[j].cube)) omega.push_back(c);
      active.push_back({gen[j].cube, j});
    }
    std::sort(omega.begin(), omega.end());
    res.generations.push_back(std::move(gen));
    res.omegaSets.push_back(std::move(omega));
  }
  return res;
}

inline nlohmann::json toJson(const DecompositionResult& r) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& gen : r.generations) {
    nlohmann::json jg = nlohmann::json::array();
    for (const auto& sc : gen) {
      nlohmann::json idx = nlohmann::json::array();
      for (int a = 0; a < r.grid.dim(); ++a) idx.push_back(sc.cube.index[a]);
      jg.push_back({{"level", sc.cube.level}, {"index", idx}, {"a", sc.a}, {"continued", sc.continued}});
    }
    gens.push_back(jg);
  }
  return {{"variant", toString(r.variant)}, {"t", r.t},          {"s", r.s},
          {"rootMedian", r.rootMedian},     {"generations", gens}, {"haltReason", toString(r.haltReason)},
          {"cubeMode", toString(r.mode)}};
}

struct PointwiseReport {
  double c1 = 4.0;
  double slack = 2.0;
  double worstRatio = 0.0;           // max |f - m| / majorant (0/0 -> 0)
  std::vector<std::size_t> violations;  // cells with residual > tol
  double worstCoefficientRatio = 0.0;   // max |a| / (slack (10n+2) bound)
  std::vector<std::pair<std::size_t, std::size_t>> coefficientViolations;  // (v-1, j)
  GridFunction majorant;
  GridFunction residual;
  bool ok() const { return violations.empty() && coefficientViolations.empty(); }
};

inline double defaultC1(Variant v) { return v == Variant::refined ? 8.0 : 4.0; }

// (majorant, residual) with majorant = c1 M#_{0,s,Q0} f + sum |a| chi
inline std::pair<GridFunction, GridFunction> reconstruct(const GridFunction& f, const DecompositionResult& r,
                                                         std::optional<double> c1 = {}) {
  const Grid& g = f.grid();
  GridCube Q0 = toGridCube(g, r.q0);
  double C = c1.value_or(defaultC1(r.variant));
  auto msharp = localSharpMaximalField(f, Q0, r.s, r.mode);
  std::vector<double> maj(g.size(), 0.0), res(g.size(), 0.0);
  for (auto c : cells(g, Q0)) maj[c] = C * msharp[c];
  for (const auto& gen : r.generations)
    for (const auto& sc : gen)
      for (auto c : cells(g, sc.cube)) maj[c] += std::fabs(sc.a);
  for (auto c : cells(g, Q0)) res[c] = std::fabs(f[c] - r.rootMedian) - maj[c];
  return {GridFunction(g, std::move(maj)), GridFunction(g, std::move(res))};
}

// the per-variant bound B(Q) in |a| <= slack (10n+2) B(Q); refined uses slack * B(Q)
inline std::vector<std::vector<double>> coefficientBounds(const GridFunction& f, const DecompositionResult& r) {
  const Grid& g = f.grid();
  std::vector<std::vector<double>> out;
  std::map<DyadicCube, std::vector<double>> parentField;
  std::optional<CubeTable> sharpTab;
  if (r.variant == Variant::annular)
    sharpTab.emplace(medianSharpTable(f, r.s, CubeFamily(g, r.mode, toGridCube(g, r.q0))));
  for (const auto& gen : r.generations) {
    std::vector<double> row;
    for (const auto& sc : gen) {
      GridCube Q = toGridCube(g, sc.cube);
      DyadicCube hat = sc.cube.parent();
      GridCube H = toGridCube(g, hat);
      double b = 0.0;
      if (r.variant == Variant::base) {
        auto it = parentField.find(hat);
        if (it == parentField.end())
          it = parentField.emplace(hat, oscTable(f, r.s, CubeFamily(g, r.mode, H)).supContaining()).first;
        b = std::numeric_limits<double>::infinity();
        for (auto c : cells(g, Q)) b = std::min(b, it->second[c]);
      } else if (r.variant == Variant::annular) {
        const auto& fam = sharpTab->family();
        fam.forEach([&](std::size_t i, const GridCube& K) {
          if (containsCube(g, K, Q)) b = std::max(b, (*sharpTab)[i]);
        });
      } else {
        double tp = 1.0 - (1.0 - r.t) / double(1 << g.dim());
        auto v = detail::sortedValues(f, H);
        double mh = medianSorted(v, r.t);
        for (auto& x : v) x = std::fabs(x - mh);
        std::sort(v.begin(), v.end());
        b = medianSorted(v, tp);
      }
      row.push_back(b);
    }
    out.push_back(std::move(row));
  }
  return out;
}

inline PointwiseReport verifyPointwiseBound(const GridFunction& f, const DecompositionResult& r,
                                            std::optional<double> c1 = {}, double slack = 2.0, double tol = 1e-9) {
  PointwiseReport rep;
  rep.c1 = c1.value_or(defaultC1(r.variant));
  rep.slack = slack;
  auto [maj, res] = reconstruct(f, r, rep.c1);
  const Grid& g = f.grid();
  for (auto c : cells(g, toGridCube(g, r.q0))) {
    double lhs = std::fabs(f[c] - r.rootMedian);
    double ratio = lhs == 0.0 ? 0.0 : (maj[c] == 0.0 ? std::numeric_limits<double>::infinity() : lhs / maj[c]);
    rep.worstRatio = std::max(rep.worstRatio, ratio);
    if (res[c] > tol) rep.violations.push_back(c);
  }
  auto bounds = coefficientBounds(f, r);
  double factor = r.variant == Variant::refined ? slack : slack * (10.0 * g.dim() + 2.0);
  for (std::size_t v = 0; v < r.generations.size(); ++v)
    for (std::size_t j = 0; j < r.generations[v].size(); ++j) {
      double a = std::fabs(r.generations[v][j].a);
      double rhs = factor * bounds[v][j];
      double ratio = a == 0.0 ? 0.0 : (rhs == 0.0 ? std::numeric_limits<double>::infinity() : a / rhs);
      rep.worstCoefficientRatio = std::max(rep.worstCoefficientRatio, ratio);
      if (a > rhs * (1.0 + 1e-12) + tol) rep.coefficientViolations.push_back({v, j});
    }
  rep.majorant = std::move(maj);
  rep.residual = std::move(res);
  return rep;
}

struct DecayEntry {
  std::size_t v = 0;  // 1-based generation of the cube
  std::size_t j = 0;
  double ratio = 0.0;  // |Omega^{v+1} cap Q^v_j| / |Q^v_j|
};

struct DecayReport {
  double bound = 0.0;  // s/(1-t)
  std::vector<double> omegaMeasure;  // |Omega^v|, v = 1..
  std::vector<DecayEntry> entries;
  double maxRatio = 0.0;
  bool ivHolds = true;         // every ratio <= s/(1-t)
  bool geometricHolds = true;  // |Omega^k| <= (s/(1-t))^k |Q0|
  bool nestedHolds = true;     // |Omega^k cap Q^v_j| <= (s/(1-t))^{k-v} |Q^v_j|
  bool disjointHolds = true;   // (ii)
  bool monotoneHolds = true;   // (iii)
};

inline DecayReport measureDecay(const DecompositionResult& r) {
  DecayReport rep;
  const Grid& g = r.grid;
  rep.bound = r.s / (1.0 - r.t);
  const double rel = 1e-12;
  double q0m = measure(g, toGridCube(g, r.q0));
  std::size_t V = r.generations.size();
  for (std::size_t v = 0; v < V; ++v) {
    rep.omegaMeasure.push_back(double(r.omegaSets[v].size()) * g.cellVolume());
    const auto& om = r.omegaSets[v];
    if (std::adjacent_find(om.begin(), om.end()) != om.end()) rep.disjointHolds = false;
    if (v > 0 && !std::includes(r.omegaSets[v - 1].begin(), r.omegaSets[v - 1].end(), om.begin(), om.end()))
      rep.monotoneHolds = false;
    if (rep.omegaMeasure[v] > std::pow(rep.bound, double(v + 1)) * q0m * (1 + rel)) rep.geometricHolds = false;
  }
  auto countIn = [&](std::size_t k, const GridCube& Q) {
    std::size_t n = 0;
    for (auto c : r.omegaSets[k])
      if (containsCell(g, Q, c)) ++n;
    return n;
  };
  for (std::size_t v = 0; v < V; ++v)
    for (std::size_t j = 0; j < r.generations[v].size(); ++j) {
      GridCube Q = toGridCube(g, r.generations[v][j].cube);
      double cq = double(cellCount(g, Q));
      double ratio = v + 1 < V ? double(countIn(v + 1, Q)) / cq : 0.0;
      rep.entries.push_back({v + 1, j, ratio});
      rep.maxRatio = std::max(rep.maxRatio, ratio);
      if (ratio > rep.bound * (1 + rel)) rep.ivHolds = false;
      for (std::size_t k = v + 2; k < V; ++k)
        if (double(countIn(k, Q)) / cq > std::pow(rep.bound, double(k - v)) * (1 + rel)) rep.nestedHolds = false;
    }
  return rep;
}

}  // namespace medosc
