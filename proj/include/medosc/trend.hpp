#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace medosc {

enum class TrendClass { stable, growing, indeterminate };

inline std::string toString(TrendClass c) {
  return c == TrendClass::stable ? "stable" : c == TrendClass::growing ? "growing" : "indeterminate";
}

struct Trend {
  std::vector<double> values;  // one per refinement level
  std::vector<double> growth;  // values[i+1] / values[i]
  double maxGrowth = 0.0;
  double minGrowth = 0.0;
  TrendClass cls = TrendClass::indeterminate;
};

inline double growthFactor(double prev, double next) {
  if (std::isinf(next) && !std::isinf(prev)) return std::numeric_limits<double>::infinity();
  if (std::isinf(next) && std::isinf(prev)) return std::numeric_limits<double>::infinity();
  if (prev == 0.0) return next == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return next / prev;
}

// stable: every level-to-level growth < stableBelow and all finite
// growing: every growth >= growingAtLeast, or any value infinite
// indeterminate otherwise; a single level is stable iff finite
inline Trend classifyTrend(const std::vector<double>& values, double stableBelow = 1.25, double growingAtLeast = 2.0) {
  Trend t;
  t.values = values;
  bool anyInf = false;
  for (double v : values) anyInf = anyInf || !std::isfinite(v);
  for (std::size_t i = 1; i < values.size(); ++i) t.growth.push_back(growthFactor(values[i - 1], values[i]));
  if (!t.growth.empty()) {
    t.maxGrowth = t.minGrowth = t.growth.front();
    for (double g : t.growth) {
      t.maxGrowth = std::max(t.maxGrowth, g);
      t.minGrowth = std::min(t.minGrowth, g);
    }
  }
  if (anyInf) {
    t.cls = TrendClass::growing;
  } else if (t.growth.empty() || t.maxGrowth < stableBelow) {
    t.cls = TrendClass::stable;
  } else if (t.minGrowth >= growingAtLeast) {
    t.cls = TrendClass::growing;
  } else {
    t.cls = TrendClass::indeterminate;
  }
  return t;
}

}  // namespace medosc
