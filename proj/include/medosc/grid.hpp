#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace medosc {

using Coord = std::array<int, 2>;

struct Domain {
  std::array<double, 2> origin{0.0, 0.0};
  double side = 1.0;

  bool operator==(const Domain&) const = default;
};

// Uniform refinement of a cube into 2^level cells per axis.
// Cells are stored row-major: axis 0 is the slow index.
class Grid {
 public:
  Grid() = default;
  Grid(int dim, int level, Domain domain = {}) : dim_(dim), level_(level), domain_(domain) {
    if (dim != 1 && dim != 2) throw PreconditionError("grid: dim must be 1 or 2");
    if (level < 0 || level * dim > 26) throw PreconditionError("grid: level out of range");
    if (!(domain.side > 0.0) || !std::isfinite(domain.side))
      throw PreconditionError("grid: domain side must be positive");
  }

  int dim() const { return dim_; }
  int level() const { return level_; }
  const Domain& domain() const { return domain_; }
  int n() const { return 1 << level_; }
  std::size_t size() const { return std::size_t(1) << (dim_ * level_); }
  double width() const { return domain_.side / n(); }
  double cellVolume() const { return dim_ == 1 ? width() : width() * width(); }

  std::size_t index(const Coord& c) const {
    return dim_ == 1 ? std::size_t(c[0]) : std::size_t(c[0]) * n() + c[1];
  }
  Coord coords(std::size_t cell) const {
    if (dim_ == 1) return {int(cell), 0};
    return {int(cell / n()), int(cell % n())};
  }
  double center(std::size_t cell, int axis) const {
    return domain_.origin[axis] + (coords(cell)[axis] + 0.5) * width();
  }
  // cell whose closure contains the point, clamped to the grid
  std::size_t locate(const std::array<double, 2>& x) const {
    Coord c{0, 0};
    for (int a = 0; a < dim_; ++a) {
      int k = int(std::floor((x[a] - domain_.origin[a]) / width()));
      c[a] = std::clamp(k, 0, n() - 1);
    }
    return index(c);
  }

  bool operator==(const Grid&) const = default;

 private:
  int dim_ = 1;
  int level_ = 0;
  Domain domain_{};
};

struct GridCube {
  Coord offset{0, 0};
  int side = 1;

  bool operator==(const GridCube&) const = default;
};

struct DyadicCube {
  int level = 0;
  Coord index{0, 0};

  bool operator==(const DyadicCube&) const = default;
  auto operator<=>(const DyadicCube&) const = default;

  DyadicCube parent() const {
    if (level == 0) throw PreconditionError("dyadic cube: root has no parent");
    return {level - 1, {index[0] >> 1, index[1] >> 1}};
  }
  // k in [0, 2^dim); bit a selects the upper half along axis a
  DyadicCube child(int k, int dim) const {
    DyadicCube c{level + 1, {index[0] * 2, index[1] * 2}};
    for (int a = 0; a < dim; ++a) c.index[a] += (k >> (dim - 1 - a)) & 1;
    return c;
  }
};

inline GridCube toGridCube(const Grid& g, const DyadicCube& q) {
  if (q.level < 0 || q.level > g.level()) throw DomainError("dyadic cube level outside grid");
  int side = 1 << (g.level() - q.level);
  GridCube c{{0, 0}, side};
  for (int a = 0; a < g.dim(); ++a) {
    if (q.index[a] < 0 || q.index[a] >= (1 << q.level)) throw DomainError("dyadic index outside grid");
    c.offset[a] = q.index[a] * side;
  }
  return c;
}

inline GridCube rootCube(const Grid& g) { return {{0, 0}, g.n()}; }

inline bool inGrid(const Grid& g, const GridCube& q) {
  if (q.side < 1) return false;
  for (int a = 0; a < g.dim(); ++a)
    if (q.offset[a] < 0 || q.offset[a] + q.side > g.n()) return false;
  return true;
}

inline void requireInGrid(const Grid& g, const GridCube& q) {
  if (!inGrid(g, q)) throw DomainError("cube outside domain grid");
}

inline std::size_t cellCount(const Grid& g, const GridCube& q) {
  return g.dim() == 1 ? std::size_t(q.side) : std::size_t(q.side) * q.side;
}

inline double measure(const Grid& g, const GridCube& q) { return double(cellCount(g, q)) * g.cellVolume(); }

inline double sideLength(const Grid& g, const GridCube& q) { return q.side * g.width(); }

inline std::array<double, 2> cubeCenter(const Grid& g, const GridCube& q) {
  std::array<double, 2> c{0.0, 0.0};
  for (int a = 0; a < g.dim(); ++a) c[a] = g.domain().origin[a] + (q.offset[a] + 0.5 * q.side) * g.width();
  return c;
}

inline bool containsCell(const Grid& g, const GridCube& q, std::size_t cell) {
  Coord c = g.coords(cell);
  for (int a = 0; a < g.dim(); ++a)
    if (c[a] < q.offset[a] || c[a] >= q.offset[a] + q.side) return false;
  return true;
}

inline bool containsCube(const Grid& g, const GridCube& outer, const GridCube& inner) {
  for (int a = 0; a < g.dim(); ++a)
    if (inner.offset[a] < outer.offset[a] || inner.offset[a] + inner.side > outer.offset[a] + outer.side)
      return false;
  return true;
}

inline bool overlaps(const Grid& g, const GridCube& p, const GridCube& q) {
  for (int a = 0; a < g.dim(); ++a)
    if (p.offset[a] + p.side <= q.offset[a] || q.offset[a] + q.side <= p.offset[a]) return false;
  return true;
}

// cells of q in row-major order
inline std::vector<std::size_t> cells(const Grid& g, const GridCube& q) {
  requireInGrid(g, q);
  std::vector<std::size_t> out;
  out.reserve(cellCount(g, q));
  if (g.dim() == 1) {
    for (int i = 0; i < q.side; ++i) out.push_back(std::size_t(q.offset[0] + i));
  } else {
    for (int i = 0; i < q.side; ++i)
      for (int j = 0; j < q.side; ++j) out.push_back(g.index({q.offset[0] + i, q.offset[1] + j}));
  }
  return out;
}

inline std::vector<std::size_t> cells(const Grid& g, const DyadicCube& q) { return cells(g, toGridCube(g, q)); }

// axis-aligned box of cells [lo, hi) per axis
struct Box {
  Coord lo{0, 0};
  Coord hi{1, 1};
};

// the cube with the same center and k times the side, clipped to the grid (hence a box)
inline Box dilateClipped(const Grid& g, const GridCube& q, double k) {
  Box b{{0, 0}, {1, 1}};
  for (int a = 0; a < g.dim(); ++a) {
    double c = q.offset[a] + 0.5 * q.side;
    double h = 0.5 * q.side * k;
    b.lo[a] = std::max(0, int(std::floor(c - h + 1e-9)));
    b.hi[a] = std::min(g.n(), int(std::ceil(c + h - 1e-9)));
  }
  return b;
}

inline bool boxContainsCell(const Grid& g, const Box& b, std::size_t cell) {
  Coord c = g.coords(cell);
  for (int a = 0; a < g.dim(); ++a)
    if (c[a] < b.lo[a] || c[a] >= b.hi[a]) return false;
  return true;
}

class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw ParseError("values", "length " + std::to_string(values_.size()) + " does not match 2^(dim*level) = " +
                                     std::to_string(grid_.size()));
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (!std::isfinite(values_[i])) throw ParseError("values", "non-finite entry at index " + std::to_string(i));
  }
  static GridFunction constant(const Grid& g, double c) { return GridFunction(g, std::vector<double>(g.size(), c)); }
  template <class F>
  static GridFunction sample(const Grid& g, F&& fn) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::array<double, 2> x{g.center(i, 0), g.dim() == 2 ? g.center(i, 1) : 0.0};
      v[i] = fn(x);
    }
    return GridFunction(g, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  template <class F>
  GridFunction map(F&& fn) const {
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(values_[i]);
    return GridFunction(grid_, std::move(v));
  }
  GridFunction abs() const {
    return map([](double x) { return std::fabs(x); });
  }

  bool operator==(const GridFunction&) const = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

inline GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid() == b.grid())) throw PreconditionError("grid mismatch");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
  return GridFunction(a.grid(), std::move(v));
}

inline GridFunction operator*(double c, const GridFunction& a) {
  return a.map([c](double x) { return c * x; });
}

// a GridFunction with nonnegative values
class Weight {
 public:
  Weight() = default;
  explicit Weight(GridFunction f) : f_(std::move(f)) {
    for (std::size_t i = 0; i < f_.size(); ++i)
      if (f_[i] < 0.0) throw PreconditionError("weight: negative value at cell " + std::to_string(i));
  }
  static Weight constant(const Grid& g, double c) { return Weight(GridFunction::constant(g, c)); }

  const GridFunction& function() const { return f_; }
  operator const GridFunction&() const { return f_; }
  const Grid& grid() const { return f_.grid(); }
  double operator[](std::size_t i) const { return f_[i]; }
  std::size_t size() const { return f_.size(); }

 private:
  GridFunction f_;
};

inline double average(const GridFunction& f, const GridCube& q) {
  double s = 0.0;
  for (auto c : cells(f.grid(), q)) s += f[c];
  return s / double(cellCount(f.grid(), q));
}
inline double average(const GridFunction& f, const DyadicCube& q) { return average(f, toGridCube(f.grid(), q)); }

// integral over q with respect to Lebesgue measure
inline double integral(const GridFunction& f, const GridCube& q) {
  double s = 0.0;
  for (auto c : cells(f.grid(), q)) s += f[c];
  return s * f.grid().cellVolume();
}

enum class CubeMode { dyadic, gridAligned };

inline CubeMode parseCubeMode(const std::string& s) {
  if (s == "dyadic") return CubeMode::dyadic;
  if (s == "grid-aligned" || s == "grid") return CubeMode::gridAligned;
  throw ConfigError("unknown cube mode '" + s + "' (expected dyadic | grid-aligned)");
}

inline std::string toString(CubeMode m) { return m == CubeMode::dyadic ? "dyadic" : "grid-aligned"; }

inline CubeMode defaultMode(const Grid& g) {
  if (g.dim() == 1) return g.n() <= 512 ? CubeMode::gridAligned : CubeMode::dyadic;
  return g.n() <= 32 ? CubeMode::gridAligned : CubeMode::dyadic;
}

// Every cube of one mode inside a root cube, addressable by a dense index.
// Grid-aligned order: side ascending, then offset lexicographic.
// Dyadic order: relative level ascending (largest first), then index lexicographic.
class CubeFamily {
 public:
  CubeFamily(const Grid& g, CubeMode mode, GridCube root) : grid_(g), mode_(mode), root_(root) {
    requireInGrid(g, root);
    int S = root.side;
    if (mode == CubeMode::dyadic) {
      if (S & (S - 1)) throw PreconditionError("dyadic family needs a power-of-two root side");
      int J = 0;
      while ((1 << J) < S) ++J;
      base_.assign(J + 2, 0);
      for (int j = 0; j <= J; ++j) base_[j + 1] = base_[j] + (std::size_t(1) << (j * g.dim()));
    } else {
      base_.assign(S + 1, 0);
      for (int k = 1; k <= S; ++k) {
        std::size_t per = std::size_t(S - k + 1);
        if (g.dim() == 2) per *= per;
        base_[k] = base_[k - 1] + per;
      }
    }
  }

  const Grid& grid() const { return grid_; }
  CubeMode mode() const { return mode_; }
  const GridCube& root() const { return root_; }
  std::size_t size() const { return base_.back(); }

  GridCube cube(std::size_t i) const {
    int dim = grid_.dim();
    if (mode_ == CubeMode::dyadic) {
      int j = int(std::upper_bound(base_.begin(), base_.end(), i) - base_.begin()) - 1;
      std::size_t r = i - base_[j];
      int side = root_.side >> j;
      int per = 1 << j;
      GridCube q{{root_.offset[0], root_.offset[1]}, side};
      if (dim == 1) {
        q.offset[0] += int(r) * side;
      } else {
        q.offset[0] += int(r / per) * side;
        q.offset[1] += int(r % per) * side;
      }
      return q;
    }
    int k = int(std::upper_bound(base_.begin(), base_.end(), i) - base_.begin());
    std::size_t r = i - base_[k - 1];
    int span = root_.side - k + 1;
    GridCube q{{root_.offset[0], root_.offset[1]}, k};
    if (dim == 1) {
      q.offset[0] += int(r);
    } else {
      q.offset[0] += int(r / span);
      q.offset[1] += int(r % span);
    }
    return q;
  }

  std::optional<std::size_t> indexOf(const GridCube& q) const {
    if (!containsCube(grid_, root_, q) || q.side < 1) return std::nullopt;
    int dim = grid_.dim();
    int rel[2] = {q.offset[0] - root_.offset[0], dim == 2 ? q.offset[1] - root_.offset[1] : 0};
    if (mode_ == CubeMode::dyadic) {
      if (q.side & (q.side - 1)) return std::nullopt;
      int j = 0;
      while ((root_.side >> j) > q.side) ++j;
      if ((root_.side >> j) != q.side) return std::nullopt;
      if (rel[0] % q.side || rel[1] % q.side) return std::nullopt;
      std::size_t r = dim == 1 ? std::size_t(rel[0] / q.side)
                               : std::size_t(rel[0] / q.side) * (std::size_t(1) << j) + rel[1] / q.side;
      return base_[j] + r;
    }
    int span = root_.side - q.side + 1;
    std::size_t r = dim == 1 ? std::size_t(rel[0]) : std::size_t(rel[0]) * span + rel[1];
    return base_[q.side - 1] + r;
  }

  template <class F>
  void forEach(F&& fn) const {
    for (std::size_t i = 0; i < size(); ++i) fn(i, cube(i));
  }

 private:
  Grid grid_;
  CubeMode mode_;
  GridCube root_;
  std::vector<std::size_t> base_;
};

inline std::vector<GridCube> enumerateCubes(const Grid& g, CubeMode mode, std::optional<std::size_t> containing = {},
                                            std::optional<GridCube> within = {}) {
  CubeFamily fam(g, mode, within.value_or(rootCube(g)));
  std::vector<GridCube> out;
  fam.forEach([&](std::size_t, const GridCube& q) {
    if (!containing || containsCell(g, q, *containing)) out.push_back(q);
  });
  return out;
}

// Prefix sums for O(1) cube sums in 1D and 2D.
class CubeSums {
 public:
  CubeSums(const Grid& g, const std::vector<double>& v) : grid_(g) {
    int n = g.n();
    if (g.dim() == 1) {
      pre_.assign(n + 1, 0.0);
      for (int i = 0; i < n; ++i) pre_[i + 1] = pre_[i] + v[i];
    } else {
      pre_.assign(std::size_t(n + 1) * (n + 1), 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          pre_[at(i + 1, j + 1)] = v[std::size_t(i) * n + j] + pre_[at(i, j + 1)] + pre_[at(i + 1, j)] - pre_[at(i, j)];
    }
  }
  double sum(const GridCube& q) const {
    if (grid_.dim() == 1) return pre_[q.offset[0] + q.side] - pre_[q.offset[0]];
    int i0 = q.offset[0], j0 = q.offset[1], i1 = i0 + q.side, j1 = j0 + q.side;
    return pre_[at(i1, j1)] - pre_[at(i0, j1)] - pre_[at(i1, j0)] + pre_[at(i0, j0)];
  }
  double mean(const GridCube& q) const { return sum(q) / double(cellCount(grid_, q)); }
  double sum(const Box& b) const {
    if (grid_.dim() == 1) return pre_[b.hi[0]] - pre_[b.lo[0]];
    return pre_[at(b.hi[0], b.hi[1])] - pre_[at(b.lo[0], b.hi[1])] - pre_[at(b.hi[0], b.lo[1])] +
           pre_[at(b.lo[0], b.lo[1])];
  }

 private:
  std::size_t at(int i, int j) const { return std::size_t(i) * (grid_.n() + 1) + j; }
  Grid grid_;
  std::vector<double> pre_;
};

inline nlohmann::json toJson(const GridFunction& f) {
  const auto& d = f.grid().domain();
  nlohmann::json origin = nlohmann::json::array();
  for (int a = 0; a < f.grid().dim(); ++a) origin.push_back(d.origin[a]);
  return {{"dim", f.grid().dim()},
          {"level", f.grid().level()},
          {"values", f.values()},
          {"domain", {{"origin", origin}, {"side", d.side}}}};
}

inline GridFunction gridFunctionFromJson(const nlohmann::json& j) {
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.is_object() || !j.contains(key)) throw ParseError(key, "missing field");
    return j.at(key);
  };
  const auto& jd = need("dim");
  const auto& jl = need("level");
  const auto& jv = need("values");
  if (!jd.is_number_integer()) throw ParseError("dim", "must be an integer");
  if (!jl.is_number_integer()) throw ParseError("level", "must be an integer");
  int dim = jd.get<int>(), level = jl.get<int>();
  if (dim != 1 && dim != 2) throw ParseError("dim", "must be 1 or 2");
  if (level < 1 || level * dim > 26) throw ParseError("level", "out of range");
  if (!jv.is_array()) throw ParseError("values", "must be an array");
  std::vector<double> values;
  values.reserve(jv.size());
  for (std::size_t i = 0; i < jv.size(); ++i) {
    if (!jv[i].is_number()) throw ParseError("values", "non-numeric entry at index " + std::to_string(i));
    values.push_back(jv[i].get<double>());
  }
  Domain dom;
  if (j.contains("domain")) {
    const auto& jdom = j.at("domain");
    if (!jdom.is_object()) throw ParseError("domain", "must be an object");
    if (jdom.contains("origin")) {
      const auto& o = jdom.at("origin");
      if (!o.is_array() || int(o.size()) != dim) throw ParseError("domain.origin", "must have dim entries");
      for (int a = 0; a < dim; ++a) {
        if (!o[a].is_number()) throw ParseError("domain.origin", "non-numeric entry");
        dom.origin[a] = o[a].get<double>();
      }
    }
    if (jdom.contains("side")) {
      if (!jdom.at("side").is_number()) throw ParseError("domain.side", "must be a number");
      dom.side = jdom.at("side").get<double>();
      if (!(dom.side > 0.0) || !std::isfinite(dom.side)) throw ParseError("domain.side", "must be positive");
    }
  }
  return GridFunction(Grid(dim, level, dom), std::move(values));
}

inline GridFunction readGridFunction(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("document", e.what());
  }
  return gridFunctionFromJson(j);
}

inline void writeGridFunction(const GridFunction& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << toJson(f).dump() << "\n";
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

}  // namespace medosc
