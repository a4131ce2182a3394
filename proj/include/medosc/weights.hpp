#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cube_table.hpp"
#include "grid.hpp"
#include "median.hpp"
#include "rng.hpp"
#include "young.hpp"

namespace medosc {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------- A_p

struct CubeSup {
  double value = 0.0;
  bool infinite = false;
  GridCube witness{};
  std::optional<std::size_t> zeroCell;  // a cell responsible for an infinite value
};

// sup_Q (avg w)(avg w^{1-p'})^{p-1}
inline CubeSup apConstant(const Weight& w, double p, std::optional<GridCube> root = {},
                          std::optional<CubeMode> mode = {}) {
  if (!(p > 1.0)) throw PreconditionError("apConstant: p must exceed 1");
  const Grid& g = w.grid();
  double e = 1.0 - p / (p - 1.0);
  std::vector<double> a(g.size()), b(g.size()), zero(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    a[i] = w[i];
    zero[i] = w[i] == 0.0 ? 1.0 : 0.0;
    b[i] = w[i] == 0.0 ? 0.0 : std::pow(w[i], e);
  }
  CubeSums sa(g, a), sb(g, b), sz(g, zero);
  CubeFamily fam(g, mode.value_or(defaultMode(g)), root.value_or(rootCube(g)));
  CubeSup out;
  fam.forEach([&](std::size_t, const GridCube& q) {
    if (out.infinite) return;
    if (sz.sum(q) > 0.5) {
      out.infinite = true;
      out.value = kInf;
      out.witness = q;
      for (auto c : cells(g, q))
        if (w[c] == 0.0) {
          out.zeroCell = c;
          break;
        }
      return;
    }
    double v = sa.mean(q) * std::pow(sb.mean(q), p - 1.0);
    if (v > out.value) {
      out.value = v;
      out.witness = q;
    }
  });
  return out;
}

// ---------------------------------------------------------------- two-weight estimators

struct EstimatorBudget {
  int randomTrials = 4;
  std::size_t exhaustiveMaxCells = 12;
  std::uint64_t seed = 0;
  double delta = 1e-12;  // regularizer in the w/(v+delta) ordering
};

struct PairEstimate {
  double estimate = 0.0;  // a lower bound on the best constant
  bool infinite = false;  // denominator vanished with a positive numerator
  GridCube witnessCube{};
  std::vector<std::size_t> witnessSet;     // E
  std::vector<std::size_t> witnessSecond;  // E' (W_p)
  std::size_t cubes = 0;
  std::size_t candidates = 0;
};

namespace detail {

struct Ratio {
  double num = 0.0;
  double den = 0.0;
};

inline double ratioOf(double num, double den) {
  if (num <= 0.0) return 0.0;
  if (den <= 0.0) return kInf;
  return num / den;
}

// Evaluator protocol:
//   begin(qi, q, cs)   new cube, empty E
//   add(i)             put local cell i into E
//   value() -> Ratio   current candidate
//   second()           auxiliary witness set (may be empty)
template <class Eval>
PairEstimate searchPairs(const Grid& g, const CubeFamily& fam, const std::vector<std::vector<double>>& orderings,
                         const EstimatorBudget& budget, bool randomSubsets, Eval& ev,
                         const std::function<std::size_t(std::size_t)>& kmaxOf) {
  PairEstimate best;
  std::vector<int> perm, E;
  std::vector<std::size_t> cs;
  auto consider = [&](const GridCube& q, const std::vector<int>& set) {
    ++best.candidates;
    Ratio r = ev.value();
    double v = ratioOf(r.num, r.den);
    if (v > best.estimate || (std::isinf(v) && !best.infinite)) {
      best.estimate = v;
      best.infinite = std::isinf(v);
      best.witnessCube = q;
      best.witnessSet.clear();
      for (int i : set) best.witnessSet.push_back(cs[i]);
      std::sort(best.witnessSet.begin(), best.witnessSet.end());
      best.witnessSecond = ev.second();
    }
  };
  fam.forEach([&](std::size_t qi, const GridCube& q) {
    cs = cells(g, q);
    std::size_t m = cs.size();
    std::size_t kmax = std::min(m, kmaxOf(m));
    ++best.cubes;
    if (kmax == 0) return;
    // top-k along each ordering key (descending, ties by position)
    for (const auto& key : orderings) {
      perm.resize(m);
      std::iota(perm.begin(), perm.end(), 0);
      std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return key[cs[a]] > key[cs[b]]; });
      ev.begin(qi, q, cs);
      E.clear();
      for (std::size_t k = 0; k < kmax; ++k) {
        ev.add(perm[k]);
        E.push_back(perm[k]);
        consider(q, E);
      }
    }
    if (m <= budget.exhaustiveMaxCells) {
      for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
        if (std::size_t(__builtin_popcount(mask)) > kmax) continue;
        ev.begin(qi, q, cs);
        E.clear();
        for (std::size_t i = 0; i < m; ++i)
          if (mask >> i & 1u) {
            ev.add(int(i));
            E.push_back(int(i));
          }
        consider(q, E);
      }
      return;
    }
    if (!randomSubsets) return;
    for (int trial = 0; trial < budget.randomTrials; ++trial) {
      Rng rng(streamSeed(budget.seed, qi, std::uint64_t(trial)));
      std::size_t k = 1 + std::size_t(rng.below(kmax));
      perm.resize(m);
      std::iota(perm.begin(), perm.end(), 0);
      for (std::size_t i = 0; i < k; ++i) std::swap(perm[i], perm[i + std::size_t(rng.below(m - i))]);
      ev.begin(qi, q, cs);
      E.assign(perm.begin(), perm.begin() + long(k));
      for (int i : E) ev.add(i);
      consider(q, E);
    }
  });
  return best;
}

// int_E w / ((|E|/|Q|)^beta int_{Q\E} v)
struct FEval {
  const Weight& w;
  const Weight& v;
  double beta;
  const std::vector<std::size_t>* cs = nullptr;
  std::vector<char> inE{};
  double sw = 0.0, sev = 0.0, total = 0.0;
  std::size_t k = 0;

  void begin(std::size_t, const GridCube&, const std::vector<std::size_t>& c) {
    cs = &c;
    sw = sev = 0.0;
    k = 0;
    // direct sum: prefix sums cancel away weights many orders below the root mass
    total = 0.0;
    for (auto x : c) total += v[x];
    inE.assign(c.size(), 0);
  }
  void add(int i) {
    sw += w[(*cs)[i]];
    sev += v[(*cs)[i]];
    inE[i] = 1;
    ++k;
  }
  Ratio value() const {
    double rest = total - sev;
    if (rest <= 1e-9 * total) {
      // cancellation: sum the complement directly
      rest = 0.0;
      for (std::size_t i = 0; i < cs->size(); ++i)
        if (!inE[i]) rest += v[(*cs)[i]];
    }
    double frac = double(k) / double(cs->size());
    return {sw, std::pow(frac, beta) * rest};
  }
  std::vector<std::size_t> second() const { return {}; }
};

// the W_p quotient; E' = the ceil(alpha|Q|) cells of Q\E with least sigma
struct WpEval {
  const Weight& w;
  const std::vector<double>& sigma;
  const CubeSums& ss;
  const CubeSums& sz;
  const Grid& g;
  double p, beta, alpha, cFactor;
  const std::vector<std::size_t>* cs = nullptr;
  std::vector<int> order{}, rank{};
  std::vector<char> inE{};
  std::size_t need = 0, taken = 0, cursor = 0, k = 0, infCount = 0;
  double scq = 0.0, sw = 0.0, se = 0.0;

  void begin(std::size_t, const GridCube& q, const std::vector<std::size_t>& c) {
    cs = &c;
    std::size_t m = c.size();
    Box big = dilateClipped(g, q, cFactor);
    scq = sz.sum(big) > 0.5 ? kInf : ss.sum(big);
    need = std::size_t(std::ceil(alpha * double(m) - 1e-9));
    order.resize(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sigma[c[a]] < sigma[c[b]]; });
    rank.resize(m);
    for (std::size_t r = 0; r < m; ++r) rank[order[r]] = int(r);
    inE.assign(m, 0);
    sw = se = 0.0;
    k = infCount = 0;
    // E' starts as the first `need` cells by sigma
    for (cursor = 0; cursor < need; ++cursor) accumulate(order[cursor], +1);
    taken = need;
  }
  void accumulate(int i, int sign) {
    double s = sigma[(*cs)[i]];
    if (std::isinf(s))
      infCount = sign > 0 ? infCount + 1 : infCount - 1;
    else
      se += sign * s;
  }
  void add(int i) {
    sw += w[(*cs)[i]];
    ++k;
    inE[i] = 1;
    if (std::size_t(rank[i]) < cursor) {
      // i leaves E'; the next cell outside E enters
      accumulate(i, -1);
      while (cursor < order.size() && inE[order[cursor]]) ++cursor;
      if (cursor < order.size()) {
        accumulate(order[cursor], +1);
        ++cursor;
      } else {
        --taken;
      }
    }
  }
  Ratio value() const {
    double num = sw == 0.0 ? 0.0 : sw * std::pow(scq / double(cs->size()), p);
    if (taken < need) return {num, 0.0};
    double den = std::pow(double(k) / double(cs->size()), beta) * (infCount ? kInf : std::max(0.0, se));
    if (std::isinf(num) && std::isinf(den)) den = 0.0;  // the defining integral is not finite
    return {num, den};
  }
  std::vector<std::size_t> second() const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < cursor; ++r)
      if (!inE[order[r]]) out.push_back((*cs)[order[r]]);
    std::sort(out.begin(), out.end());
    return out;
  }
};

// w(E) / ((|E|/|Q|)^beta D(Q)) for a per-cube denominator D
struct MassEval {
  const Weight& w;
  double beta;
  std::function<double(std::size_t, const GridCube&)> denom;
  const std::vector<std::size_t>* cs = nullptr;
  double sw = 0.0, D = 0.0;
  std::size_t k = 0;

  void begin(std::size_t qi, const GridCube& q, const std::vector<std::size_t>& c) {
    cs = &c;
    sw = 0.0;
    k = 0;
    D = denom(qi, q);
  }
  void add(int i) {
    sw += w[(*cs)[i]];
    ++k;
  }
  Ratio value() const { return {sw, std::pow(double(k) / double(cs->size()), beta) * D}; }
  std::vector<std::size_t> second() const { return {}; }
};

}  // namespace detail

// lower bound for c1 in  int_E w <= c1 (|E|/|Q|)^beta int_{Q\E} v,  |E| <= alphaMax |Q|
inline PairEstimate conditionFEstimate(const Weight& w, const Weight& v, double beta, double alphaMax,
                                       std::optional<GridCube> root = {}, EstimatorBudget budget = {},
                                       std::optional<CubeMode> mode = {}, bool randomSubsets = true) {
  if (!(beta > 0.0)) throw PreconditionError("conditionF: beta must be positive");
  if (!(alphaMax > 0.0 && alphaMax < 1.0)) throw PreconditionError("conditionF: alpha must lie in (0,1)");
  if (!(w.grid() == v.grid())) throw PreconditionError("conditionF: weights on different grids");
  const Grid& g = w.grid();
  CubeFamily fam(g, mode.value_or(defaultMode(g)), root.value_or(rootCube(g)));
  std::vector<double> byW(w.function().values()), byRatio(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) byRatio[i] = w[i] / (v[i] + budget.delta);
  detail::FEval ev{w, v, beta};
  return detail::searchPairs(g, fam, {byW, byRatio}, budget, randomSubsets, ev, [&](std::size_t m) {
    return std::size_t(std::floor(alphaMax * double(m) + 1e-9));
  });
}

// lower bound for c0 in the W_p condition; E' is the cheapest admissible set in Q\E
inline PairEstimate wpEstimate(const Weight& w, const Weight& v, double p, double beta, double alpha,
                               double cFactor = 3.0, std::optional<GridCube> root = {}, EstimatorBudget budget = {},
                               std::optional<CubeMode> mode = {}) {
  if (!(p > 1.0)) throw PreconditionError("W_p: p must exceed 1");
  if (!(cFactor > 1.0)) throw PreconditionError("W_p: enlargement factor must exceed 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("W_p: alpha must lie in (0,1)");
  if (!(beta > 0.0)) throw PreconditionError("W_p: beta must be positive");
  const Grid& g = w.grid();
  double e = 1.0 - p / (p - 1.0);
  std::vector<double> sigma(g.size()), sigmaFinite(g.size()), zero(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    sigma[i] = v[i] == 0.0 ? kInf : std::pow(v[i], e);
    sigmaFinite[i] = v[i] == 0.0 ? 0.0 : sigma[i];
    zero[i] = v[i] == 0.0 ? 1.0 : 0.0;
  }
  CubeSums ss(g, sigmaFinite), sz(g, zero);
  CubeFamily fam(g, mode.value_or(defaultMode(g)), root.value_or(rootCube(g)));
  std::vector<double> byW(w.function().values()), byRatio(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) byRatio[i] = w[i] / (v[i] + budget.delta);
  detail::WpEval ev{w, sigma, ss, sz, g, p, beta, alpha, cFactor};
  return detail::searchPairs(g, fam, {byW, byRatio}, budget, true, ev, [&](std::size_t m) {
    std::size_t need = std::size_t(std::ceil(alpha * double(m) - 1e-9));
    return m > need ? m - need : 0;
  });
}

// lower bound for c in  w(E) <= c (|E|/|Q|)^beta w(2Q)
inline PairEstimate weakAinfEstimate(const Weight& w, double beta, std::optional<GridCube> root = {},
                                     EstimatorBudget budget = {}, std::optional<CubeMode> mode = {}) {
  const Grid& g = w.grid();
  CubeSums sw(g, w.function().values());
  CubeFamily fam(g, mode.value_or(defaultMode(g)), root.value_or(rootCube(g)));
  detail::MassEval ev{w, beta, [&](std::size_t, const GridCube& q) { return sw.sum(dilateClipped(g, q, 2.0)); }};
  return detail::searchPairs(g, fam, {w.function().values()}, budget, true, ev,
                             [](std::size_t m) { return m; });
}

// M(chi_Q)(x): the best cube through x and Q is the smallest one containing both
inline double maximalOfIndicator(const Grid& g, const GridCube& q, std::size_t cell) {
  Coord c = g.coords(cell);
  int D = 0;
  for (int a = 0; a < g.dim(); ++a) {
    int lo = std::min(q.offset[a], c[a]), hi = std::max(q.offset[a] + q.side, c[a] + 1);
    D = std::max(D, hi - lo);
  }
  double r = double(q.side) / double(D);
  return g.dim() == 1 ? r : r * r;
}

// lower bound for c in  w(E) <= c (|E|/|Q|)^beta int M(chi_Q)^p w
inline PairEstimate cpEstimate(const Weight& w, double p, double beta, std::optional<GridCube> root = {},
                               EstimatorBudget budget = {}, std::optional<CubeMode> mode = {}) {
  const Grid& g = w.grid();
  CubeFamily fam(g, mode.value_or(defaultMode(g)), root.value_or(rootCube(g)));
  detail::MassEval ev{w, beta, [&](std::size_t, const GridCube& q) {
                        double s = 0.0;
                        for (std::size_t x = 0; x < g.size(); ++x)
                          s += std::pow(maximalOfIndicator(g, q, x), p) * w[x];
                        return s;
                      }};
  return detail::searchPairs(g, fam, {w.function().values()}, budget, true, ev,
                             [](std::size_t m) { return m; });
}

// ---------------------------------------------------------------- bump conditions

struct PerezParams {
  double p = 2.0;
  double q = 2.0;
  YoungFunction B = YoungFunction::power(3.0);
  std::optional<YoungFunction> A;  // present: the L^A-bumped form with exponent r
  double r = 1.0;
  std::optional<double> wExponent;  // exponent on w in the bumped form; default r/q
};

struct PerezResult {
  CubeSup sup;
  Verdict conjugateInBp = Verdict::indeterminate;
};

inline PerezResult perezBumpCheck(const Weight& w, const Weight& v, const PerezParams& prm,
                                  std::optional<GridCube> root = {}, std::optional<CubeMode> mode = {}) {
  if (!(prm.p > 1.0 && prm.p <= prm.q)) throw PreconditionError("perezBumpCheck: need 1 < p <= q");
  const Grid& g = w.grid();
  PerezResult out;
  try {
    out.conjugateInBp = bpDiagnostics(conjugate(prm.B), prm.A ? prm.p / prm.r : prm.p).inBp;
  } catch (const PreconditionError&) {
    out.conjugateInBp = Verdict::indeterminate;
  }
  bool bumped = prm.A.has_value();
  double ev = bumped ? -prm.r / prm.p : -1.0 / prm.p;
  double ew = prm.wExponent.value_or(prm.r / prm.q);
  std::vector<double> vpow(g.size()), wpow(g.size());
  bool vZero = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    vZero = vZero || v[i] == 0.0;
    vpow[i] = v[i] == 0.0 ? 0.0 : std::pow(v[i], ev);
    wpow[i] = bumped ? std::pow(w[i], ew) : w[i];
  }
  GridFunction vf(g, vpow), wf(g, wpow);
  CubeSums sw(g, w.function().values());
  CubeFamily fam(g, mode.value_or(defaultMode(g)), root.value_or(rootCube(g)));
  fam.forEach([&](std::size_t, const GridCube& q) {
    if (out.sup.infinite) return;
    auto cs = cells(g, q);
    for (auto c : cs)
      if (v[c] == 0.0) {
        out.sup = {kInf, true, q, c};
        return;
      }
    double mq = measure(g, q);
    double val;
    if (!bumped) {
      val = std::pow(mq, 1.0 / prm.q - 1.0 / prm.p) * std::pow(sw.mean(q), 1.0 / prm.q) *
            luxemburgNorm(vf, prm.B, q);
    } else {
      val = std::pow(mq, prm.r / prm.q - prm.r / prm.p) * luxemburgNorm(wf, *prm.A, q) *
            luxemburgNorm(vf, prm.B, q);
    }
    if (val > out.sup.value) {
      out.sup.value = val;
      out.sup.witness = q;
    }
  });
  (void)vZero;
  return out;
}

// ---------------------------------------------------------------- Morrey / Campanato

// phi(x, l): power l^gamma or a piecewise-linear table in l
struct ScaleFunction {
  bool isPower = true;
  double gamma = 1.0;
  double coef = 1.0;
  std::vector<double> ls, vals;

  static ScaleFunction power(double gamma, double coef = 1.0) {
    ScaleFunction s;
    s.gamma = gamma;
    s.coef = coef;
    return s;
  }
  double operator()(const std::array<double, 2>&, double l) const {
    if (isPower) return coef * std::pow(l, gamma);
    if (l <= 0.0) return 0.0;
    auto it = std::lower_bound(ls.begin(), ls.end(), l);
    std::size_t i = std::size_t(it - ls.begin());
    if (i == ls.size()) return vals.back();
    double l0 = i ? ls[i - 1] : 0.0, v0 = i ? vals[i - 1] : 0.0;
    return v0 + (l - l0) * (vals[i] - v0) / (ls[i] - l0);
  }
  static ScaleFunction fromJson(const nlohmann::json& j) {
    auto form = j.value("form", std::string("power"));
    if (form == "power") return power(j.value("gamma", 1.0), j.value("coef", 1.0));
    if (form == "table") {
      ScaleFunction s;
      s.isPower = false;
      for (const auto& kn : j.at("knots")) {
        s.ls.push_back(kn.at(0).get<double>());
        s.vals.push_back(kn.at(1).get<double>());
      }
      if (s.ls.empty()) throw ConfigError("scale table needs knots");
      return s;
    }
    throw ConfigError("unknown scale function form '" + form + "'");
  }
};

// sup over l in samples of psi(l) int_l^inf dt / (t phi(t))
inline double couplingConstant(const ScaleFunction& phi, const ScaleFunction& psi, const std::vector<double>& ls) {
  double best = 0.0;
  for (double l : ls) {
    double integral;
    if (phi.isPower) {
      integral = std::pow(l, -phi.gamma) / (phi.gamma * phi.coef);
    } else {
      const int n = 4000;
      double a = std::log(l), b = std::log(l) + std::log(1e8), h = (b - a) / n, s = 0.0;
      for (int i = 0; i <= n; ++i) {
        double t = std::exp(a + h * i);
        double val = 1.0 / phi({0, 0}, t);
        s += (i == 0 || i == n) ? 0.5 * val : val;
      }
      integral = s * h;
    }
    best = std::max(best, psi({0, 0}, l) * integral);
  }
  return best;
}

namespace detail {

inline double morreyLike(const GridFunction& f, const YoungFunction& Phi, const ScaleFunction& phi, const Weight& w,
                         std::optional<double> t, const GridCube& root, CubeMode mode) {
  const Grid& g = f.grid();
  CubeFamily fam(g, mode, root);
  double best = 0.0;
  std::vector<double> x, mu, sv;
  fam.forEach([&](std::size_t, const GridCube& q) {
    auto cs = cells(g, q);
    double wq = 0.0;
    for (auto c : cs) wq += w[c];
    if (wq == 0.0) return;  // the weighted norm on a w-null cube carries no mass
    x.resize(cs.size());
    mu.resize(cs.size());
    double center = 0.0;
    if (t) {
      sv.clear();
      for (auto c : cs) sv.push_back(f[c]);
      std::sort(sv.begin(), sv.end());
      center = medianSorted(sv, *t);
    }
    for (std::size_t i = 0; i < cs.size(); ++i) {
      x[i] = f[cs[i]] - center;
      mu[i] = w[cs[i]] / wq;
    }
    double val = phi(cubeCenter(g, q), sideLength(g, q)) * luxemburg(x, mu, Phi);
    best = std::max(best, val);
  });
  return best;
}

}  // namespace detail

inline double morreyNorm(const GridFunction& f, const YoungFunction& Phi, const ScaleFunction& phi, const Weight& w,
                         std::optional<GridCube> root = {}, std::optional<CubeMode> mode = {}) {
  return detail::morreyLike(f, Phi, phi, w, std::nullopt, root.value_or(rootCube(f.grid())),
                            mode.value_or(defaultMode(f.grid())));
}

inline double campanatoNorm(const GridFunction& f, const YoungFunction& Phi, const ScaleFunction& phi, const Weight& w,
                            double t, std::optional<GridCube> root = {}, std::optional<CubeMode> mode = {}) {
  requireT(t);
  return detail::morreyLike(f, Phi, phi, w, t, root.value_or(rootCube(f.grid())),
                            mode.value_or(defaultMode(f.grid())));
}

// ---------------------------------------------------------------- A_Phi

// inverse of the derivative a = Phi'
inline double derivativeInverse(const YoungFunction& Phi, double y) {
  if (!(y > 0.0)) return 0.0;
  if (auto* p = std::get_if<YoungFunction::Power>(&Phi.family())) {
    if (p->p <= 1.0) throw NumericError("A_Phi: derivative of a linear function is not invertible");
    return std::pow(y / (p->scale * p->p), 1.0 / (p->p - 1.0));
  }
  double lo = -200.0, hi = 200.0;
  if (Phi.derivative(std::exp(hi)) < y || Phi.derivative(std::exp(lo)) > y)
    throw NumericError("A_Phi: derivative not invertible on the sampled range");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (Phi.derivative(std::exp(mid)) < y)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

// sup over cubes of (avg eps w) a(avg a^{-1}(1/(eps w))) at eps = ||1/w||_{L^conj(Phi)_w(Q)}
inline CubeSup aPhiCheck(const Weight& w, const YoungFunction& Phi, std::optional<GridCube> root = {},
                         std::optional<CubeMode> mode = {}) {
  const Grid& g = w.grid();
  YoungFunction conj = conjugate(Phi);
  CubeFamily fam(g, mode.value_or(defaultMode(g)), root.value_or(rootCube(g)));
  CubeSup out;
  std::vector<double> x, mu;
  fam.forEach([&](std::size_t, const GridCube& q) {
    if (out.infinite) return;
    auto cs = cells(g, q);
    double wq = 0.0;
    for (auto c : cs) {
      if (w[c] == 0.0) {
        out = {kInf, true, q, c};
        return;
      }
      wq += w[c];
    }
    x.resize(cs.size());
    mu.resize(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) {
      x[i] = 1.0 / w[cs[i]];
      mu[i] = w[cs[i]] / wq;
    }
    double eps = luxemburg(x, mu, conj);
    double avgInv = 0.0;
    for (auto c : cs) avgInv += derivativeInverse(Phi, 1.0 / (eps * w[c]));
    avgInv /= double(cs.size());
    double val = eps * (wq / double(cs.size())) * Phi.derivative(avgInv);
    if (val > out.value) {
      out.value = val;
      out.witness = q;
    }
  });
  return out;
}

}  // namespace medosc
