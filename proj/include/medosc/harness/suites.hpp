#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "../cube_table.hpp"
#include "../decomposition.hpp"
#include "../errors.hpp"
#include "../grid.hpp"
#include "../maximal.hpp"
#include "../median.hpp"
#include "../operators.hpp"
#include "../trend.hpp"
#include "../weights.hpp"
#include "../young.hpp"
#include "corpus.hpp"
#include "report.hpp"

namespace medosc::harness {

struct SuiteConfig {
  std::string suite;
  std::vector<int> levels;  // empty: suite default
  std::string corpus;       // empty: suite default
  std::size_t cases = 50;
  std::uint64_t seed = 20240611;
  double threshold = 1.25;
  unsigned threads = 0;  // 0: hardware concurrency
  nlohmann::json params = nlohmann::json::object();
};

// typed view over the merged parameter object
class Params {
 public:
  explicit Params(nlohmann::json j) : j_(std::move(j)) {}
  const nlohmann::json& json() const { return j_; }
  bool has(const std::string& k) const { return j_.contains(k); }

  double num(const std::string& k) const {
    const auto& v = at(k);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parseNumber(v.get<std::string>(), "parameter '" + k + "'");
    throw ConfigError("parameter '" + k + "' must be a number");
  }
  int integer(const std::string& k) const {
    double x = num(k);
    if (x != std::floor(x)) throw ConfigError("parameter '" + k + "' must be an integer");
    return int(x);
  }
  std::string str(const std::string& k) const {
    const auto& v = at(k);
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }
  YoungFunction young(const std::string& k) const {
    const auto& v = at(k);
    return v.is_object() ? YoungFunction::fromJson(v) : YoungFunction::parse(v.get<std::string>());
  }
  std::optional<CubeMode> mode() const {
    if (!has("mode") || str("mode") == "auto") return std::nullopt;
    return parseCubeMode(str("mode"));
  }

 private:
  const nlohmann::json& at(const std::string& k) const {
    if (!j_.contains(k)) throw ConfigError("missing parameter '" + k + "'");
    return j_.at(k);
  }
  nlohmann::json j_;
};

// what one case contributes; ratio is set by pointwise suites, otherwise lhs/rhs
struct Outcome {
  double lhs = 0.0;
  double rhs = 0.0;
  std::optional<double> ratio;
  bool zeroOverZero = false;
  std::vector<std::string> violations;
};

using CaseFn = std::function<Outcome(const Case&)>;

struct GateResult {
  std::string expectation = "pass";
  nlohmann::json constants = nlohmann::json::object();
};

struct SuiteDef {
  SuiteDef(std::string id_, std::string title_) : id(std::move(id_)), title(std::move(title_)) {}
  std::string id;
  std::string title;
  bool exact = false;
  nlohmann::json defaults;
  std::vector<int> levels{6, 7, 8};
  std::string corpus = "random-uniform,trig,step,spike";
  std::function<void(const Params&, const std::vector<int>&, GateResult&)> gate;
  std::function<CaseFn(const Params&, const Grid&)> prepare;
  std::function<GeneratorContext(const Params&)> context;
};

namespace detail {

inline Domain domainOf(const Params& p) {
  std::string d = p.has("domain") ? p.str("domain") : "unit";
  if (d == "unit") return {};
  if (d == "fujii") return {{-2.0, 0.0}, 4.0};
  if (d == "symmetric") return {{-1.0, 0.0}, 2.0};
  throw ConfigError("unknown domain '" + d + "' (unit|fujii|symmetric)");
}

inline Grid gridOf(const Params& p, int level) {
  if (level < 1 || level > 14) throw ConfigError("level must lie in 1..14");
  return Grid(1, level, domainOf(p));
}

inline GridFunction absCentered(const GridFunction& h, double t) {
  double m = maximalMedian(h, t, rootCube(h.grid()));
  return h.map([m](double x) { return std::fabs(x - m); });
}

// sum over cells of Phi(|x|) w vol
inline double weightedPhi(const GridFunction& x, const YoungFunction& Phi, const GridFunction& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (w[i] != 0.0) s += Phi(std::fabs(x[i])) * w[i];
  return s * x.grid().cellVolume();
}

inline double weightedPower(const GridFunction& x, double p, const GridFunction& w) {
  return weightedPhi(x, YoungFunction::power(p), w);
}

// sup over cells of L/R with 0/0 -> 0 and L>0=R -> inf
inline Outcome pointwiseSup(const GridFunction& L, const GridFunction& R) {
  Outcome o;
  double best = -1.0;
  std::size_t zz = 0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    bool z = false;
    double r = safeRatio(L[i], R[i], &z);
    if (z) ++zz;
    if (r > best) {
      best = r;
      o.lhs = L[i];
      o.rhs = R[i];
    }
  }
  o.ratio = best;
  o.zeroOverZero = zz == L.size();
  return o;
}

inline Weight weightOf(const Params& p, const Grid& g, const std::string& key = "weight") {
  return Weight(parseWeight(p.str(key), g));
}

inline double exponentOfPower(const std::string& spec) {
  auto parts = splitOn(spec, ':');
  if (parts.size() == 2 && (parts[0] == "power" || parts[0] == "power-weight"))
    return parseNumber(parts[1], "weight");
  return std::nan("");
}

inline double pOfPhi(const YoungFunction& Phi) {
  double u = upperIndex(Phi).value;
  if (!(u > 0.0 && u < 1.0)) throw ConfigError("Phi has upper index outside (0,1); no exponent p = 1/u");
  return std::round(1000.0 / u) / 1000.0;
}

// p = 1/u_Phi; an explicit "p" must agree with Phi
inline double pOfPhi(const Params& p) {
  double fromPhi = pOfPhi(p.young("phi"));
  if (!p.has("p") || p.str("p") == "auto") return fromPhi;
  double given = p.num("p");
  if (std::fabs(given - fromPhi) > 1e-3)
    throw ConfigError("p = " + fmt17(given) + " disagrees with 1/u_Phi = " + fmt17(fromPhi) + "; set phi to power:p");
  return fromPhi;
}

// A_p trend over the suite levels, grid-aligned so the family is the same at every level
inline Trend apTrend(const Params& p, const std::vector<int>& levels, double ap, const std::string& key,
                     nlohmann::json& constants, double threshold) {
  std::vector<double> vals;
  for (int L : levels) {
    Grid g = gridOf(p, L);
    auto c = apConstant(weightOf(p, g, key), ap, std::nullopt, CubeMode::gridAligned);
    vals.push_back(c.infinite ? kInf : c.value);
  }
  Trend t = classifyTrend(vals, threshold);
  nlohmann::json jv = nlohmann::json::array();
  for (double v : vals) jv.push_back(num(v));
  constants["Ap"] = {{"p", ap}, {"values", jv}, {"trend", toString(t.cls)},
                     {"source", "apConstant, grid-aligned cubes"}};
  return t;
}

inline void requireTs(double t, double s, bool strictT) {
  if (!(s > 0.0 && s <= 0.5)) throw ConfigError("hypothesis: need 0 < s <= 1/2");
  if (strictT ? !(t > 0.5 && t < 1.0 - s) : !(t >= 0.5 && t < 1.0 - s))
    throw ConfigError(std::string("hypothesis: need ") + (strictT ? "1/2 < t" : "1/2 <= t") + " < 1 - s");
}

// condition F on the pair with beta chosen (or checked), then the admissibility c0 (s/(1-t))^beta < 1
inline void conditionFGate(const Params& p, const std::vector<int>& levels, GateResult& gr, const YoungFunction& Phi,
                           double threshold) {
  double t = p.num("t"), s = p.num("s"), alpha = p.num("alpha");
  std::vector<double> betas;
  bool autoBeta = p.str("beta") == "auto";
  if (autoBeta)
    betas = {1.0, 0.75, 0.5, 0.25};
  else
    betas = {p.num("beta")};
  double c0 = Phi.doublingConstant();
  nlohmann::json tried = nlohmann::json::array();
  for (double beta : betas) {
    std::vector<double> vals;
    for (int L : levels) {
      Grid g = gridOf(p, L);
      auto [w, v] = parsePair(p.str("pair"), g);
      auto est = conditionFEstimate(Weight(w), Weight(v), beta, alpha, std::nullopt, {}, CubeMode::gridAligned);
      vals.push_back(est.infinite ? kInf : est.estimate);
    }
    Trend tr = classifyTrend(vals, threshold);
    nlohmann::json jv = nlohmann::json::array();
    for (double x : vals) jv.push_back(num(x));
    tried.push_back({{"beta", beta}, {"c1", jv}, {"trend", toString(tr.cls)}});
    if (tr.cls != TrendClass::stable && autoBeta) continue;
    double gate = c0 * std::pow(s / (1.0 - t), beta);
    gr.constants["conditionF"] = {{"beta", beta},         {"c1", jv},         {"trend", toString(tr.cls)},
                                  {"alpha", alpha},       {"tried", tried},   {"c0", num(c0)},
                                  {"admissibility", num(gate)},
                                  {"source", "conditionFEstimate lower bounds, grid-aligned cubes"}};
    if (!(gate < 1.0))
      throw ConfigError("hypothesis: c0 (s/(1-t))^beta = " + fmt17(gate) + " >= 1 (c0 = " + fmt17(c0) +
                        ", beta = " + fmt17(beta) + "); refusing to run");
    if (tr.cls != TrendClass::stable) gr.expectation = "fail";
    return;
  }
  throw ConfigError("hypothesis: no beta in {1, 3/4, 1/2, 1/4} gives a stable condition F estimate for pair '" +
                    p.str("pair") + "'");
}

inline KernelOperator operatorOf(const Params& p) {
  std::string k = p.has("operator") ? p.str("operator") : "hilbert";
  if (k == "hilbert") return KernelOperator::hilbert();
  auto parts = splitOn(k, ':');
  if (parts[0] == "dini") return KernelOperator::dini(parts.size() > 1 ? parseNumber(parts[1], "operator") : 0.5);
  throw ConfigError("unknown operator '" + k + "' (hilbert|dini:eta)");
}

// the Tf - m_Tf(t,Q0) integral pair shared by the weighted L^Phi suites
struct IntegralSpec {
  YoungFunction lhsPhi;
  YoungFunction rhsPhi;
  enum class Rhs { absF, maximalF, maximalRF } rhsArg = Rhs::absF;
  double r = 1.0;
};

inline CaseFn integralCase(const Params& p, const Grid& g, const KernelOperator& T, IntegralSpec spec,
                           GridFunction w, GridFunction v, std::optional<CubeMode> mode) {
  double t = p.num("t");
  return [=](const Case& c) {
    GridFunction ww = c.w ? *c.w : w;
    GridFunction vv = c.w ? *c.w : v;
    Outcome o;
    auto lhsArg = absCentered(apply(T, c.f), t);
    o.lhs = weightedPhi(lhsArg, spec.lhsPhi, ww);
    GridFunction rhsArg = c.f.abs();
    if (spec.rhsArg != IntegralSpec::Rhs::absF) rhsArg = hlMaximalField(c.f, rootCube(g), spec.r, mode);
    o.rhs = weightedPhi(rhsArg, spec.rhsPhi, vv);
    return o;
  };
}

inline GeneratorContext contextFromWeight(const Params& p) {
  GeneratorContext ctx;
  if (p.has("weight")) {
    double a = exponentOfPower(p.str("weight"));
    if (std::isfinite(a)) ctx.a = a;
  }
  if (p.has("p") && p.str("p") != "auto") ctx.p = p.num("p");
  return ctx;
}

inline nlohmann::json obj(std::initializer_list<nlohmann::json::object_t::value_type> kv) {
  return nlohmann::json::object_t(kv);
}

}  // namespace detail

// ---------------------------------------------------------------- registry

inline const std::vector<SuiteDef>& suites() {
  using namespace detail;
  static const std::vector<SuiteDef> all = [] {
    std::vector<SuiteDef> v;

    {
      SuiteDef d{"thm2.1", "median decomposition: exact checks of (i)-(iv)"};
      d.exact = true;
      d.defaults = obj({{"t", 0.5}, {"s", 0.125}, {"variant", "base"}, {"slack", 2.0}, {"domain", "unit"}});
      d.levels = {3};
      d.corpus = "binary-exhaustive";
      d.gate = [](const Params& p, const std::vector<int>&, GateResult&) {
        checkDecompositionParams(p.num("t"), p.num("s"), parseVariant(p.str("variant")), 1);
      };
      d.prepare = [](const Params& p, const Grid&) -> CaseFn {
        double t = p.num("t"), s = p.num("s"), slack = p.num("slack");
        Variant var = parseVariant(p.str("variant"));
        return [=](const Case& c) {
          auto r = decompose(c.f, DyadicCube{}, t, s, var, CubeMode::gridAligned);
          auto pw = verifyPointwiseBound(c.f, r, std::nullopt, slack);
          auto dec = measureDecay(r);
          Outcome o;
          o.lhs = dec.maxRatio;
          o.rhs = dec.bound;
          if (!dec.disjointHolds) o.violations.push_back("(ii)");
          if (!dec.monotoneHolds) o.violations.push_back("(iii)");
          if (!dec.ivHolds) o.violations.push_back("(iv)");
          if (!pw.violations.empty()) o.violations.push_back("(i)");
          if (!pw.coefficientViolations.empty()) o.violations.push_back("(i)-coefficient");
          return o;
        };
      };
      v.push_back(std::move(d));
    }

    {
      SuiteDef d{"thm3.1", "weighted median oscillation inequality under condition F"};
      d.defaults = obj({{"t", 0.6}, {"s", 0.125}, {"phi", "power:1"}, {"pair", "fujii"}, {"beta", "auto"},
                        {"alpha", 0.5}, {"domain", "fujii"}, {"mode", "auto"}});
      d.levels = {6, 7, 8};
      d.gate = [](const Params& p, const std::vector<int>& L, GateResult& gr) {
        requireTs(p.num("t"), p.num("s"), true);
        conditionFGate(p, L, gr, p.young("phi"), 1.25);
      };
      d.prepare = [](const Params& p, const Grid& g) -> CaseFn {
        auto [w, v] = parsePair(p.str("pair"), g);
        double t = p.num("t"), s = p.num("s");
        auto Phi = p.young("phi");
        auto mode = p.mode();
        return [=](const Case& c) {
          Outcome o;
          o.lhs = weightedPhi(absCentered(c.f, t), Phi, w);
          o.rhs = weightedPhi(localSharpMaximalField(c.f, rootCube(g), s, mode), Phi, v);
          return o;
        };
      };
      v.push_back(std::move(d));
    }

    {
      SuiteDef d{"thm3.2", "concave Phi, arbitrary weight, Mw on the right"};
      d.defaults = obj({{"t", 0.5}, {"s", 0.125}, {"phi", "mixed:0.5:0.5"}, {"weight", "power:1.5"},
                        {"domain", "unit"}, {"mode", "auto"}});
      d.gate = [](const Params& p, const std::vector<int>&, GateResult& gr) {
        requireTs(p.num("t"), p.num("s"), false);
        auto Phi = p.young("phi");
        for (int i = 0; i < 200; ++i) {
          double a = std::pow(10.0, -4.0 + 8.0 * i / 200.0), b = 3.0 * a;
          if (Phi(0.5 * (a + b)) < 0.5 * (Phi(a) + Phi(b)) * (1.0 - 1e-12))
            throw ConfigError("hypothesis: Phi must be concave");
        }
        gr.constants["phi"] = Phi.describe();
      };
      d.prepare = [](const Params& p, const Grid& g) -> CaseFn {
        auto w = weightOf(p, g).function();
        auto mode = p.mode();
        auto Mw = hlMaximalField(w, rootCube(g), 1.0, mode);
        double t = p.num("t"), s = p.num("s");
        auto Phi = p.young("phi");
        return [=](const Case& c) {
          Outcome o;
          o.lhs = weightedPhi(absCentered(c.f, t), Phi, w);
          o.rhs = weightedPhi(localSharpMaximalField(c.f, rootCube(g), s, mode), Phi, Mw);
          return o;
        };
      };
      v.push_back(std::move(d));
    }

    auto domination = [](std::string id, std::string title, nlohmann::json defaults, DominationVariant var,
                         std::function<KernelOperator(const Params&)> op) {
      SuiteDef d{std::move(id), std::move(title)};
      d.defaults = std::move(defaults);
      d.gate = [op](const Params& p, const std::vector<int>&, GateResult& gr) {
        double s = p.num("s");
        if (!(s > 0.0 && s <= 0.5)) throw ConfigError("hypothesis: need 0 < s <= 1/2");
        if (p.has("r") && !(p.num("r") >= 1.0)) throw ConfigError("hypothesis: need r >= 1");
        auto T = op(p);
        T.requireDim(1);
        gr.constants["operator"] = T.toJson();
      };
      d.prepare = [var, op](const Params& p, const Grid& g) -> CaseFn {
        auto T = op(p);
        double s = p.num("s"), r = p.has("r") ? p.num("r") : 1.0;
        auto v2 = var;
        if (p.has("form") && p.str("form") == "sharp") v2 = DominationVariant::thm41Sharp;
        auto mode = p.mode();
        return [=](const Case& c) {
          auto rep = pointwiseDomination(T, c.f, rootCube(g), s, v2, r, mode);
          Outcome o;
          o.ratio = rep.supRatio;
          o.lhs = rep.lhs[rep.argmax];
          o.rhs = rep.rhs[rep.argmax];
          o.zeroOverZero = rep.zeroOverZero == g.size();
          return o;
        };
      };
      return d;
    };

    v.push_back(domination("thm4.1", "M#_{0,s}(Tf) against M_r f",
                           obj({{"s", 0.125}, {"r", 2.0}, {"form", "Mr"}, {"operator", "hilbert"},
                                {"domain", "unit"}, {"mode", "auto"}}),
                           DominationVariant::thm41, [](const Params& p) { return operatorOf(p); }));
    v.back().levels = {7, 8, 9};
    v.push_back(domination("thm4.3", "Hormander-type kernel against M_{conj A} f",
                           obj({{"s", 0.125}, {"A", "power:2"}, {"domain", "unit"}, {"mode", "auto"}}),
                           DominationVariant::thm43,
                           [](const Params& p) { return KernelOperator::hormander(p.young("A")); }));
    v.push_back(domination("thm4.4", "homogeneous kernel against sum_i Mf(A_i^{-1} x)",
                           obj({{"s", 0.125}, {"a", {1.0, -1.0}}, {"alpha", {0.5, 0.5}}, {"domain", "symmetric"},
                                {"mode", "auto"}}),
                           DominationVariant::thm44, [](const Params& p) {
                             return KernelOperator::homogeneous(p.json().at("a").get<std::vector<double>>(),
                                                                p.json().at("alpha").get<std::vector<double>>());
                           }));

    {
      SuiteDef d{"thm5.1", "weighted L^Phi estimate of Tf against M_T f under condition F"};
      d.defaults = obj({{"t", 0.6}, {"s", 0.125}, {"phi", "power:1"}, {"pair", "fujii"}, {"beta", "auto"},
                        {"alpha", 0.5}, {"r", 1.0}, {"domain", "fujii"}, {"mode", "auto"}});
      d.gate = [](const Params& p, const std::vector<int>& L, GateResult& gr) {
        requireTs(p.num("t"), p.num("s"), true);
        conditionFGate(p, L, gr, p.young("phi"), 1.25);
      };
      d.prepare = [](const Params& p, const Grid& g) -> CaseFn {
        auto [w, v] = parsePair(p.str("pair"), g);
        auto Phi = p.young("phi");
        return integralCase(p, g, KernelOperator::hilbert(),
                            {Phi, Phi, IntegralSpec::Rhs::maximalRF, p.num("r")}, w, v, p.mode());
      };
      v.push_back(std::move(d));
    }

    {
      SuiteDef d{"thm5.2", "M#_p(Tf) against M_r f, and M#_r(Tf) against M_{L^r log L} f"};
      d.defaults = obj({{"form", "5.1"}, {"p", 0.5}, {"r", 1.0}, {"domain", "unit"}, {"mode", "dyadic"}});
      d.gate = [](const Params& p, const std::vector<int>&, GateResult&) {
        std::string form = p.str("form");
        if (form != "5.1" && form != "5.2") throw ConfigError("form must be 5.1 or 5.2");
        if (!(p.num("r") >= 1.0)) throw ConfigError("hypothesis: need r >= 1");
        if (form == "5.1" && !(p.num("p") > 0.0 && p.num("p") < p.num("r")))
          throw ConfigError("hypothesis: need 0 < p < r");
      };
      d.prepare = [](const Params& p, const Grid& g) -> CaseFn {
        bool first = p.str("form") == "5.1";
        double pp = p.num("p"), r = p.num("r");
        auto mode = p.mode();
        auto A = YoungFunction::powerLog(r, 1.0);
        auto T = KernelOperator::hilbert();
        return [=](const Case& c) {
          auto Tf = apply(T, c.f);
          if (first)
            return pointwiseSup(sharpMaximalField(Tf, rootCube(g), pp, mode),
                                hlMaximalField(c.f, rootCube(g), r, mode));
          return pointwiseSup(sharpMaximalField(Tf, rootCube(g), r, mode),
                              orliczMaximalField(c.f, rootCube(g), A, 0.0, mode));
        };
      };
      v.push_back(std::move(d));
    }

    {
      SuiteDef d{"thm5.3", "weighted L^Phi bound for Tf with w in A_p, p = 1/u_Phi"};
      d.defaults = obj({{"t", 0.5}, {"phi", "power:2"}, {"p", "auto"}, {"weight", "power:0.5"}, {"domain", "unit"}});
      d.corpus = "random-uniform,trig,step,spike,inverse-weight";
      d.gate = [](const Params& p, const std::vector<int>& L, GateResult& gr) {
        double ap = pOfPhi(p);
        gr.constants["p"] = ap;
        if (apTrend(p, L, ap, "weight", gr.constants, 1.25).cls != TrendClass::stable) gr.expectation = "fail";
      };
      d.context = [](const Params& p) {
        auto ctx = contextFromWeight(p);
        ctx.p = pOfPhi(p);
        return ctx;
      };
      d.prepare = [](const Params& p, const Grid& g) -> CaseFn {
        auto w = weightOf(p, g).function();
        auto Phi = p.young("phi");
        return integralCase(p, g, KernelOperator::hilbert(), {Phi, Phi}, w, w, p.mode());
      };
      v.push_back(std::move(d));
    }

    {
      SuiteDef d{"thm5.4", "Phi(|Tf|) w against Psi(|f|) Mv under condition F"};
      // s = 0.05 keeps c0 (s/(1-t))^beta below 1 for Phi = t^2 (c0 = 4)
      d.defaults = obj({{"t", 0.6}, {"s", 0.05}, {"phi", "power:2"}, {"psi", "power:2"}, {"pair", "fujii"},
                        {"beta", "auto"}, {"alpha", 0.5}, {"domain", "fujii"}, {"mode", "auto"}});
      d.gate = [](const Params& p, const std::vector<int>& L, GateResult& gr) {
        auto Phi = p.young("phi"), Psi = p.young("psi");
        // int_0^t Phi(s)/s^2 ds <= c Psi(t)/t on a log grid (trapezoid in log s)
        double worst = 0.0, acc = 0.0, prevS = 1e-8, prevG = Phi(1e-8) / 1e-8;
        for (int i = 1; i <= 2000; ++i) {
          double s = std::pow(10.0, -8.0 + 14.0 * i / 2000.0), gval = Phi(s) / s;
          acc += 0.5 * (gval + prevG) * std::log(s / prevS);
          prevS = s;
          prevG = gval;
          worst = std::max(worst, acc / (Psi(s) / s));
        }
        gr.constants["phiPsiCondition"] = num(worst);
        if (!std::isfinite(worst) || worst > 1e6) throw ConfigError("hypothesis: int_0^t Phi(s)/s^2 ds <= c Psi(t)/t fails");
        conditionFGate(p, L, gr, Phi, 1.25);
      };
      d.prepare = [](const Params& p, const Grid& g) -> CaseFn {
        auto [w, v] = parsePair(p.str("pair"), g);
        auto Mv = hlMaximalField(v, rootCube(g), 1.0, p.mode());
        return integralCase(p, g, KernelOperator::hilbert(), {p.young("phi"), p.young("psi")}, w, Mv, p.mode());
      };
      v.push_back(std::move(d));
    }

    {
      SuiteDef d{"thm5.5", "Phi(t^{1/r}) convex, w in A_{p/r}"};
      d.defaults = obj({{"t", 0.5}, {"phi", "power:3"}, {"r", 1.5}, {"weight", "power:0.5"}, {"domain", "unit"}});
      d.gate = [](const Params& p, const std::vector<int>& L, GateResult& gr) {
        auto Phi = p.young("phi");
        double r = p.num("r");
        if (!YoungFunction::composed(Phi, 1.0 / r).convexOnGrid())
          throw ConfigError("hypothesis: Psi(t) = Phi(t^{1/r}) must be convex");
        double ap = pOfPhi(Phi);
        if (!(ap / r > 1.0)) throw ConfigError("hypothesis: need p/r > 1");
        gr.constants["p"] = ap;
        if (apTrend(p, L, ap / r, "weight", gr.constants, 1.25).cls != TrendClass::stable) gr.expectation = "fail";
      };
      d.prepare = [](const Params& p, const Grid& g) -> CaseFn {
        auto w = weightOf(p, g).function();
        auto Phi = p.young("phi");
        return integralCase(p, g, KernelOperator::hilbert(), {Phi, Phi}, w, w, p.mode());
      };
      v.push_back(std::move(d));
    }

    {
      SuiteDef d{"thm5.6", "A in B_p bump, Phi(|f|) Mv on the right"};
      d.defaults = obj({{"t", 0.6}, {"A", "power:1.5"}, {"phi", "power:2.5"}, {"p", 2.0}, {"pair", "fujii"},
                        {"domain", "fujii"}, {"mode", "auto"}});
      d.gate = [](const Params& p, const std::vector<int>&, GateResult& gr) {
        auto A = p.young("A"), Phi = p.young("phi");
        double pp = p.num("p");
        auto bp = bpDiagnostics(A, pp);
        gr.constants["A_in_Bp"] = {{"verdict", toString(bp.inBp)}, {"tailExponent", bp.tailExponent}};
        if (bp.inBp == Verdict::no) throw ConfigError("hypothesis: A is not in B_p");
        // Phi/t^p increasing and Phi/t^q decreasing for some q > p
        double best = kInf;
        for (int i = 0; i < 200; ++i) {
          double t = std::pow(10.0, -4.0 + 8.0 * i / 200.0);
          double e = std::log(Phi(2 * t) / Phi(t)) / std::log(2.0);
          if (e < pp - 1e-9) throw ConfigError("hypothesis: Phi(t)/t^p must increase");
          best = std::min(best, e);
        }
        gr.constants["phiLowerExponent"] = best;
      };
      d.prepare = [](const Params& p, const Grid& g) -> CaseFn {
        auto [w, v] = parsePair(p.str("pair"), g);
        auto Mv = hlMaximalField(v, rootCube(g), 1.0, p.mode());
        auto Phi = p.young("phi");
        return integralCase(p, g, KernelOperator::hilbert(), {Phi, Phi}, w, Mv, p.mode());
      };
      v.push_back(std::move(d));
    }

    {
      SuiteDef d{"thm5.7", "homogeneous kernel, w(A_i x) <= c w(x), w in A_p"};
      d.defaults = obj({{"t", 0.5}, {"phi", "power:2"}, {"weight", "power:0.5"}, {"a", {1.0, -1.0}},
                        {"alpha", {0.5, 0.5}}, {"domain", "symmetric"}});
      d.gate = [](const Params& p, const std::vector<int>& L, GateResult& gr) {
        auto a = p.json().at("a").get<std::vector<double>>();
        auto T = KernelOperator::homogeneous(a, p.json().at("alpha").get<std::vector<double>>());
        T.requireDim(1);
        Grid g = gridOf(p, L.back());
        auto w = weightOf(p, g);
        double worst = 0.0;
        for (std::size_t c = 0; c < g.size(); ++c)
          for (double ai : a) {
            double z = ai * g.center(c, 0);
            if (z < g.domain().origin[0] || z >= g.domain().origin[0] + g.domain().side) continue;
            worst = std::max(worst, safeRatio(w[g.locate({z, 0})], w[c]));
          }
        gr.constants["dilationConstant"] = num(worst);
        if (!std::isfinite(worst)) throw ConfigError("hypothesis: w(A_i x) <= c w(x) fails");
        double ap = pOfPhi(p.young("phi"));
        if (apTrend(p, L, ap, "weight", gr.constants, 1.25).cls != TrendClass::stable) gr.expectation = "fail";
      };
      d.prepare = [](const Params& p, const Grid& g) -> CaseFn {
        auto w = weightOf(p, g).function();
        auto T = KernelOperator::homogeneous(p.json().at("a").get<std::vector<double>>(),
                                             p.json().at("alpha").get<std::vector<double>>());
        auto Phi = p.young("phi");
        return integralCase(p, g, T, {Phi, Phi}, w, w, std::nullopt);
      };
      // the log singularity of Tf at 0 is still being resolved below L = 8
      d.levels = {8, 9, 10};
      v.push_back(std::move(d));
    }

    {
      SuiteDef d{"thm6.2", "two-weight L^p bound for (w, v) in W_p"};
      d.defaults = obj({{"t", 0.5}, {"p", 2.0}, {"pair", "power:0.5"}, {"beta", 0.5}, {"alpha", 0.5},
                        {"domain", "unit"}});
      d.gate = [](const Params& p, const std::vector<int>& L, GateResult& gr) {
        std::vector<double> vals;
        for (int l : L) {
          Grid g = gridOf(p, l);
          auto [w, v] = parsePair(p.str("pair"), g);
          auto e = wpEstimate(Weight(w), Weight(v), p.num("p"), p.num("beta"), p.num("alpha"), 3.0, std::nullopt, {},
                              CubeMode::gridAligned);
          vals.push_back(e.infinite ? kInf : e.estimate);
        }
        auto tr = classifyTrend(vals, 1.25);
        nlohmann::json jv = nlohmann::json::array();
        for (double x : vals) jv.push_back(num(x));
        gr.constants["Wp"] = {{"values", jv}, {"trend", toString(tr.cls)}, {"source", "wpEstimate lower bounds"}};
        if (tr.cls != TrendClass::stable) gr.expectation = "fail";
      };
      d.prepare = [](const Params& p, const Grid& g) -> CaseFn {
        auto [w, v] = parsePair(p.str("pair"), g);
        auto P = YoungFunction::power(p.num("p"));
        return integralCase(p, g, KernelOperator::hilbert(), {P, P}, w, v, std::nullopt);
      };
      v.push_back(std::move(d));
    }

    {
      SuiteDef d{"thm6.4", "chain sup of m#_{Tf}(1-s,Q) against averages of f"};
      d.defaults = obj({{"s", 0.125}, {"form", "avg"}, {"domain", "unit"}, {"mode", "auto"}});
      d.gate = [](const Params& p, const std::vector<int>&, GateResult&) {
        if (!(p.num("s") > 0.0 && p.num("s") < 0.5)) throw ConfigError("hypothesis: need 0 < s < 1/2");
        if (p.str("form") != "avg" && p.str("form") != "osc") throw ConfigError("form must be avg or osc");
      };
      d.prepare = [](const Params& p, const Grid& g) -> CaseFn {
        double s = p.num("s");
        bool osc = p.str("form") == "osc";
        CubeMode mode = p.mode().value_or(defaultMode(g));
        return [=](const Case& c) {
          auto Tf = apply(KernelOperator::hilbert(), c.f);
          int side = std::max(1, g.n() / 16);
          // Q0 location depends on the case only, so it is the same interval at every level
          Rng rng(streamSeed(0, c.id, 77));
          int off = int(rng.uniform() * double(g.n() / side)) * side;
          GridCube q0{{off, 0}, side};
          double L = 0.0, R = 0.0;
          CubeFamily fam(g, mode, rootCube(g));
          fam.forEach([&](std::size_t, const GridCube& q) {
            if (!containsCube(g, q, q0)) return;
            L = std::max(L, medianSharp(Tf, s, q));
            if (osc) {
              double m = average(c.f, q), a = 0.0;
              for (auto x : cells(g, q)) a += std::fabs(c.f[x] - m);
              R = std::max(R, a / double(cellCount(g, q)));
            } else {
              R = std::max(R, average(c.f.abs(), q));
            }
          });
          Outcome o;
          o.lhs = L;
          o.rhs = R;
          return o;
        };
      };
      v.push_back(std::move(d));
    }

    {
      SuiteDef d{"thm6.6", "L^p_v to L^q_w with Perez bumps"};
      d.defaults = obj({{"t", 0.5}, {"p", 2.0}, {"q", 2.0}, {"r", 1.0}, {"A", "power:3"}, {"B", "power:3"},
                        {"pair", "power:0.3"}, {"domain", "unit"}});
      d.gate = [](const Params& p, const std::vector<int>& L, GateResult& gr) {
        double pp = p.num("p"), qq = p.num("q"), r = p.num("r");
        if (!(1.0 < pp && pp <= qq)) throw ConfigError("hypothesis: need 1 < p <= q");
        if (!(r >= 1.0 && r < pp)) throw ConfigError("hypothesis: need 1 <= r < p");
        auto A = p.young("A"), B = p.young("B");
        double qr = qq / r, qrConj = qr / (qr - 1.0);
        auto a = bpDiagnostics(conjugate(A), qrConj), b = bpDiagnostics(conjugate(B), pp / r);
        gr.constants["conjA_in_B"] = toString(a.inBp);
        gr.constants["conjB_in_B"] = toString(b.inBp);
        if (a.inBp == Verdict::no || b.inBp == Verdict::no) throw ConfigError("hypothesis: bump conjugates not in B_p");
        nlohmann::json jv = nlohmann::json::array();
        for (int l : L) {
          Grid g = gridOf(p, l);
          auto [w, v] = parsePair(p.str("pair"), g);
          PerezParams prm{pp, qq, B, A, r, std::nullopt};
          auto res = perezBumpCheck(Weight(w), Weight(v), prm, std::nullopt, CubeMode::gridAligned);
          jv.push_back(num(res.sup.infinite ? kInf : res.sup.value));
        }
        gr.constants["bump"] = {{"values", jv}, {"source", "perezBumpCheck, grid-aligned cubes"}};
        Grid g = gridOf(p, L.back());
        auto H = KernelOperator::hilbert();
        auto lam = lambdaSequence(H, g, rootCube(g), r, H.padding() - 1);
        gr.constants["lambdaWeightedSum"] = num(lam.weightedSum(qq));
      };
      d.prepare = [](const Params& p, const Grid& g) -> CaseFn {
        auto [w, v] = parsePair(p.str("pair"), g);
        double pp = p.num("p"), qq = p.num("q"), t = p.num("t");
        return [=](const Case& c) {
          Outcome o;
          o.lhs = std::pow(weightedPower(absCentered(apply(KernelOperator::hilbert(), c.f), t), qq, w), 1.0 / qq);
          o.rhs = std::pow(weightedPower(c.f, pp, v), 1.0 / pp);
          return o;
        };
      };
      v.push_back(std::move(d));
    }

    {
      SuiteDef d{"thm7.1", "Orlicz-Morrey bound for a sublinear operator"};
      d.defaults = obj({{"phi", "power:2"}, {"gamma", 0.5}, {"weight", "power:0.5"}, {"operator", "maximal"},
                        {"domain", "unit"}, {"mode", "auto"}});
      d.gate = [](const Params& p, const std::vector<int>& L, GateResult& gr) {
        double gamma = p.num("gamma");
        if (!(gamma > 0.0)) throw ConfigError("hypothesis: need gamma > 0");
        auto phi = ScaleFunction::power(gamma), psi = ScaleFunction::power(gamma, gamma);
        std::vector<double> ls;
        Grid g = gridOf(p, L.back());
        for (int k = 1; k <= g.n(); k *= 2) ls.push_back(k * g.width());
        double cc = couplingConstant(phi, psi, ls);
        gr.constants["coupling"] = num(cc);
        if (!std::isfinite(cc)) throw ConfigError("hypothesis: psi(l) int_l^inf 1/phi dt/t unbounded");
        parseSublinearTag(p.str("operator"));
        double ap = pOfPhi(p.young("phi"));
        if (apTrend(p, L, ap, "weight", gr.constants, 1.25).cls != TrendClass::stable) gr.expectation = "fail";
      };
      d.prepare = [](const Params& p, const Grid& g) -> CaseFn {
        auto w = weightOf(p, g);
        auto Phi = p.young("phi");
        double gamma = p.num("gamma");
        auto phi = ScaleFunction::power(gamma), psi = ScaleFunction::power(gamma, gamma);
        auto S = parseSublinearTag(p.str("operator"));
        auto mode = p.mode();
        return [=](const Case& c) {
          auto Sf = S == SublinearTag::hilbert ? apply(KernelOperator::hilbert(), c.f)
                                               : hlMaximalField(c.f, rootCube(g), 1.0, mode);
          Outcome o;
          o.lhs = morreyNorm(Sf, Phi, psi, w, std::nullopt, mode);
          o.rhs = morreyNorm(c.f, Phi, phi, w, std::nullopt, mode);
          return o;
        };
      };
      v.push_back(std::move(d));
    }

    // ---------------------------------------------------------------- introduction inequalities

    auto integralIneq = [](std::string id, std::string title, nlohmann::json defaults, IntegralSpec::Rhs rhs,
                           std::string rhsWeight) {
      SuiteDef d{std::move(id), std::move(title)};
      d.defaults = std::move(defaults);
      d.gate = [](const Params& p, const std::vector<int>&, GateResult& gr) {
        gr.constants["phi"] = p.young("phi").describe();
      };
      d.prepare = [rhs, rhsWeight](const Params& p, const Grid& g) -> CaseFn {
        auto w = weightOf(p, g).function();
        auto mode = p.mode();
        GridFunction v = w;
        if (rhsWeight == "Mw") v = hlMaximalField(w, rootCube(g), 1.0, mode);
        if (rhsWeight == "Mrw") v = hlMaximalField(w, rootCube(g), p.num("rw"), mode);
        auto Phi = p.young("phi");
        auto Psi = p.has("psi") ? p.young("psi") : Phi;
        return integralCase(p, g, KernelOperator::hilbert(), {Phi, Psi, rhs, 1.0}, w, v, mode);
      };
      return d;
    };
    auto pointwiseIneq = [](std::string id, std::string title, nlohmann::json defaults,
                            std::function<Outcome(const Params&, const Grid&, const Case&)> fn) {
      SuiteDef d{std::move(id), std::move(title)};
      d.defaults = std::move(defaults);
      d.gate = [](const Params&, const std::vector<int>&, GateResult&) {};
      d.prepare = [fn](const Params& p, const Grid& g) -> CaseFn {
        return [fn, p, g](const Case& c) { return fn(p, g, c); };
      };
      return d;
    };

    v.push_back(integralIneq("ineq1.1", "Phi(|Tf|) w against Phi(Mf) w, w in A_inf",
                             obj({{"t", 0.5}, {"phi", "power:2"}, {"weight", "power:0.5"}, {"domain", "unit"},
                                  {"mode", "auto"}}),
                             IntegralSpec::Rhs::maximalF, "w"));
    v.push_back(integralIneq("ineq1.2", "|Tf|^p w against |f|^p w, w in A_p",
                             obj({{"t", 0.5}, {"phi", "power:2"}, {"weight", "power:0.5"}, {"domain", "unit"},
                                  {"mode", "auto"}}),
                             IntegralSpec::Rhs::absF, "w"));
    v.push_back(integralIneq("ineq1.3", "|Tf|^p w against |f|^p M_r w, arbitrary w",
                             obj({{"t", 0.5}, {"phi", "power:2"}, {"weight", "power:1.5"}, {"rw", 2.0},
                                  {"domain", "unit"}, {"mode", "auto"}}),
                             IntegralSpec::Rhs::absF, "Mrw"));
    v.push_back(pointwiseIneq("ineq1.4", "M#(Tf) against M_r f",
                              obj({{"r", 2.0}, {"domain", "unit"}, {"mode", "auto"}}),
                              [](const Params& p, const Grid& g, const Case& c) {
                                auto m = p.mode();
                                return pointwiseSup(
                                    sharpMaximalField(apply(KernelOperator::hilbert(), c.f), rootCube(g), 1.0, m),
                                    hlMaximalField(c.f, rootCube(g), p.num("r"), m));
                              }));
    v.push_back(pointwiseIneq("ineq1.5", "M#_{0,s}(Tf) against Mf",
                              obj({{"s", 0.125}, {"domain", "unit"}, {"mode", "auto"}}),
                              [](const Params& p, const Grid& g, const Case& c) {
                                auto m = p.mode();
                                return pointwiseSup(localSharpMaximalField(apply(KernelOperator::hilbert(), c.f),
                                                                           rootCube(g), p.num("s"), m),
                                                    hlMaximalField(c.f, rootCube(g), 1.0, m));
                              }));
    v.push_back(integralIneq("ineq1.6", "Phi(|Tf - m|) w against Phi(Mf) M_r w, arbitrary w",
                             obj({{"t", 0.5}, {"phi", "power:1"}, {"weight", "power:1.5"}, {"rw", 2.0},
                                  {"domain", "unit"}, {"mode", "auto"}}),
                             IntegralSpec::Rhs::maximalF, "Mrw"));
    v.push_back(integralIneq("ineq1.8", "Phi(|Tf|) w against Psi(|f|) Mw",
                             obj({{"t", 0.5}, {"phi", "power:2"}, {"psi", "power:2"}, {"weight", "power:0.5"},
                                  {"domain", "unit"}, {"mode", "auto"}}),
                             IntegralSpec::Rhs::absF, "Mw"));
    // dyadic by default: the L log L gauge is a bisection per cube
    v.push_back(pointwiseIneq("ineq1.9", "M#(Tf) against M_{L log L} f",
                              obj({{"domain", "unit"}, {"mode", "dyadic"}}),
                              [](const Params& p, const Grid& g, const Case& c) {
                                auto m = p.mode();
                                return pointwiseSup(
                                    sharpMaximalField(apply(KernelOperator::hilbert(), c.f), rootCube(g), 1.0, m),
                                    orliczMaximalField(c.f, rootCube(g), YoungFunction::powerLog(1.0, 1.0), 0.0, m));
                              }));
    {
      SuiteDef d{"ineq1.10", "Phi(M#(Tf)) w against Phi(|f|) Mw, arbitrary w"};
      d.defaults = obj({{"phi", "power:2"}, {"weight", "power:1.5"}, {"domain", "unit"}, {"mode", "auto"}});
      d.gate = [](const Params&, const std::vector<int>&, GateResult&) {};
      d.prepare = [](const Params& p, const Grid& g) -> CaseFn {
        auto w = weightOf(p, g).function();
        auto mode = p.mode();
        auto Mw = hlMaximalField(w, rootCube(g), 1.0, mode);
        auto Phi = p.young("phi");
        return [=](const Case& c) {
          Outcome o;
          o.lhs = weightedPhi(sharpMaximalField(apply(KernelOperator::hilbert(), c.f), rootCube(g), 1.0, mode), Phi, w);
          o.rhs = weightedPhi(c.f, Phi, Mw);
          return o;
        };
      };
      v.push_back(std::move(d));
    }
    {
      SuiteDef d{"ineq1.11", "|Tf|^p w against |f|^p M^k w (k = [p]+1 holds, k = [p] fails)"};
      d.defaults = obj({{"t", 0.5}, {"p", 2.5}, {"k", "auto"}, {"weight", "power:1.5"}, {"domain", "unit"},
                        {"mode", "auto"}});
      d.corpus = "random-uniform,trig,step,spike,log-profile";
      auto kOf = [](const Params& p) {
        return p.str("k") == "auto" ? int(std::floor(p.num("p"))) + 1 : p.integer("k");
      };
      d.gate = [kOf](const Params& p, const std::vector<int>&, GateResult& gr) {
        double pp = p.num("p");
        if (!(pp > 1.0)) throw ConfigError("hypothesis: need p > 1");
        int k = kOf(p);
        if (k < 1) throw ConfigError("k must be >= 1");
        gr.constants["k"] = k;
        if (k <= int(std::floor(pp))) gr.expectation = "fail";
      };
      d.context = [kOf](const Params& p) {
        GeneratorContext ctx;
        ctx.p = p.num("p");
        ctx.e = (kOf(p) - 1) / (ctx.p - 1.0);
        return ctx;
      };
      d.prepare = [kOf](const Params& p, const Grid& g) -> CaseFn {
        auto w = weightOf(p, g).function();
        int k = kOf(p);
        auto mode = p.mode();
        auto Mkw = iteratedMaximalField(w, rootCube(g), k, mode);
        double pp = p.num("p"), t = p.num("t");
        return [=](const Case& c) {
          GridFunction ww = c.w ? *c.w : w;
          GridFunction vv = c.w ? iteratedMaximalField(*c.w, rootCube(g), k, mode) : Mkw;
          Outcome o;
          o.lhs = weightedPower(absCentered(apply(KernelOperator::hilbert(), c.f), t), pp, ww);
          o.rhs = weightedPower(c.f, pp, vv);
          return o;
        };
      };
      v.push_back(std::move(d));
    }
    {
      SuiteDef d{"ineq1.12", "Campanato norm of Tf against Morrey norm of Mf"};
      d.defaults = obj({{"t", 0.5}, {"phi", "power:2"}, {"gamma", 0.5}, {"weight", "power:0.5"},
                        {"domain", "unit"}, {"mode", "auto"}});
      d.gate = [](const Params&, const std::vector<int>&, GateResult&) {};
      d.prepare = [](const Params& p, const Grid& g) -> CaseFn {
        auto w = weightOf(p, g);
        auto Phi = p.young("phi");
        auto phi = ScaleFunction::power(p.num("gamma"));
        double t = p.num("t");
        auto mode = p.mode();
        return [=](const Case& c) {
          Outcome o;
          o.lhs = campanatoNorm(apply(KernelOperator::hilbert(), c.f), Phi, phi, w, t, std::nullopt, mode);
          o.rhs = morreyNorm(hlMaximalField(c.f, rootCube(g), 1.0, mode), Phi, phi, w, std::nullopt, mode);
          return o;
        };
      };
      v.push_back(std::move(d));
    }
    return v;
  }();
  return all;
}

inline std::vector<std::string> suiteIds() {
  std::vector<std::string> ids;
  for (const auto& d : suites()) ids.push_back(d.id);
  ids.push_back("ineq1.7");
  return ids;
}

inline const SuiteDef& findSuite(const std::string& id) {
  std::string key = id == "ineq1.7" ? "ineq1.6" : id;
  for (const auto& d : suites())
    if (d.id == key) return d;
  std::string list;
  for (const auto& s : suiteIds()) list += (list.empty() ? "" : ", ") + s;
  throw ConfigError("unknown suite '" + id + "'; valid ids: " + list);
}

// defaults overlaid with user values; keys the suite does not use are rejected
inline Params mergeParams(const SuiteDef& d, const nlohmann::json& user) {
  nlohmann::json merged = d.defaults;
  if (!user.is_null()) {
    if (!user.is_object()) throw ConfigError("params must be a JSON object");
    for (auto it = user.begin(); it != user.end(); ++it) {
      if (!merged.contains(it.key())) {
        std::string keys;
        for (auto k = d.defaults.begin(); k != d.defaults.end(); ++k) keys += (keys.empty() ? "" : ", ") + k.key();
        throw ConfigError("parameter '" + it.key() + "' is not used by suite " + d.id + " (accepts: " + keys + ")");
      }
      merged[it.key()] = it.value();
    }
  }
  return Params(std::move(merged));
}

// runs fn(i) for i in [0, n) on up to `threads` workers; results are written by index
template <class F>
void parallelFor(std::size_t n, unsigned threads, F&& fn) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  unsigned k = std::max(1u, std::min<unsigned>(threads ? threads : hw, unsigned(std::max<std::size_t>(1, n))));
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
        next = n;
      }
    }
  };
  if (k == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < k; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (err) std::rethrow_exception(err);
}

struct ConstantEstimate {
  double value = 0.0;
  bool infinite = false;
  std::size_t witness = 0;
  std::string witnessHash;
  std::size_t zeroOverZero = 0;
};

// sup over the corpus of lhs(f)/rhs(f) with the achieving input
template <class L, class R>
ConstantEstimate estimateConstant(L&& lhs, R&& rhs, const std::vector<GridFunction>& corpus) {
  ConstantEstimate out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    bool zz = false;
    double r = safeRatio(lhs(corpus[i]), rhs(corpus[i]), &zz);
    if (zz) ++out.zeroOverZero;
    if (r > out.value || (i == 0 && r >= out.value)) {
      out.value = r;
      out.witness = i;
      out.witnessHash = inputHash(corpus[i]);
    }
  }
  out.infinite = std::isinf(out.value);
  return out;
}

inline VerificationReport runSuite(const SuiteConfig& cfg) {
  const SuiteDef& d = findSuite(cfg.suite);
  Params p = mergeParams(d, cfg.params);
  auto levels = cfg.levels.empty() ? d.levels : cfg.levels;
  if (levels.empty()) throw ConfigError("no levels given");
  std::string corpus = cfg.corpus.empty() ? d.corpus : cfg.corpus;
  if (!(cfg.threshold > 1.0)) throw ConfigError("threshold must exceed 1");

  VerificationReport rep;
  rep.suite = cfg.suite;
  rep.params = p.json();
  rep.corpus = corpus;
  rep.seed = cfg.seed;
  rep.threshold = cfg.threshold;
  rep.exact = d.exact;

  GateResult gr;
  d.gate(p, levels, gr);
  rep.expectation = gr.expectation;
  rep.constants = gr.constants;
  GeneratorContext ctx = d.context ? d.context(p) : GeneratorContext{};
  if (!d.context && p.has("weight")) ctx = detail::contextFromWeight(p);

  std::vector<double> sups;
  bool allFinite = true;
  std::size_t violationCount = 0;
  for (int L : levels) {
    Grid g = detail::gridOf(p, L);
    auto cs = generateCorpus(corpus, g, cfg.seed, cfg.cases, ctx);
    CaseFn fn = d.prepare(p, g);
    std::vector<CaseResult> rows(cs.size());
    parallelFor(cs.size(), cfg.threads, [&](std::size_t i) {
      Outcome o = fn(cs[i]);
      CaseResult& r = rows[i];
      r.level = L;
      r.caseId = cs[i].id;
      r.generator = cs[i].generator;
      r.hash = inputHash(cs[i].f);
      r.lhs = o.lhs;
      r.rhs = o.rhs;
      bool zz = false;
      r.ratio = o.ratio ? *o.ratio : safeRatio(o.lhs, o.rhs, &zz);
      r.zeroOverZero = o.ratio ? o.zeroOverZero : zz;
      r.violations = std::move(o.violations);
    });
    LevelSummary ls;
    ls.level = L;
    ls.cases = rows.size();
    for (const auto& r : rows) {
      if (r.zeroOverZero) ++ls.zeroOverZero;
      ls.violations += r.violations.size();
      if (r.ratio > ls.supRatio) {
        ls.supRatio = r.ratio;
        ls.argmaxCase = r.caseId;
      }
    }
    violationCount += ls.violations;
    allFinite = allFinite && std::isfinite(ls.supRatio);
    sups.push_back(ls.supRatio);
    rep.levels.push_back(ls);
    for (auto& r : rows) rep.cases.push_back(std::move(r));
  }
  rep.trend = classifyTrend(sups, cfg.threshold);
  if (d.exact) {
    rep.pass = violationCount == 0;
  } else {
    bool growthOk = true;
    for (double gfac : rep.trend.growth) growthOk = growthOk && gfac < cfg.threshold;
    rep.pass = allFinite && growthOk;
  }
  return rep;
}

}  // namespace medosc::harness
