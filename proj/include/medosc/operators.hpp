#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cube_table.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "maximal.hpp"
#include "young.hpp"

namespace medosc {

enum class KernelKind { hilbert, dini, hormander, homogeneous };

inline std::string toString(KernelKind k) {
  switch (k) {
    case KernelKind::hilbert: return "hilbert";
    case KernelKind::dini: return "dini";
    case KernelKind::hormander: return "hormander";
    case KernelKind::homogeneous: return "homogeneous";
  }
  return "?";
}

inline KernelKind parseKernelKind(const std::string& s) {
  if (s == "hilbert") return KernelKind::hilbert;
  if (s == "dini") return KernelKind::dini;
  if (s == "hormander") return KernelKind::hormander;
  if (s == "homogeneous") return KernelKind::homogeneous;
  throw ConfigError("unknown operator kind '" + s + "' (hilbert|dini|hormander|homogeneous)");
}

// Immutable kernel description. Odd kernels are 1D only.
class KernelOperator {
 public:
  static KernelOperator hilbert() { return KernelOperator(KernelKind::hilbert); }
  static KernelOperator dini(double eta) {
    KernelOperator t(KernelKind::dini);
    t.eta_ = eta;
    t.validate();
    return t;
  }
  // Hormander operator with odd profile 1/u (eta = 1) or the dini profile, L^A smoothness measured in A
  static KernelOperator hormander(YoungFunction A, double eta = 1.0) {
    KernelOperator t(KernelKind::hormander);
    t.A_ = std::move(A);
    t.eta_ = eta;
    t.validate();
    return t;
  }
  static KernelOperator homogeneous(std::vector<double> a, std::vector<double> alpha) {
    KernelOperator t(KernelKind::homogeneous);
    t.a_ = std::move(a);
    t.alpha_ = std::move(alpha);
    t.validate();
    return t;
  }

  KernelKind kind() const { return kind_; }
  double eta() const { return eta_; }
  const std::vector<double>& a() const { return a_; }
  const std::vector<double>& alpha() const { return alpha_; }
  const std::optional<YoungFunction>& young() const { return A_; }
  int padding() const { return padding_; }
  void setPadding(int M) {
    if (M < 1 || M > 12) throw ConfigError("padding must lie in 1..12");
    padding_ = M;
  }
  bool antisymmetric() const { return kind_ != KernelKind::homogeneous; }

  // dimension the kernel is meaningful in
  void requireDim(int dim) const {
    if (kind_ == KernelKind::homogeneous) {
      double s = 0.0;
      for (double x : alpha_) s += x;
      if (std::fabs(s - dim) > 1e-12) throw PreconditionError("homogeneous kernel: exponents must sum to dim");
      return;
    }
    if (dim != 1) throw PreconditionError(toString(kind_) + " kernel is one-dimensional");
  }

  // the c_n of the kernel smoothness estimate
  static double cn(int dim) { return 2.0 * std::sqrt(double(dim)); }

  // modulus of continuity in the far variable
  double omega(double t) const {
    if (kind_ == KernelKind::hilbert || (kind_ == KernelKind::hormander && eta_ == 1.0)) return t;
    return std::pow(t, eta_);
  }

  // k(x, y) for points of R^dim
  double kernel(const std::array<double, 2>& x, const std::array<double, 2>& y, int dim) const {
    if (kind_ == KernelKind::homogeneous) {
      double k = 1.0;
      for (std::size_t i = 0; i < a_.size(); ++i) {
        double d2 = 0.0;
        for (int ax = 0; ax < dim; ++ax) {
          double d = x[ax] - a_[i] * y[ax];
          d2 += d * d;
        }
        k *= std::pow(d2, -0.5 * alpha_[i]);
      }
      return k;
    }
    double u = x[0] - y[0];
    if (kind_ == KernelKind::hilbert || (kind_ == KernelKind::hormander && eta_ == 1.0)) return 1.0 / u;
    double au = std::fabs(u);
    return (u > 0 ? 1.0 : -1.0) / (au * (1.0 + std::pow(au, eta_)));
  }

  // true when some factor of the kernel is singular at (x, y)
  bool singular(const std::array<double, 2>& x, const std::array<double, 2>& y, int dim, double scale) const {
    if (kind_ != KernelKind::homogeneous) return false;
    for (double ai : a_) {
      double d2 = 0.0;
      for (int ax = 0; ax < dim; ++ax) {
        double d = x[ax] - ai * y[ax];
        d2 += d * d;
      }
      if (d2 <= 1e-24 * scale * scale) return true;
    }
    return false;
  }

  nlohmann::json toJson() const {
    nlohmann::json j{{"kind", toString(kind_)}, {"padding", padding_}};
    if (kind_ == KernelKind::dini || kind_ == KernelKind::hormander) j["eta"] = eta_;
    if (kind_ == KernelKind::hormander && A_) j["young"] = A_->toJson();
    if (kind_ == KernelKind::homogeneous) {
      j["a"] = a_;
      j["alpha"] = alpha_;
    }
    return j;
  }

  static KernelOperator fromJson(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind")) throw ConfigError("operator config needs a 'kind'");
    KernelKind k = parseKernelKind(j.at("kind").get<std::string>());
    KernelOperator t(k);
    switch (k) {
      case KernelKind::hilbert: break;
      case KernelKind::dini: t = dini(j.value("eta", 0.5)); break;
      case KernelKind::hormander:
        t = hormander(j.contains("young") ? YoungFunction::fromJson(j.at("young")) : YoungFunction::power(2.0),
                      j.value("eta", 1.0));
        break;
      case KernelKind::homogeneous:
        if (!j.contains("a") || !j.contains("alpha")) throw ConfigError("homogeneous kernel needs 'a' and 'alpha'");
        t = homogeneous(j.at("a").get<std::vector<double>>(), j.at("alpha").get<std::vector<double>>());
        break;
    }
    if (j.contains("padding")) t.setPadding(j.at("padding").get<int>());
    return t;
  }

 private:
  explicit KernelOperator(KernelKind k) : kind_(k) {}

  void validate() const {
    if (kind_ == KernelKind::dini || kind_ == KernelKind::hormander)
      if (!(eta_ > 0.0 && eta_ <= 1.0)) throw ConfigError("kernel: eta must lie in (0,1]");
    if (kind_ == KernelKind::homogeneous) {
      if (a_.empty() || a_.size() != alpha_.size()) throw ConfigError("homogeneous kernel: need matching a and alpha");
      for (std::size_t i = 0; i < a_.size(); ++i) {
        if (a_[i] == 0.0 || !std::isfinite(a_[i])) throw ConfigError("homogeneous kernel: a_i must be nonzero");
        if (!(alpha_[i] > 0.0)) throw ConfigError("homogeneous kernel: alpha_i must be positive");
        for (std::size_t k = 0; k < i; ++k)
          if (a_[k] == a_[i]) throw ConfigError("homogeneous kernel: a_i must be pairwise distinct");
      }
    }
  }

  KernelKind kind_;
  double eta_ = 1.0;
  std::vector<double> a_, alpha_;
  std::optional<YoungFunction> A_;
  int padding_ = 6;
};

inline std::array<double, 2> cellPoint(const Grid& g, std::size_t c) {
  return {g.center(c, 0), g.dim() == 2 ? g.center(c, 1) : 0.0};
}

// midpoint rule; the diagonal cell is dropped for odd kernels, singular pairs for homogeneous ones
inline GridFunction apply(const KernelOperator& T, const GridFunction& f) {
  const Grid& g = f.grid();
  T.requireDim(g.dim());
  std::size_t N = g.size();
  std::vector<std::array<double, 2>> pts(N);
  for (std::size_t c = 0; c < N; ++c) pts[c] = cellPoint(g, c);
  std::vector<double> out(N, 0.0);
  double vol = g.cellVolume(), scale = g.width();
  bool odd = T.antisymmetric();
  for (std::size_t x = 0; x < N; ++x) {
    double s = 0.0;
    for (std::size_t y = 0; y < N; ++y) {
      if (f[y] == 0.0) continue;
      if (odd ? y == x : T.singular(pts[x], pts[y], g.dim(), scale)) continue;
      s += T.kernel(pts[x], pts[y], g.dim()) * f[y];
    }
    out[x] = s * vol;
  }
  return GridFunction(g, std::move(out));
}

// ---------------------------------------------------------------- lambda_m

struct LambdaSequence {
  std::vector<double> values;  // lambda_1 .. lambda_M
  bool analytic = true;
  double tailBound = 0.0;  // bound on sum_{m > M} lambda_m
  double cn = 2.0;

  double weightedSum(double q) const {
    double s = 0.0;
    for (std::size_t m = 0; m < values.size(); ++m) s += values[m] * std::pow(2.0, double(m + 1) / q);
    return s;
  }
};

namespace detail {

inline LambdaSequence numericLambda(const KernelOperator& T, double center, double l, double r, int M) {
  LambdaSequence out;
  out.analytic = false;
  out.cn = KernelOperator::cn(1);
  const int K = 9, perSide = 32;
  std::vector<double> us(K);
  for (int i = 0; i < K; ++i) us[i] = center - 0.5 * l + (i + 0.5) * l / K;
  double rp = r > 1.0 ? r / (r - 1.0) : 0.0;  // 0 marks r' = infinity
  std::vector<double> diff, mu;
  for (int m = 1; m <= M; ++m) {
    double inner = std::ldexp(l, m - 1), outer = std::ldexp(l, m);  // half-sides of 2^m Q and 2^{m+1} Q
    double h = l / perSide, big = 2.0 * outer;
    std::vector<double> zs;
    for (double z = center - outer + 0.5 * h; z < center + outer; z += h)
      if (std::fabs(z - center) >= inner) zs.push_back(z);
    double best = 0.0;
    for (double u : us)
      for (double v : us) {
        if (u == v) continue;
        diff.resize(zs.size());
        for (std::size_t i = 0; i < zs.size(); ++i)
          diff[i] = std::fabs(T.kernel({u, 0}, {zs[i], 0}, 1) - T.kernel({v, 0}, {zs[i], 0}, 1));
        double nrm;
        if (T.young()) {
          mu.assign(zs.size(), h / big);
          nrm = luxemburg(diff, mu, *T.young());
        } else if (rp == 0.0) {
          nrm = *std::max_element(diff.begin(), diff.end());
        } else {
          double s = 0.0;
          for (double d : diff) s += std::pow(d, rp) * h;
          nrm = std::pow(s / big, 1.0 / rp);
        }
        best = std::max(best, big * nrm);
      }
    out.values.push_back(best);
  }
  // geometric extrapolation of the tail from the last two terms
  if (M >= 2 && out.values[M - 2] > 0.0) {
    double q = out.values[M - 1] / out.values[M - 2];
    out.tailBound = q < 1.0 ? out.values[M - 1] * q / (1.0 - q) : std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace detail

// lambda_1..lambda_M for the cube q of grid g; the numeric branch samples u, v in Q and the annuli of 2^{m+1}Q
inline LambdaSequence lambdaSequence(const KernelOperator& T, const Grid& g, const GridCube& q, double r, int M,
                                     bool forceNumeric = false) {
  requireInGrid(g, q);
  if (M < 1) throw PreconditionError("lambdaSequence: M must be >= 1");
  if (!(r >= 1.0)) throw PreconditionError("lambdaSequence: r must be >= 1");
  // padded domain: the root dilated by 2^padding about its center
  double padHalf = std::ldexp(g.domain().side, T.padding() - 1);
  auto c = cubeCenter(g, q);
  double l = sideLength(g, q);
  for (int a = 0; a < g.dim(); ++a) {
    double rootCenter = g.domain().origin[a] + 0.5 * g.domain().side;
    if (std::fabs(c[a] - rootCenter) + std::ldexp(l, M) > padHalf + 1e-12)
      throw PreconditionError("lambdaSequence: 2^(M+1)Q does not fit in the padded domain; raise padding");
  }
  bool numeric = forceNumeric || T.kind() == KernelKind::hormander;
  if (T.kind() == KernelKind::homogeneous) throw PreconditionError("lambdaSequence: homogeneous kernels have no lambda_m");
  if (numeric) {
    if (g.dim() != 1) throw PreconditionError("lambdaSequence: numeric branch is one-dimensional");
    return detail::numericLambda(T, c[0], l, r, M);
  }
  LambdaSequence out;
  out.cn = KernelOperator::cn(g.dim());
  for (int m = 1; m <= M; ++m) out.values.push_back(T.omega(std::ldexp(out.cn, -m)));
  double eta = T.kind() == KernelKind::hilbert ? 1.0 : T.eta();
  double ratio = std::pow(2.0, -eta);
  out.tailBound = out.values.back() * ratio / (1.0 - ratio);
  return out;
}

// ---------------------------------------------------------------- pointwise domination

enum class DominationVariant { thm41, thm41Sharp, thm43, thm44 };

inline std::string toString(DominationVariant v) {
  switch (v) {
    case DominationVariant::thm41: return "thm41";
    case DominationVariant::thm41Sharp: return "thm41-sharp";
    case DominationVariant::thm43: return "thm43";
    case DominationVariant::thm44: return "thm44";
  }
  return "?";
}

inline DominationVariant parseDominationVariant(const std::string& s) {
  if (s == "thm41") return DominationVariant::thm41;
  if (s == "thm41-sharp") return DominationVariant::thm41Sharp;
  if (s == "thm43") return DominationVariant::thm43;
  if (s == "thm44") return DominationVariant::thm44;
  throw ConfigError("unknown domination variant '" + s + "' (thm41|thm41-sharp|thm43|thm44)");
}

struct DominationReport {
  GridFunction lhs;      // M#_{0,s,Q0}(Tf)
  GridFunction rhs;      // sup_{x in Q in Q0} inf_Q M_T f
  GridFunction ratio;    // lhs / rhs, 0/0 -> 0
  double supRatio = 0.0;
  std::size_t argmax = 0;
  std::size_t zeroOverZero = 0;
  bool infinite = false;
};

// Mf at a point, f extended by zero; a point outside the root uses the cells between it and the support (1D)
inline double maximalAtPoint(const GridFunction& f, const GridFunction& Mf, double z) {
  const Grid& g = f.grid();
  double lo = g.domain().origin[0], hi = lo + g.domain().side;
  if (z >= lo && z < hi) return Mf[g.locate({z, 0})];
  double w = g.width(), best = 0.0, acc = 0.0;
  if (z < lo) {
    for (std::size_t c = 0; c < g.size(); ++c) {
      acc += std::fabs(f[c]) * w;
      best = std::max(best, acc / (lo + (double(c) + 1) * w - z));
    }
  } else {
    for (std::size_t k = g.size(); k-- > 0;) {
      acc += std::fabs(f[k]) * w;
      best = std::max(best, acc / (z - (lo + double(k) * w)));
    }
  }
  return best;
}

// M_T f on the grid for the variant
inline GridFunction dominatingMaximal(const KernelOperator& T, const GridFunction& f, DominationVariant variant,
                                      double r, std::optional<CubeMode> mode = {}) {
  const Grid& g = f.grid();
  GridCube root = rootCube(g);
  switch (variant) {
    case DominationVariant::thm41: return hlMaximalField(f, root, r, mode);
    case DominationVariant::thm41Sharp: {
      auto fr = f.map([r](double x) { return std::pow(std::fabs(x), r); });
      return sharpMaximalField(fr, root, 1.0, mode).map([r](double x) { return std::pow(x, 1.0 / r); });
    }
    case DominationVariant::thm43: {
      if (!T.young()) throw PreconditionError("thm43 domination needs a Hormander operator with a Young function");
      return orliczMaximalField(f, root, conjugate(*T.young()), 0.0, mode);
    }
    case DominationVariant::thm44: {
      if (T.kind() != KernelKind::homogeneous) throw PreconditionError("thm44 domination needs a homogeneous kernel");
      auto Mf = hlMaximalField(f, root, 1.0, mode);
      std::vector<double> out(g.size(), 0.0);
      for (std::size_t c = 0; c < g.size(); ++c)
        for (double ai : T.a()) {
          if (g.dim() == 1) {
            out[c] += maximalAtPoint(f, Mf, g.center(c, 0) / ai);
          } else {
            std::array<double, 2> z{g.center(c, 0) / ai, g.center(c, 1) / ai};
            for (int a = 0; a < 2; ++a)
              if (z[a] < g.domain().origin[a] || z[a] >= g.domain().origin[a] + g.domain().side)
                throw PreconditionError("thm44 in 2D needs A_i^{-1} to map the root into itself");
            out[c] += Mf[g.locate(z)];
          }
        }
      return GridFunction(g, std::move(out));
    }
  }
  throw PreconditionError("unknown variant");
}

inline DominationReport pointwiseDomination(const KernelOperator& T, const GridFunction& f, const GridCube& q0,
                                            double s, DominationVariant variant, double r = 1.0,
                                            std::optional<CubeMode> mode = {}) {
  const Grid& g = f.grid();
  if (variant == DominationVariant::thm44 ? T.kind() != KernelKind::homogeneous
                                          : T.kind() == KernelKind::homogeneous)
    throw PreconditionError("pointwiseDomination: operator does not match variant " + toString(variant));
  auto Tf = apply(T, f);
  DominationReport rep;
  rep.lhs = localSharpMaximalField(Tf, q0, s, mode);
  rep.rhs = supInfField(dominatingMaximal(T, f, variant, r, mode), q0, mode);
  std::vector<double> ratio(g.size(), 0.0);
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!containsCell(g, q0, c)) continue;
    double L = rep.lhs[c], R = rep.rhs[c];
    double v;
    if (L == 0.0) {
      v = 0.0;
      if (R == 0.0) ++rep.zeroOverZero;
    } else if (R == 0.0) {
      rep.infinite = true;
      v = 0.0;
      rep.supRatio = std::numeric_limits<double>::infinity();
      rep.argmax = c;
      continue;
    } else {
      v = L / R;
    }
    ratio[c] = v;
    if (!rep.infinite && v > rep.supRatio) {
      rep.supRatio = v;
      rep.argmax = c;
    }
  }
  rep.ratio = GridFunction(g, std::move(ratio));
  return rep;
}

// ---------------------------------------------------------------- sublinear envelope

enum class SublinearTag { maximal, hilbert };

inline SublinearTag parseSublinearTag(const std::string& s) {
  if (s == "maximal" || s == "M") return SublinearTag::maximal;
  if (s == "hilbert") return SublinearTag::hilbert;
  throw ConfigError("unknown sublinear operator '" + s + "' (maximal|hilbert)");
}

struct EnvelopeCheck {
  double maxRatio = 0.0;  // max over x in q of |Sf(x)| / envelope(x)
  double factor = 1.0;    // dimensional factor the bound is certified with
  bool holds = true;
};

// |Sf(x)| <= factor * sum |f(y)| |x-y|^{-dim} vol for x in q, supp f outside 2q
inline EnvelopeCheck sublinearEnvelope(SublinearTag S, const GridFunction& f, const GridCube& q) {
  const Grid& g = f.grid();
  requireInGrid(g, q);
  Box twoQ = dilateClipped(g, q, 2.0);
  for (std::size_t c = 0; c < g.size(); ++c)
    if (f[c] != 0.0 && boxContainsCell(g, twoQ, c))
      throw PreconditionError("sublinearEnvelope: f must vanish on 2Q");
  GridFunction Sf = S == SublinearTag::hilbert ? apply(KernelOperator::hilbert(), f)
                                               : hlMaximalField(f, rootCube(g), 1.0);
  EnvelopeCheck out;
  // a cube through x and y has side >= |x-y|_inf >= |x-y| / sqrt(dim)
  out.factor = S == SublinearTag::maximal ? std::pow(double(g.dim()), 0.5 * g.dim()) : 1.0;
  double vol = g.cellVolume();
  for (auto x : cells(g, q)) {
    auto px = cellPoint(g, x);
    double env = 0.0;
    for (std::size_t y = 0; y < g.size(); ++y) {
      if (f[y] == 0.0) continue;
      auto py = cellPoint(g, y);
      double d2 = 0.0;
      for (int a = 0; a < g.dim(); ++a) d2 += (px[a] - py[a]) * (px[a] - py[a]);
      env += std::fabs(f[y]) * std::pow(d2, -0.5 * g.dim()) * vol;
    }
    double sf = std::fabs(Sf[x]);
    double ratio = env > 0.0 ? sf / env : (sf > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    out.maxRatio = std::max(out.maxRatio, ratio);
  }
  out.holds = out.maxRatio <= out.factor * (1.0 + 1e-12);
  return out;
}

}  // namespace medosc
