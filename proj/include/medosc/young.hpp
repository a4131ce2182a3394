#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "grid.hpp"

namespace medosc {

class YoungFunction {
 public:
  struct Power {
    double p = 1.0;
    double scale = 1.0;  // scale * t^p
  };
  struct PowerLog {
    double p = 1.0;
    double k = 0.0;  // t^p * log(1+t)^k
  };
  struct Mixed {
    double p = 1.0;
    double k = 0.0;  // t^p * (1+t)^k
  };
  struct Table {
    std::vector<double> x, y;  // knots after (0,0); linear beyond the last one
  };
  struct Composed {
    std::shared_ptr<const YoungFunction> base;
    double r = 1.0;  // base(t^r)
  };
  struct Tabulated {
    std::vector<double> u, v, d;  // log t, log value, pchip slopes
  };
  struct Indicator {
    double c = 1.0;  // 0 on [0,c], +inf after
  };
  using Family = std::variant<Power, PowerLog, Mixed, Table, Composed, Tabulated, Indicator>;

  YoungFunction() : fam_(Power{}) {}

  static YoungFunction power(double p, double scale = 1.0) {
    if (!(p > 0.0) || !(scale > 0.0)) throw PreconditionError("power family needs p > 0 and scale > 0");
    return YoungFunction(Power{p, scale});
  }
  static YoungFunction powerLog(double p, double k) {
    if (!(p > 0.0)) throw PreconditionError("powerlog family needs p > 0");
    return YoungFunction(PowerLog{p, k});
  }
  static YoungFunction mixed(double p, double k) {
    if (!(p > 0.0) || p + k < 0.0) throw PreconditionError("mixed family needs p > 0 and p + k >= 0");
    return YoungFunction(Mixed{p, k});
  }
  static YoungFunction table(std::vector<double> x, std::vector<double> y) {
    if (x.empty() || x.size() != y.size()) throw PreconditionError("table family needs matching nonempty knots");
    double px = 0.0, py = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!(x[i] > px) || y[i] < py) throw PreconditionError("table knots must be increasing");
      px = x[i];
      py = y[i];
    }
    return YoungFunction(Table{std::move(x), std::move(y)});
  }
  static YoungFunction composed(const YoungFunction& base, double r) {
    if (!(r > 0.0)) throw PreconditionError("composition exponent must be positive");
    return YoungFunction(Composed{std::make_shared<const YoungFunction>(base), r});
  }
  static YoungFunction indicator(double c) { return YoungFunction(Indicator{c}); }
  static YoungFunction tabulated(std::vector<double> u, std::vector<double> v) {
    Tabulated tb{std::move(u), std::move(v), {}};
    tb.d = pchipSlopes(tb.u, tb.v);
    return YoungFunction(std::move(tb));
  }

  const Family& family() const { return fam_; }

  double operator()(double t) const {
    if (!(t > 0.0)) return 0.0;
    return std::visit([t](const auto& f) { return evalImpl(f, t); }, fam_);
  }

  // derivative a(t) = A'(t)
  double derivative(double t) const {
    if (t < 0.0) return 0.0;
    return std::visit([t](const auto& f) { return derivImpl(f, t); }, fam_);
  }

  // generalized inverse: largest t with A(t) <= y
  double inverse(double y) const {
    if (!(y > 0.0)) return 0.0;
    if (auto* p = std::get_if<Power>(&fam_)) return std::pow(y / p->scale, 1.0 / p->p);
    if (auto* ind = std::get_if<Indicator>(&fam_)) return ind->c;
    double lo = 1.0, hi = 1.0;
    if ((*this)(1.0) <= y) {
      int guard = 0;
      while ((*this)(hi) <= y) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 2100) return std::numeric_limits<double>::infinity();
      }
    } else {
      int guard = 0;
      while ((*this)(lo) > y) {
        hi = lo;
        lo *= 0.5;
        if (++guard > 2100) return 0.0;
      }
    }
    for (int it = 0; it < 200 && hi / lo - 1.0 > 1e-15; ++it) {
      double mid = std::sqrt(lo * hi);
      if ((*this)(mid) <= y)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  }

  bool isPower() const { return std::holds_alternative<Power>(fam_); }
  bool degenerate() const { return std::holds_alternative<Indicator>(fam_); }

  // sup of A(2t)/A(t) on a log grid; +inf when not doubling there
  double doublingConstant() const {
    double best = 0.0;
    for (int i = 0; i <= 480; ++i) {
      double t = std::pow(10.0, -6.0 + 12.0 * i / 480.0);
      double a = (*this)(t), b = (*this)(2.0 * t);
      if (a <= 0.0) {
        if (b > 0.0) return std::numeric_limits<double>::infinity();
        continue;
      }
      best = std::max(best, b / a);
    }
    return best;
  }

  // sampled convexity check on a log grid
  bool convexOnGrid() const {
    if (degenerate()) return true;
    double prev = -1.0;
    for (int i = 0; i <= 400; ++i) {
      double t = std::pow(10.0, -4.0 + 8.0 * i / 400.0);
      double s = ((*this)(t * 1.01) - (*this)(t)) / (0.01 * t);
      if (s < prev * (1.0 - 1e-6)) return false;
      prev = s;
    }
    return true;
  }

  std::string describe() const {
    std::ostringstream o;
    std::visit(
        [&o](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, Power>)
            o << (f.scale == 1.0 ? "" : std::to_string(f.scale) + "*") << "t^" << f.p;
          else if constexpr (std::is_same_v<T, PowerLog>)
            o << "t^" << f.p << "*log(1+t)^" << f.k;
          else if constexpr (std::is_same_v<T, Mixed>)
            o << "t^" << f.p << "*(1+t)^" << f.k;
          else if constexpr (std::is_same_v<T, Table>)
            o << "table[" << f.x.size() << " knots]";
          else if constexpr (std::is_same_v<T, Composed>)
            o << "(" << f.base->describe() << ")(t^" << f.r << ")";
          else if constexpr (std::is_same_v<T, Tabulated>)
            o << "tabulated[" << f.u.size() << " knots]";
          else
            o << "indicator(" << f.c << ")";
        },
        fam_);
    return o.str();
  }

  nlohmann::json toJson() const {
    return std::visit(
        [](const auto& f) -> nlohmann::json {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, Power>)
            return {{"family", "power"}, {"p", f.p}, {"scale", f.scale}};
          else if constexpr (std::is_same_v<T, PowerLog>)
            return {{"family", "powerlog"}, {"p", f.p}, {"k", f.k}};
          else if constexpr (std::is_same_v<T, Mixed>)
            return {{"family", "mixed"}, {"p", f.p}, {"k", f.k}};
          else if constexpr (std::is_same_v<T, Table>) {
            nlohmann::json knots = nlohmann::json::array();
            for (std::size_t i = 0; i < f.x.size(); ++i) knots.push_back({f.x[i], f.y[i]});
            return {{"family", "table"}, {"knots", knots}};
          } else if constexpr (std::is_same_v<T, Composed>)
            return {{"family", "composed"}, {"base", f.base->toJson()}, {"r", f.r}};
          else if constexpr (std::is_same_v<T, Tabulated>)
            return {{"family", "tabulated"}, {"knots", f.u.size()}};
          else
            return {{"family", "indicator"}, {"c", f.c}};
        },
        fam_);
  }

  static YoungFunction fromJson(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("family")) throw ConfigError("young function: missing 'family'");
    auto fam = j.at("family").get<std::string>();
    auto num = [&](const char* k, double dflt) { return j.contains(k) ? j.at(k).get<double>() : dflt; };
    if (fam == "power") return power(num("p", 2.0), num("scale", 1.0));
    if (fam == "powerlog") return powerLog(num("p", 1.0), num("k", 1.0));
    if (fam == "mixed") return mixed(num("p", 0.5), num("k", 0.5));
    if (fam == "composed") return composed(fromJson(j.at("base")), num("r", 1.0));
    if (fam == "table") {
      if (!j.contains("knots")) throw ConfigError("table family needs 'knots'");
      std::vector<double> x, y;
      for (const auto& kn : j.at("knots")) {
        x.push_back(kn.at(0).get<double>());
        y.push_back(kn.at(1).get<double>());
      }
      return table(std::move(x), std::move(y));
    }
    throw ConfigError("unknown young family '" + fam + "' (expected power | powerlog | mixed | table)");
  }

  // short forms: "power:2", "powerlog:2:1", "mixed:0.5:0.5", or a JSON object
  static YoungFunction parse(const std::string& spec) {
    auto s = spec;
    while (!s.empty() && std::isspace((unsigned char)s.front())) s.erase(s.begin());
    if (!s.empty() && s.front() == '{') return fromJson(nlohmann::json::parse(s));
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw ConfigError("empty young function spec");
    auto arg = [&](std::size_t i, double dflt) {
      if (i >= parts.size()) return dflt;
      try {
        return std::stod(parts[i]);
      } catch (const std::exception&) {
        throw ConfigError("bad number '" + parts[i] + "' in young function spec '" + spec + "'");
      }
    };
    if (parts[0] == "power") return power(arg(1, 2.0), arg(2, 1.0));
    if (parts[0] == "powerlog") return powerLog(arg(1, 1.0), arg(2, 1.0));
    if (parts[0] == "mixed") return mixed(arg(1, 0.5), arg(2, 0.5));
    throw ConfigError("unknown young function spec '" + spec + "'");
  }

 private:
  explicit YoungFunction(Family f) : fam_(std::move(f)) {}

  static double evalImpl(const Power& f, double t) { return f.scale * std::pow(t, f.p); }
  static double evalImpl(const PowerLog& f, double t) { return std::pow(t, f.p) * std::pow(std::log1p(t), f.k); }
  static double evalImpl(const Mixed& f, double t) { return std::pow(t, f.p) * std::pow(1.0 + t, f.k); }
  static double evalImpl(const Table& f, double t) {
    auto it = std::lower_bound(f.x.begin(), f.x.end(), t);
    std::size_t i = std::size_t(it - f.x.begin());
    if (i == f.x.size()) {
      std::size_t n = f.x.size();
      double x0 = n >= 2 ? f.x[n - 2] : 0.0, y0 = n >= 2 ? f.y[n - 2] : 0.0;
      return f.y[n - 1] + (t - f.x[n - 1]) * (f.y[n - 1] - y0) / (f.x[n - 1] - x0);
    }
    double x0 = i ? f.x[i - 1] : 0.0, y0 = i ? f.y[i - 1] : 0.0;
    return y0 + (t - x0) * (f.y[i] - y0) / (f.x[i] - x0);
  }
  static double evalImpl(const Composed& f, double t) { return (*f.base)(std::pow(t, f.r)); }
  static double evalImpl(const Tabulated& f, double t) { return std::exp(pchipEval(f, std::log(t))); }
  static double evalImpl(const Indicator& f, double t) {
    return t <= f.c ? 0.0 : std::numeric_limits<double>::infinity();
  }

  static double derivImpl(const Power& f, double t) {
    if (t == 0.0) return f.p > 1.0 ? 0.0 : (f.p == 1.0 ? f.scale : std::numeric_limits<double>::infinity());
    return f.scale * f.p * std::pow(t, f.p - 1.0);
  }
  static double derivImpl(const PowerLog& f, double t) {
    if (t == 0.0) return 0.0;
    double L = std::log1p(t);
    return f.p * std::pow(t, f.p - 1.0) * std::pow(L, f.k) + std::pow(t, f.p) * f.k * std::pow(L, f.k - 1.0) / (1.0 + t);
  }
  static double derivImpl(const Mixed& f, double t) {
    if (t == 0.0) return f.p > 1.0 ? 0.0 : (f.p == 1.0 ? 1.0 : std::numeric_limits<double>::infinity());
    return f.p * std::pow(t, f.p - 1.0) * std::pow(1.0 + t, f.k) + f.k * std::pow(t, f.p) * std::pow(1.0 + t, f.k - 1.0);
  }
  static double derivImpl(const Table& f, double t) {
    auto it = std::upper_bound(f.x.begin(), f.x.end(), t);
    std::size_t i = std::min(std::size_t(it - f.x.begin()), f.x.size() - 1);
    double x0 = i ? f.x[i - 1] : 0.0, y0 = i ? f.y[i - 1] : 0.0;
    return (f.y[i] - y0) / (f.x[i] - x0);
  }
  static double derivImpl(const Composed& f, double t) {
    if (t == 0.0) return 0.0;
    return f.r * std::pow(t, f.r - 1.0) * f.base->derivative(std::pow(t, f.r));
  }
  static double derivImpl(const Tabulated& f, double t) {
    if (t == 0.0) return 0.0;
    double u = std::log(t);
    return std::exp(pchipEval(f, u)) * pchipDeriv(f, u) / t;
  }
  static double derivImpl(const Indicator& f, double t) {
    return t < f.c ? 0.0 : std::numeric_limits<double>::infinity();
  }

  // Fritsch-Carlson monotone slopes
  static std::vector<double> pchipSlopes(const std::vector<double>& x, const std::vector<double>& y) {
    std::size_t n = x.size();
    std::vector<double> d(n, 0.0), del(n > 1 ? n - 1 : 0);
    for (std::size_t i = 0; i + 1 < n; ++i) del[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    if (n < 2) return d;
    d[0] = del[0];
    d[n - 1] = del[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (del[i - 1] * del[i] <= 0.0) {
        d[i] = 0.0;
      } else {
        double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
        double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
        d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
      }
    }
    return d;
  }
  static double pchipEval(const Tabulated& f, double u) {
    std::size_t n = f.u.size();
    if (u <= f.u.front()) return f.v.front() + f.d.front() * (u - f.u.front());
    if (u >= f.u.back()) return f.v.back() + f.d.back() * (u - f.u.back());
    std::size_t i = std::size_t(std::upper_bound(f.u.begin(), f.u.end(), u) - f.u.begin()) - 1;
    i = std::min(i, n - 2);
    double h = f.u[i + 1] - f.u[i], s = (u - f.u[i]) / h;
    double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    return h00 * f.v[i] + h10 * h * f.d[i] + h01 * f.v[i + 1] + h11 * h * f.d[i + 1];
  }
  static double pchipDeriv(const Tabulated& f, double u) {
    std::size_t n = f.u.size();
    if (u <= f.u.front()) return f.d.front();
    if (u >= f.u.back()) return f.d.back();
    std::size_t i = std::size_t(std::upper_bound(f.u.begin(), f.u.end(), u) - f.u.begin()) - 1;
    i = std::min(i, n - 2);
    double h = f.u[i + 1] - f.u[i], s = (u - f.u[i]) / h;
    double d00 = 6 * s * s - 6 * s, d10 = 3 * s * s - 4 * s + 1, d01 = -6 * s * s + 6 * s, d11 = 3 * s * s - 2 * s;
    return (d00 * f.v[i] + d01 * f.v[i + 1]) / h + d10 * f.d[i] + d11 * f.d[i + 1];
  }

  Family fam_;
};

// Legendre transform. Analytic for powers; otherwise tabulated on a log grid.
inline YoungFunction conjugate(const YoungFunction& A) {
  if (auto* p = std::get_if<YoungFunction::Power>(&A.family())) {
    if (p->p == 1.0) return YoungFunction::indicator(p->scale);
    if (p->p < 1.0) throw PreconditionError("conjugate: power below 1 is not a Young function");
    double q = p->p / (p->p - 1.0);
    return YoungFunction::power(q, (1.0 / q) * std::pow(p->scale * p->p, 1.0 - q));
  }
  constexpr int kKnots = 2048;
  std::vector<double> u(kKnots), v(kKnots);
  for (int i = 0; i < kKnots; ++i) {
    double lt = std::log(1e-6) + (std::log(1e6) - std::log(1e-6)) * i / (kKnots - 1);
    double t = std::exp(lt);
    // A' is nondecreasing; bisection on log s for A'(s) = t
    double lo = -80.0, hi = 80.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (A.derivative(std::exp(mid)) < t)
        lo = mid;
      else
        hi = mid;
    }
    double s = std::exp(0.5 * (lo + hi));
    double val = s * t - A(s);
    u[i] = lt;
    v[i] = std::log(std::max(val, 1e-300));
  }
  return YoungFunction::tabulated(std::move(u), std::move(v));
}

namespace detail {

// sum_i mu_i A(x_i / lambda) with mu normalized to total 1
inline double orliczMean(std::span<const double> x, std::span<const double> mu, const YoungFunction& A, double lambda) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (mu[i] > 0.0 && x[i] > 0.0) s += mu[i] * A(x[i] / lambda);
  return s;
}

}  // namespace detail

// inf{lambda > 0 : sum_i mu_i A(|x_i|/lambda) <= 1}, mu a probability vector
inline double luxemburg(std::span<const double> x, std::span<const double> mu, const YoungFunction& A) {
  double mx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (mu[i] > 0.0) mx = std::max(mx, std::fabs(x[i]));
  if (mx == 0.0) return 0.0;
  std::vector<double> ax(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) ax[i] = std::fabs(x[i]);
  if (auto* p = std::get_if<YoungFunction::Power>(&A.family())) {
    double s = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i)
      if (mu[i] > 0.0) s += mu[i] * std::pow(ax[i] / mx, p->p);
    return mx * std::pow(p->scale * s, 1.0 / p->p);
  }
  auto F = [&](double lam) { return detail::orliczMean(ax, mu, A, lam); };
  double hi = mx;
  int guard = 0;
  while (!(F(hi) <= 1.0)) {
    hi *= 2.0;
    if (++guard > 2000) throw NumericError("luxemburg: no feasible lambda found (max |f| = " + std::to_string(mx) + ")");
  }
  double lo = hi;
  guard = 0;
  while (F(lo) <= 1.0) {
    lo *= 0.5;
    if (++guard > 2000) return 0.0;
  }
  for (int it = 0; it < 300 && hi / lo - 1.0 > 1e-15; ++it) {
    double mid = std::sqrt(lo * hi);
    if (F(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  if (hi / lo - 1.0 > 1e-12) throw NumericError("luxemburg: bisection did not converge");
  return hi;
}

// normalized by |Q| (unweighted) or by w(Q)
inline double luxemburgNorm(const GridFunction& f, const YoungFunction& A, const GridCube& q,
                            const Weight* w = nullptr) {
  auto cs = cells(f.grid(), q);
  std::vector<double> x(cs.size()), mu(cs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    x[i] = f[cs[i]];
    mu[i] = w ? (*w)[cs[i]] : 1.0;
    total += mu[i];
  }
  if (w && total == 0.0) throw NumericError("weighted luxemburg norm undefined: w(Q) = 0");
  for (auto& m : mu) m /= total;
  return luxemburg(x, mu, A);
}

enum class Verdict { yes, no, indeterminate };

inline std::string toString(Verdict v) {
  return v == Verdict::yes ? "yes" : v == Verdict::no ? "no" : "indeterminate";
}

struct BpDiagnostics {
  Verdict inBp = Verdict::indeterminate;
  double tailExponent = 0.0;  // fitted exponent e of g(t) ~ t^e
  double logExponent = 0.0;   // fitted gamma of t g(t) ~ (ln t)^-gamma, used in the borderline band
  double normEstimate = 0.0;  // partial tail integral up to the largest sampled t
  double q = 0.0;
};

// tail test for int_c^inf A(t)^{q/p} / t^q dt/t (q = p when alpha = 0)
inline BpDiagnostics bpDiagnostics(const YoungFunction& A, double p, double alpha = 0.0, double tol = 0.1) {
  if (!(p > 1.0)) throw PreconditionError("bpDiagnostics: p must exceed 1");
  if (alpha < 0.0 || (alpha > 0.0 && !(p < 1.0 / alpha)))
    throw PreconditionError("bpDiagnostics: need 0 <= alpha and p < 1/alpha");
  BpDiagnostics out;
  double q = alpha > 0.0 ? 1.0 / (1.0 / p - alpha) : p;
  out.q = q;
  auto g = [&](double t) { return std::pow(A(t), q / p) / std::pow(t, q + 1.0); };
  // samples in ln t from ln 1e4 to ln 1e14
  const int n = 200;
  const double u0 = std::log(1e4), u1 = std::log(1e14);
  std::vector<double> us(n), lg(n), llt(n), lgt(n);
  for (int i = 0; i < n; ++i) {
    us[i] = u0 + (u1 - u0) * i / (n - 1);
    double t = std::exp(us[i]);
    lg[i] = std::log(g(t));
    llt[i] = std::log(us[i]);
    lgt[i] = lg[i] + us[i];
  }
  auto slope = [](const std::vector<double>& xs, const std::vector<double>& ys) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
  };
  out.tailExponent = slope(us, lg);
  out.logExponent = -slope(llt, lgt);
  // trapezoid in ln t from c = 2 to 1e14 of g(t) t
  {
    const int m = 4000;
    double a = std::log(2.0), b = u1, h = (b - a) / m, s = 0.0;
    for (int i = 0; i <= m; ++i) {
      double t = std::exp(a + h * i);
      double val = g(t) * t;
      s += (i == 0 || i == m) ? 0.5 * val : val;
    }
    out.normEstimate = std::pow(s * h, 1.0 / q);
  }
  if (!std::isfinite(out.tailExponent)) {
    out.inBp = Verdict::indeterminate;
  } else if (out.tailExponent < -1.0 - tol) {
    out.inBp = Verdict::yes;
  } else if (out.tailExponent > -1.0 + tol) {
    out.inBp = Verdict::no;
  } else if (out.logExponent > 1.0 + 2.0 * tol) {
    out.inBp = Verdict::yes;
  } else if (out.logExponent < 1.0 - 2.0 * tol) {
    out.inBp = Verdict::no;
  }
  return out;
}

struct UpperIndex {
  double value = 0.0;
  double residual = 0.0;
  Verdict fit = Verdict::indeterminate;  // yes = residual within tolerance
};

// u = lim -ln h(s)/ln s, h(s) = sup_t inv(t)/inv(st); slope fit over s = 2^-4..2^-12
inline UpperIndex upperIndex(const YoungFunction& phi, double tol = 1e-2) {
  std::vector<double> ys;
  for (int i = 0; i <= 320; ++i) ys.push_back(std::pow(10.0, -10.0 + 160.0 * i / 320.0));
  std::vector<double> inv(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) inv[i] = phi.inverse(ys[i]);
  std::vector<double> xs, hs;
  for (int j = 4; j <= 12; ++j) {
    double s = std::ldexp(1.0, -j);
    double h = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      double d = phi.inverse(s * ys[i]);
      if (d > 0.0 && std::isfinite(inv[i])) h = std::max(h, inv[i] / d);
    }
    xs.push_back(std::log(s));
    hs.push_back(-std::log(h));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += hs[i];
  }
  mx /= xs.size();
  my /= xs.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (hs[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  UpperIndex out;
  out.value = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = hs[i] - (my + out.value * (xs[i] - mx));
    rss += r * r;
  }
  out.residual = std::sqrt(rss / xs.size());
  out.fit = out.residual <= tol && std::isfinite(out.value) ? Verdict::yes : Verdict::indeterminate;
  return out;
}

}  // namespace medosc
