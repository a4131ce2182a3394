#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "../grid.hpp"
#include "../rng.hpp"

namespace medosc::harness {

inline const std::vector<std::string>& generatorTags() {
  static const std::vector<std::string> tags{
      "random-uniform", "trig",          "step",        "spike[:h[:cell]]", "binary-exhaustive",
      "power-weight:a", "fujii-pair",    "geometric-decay", "inverse-weight[:a[:p]]", "log-profile[:e]"};
  return tags;
}

struct GeneratorSpec {
  std::string name;
  std::vector<double> args;
};

inline std::vector<std::string> splitOn(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline double parseNumber(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number '" + s + "' in " + what);
  }
}

inline GeneratorSpec parseGenerator(const std::string& raw) {
  auto parts = splitOn(raw, ':');
  if (parts.empty() || parts[0].empty()) throw ConfigError("empty generator tag");
  GeneratorSpec g{parts[0], {}};
  for (std::size_t i = 1; i < parts.size(); ++i) g.args.push_back(parseNumber(parts[i], "generator '" + raw + "'"));
  static const std::vector<std::string> known{"random-uniform", "trig",           "step",
                                              "spike",          "binary-exhaustive", "power-weight",
                                              "fujii-pair",     "geometric-decay", "inverse-weight",
                                              "log-profile"};
  if (std::find(known.begin(), known.end(), g.name) == known.end())
    throw ConfigError("unknown generator '" + g.name + "'");
  return g;
}

// parameters the suite supplies to generators whose arguments are omitted
struct GeneratorContext {
  double a = 1.5;  // inverse-weight exponent of the weight
  double p = 2.0;
  double e = 2.0 / 3.0;  // log-profile exponent
};

struct Case {
  std::size_t id = 0;
  std::string generator;
  GridFunction f;
  std::optional<GridFunction> w;  // a case-specific weight overriding the suite weight
};

namespace detail {

inline double unit(const Grid& g, std::size_t c) { return (g.center(c, 0) - g.domain().origin[0]) / g.domain().side; }

inline double domainCenter(const Grid& g, int axis) { return g.domain().origin[axis] + 0.5 * g.domain().side; }

}  // namespace detail

// profiles are drawn from (seed, case) only, so a case is the same function at every level;
// random-uniform is the exception and redraws per level
inline GridFunction generateFunction(const GeneratorSpec& spec, const Grid& g, std::uint64_t seed, std::size_t id,
                                     const GeneratorContext& ctx = {}) {
  Rng rng(streamSeed(seed, id));
  std::vector<double> v(g.size(), 0.0);
  const std::string& n = spec.name;
  auto arg = [&](std::size_t i, double dflt) { return i < spec.args.size() ? spec.args[i] : dflt; };
  if (n == "random-uniform") {
    Rng r2(streamSeed(seed, id, 1000 + std::uint64_t(g.level())));
    for (auto& x : v) x = r2.uniform(-1.0, 1.0);
  } else if (n == "trig") {
    const int K = 8;
    double a[K], b[K];
    for (int k = 0; k < K; ++k) {
      a[k] = rng.uniform(-1.0, 1.0) / (k + 1);
      b[k] = rng.uniform(-1.0, 1.0) / (k + 1);
    }
    double phase = rng.uniform(0.0, 1.0);
    for (std::size_t c = 0; c < g.size(); ++c) {
      double s = 0.0;
      for (int ax = 0; ax < g.dim(); ++ax) {
        double u = (g.center(c, ax) - g.domain().origin[ax]) / g.domain().side + phase * ax;
        for (int k = 0; k < K; ++k)
          s += a[k] * std::cos(2 * M_PI * (k + 1) * u) + b[k] * std::sin(2 * M_PI * (k + 1) * u);
      }
      v[c] = s;
    }
  } else if (n == "step") {
    int pieces = 1 + int(rng.below(8));
    std::vector<double> cuts(pieces - 1), vals(pieces);
    for (auto& x : cuts) x = rng.uniform();
    std::sort(cuts.begin(), cuts.end());
    for (auto& x : vals) x = rng.uniform(-1.0, 1.0);
    for (std::size_t c = 0; c < g.size(); ++c) {
      double u = detail::unit(g, c);
      v[c] = vals[std::upper_bound(cuts.begin(), cuts.end(), u) - cuts.begin()];
    }
  } else if (n == "spike") {
    double h;
    std::size_t cell;
    if (spec.args.empty()) {
      h = rng.uniform(1.0, 20.0) * (rng.below(2) ? 1.0 : -1.0);
      cell = std::min<std::size_t>(g.size() - 1, std::size_t(rng.uniform() * double(g.size())));
    } else {
      h = arg(0, 10.0);
      double c = arg(1, 0.0);
      if (c < 0 || c >= double(g.size())) throw ConfigError("spike: cell out of range");
      cell = std::size_t(c);
    }
    v[cell] = h;
  } else if (n == "power-weight") {
    double a = arg(0, ctx.a);
    for (std::size_t c = 0; c < g.size(); ++c) {
      double d2 = 0.0;
      for (int ax = 0; ax < g.dim(); ++ax) {
        double d = g.center(c, ax) - detail::domainCenter(g, ax);
        d2 += d * d;
      }
      v[c] = std::pow(d2, 0.5 * a);
    }
  } else if (n == "geometric-decay") {
    for (std::size_t c = 0; c < g.size(); ++c) v[c] = std::ldexp(1.0, -int(std::min<std::size_t>(c, 1070)));
  } else if (n == "inverse-weight") {
    // w^{-1/(p-1)} on the quarter cube to the right of the singular point of |x-c|^a
    double a = arg(0, ctx.a), p = arg(1, ctx.p);
    double c0 = detail::domainCenter(g, 0), len = 0.25 * g.domain().side;
    for (std::size_t c = 0; c < g.size(); ++c) {
      double x = g.center(c, 0) - c0;
      if (x > 0.0 && x < len) v[c] = std::pow(x, -a / (p - 1.0));
    }
  } else if (n == "log-profile") {
    // log(x/h)^{-e} right of the first cell; pairs with the first-cell indicator weight
    double e = arg(0, ctx.e), h = g.width();
    for (std::size_t c = 1; c < g.size(); ++c) {
      double x = g.center(c, 0) - g.domain().origin[0];
      v[c] = std::pow(std::log(x / h), -e);
    }
  } else if (n == "fujii-pair" || n == "binary-exhaustive") {
    throw ConfigError("generator '" + n + "' does not produce a single function here");
  }
  return GridFunction(g, std::move(v));
}

// cell averages of the indicators: w = 0 on (0,1), v = 0 on (1/3,2/3)
inline std::pair<GridFunction, GridFunction> fujiiPair(const Grid& g) {
  if (g.dim() != 1) throw PreconditionError("fujii pair is one-dimensional");
  auto overlap = [&](std::size_t c, double a, double b) {
    double lo = g.domain().origin[0] + double(c) * g.width(), hi = lo + g.width();
    return std::max(0.0, std::min(hi, b) - std::max(lo, a)) / g.width();
  };
  std::vector<double> w(g.size()), v(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) {
    w[c] = 1.0 - overlap(c, 0.0, 1.0);
    v[c] = 1.0 - overlap(c, 1.0 / 3.0, 2.0 / 3.0);
  }
  return {GridFunction(g, std::move(w)), GridFunction(g, std::move(v))};
}

inline GridFunction firstCellIndicator(const Grid& g) {
  std::vector<double> v(g.size(), 0.0);
  v[0] = 1.0;
  return GridFunction(g, std::move(v));
}

// weight specs: const:c | power:a | power-weight:a | geometric-decay | first-cell
inline GridFunction parseWeight(const std::string& spec, const Grid& g) {
  auto parts = splitOn(spec, ':');
  if (parts.empty()) throw ConfigError("empty weight spec");
  const std::string& n = parts[0];
  if (n == "const") {
    if (parts.size() != 2) throw ConfigError("weight const:c needs one value");
    double c = parseNumber(parts[1], "weight");
    if (!(c >= 0.0)) throw ConfigError("weight const:c needs c >= 0");
    return GridFunction::constant(g, c);
  }
  if (n == "power" || n == "power-weight") {
    if (parts.size() != 2) throw ConfigError("weight power:a needs one exponent");
    return generateFunction({"power-weight", {parseNumber(parts[1], "weight")}}, g, 0, 0);
  }
  if (n == "geometric-decay") return generateFunction({"geometric-decay", {}}, g, 0, 0);
  if (n == "first-cell") return firstCellIndicator(g);
  throw ConfigError("unknown weight '" + spec + "' (const:c|power:a|geometric-decay|first-cell)");
}

// pair specs: fujii | same:<weight> | <weight> (w = v)
inline std::pair<GridFunction, GridFunction> parsePair(const std::string& spec, const Grid& g) {
  if (spec == "fujii" || spec == "fujii-pair") return fujiiPair(g);
  std::string s = spec.rfind("same:", 0) == 0 ? spec.substr(5) : spec;
  auto w = parseWeight(s, g);
  return {w, w};
}

// comma-separated generator tags; cases cycle through them. binary-exhaustive yields all 0/1 functions.
inline std::vector<Case> generateCorpus(const std::string& spec, const Grid& g, std::uint64_t seed, std::size_t cases,
                                        const GeneratorContext& ctx = {}) {
  auto tags = splitOn(spec, ',');
  std::vector<GeneratorSpec> gens;
  for (auto& t : tags) gens.push_back(parseGenerator(t));
  if (gens.empty()) throw ConfigError("empty corpus spec");
  std::vector<Case> out;
  if (gens.size() == 1 && gens[0].name == "binary-exhaustive") {
    if (g.size() > 16) throw ConfigError("binary-exhaustive needs at most 16 cells");
    std::size_t total = std::size_t(1) << g.size();
    for (std::size_t mask = 0; mask < total; ++mask) {
      std::vector<double> v(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) v[i] = double(mask >> i & 1u);
      out.push_back({mask, "binary-exhaustive", GridFunction(g, std::move(v)), std::nullopt});
    }
    return out;
  }
  for (auto& gs : gens)
    if (gs.name == "binary-exhaustive" || gs.name == "fujii-pair")
      throw ConfigError("generator '" + gs.name + "' cannot be mixed into a corpus");
  for (std::size_t i = 0; i < cases; ++i) {
    const auto& gs = gens[i % gens.size()];
    std::string tag = gs.name;
    for (double a : gs.args) {
      std::ostringstream os;
      os << ':' << a;
      tag += os.str();
    }
    Case c{i, tag, generateFunction(gs, g, seed, i, ctx), std::nullopt};
    if (gs.name == "log-profile") c.w = firstCellIndicator(g);
    out.push_back(std::move(c));
  }
  return out;
}

// FNV-1a over the value bytes; identifies a case input in reports
inline std::string inputHash(const GridFunction& f) {
  std::uint64_t h = 1469598103934665603ULL;
  for (double x : f.values()) {
    unsigned char b[sizeof(double)];
    std::memcpy(b, &x, sizeof(double));
    for (unsigned char c : b) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace medosc::harness
