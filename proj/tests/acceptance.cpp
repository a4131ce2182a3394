// One line per acceptance criterion. Exit status is 0 when every criterion ran to a
// verdict (PASS or FAIL); a criterion that throws is reported as ERROR and exits 1.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "medosc/medosc.hpp"

using namespace medosc;
using namespace medosc::harness;

namespace {

struct Check {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string seq(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(4);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

std::vector<double> sups(const VerificationReport& r) {
  std::vector<double> out;
  for (const auto& l : r.levels) out.push_back(l.supRatio);
  return out;
}

Check c1() {
  auto t0 = Clock::now();
  Grid g(1, 3);
  std::size_t bad = 0;
  double worst = 0.0;
  for (unsigned bits = 0; bits < 256; ++bits) {
    std::vector<double> v(8);
    for (int i = 0; i < 8; ++i) v[i] = double((bits >> i) & 1u);
    auto r = decompose(GridFunction(g, v), DyadicCube{}, 0.5, 0.125, Variant::base);
    auto d = measureDecay(r);
    bad += !(d.disjointHolds && d.monotoneHolds && d.ivHolds && d.maxRatio <= 0.25);
    worst = std::max(worst, d.maxRatio);
  }
  double secs = seconds(t0);
  std::ostringstream os;
  os << "256 functions, violations " << bad << ", max (iv) ratio " << worst << ", " << secs << " s";
  return {bad == 0 && worst <= 0.25 && secs < 60.0, os.str()};
}

Check c2() {
  auto f = generateFunction(parseGenerator("spike:10:0"), Grid(1, 4), 0, 0);
  auto r = decompose(f, DyadicCube{}, 0.5, 0.125, Variant::base, CubeMode::gridAligned);
  bool one = r.selectedCount() == 1 && r.generations.size() == 1;
  bool cube = one && cells(f.grid(), r.generations[0][0].cube) == std::vector<std::size_t>{0, 1};
  double a = one ? r.generations[0][0].a : -1.0;
  auto pw = verifyPointwiseBound(f, r);
  double maj = pw.majorant[0];
  std::ostringstream os;
  os << "selected " << r.selectedCount() << ", cells{0,1} " << (cube ? "yes" : "no") << ", a " << a
     << ", rootMedian " << r.rootMedian << ", majorant " << maj << ", bound " << (pw.ok() ? "holds" : "violated");
  return {cube && a == 10.0 && r.rootMedian == 0.0 && std::fabs(maj - 30.0) <= 1e-9 && pw.ok(), os.str()};
}

Check c3() {
  Grid g(1, 8);
  auto corpus = generateCorpus("random-uniform,trig,step,spike", g, 20240611, 50);
  std::vector<std::size_t> pointwise(corpus.size()), coeff(corpus.size());
  std::vector<double> worst(corpus.size());
  parallelFor(corpus.size(), 0, [&](std::size_t i) {
    auto r = decompose(corpus[i].f, DyadicCube{}, 0.5, 0.125, Variant::base, CubeMode::gridAligned);
    auto pw = verifyPointwiseBound(corpus[i].f, r, std::nullopt, 2.0);
    pointwise[i] = pw.violations.size();
    coeff[i] = pw.coefficientViolations.size();
    worst[i] = pw.worstRatio;
  });
  std::size_t vp = 0, vc = 0;
  double w = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    vp += pointwise[i];
    vc += coeff[i];
    w = std::max(w, worst[i]);
  }
  std::ostringstream os;
  os << corpus.size() << " cases at N=256, pointwise violations " << vp << ", coefficient violations " << vc
     << ", worst |f-m|/majorant " << w;
  return {vp == 0 && vc == 0, os.str()};
}

Check trendSuite(const std::string& id, std::vector<int> levels) {
  SuiteConfig cfg;
  cfg.suite = id;
  cfg.levels = std::move(levels);
  auto r = runSuite(cfg);
  bool finite = true;
  for (double s : sups(r)) finite = finite && std::isfinite(s);
  std::ostringstream os;
  os << id << " supRatio " << seq(sups(r)) << ", max growth " << r.trend.maxGrowth;
  if (r.constants.contains("conditionF")) {
    const auto& cf = r.constants["conditionF"];
    os << ", beta " << cf["beta"].dump() << ", c1 " << cf["c1"].dump() << ", c0(s/(1-t))^beta "
       << cf["admissibility"].dump();
  }
  return {finite && r.trend.maxGrowth < 1.25 && r.pass, os.str()};
}

Check c6() {
  Rng rng(612);
  Grid g(1, 6);
  std::size_t bad612 = 0, badHolder = 0, badConj = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> gv(g.size());
    for (auto& x : gv) x = rng.uniform(0.0, 5.0);
    int side = 1 + int(rng.below(g.n()));
    GridCube q{{int(rng.below(g.n() - side + 1)), 0}, side};
    double p = rng.uniform(1.0, 4.0), r = rng.uniform(1.0, 3.0);
    auto A = YoungFunction::power(p);
    std::vector<double> gr(gv);
    for (auto& x : gr) x = std::pow(x, r);
    double lhs = luxemburgNorm(GridFunction(g, gv), YoungFunction::composed(A, r), q);
    double rhs = std::pow(luxemburgNorm(GridFunction(g, gr), A, q), 1.0 / r);
    bad612 += std::fabs(lhs - rhs) > 1e-9 * std::max(1.0, rhs);

    std::vector<double> fv(g.size());
    for (auto& x : fv) x = rng.uniform(-5.0, 5.0);
    auto Ac = conjugate(A);
    double avg = 0.0;
    auto cs = cells(g, q);
    for (auto c : cs) avg += std::fabs(fv[c] * gv[c]);
    avg /= double(cs.size());
    badHolder += avg > 2.0 * luxemburgNorm(GridFunction(g, fv), A, q) * luxemburgNorm(GridFunction(g, gv), Ac, q);
  }
  double worstConj = 0.0;
  for (double qq : {1.5, 2.0, 3.0, 5.0}) {
    double qp = qq / (qq - 1.0);
    auto C = conjugate(YoungFunction::power(qq, 1.0 / qq));
    for (double t = 1e-3; t <= 1e3 * (1 + 1e-12); t *= std::pow(10.0, 0.05)) {
      double expect = std::pow(t, qp) / qp, err = std::fabs(C(t) - expect) / std::max(1.0, expect);
      worstConj = std::max(worstConj, err);
      badConj += err > 1e-6;
    }
  }
  std::ostringstream os;
  os << "transform identity misses " << bad612 << "/1000, Young-Holder violations " << badHolder << "/1000, conjugate misses "
     << badConj << " (worst rel err " << worstConj << ")";
  return {bad612 == 0 && badHolder == 0 && badConj == 0, os.str()};
}

Check c7() {
  std::ostringstream os;
  bool ok = true;
  for (double a : {-1.5, -0.5, 0.0, 0.5, 1.5}) {
    std::vector<double> v;
    for (int L = 6; L <= 9; ++L) {
      Grid g(1, L);
      Weight w(parseWeight("power:" + std::to_string(a), g));
      v.push_back(apConstant(w, 2.0, std::nullopt, CubeMode::gridAligned).value);
    }
    auto tr = classifyTrend(v);
    bool want = std::fabs(a) < 1.0 ? tr.cls == TrendClass::stable : tr.cls == TrendClass::growing;
    ok = ok && want;
    os << "a=" << a << " " << toString(tr.cls) << " (max growth " << tr.maxGrowth << ")" << (a < 1.5 ? "; " : "");
  }
  return {ok, os.str()};
}

Check c8() {
  auto y = bpDiagnostics(YoungFunction::power(1.5), 2.0), n = bpDiagnostics(YoungFunction::power(2.0), 2.0);
  std::ostringstream os;
  os << "t^1.5: " << toString(y.inBp) << " (exp " << y.tailExponent << "), t^2: " << toString(n.inBp) << " (exp "
     << n.tailExponent << ")";
  bool ok = y.inBp == medosc::Verdict::yes && n.inBp == medosc::Verdict::no &&
            std::fabs(y.tailExponent + 1.5) <= 0.1 && std::fabs(n.tailExponent + 1.0) <= 0.1;
  return {ok, os.str()};
}

Check c9() {
  std::ostringstream os;
  bool ok = true;
  for (double p : {1.5, 2.0, 4.0}) {
    double u = upperIndex(YoungFunction::power(p)).value;
    ok = ok && std::fabs(u - 1.0 / p) <= 1e-3;
    os << "p=" << p << " u=" << u << (p < 4 ? ", " : "");
  }
  return {ok, os.str()};
}

Check c10() {
  Grid g(1, 10);
  std::vector<double> v(g.size(), 0.0);
  for (std::size_t c = 0; c < g.size() / 2; ++c) v[c] = 1.0;
  auto Hf = apply(KernelOperator::hilbert(), GridFunction(g, v));
  double worst = 0.0, sum = 0.0, mass = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    double x = g.center(c, 0);
    sum += Hf[c];
    mass += std::fabs(Hf[c]);
    if (x < 1.0 / 16 || std::fabs(x - 0.5) < 1.0 / 16 || x > 1.0 - 1.0 / 16) continue;
    double exact = std::log(std::fabs(x / (x - 0.5)));
    worst = std::max(worst, std::fabs(Hf[c] - exact) / std::fabs(exact));
  }
  double rel = std::fabs(sum) / mass;
  std::ostringstream os;
  os << "(a) max rel err " << worst << (worst < 0.02 ? " ok" : " FAIL") << "; (b) sum Hf " << sum << ", sum |Hf| "
     << mass << ", relative " << rel << (rel <= 1e-9 ? " ok" : " FAIL");
  return {worst < 0.02 && rel <= 1e-9, os.str()};
}

Check c11() {
  std::ostringstream os;
  // (a)
  std::vector<double> geo;
  for (int L = 5; L <= 8; ++L) {
    Grid g(1, L);
    Weight d(parseWeight("geometric-decay", g));
    geo.push_back(conditionFEstimate(d, d, 1.0, 0.5, std::nullopt, {}, CubeMode::dyadic).estimate);
  }
  auto tg = classifyTrend(geo);
  bool a = !tg.growth.empty();
  for (double gr : tg.growth) a = a && gr >= 2.0;
  os << "(a) conditionF " << seq(geo) << (a ? " ok" : " FAIL");

  // (b)
  SuiteConfig cb;
  cb.suite = "thm5.3";
  cb.params = {{"weight", "power:1.5"}, {"p", 2}};
  auto rb = runSuite(cb);
  auto sb = sups(rb);
  bool b = !rb.pass && rb.expectation == "fail";
  for (std::size_t i = 1; i < sb.size(); ++i) b = b && sb[i] > sb[i - 1];
  os << "; (b) thm5.3 " << rb.verdictNote() << " supRatio " << seq(sb) << (b ? " ok" : " FAIL");

  // (c)
  auto sharp = [](int k) {
    SuiteConfig c;
    c.suite = "ineq1.11";
    c.levels = {6, 7, 8, 9, 10};
    c.corpus = "log-profile";
    c.params = {{"p", 2.5}, {"k", k}};
    return runSuite(c);
  };
  auto short1 = sharp(2), full = sharp(3);
  auto s2 = sups(short1), s3 = sups(full);
  bool c = s2.size() > 1;
  for (std::size_t i = 1; i < s2.size(); ++i) c = c && s2[i] > s2[i - 1];
  os << "; (c) k=2 supRatio " << seq(s2) << " [" << short1.verdictNote() << "], k=3 " << seq(s3)
     << (c ? " ok" : " FAIL");
  return {a && b && c, os.str()};
}

Check c12() {
  std::size_t mismatches = 0, runs = 0;
  unsigned hw = std::max(2u, std::thread::hardware_concurrency());
  std::string bad;
  for (const auto& id : suiteIds()) {
    SuiteConfig cfg;
    cfg.suite = id;
    cfg.cases = 12;
    cfg.threads = 1;
    auto a = toCsv(runSuite(cfg));
    auto b = toCsv(runSuite(cfg));
    cfg.threads = hw;
    auto c = toCsv(runSuite(cfg));
    cfg.threads = 3;
    auto d = toCsv(runSuite(cfg));
    ++runs;
    if (a != b || a != c || a != d) {
      ++mismatches;
      bad += " " + id;
    }
  }
  std::ostringstream os;
  os << runs << " suites x 4 runs (threads 1, 1, " << hw << ", 3), mismatching:" << (bad.empty() ? " none" : bad);
  return {mismatches == 0, os.str()};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"decomposition exactness", c1},
      {"spike trace", c2},
      {"pointwise bound", c3},
      {"Hilbert domination stability", [] { return trendSuite("thm4.1", {7, 8, 9}); }},
      {"condition F pair inequality", [] { return trendSuite("thm3.1", {6, 7, 8}); }},
      {"Orlicz identities", c6},
      {"A_p classifier", c7},
      {"B_p classifier", c8},
      {"upper index", c9},
      {"Hilbert accuracy", c10},
      {"negative controls", c11},
      {"determinism", c12},
  };
  int passed = 0, errors = 0, n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    auto t0 = Clock::now();
    try {
      auto v = fn();
      passed += v.pass;
      std::printf("[%s] %2d %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", n, name.c_str(), v.detail.c_str(),
                  seconds(t0));
    } catch (const std::exception& e) {
      ++errors;
      std::printf("[ERROR] %2d %s: %s\n", n, name.c_str(), e.what());
    }
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria pass\n", passed, n);
  return errors ? 1 : 0;
}
