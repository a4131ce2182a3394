#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "medosc/medosc.hpp"

using namespace medosc;
using namespace medosc::harness;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInternal = 1, kConfig = 2, kIo = 3, kFail = 4 };

std::string scalar(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    writeText(path, text);
}

std::string footer() {
  std::string s = "\nSuites:";
  for (const auto& id : suiteIds()) s += " " + id;
  s += "\nGenerators:";
  for (const auto& t : generatorTags()) s += " " + t;
  s += "\nExit codes: 0 ok, 1 internal error, 2 config error, 3 I/O error, 4 verify FAIL\n";
  return s;
}

// input either from a GridFunction JSON file or a generator tag on a fresh grid
struct Source {
  std::string input;
  std::string generate;
  int level = 6;
  std::string domain = "unit";

  void attach(CLI::App* sub) {
    auto* in = sub->add_option("--input", input, "GridFunction JSON file");
    auto* gen = sub->add_option("--generate", generate, "generator tag used instead of --input");
    in->excludes(gen);
    gen->excludes(in);
    sub->add_option("--level", level, "grid level for --generate")->capture_default_str();
    sub->add_option("--domain", domain, "domain for --generate: unit | fujii | symmetric")->capture_default_str();
  }
  GridFunction load(std::uint64_t seed) const {
    if (!input.empty()) return readGridFunction(input);
    if (generate.empty()) throw ConfigError("one of --input or --generate is required");
    Params p(json{{"domain", domain}});
    Grid g = harness::detail::gridOf(p, level);
    return generateFunction(parseGenerator(generate), g, seed, 0);
  }
};

std::vector<int> parseLevels(const std::string& s) {
  std::vector<int> out;
  auto dots = s.find("..");
  try {
    if (dots != std::string::npos) {
      int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
      if (a > b) throw ConfigError("levels range must be increasing");
      for (int l = a; l <= b; ++l) out.push_back(l);
    } else {
      for (auto& part : splitOn(s, ',')) out.push_back(std::stoi(part));
    }
  } catch (const std::logic_error&) {
    throw ConfigError("bad --levels '" + s + "' (a..b or a,b,c)");
  }
  if (out.empty()) throw ConfigError("empty --levels");
  return out;
}

json paramValue(const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos == v.size()) return x;
  } catch (const std::exception&) {
  }
  return v;
}

std::optional<CubeMode> modeOf(const std::string& s) {
  if (s.empty() || s == "auto") return std::nullopt;
  return parseCubeMode(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"median oscillation decompositions, maximal operators, weights and inequality suites"};
  app.footer(footer());
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 20240611;
  unsigned threads = 0;
  app.add_option("--seed", seed, "RNG seed (OSC_SEED overrides)")->capture_default_str();
  app.add_option("--threads", threads, "worker threads, 0 = logical cores")->capture_default_str();

  // decompose
  auto* dec = app.add_subcommand("decompose", "median decomposition of a grid function");
  Source decSrc;
  decSrc.attach(dec);
  double decT = 0.5, decS = 0.125, decSlack = 2.0;
  std::string decVariant = "base", decOut, decMode;
  std::optional<int> decMaxGen;
  bool decVerify = false;
  dec->add_option("--t", decT, "median parameter")->capture_default_str();
  dec->add_option("--s", decS, "oscillation parameter")->capture_default_str();
  dec->add_option("--variant", decVariant, "base | annular | refined")->capture_default_str();
  dec->add_option("--mode", decMode, "cube family: auto | dyadic | grid-aligned");
  dec->add_option("--max-generations", decMaxGen, "cap on generations");
  dec->add_flag("--verify", decVerify, "attach the pointwise bound and decay checks");
  dec->add_option("--slack", decSlack, "coefficient slack for --verify")->capture_default_str();
  dec->add_option("--out", decOut, "output JSON (stdout when absent)");

  // verify
  auto* ver = app.add_subcommand("verify", "run an inequality suite over refinement levels");
  ver->footer(footer());
  std::string verSuite, verLevels, verCorpus, verOut, verSummary, verConfig;
  std::optional<std::size_t> verCases;
  std::optional<double> verThreshold;
  std::vector<std::string> verParams;
  std::map<std::string, std::string> verFlags;
  ver->add_option("--suite", verSuite, "suite id");
  ver->add_option("--levels", verLevels, "levels: a..b or a,b,c");
  ver->add_option("--corpus", verCorpus, "comma-separated generator tags");
  ver->add_option("--cases", verCases, "cases per level (default 50)");
  ver->add_option("--threshold", verThreshold, "growth threshold (default 1.25)");
  ver->add_option("--config", verConfig, "JSON config; flags win");
  ver->add_option("--out", verOut, "CSV output (stdout when absent)");
  ver->add_option("--summary", verSummary, "JSON summary output");
  ver->add_option("--param", verParams, "suite parameter key=value (repeatable)");
  for (const char* k : {"t", "s", "p", "q", "r", "k", "beta", "alpha", "gamma", "phi", "psi", "A", "B", "weight",
                        "pair", "form", "variant", "slack", "operator", "mode", "domain", "rw"})
    ver->add_option(std::string("--") + k, verFlags[k], std::string("suite parameter ") + k);

  // maximal
  auto* mx = app.add_subcommand("maximal", "maximal operators as grid functions");
  Source mxSrc;
  mxSrc.attach(mx);
  std::string mxOp = "hl", mxOut, mxMode, mxA = "powerlog:1:1";
  double mxR = 1.0, mxP = 1.0, mxS = 0.125, mxT = 0.5, mxAlpha = 0.0;
  int mxK = 1;
  mx->add_option("--op", mxOp, "hl | sharp | local-sharp | median | orlicz | iterated | supinf")->capture_default_str();
  mx->add_option("--r", mxR, "order of M_r")->capture_default_str();
  mx->add_option("--p", mxP, "exponent of M#_p")->capture_default_str();
  mx->add_option("--s", mxS, "local sharp parameter")->capture_default_str();
  mx->add_option("--t", mxT, "median parameter")->capture_default_str();
  mx->add_option("--A", mxA, "Young function for --op orlicz")->capture_default_str();
  mx->add_option("--alpha", mxAlpha, "fractional order for --op orlicz")->capture_default_str();
  mx->add_option("--k", mxK, "iterations for --op iterated")->capture_default_str();
  mx->add_option("--mode", mxMode, "cube family: auto | dyadic | grid-aligned");
  mx->add_option("--out", mxOut, "output JSON (stdout when absent)");

  // weights
  auto* wt = app.add_subcommand("weights", "weight class constants and Young function diagnostics");
  std::string wtCheck = "Ap", wtWeight, wtPair, wtDomain = "auto", wtMode, wtA = "power:1.5", wtB = "power:3";
  double wtP = 2.0, wtQ = 2.0, wtR = 1.0, wtBeta = 0.5, wtAlpha = 0.5;
  int wtLevel = 6;
  wt->add_option("--check", wtCheck, "Ap | F | Wp | Ainf | Cp | perez | APhi | Bp | upper-index")->capture_default_str();
  auto* wOpt = wt->add_option("--weight", wtWeight, "const:c | power:a | geometric-decay | first-cell");
  auto* pOpt = wt->add_option("--pair", wtPair, "fujii | same:<weight> | <weight>");
  wOpt->excludes(pOpt);
  pOpt->excludes(wOpt);
  wt->add_option("--p", wtP, "exponent")->capture_default_str();
  wt->add_option("--q", wtQ, "target exponent for perez")->capture_default_str();
  wt->add_option("--r", wtR, "bump order for perez")->capture_default_str();
  wt->add_option("--beta", wtBeta, "exponent on |E|/|Q|")->capture_default_str();
  wt->add_option("--alpha", wtAlpha, "admissible fraction of Q")->capture_default_str();
  wt->add_option("--A", wtA, "Young function (Bp, APhi, upper-index, perez bump A)")->capture_default_str();
  wt->add_option("--B", wtB, "Young function B for perez")->capture_default_str();
  wt->add_option("--level", wtLevel, "grid level")->capture_default_str();
  wt->add_option("--domain", wtDomain, "auto | unit | fujii | symmetric")->capture_default_str();
  wt->add_option("--mode", wtMode, "cube family: auto | dyadic | grid-aligned");

  // operators
  auto* op = app.add_subcommand("operators", "apply a kernel operator");
  Source opSrc;
  opSrc.attach(op);
  std::string opKind = "hilbert", opA = "power:2", opOut, opVariant, opMode;
  double opEta = 0.5, opS = 0.125, opR = 1.0;
  std::vector<double> opAs{1.0, -1.0}, opAlphas{0.5, 0.5};
  op->add_option("--op", opKind, "hilbert | dini | hormander | homogeneous")->capture_default_str();
  op->add_option("--eta", opEta, "Dini exponent")->capture_default_str();
  op->add_option("--A", opA, "Young function of a Hormander kernel")->capture_default_str();
  op->add_option("--a", opAs, "homogeneous dilations a_i");
  op->add_option("--alpha-exp", opAlphas, "homogeneous exponents alpha_i");
  op->add_option("--domination", opVariant, "also report sup M#(Tf)/RHS: thm41 | thm41-sharp | thm43 | thm44");
  op->add_option("--s", opS, "local sharp parameter for --domination")->capture_default_str();
  op->add_option("--r", opR, "order r for --domination")->capture_default_str();
  op->add_option("--mode", opMode, "cube family: auto | dyadic | grid-aligned");
  op->add_option("--out", opOut, "output JSON (stdout when absent)");

  // report
  auto* rep = app.add_subcommand("report", "re-render a JSON summary as CSV");
  std::string repIn, repOut;
  rep->add_option("--summary", repIn, "JSON summary from verify")->required();
  rep->add_option("--out", repOut, "CSV output (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  if (const char* env = std::getenv("OSC_SEED")) {
    try {
      seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: OSC_SEED is not an unsigned integer\n";
      return kConfig;
    }
  }

  try {
    if (dec->parsed()) {
      checkDecompositionParams(decT, decS, parseVariant(decVariant), 1);
      auto f = decSrc.load(seed);
      checkDecompositionParams(decT, decS, parseVariant(decVariant), f.grid().dim());
      auto r = decompose(f, DyadicCube{}, decT, decS, parseVariant(decVariant), modeOf(decMode), decMaxGen);
      json j = toJson(r);
      if (decVerify) {
        auto pw = verifyPointwiseBound(f, r, std::nullopt, decSlack);
        auto dc = measureDecay(r);
        j["checks"] = {{"pointwiseWorstRatio", pw.worstRatio},
                       {"pointwiseViolations", pw.violations.size()},
                       {"coefficientWorstRatio", pw.worstCoefficientRatio},
                       {"coefficientViolations", pw.coefficientViolations.size()},
                       {"decayBound", dc.bound},
                       {"decayMaxRatio", dc.maxRatio},
                       {"disjoint", dc.disjointHolds},
                       {"monotone", dc.monotoneHolds},
                       {"decay", dc.ivHolds}};
      }
      emit(j.dump(2) + "\n", decOut);
      return kOk;
    }

    if (ver->parsed()) {
      SuiteConfig cfg;
      cfg.seed = seed;
      cfg.threads = threads;
      if (!verConfig.empty()) {
        json jc;
        try {
          jc = json::parse(readText(verConfig));
        } catch (const json::parse_error& e) {
          throw ParseError("config", e.what());
        }
        try {
          if (jc.contains("suite")) cfg.suite = jc.at("suite").get<std::string>();
          if (jc.contains("levels")) cfg.levels = jc.at("levels").get<std::vector<int>>();
          if (jc.contains("corpus")) cfg.corpus = jc.at("corpus").get<std::string>();
          if (jc.contains("cases")) cfg.cases = jc.at("cases").get<std::size_t>();
          if (jc.contains("seed") && !std::getenv("OSC_SEED") && app.count("--seed") == 0)
            cfg.seed = jc.at("seed").get<std::uint64_t>();
          if (jc.contains("threshold")) cfg.threshold = jc.at("threshold").get<double>();
          if (jc.contains("params")) cfg.params = jc.at("params");
        } catch (const json::exception& e) {
          throw ConfigError(std::string("config: ") + e.what());
        }
      }
      if (!verSuite.empty()) cfg.suite = verSuite;
      if (cfg.suite.empty()) throw ConfigError("--suite is required");
      if (!verLevels.empty()) cfg.levels = parseLevels(verLevels);
      if (!verCorpus.empty()) cfg.corpus = verCorpus;
      if (verCases) cfg.cases = *verCases;
      if (verThreshold) cfg.threshold = *verThreshold;
      if (!cfg.params.is_object()) cfg.params = json::object();
      for (const auto& [k, v] : verFlags)
        if (!v.empty()) cfg.params[k] = paramValue(v);
      for (const auto& kv : verParams) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects key=value");
        cfg.params[kv.substr(0, eq)] = paramValue(kv.substr(eq + 1));
      }
      auto r = runSuite(cfg);
      emit(toCsv(r), verOut);
      if (!verSummary.empty()) writeText(verSummary, toJson(r).dump(2) + "\n");
      std::ostringstream line;
      line << r.suite << ": " << r.verdictNote() << " (verdict " << r.verdict() << ", expected "
           << r.expectation << ") supRatio";
      for (const auto& l : r.levels) line << " L" << l.level << "=" << fmt17(l.supRatio);
      (verOut.empty() ? std::cerr : std::cout) << line.str() << "\n";
      return r.pass ? kOk : kFail;
    }

    if (mx->parsed()) {
      auto f = mxSrc.load(seed);
      auto root = rootCube(f.grid());
      auto mode = modeOf(mxMode);
      GridFunction out;
      if (mxOp == "hl")
        out = hlMaximalField(f, root, mxR, mode);
      else if (mxOp == "sharp")
        out = sharpMaximalField(f, root, mxP, mode);
      else if (mxOp == "local-sharp")
        out = localSharpMaximalField(f, root, mxS, mode);
      else if (mxOp == "median")
        out = dyadicMedianMaximalField(f, root, mxT);
      else if (mxOp == "orlicz")
        out = orliczMaximalField(f, root, YoungFunction::parse(mxA), mxAlpha, mode);
      else if (mxOp == "iterated")
        out = iteratedMaximalField(f, root, mxK, mode);
      else if (mxOp == "supinf")
        out = supInfField(f, root, mode);
      else
        throw ConfigError("unknown --op '" + mxOp + "'");
      emit(toJson(out).dump() + "\n", mxOut);
      return kOk;
    }

    if (wt->parsed()) {
      auto mode = modeOf(wtMode);
      if (wtCheck == "Bp") {
        auto d = bpDiagnostics(YoungFunction::parse(wtA), wtP);
        std::cout << toString(d.inBp) << " tailExponent=" << scalar(d.tailExponent) << "\n";
        return kOk;
      }
      if (wtCheck == "upper-index") {
        std::cout << scalar(upperIndex(YoungFunction::parse(wtA)).value) << "\n";
        return kOk;
      }
      std::string dom = wtDomain == "auto" ? (wtPair == "fujii" || wtPair == "fujii-pair" ? "fujii" : "unit") : wtDomain;
      Grid g = harness::detail::gridOf(Params(json{{"domain", dom}}), wtLevel);
      auto cubeText = [&](const GridCube& q) {
        return "[" + std::to_string(q.offset[0]) + "," + std::to_string(q.offset[0] + q.side) + ")";
      };
      auto printSup = [&](const CubeSup& c) {
        std::cout << scalar(c.infinite ? kInf : c.value) << " witness=" << cubeText(c.witness) << "\n";
      };
      auto printPair = [&](const PairEstimate& e) {
        std::cout << scalar(e.infinite ? kInf : e.estimate) << " witness=" << cubeText(e.witnessCube)
                  << " |E|=" << e.witnessSet.size() << " cubes=" << e.cubes << "\n";
      };
      EstimatorBudget budget;
      budget.seed = seed;
      if (wtCheck == "Ap" || wtCheck == "Ainf" || wtCheck == "Cp" || wtCheck == "APhi") {
        if (wtWeight.empty()) throw ConfigError("--weight is required for --check " + wtCheck);
        Weight w(parseWeight(wtWeight, g));
        if (wtCheck == "Ap") printSup(apConstant(w, wtP, std::nullopt, mode));
        if (wtCheck == "APhi") printSup(aPhiCheck(w, YoungFunction::parse(wtA), std::nullopt, mode));
        if (wtCheck == "Ainf") printPair(weakAinfEstimate(w, wtBeta, std::nullopt, budget, mode));
        if (wtCheck == "Cp") printPair(cpEstimate(w, wtP, wtBeta, std::nullopt, budget, mode));
        return kOk;
      }
      if (wtPair.empty() && wtWeight.empty()) throw ConfigError("--pair or --weight is required");
      auto [w, v] = parsePair(wtPair.empty() ? wtWeight : wtPair, g);
      if (wtCheck == "F") {
        printPair(conditionFEstimate(Weight(w), Weight(v), wtBeta, wtAlpha, std::nullopt, budget, mode));
      } else if (wtCheck == "Wp") {
        printPair(wpEstimate(Weight(w), Weight(v), wtP, wtBeta, wtAlpha, 3.0, std::nullopt, budget, mode));
      } else if (wtCheck == "perez") {
        PerezParams prm{wtP, wtQ, YoungFunction::parse(wtB), YoungFunction::parse(wtA), wtR, std::nullopt};
        auto res = perezBumpCheck(Weight(w), Weight(v), prm, std::nullopt, mode);
        printSup(res.sup);
      } else {
        throw ConfigError("unknown --check '" + wtCheck + "'");
      }
      return kOk;
    }

    if (op->parsed()) {
      auto f = opSrc.load(seed);
      KernelOperator T = KernelOperator::hilbert();
      switch (parseKernelKind(opKind)) {
        case KernelKind::hilbert: break;
        case KernelKind::dini: T = KernelOperator::dini(opEta); break;
        case KernelKind::hormander: T = KernelOperator::hormander(YoungFunction::parse(opA)); break;
        case KernelKind::homogeneous: T = KernelOperator::homogeneous(opAs, opAlphas); break;
      }
      T.requireDim(f.grid().dim());
      json j = toJson(apply(T, f));
      if (!opVariant.empty()) {
        auto d = pointwiseDomination(T, f, rootCube(f.grid()), opS, parseDominationVariant(opVariant), opR,
                                     modeOf(opMode));
        j["domination"] = {{"variant", opVariant}, {"supRatio", num(d.supRatio)}, {"argmax", d.argmax},
                           {"zeroOverZero", d.zeroOverZero}};
      }
      emit(j.dump() + "\n", opOut);
      return kOk;
    }

    if (rep->parsed()) {
      json j;
      try {
        j = json::parse(readText(repIn));
      } catch (const json::parse_error& e) {
        throw ParseError("summary", e.what());
      }
      emit(toCsv(reportFromJson(j)), repOut);
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const PreconditionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kIo;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
