#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../errors.hpp"
#include "../trend.hpp"

namespace medosc::harness {

struct CaseResult {
  int level = 0;
  std::size_t caseId = 0;
  std::string generator;
  std::string hash;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool zeroOverZero = false;
  std::vector<std::string> violations;  // exact suites only
};

struct LevelSummary {
  int level = 0;
  std::size_t cases = 0;
  double supRatio = 0.0;
  std::size_t argmaxCase = 0;
  std::size_t zeroOverZero = 0;
  std::size_t violations = 0;
};

struct VerificationReport {
  std::string suite;
  nlohmann::json params;     // resolved parameters
  nlohmann::json constants;  // estimated constants and gate diagnostics, with provenance
  std::string corpus;
  std::uint64_t seed = 0;
  double threshold = 1.25;
  bool exact = false;
  std::string expectation = "pass";
  std::vector<LevelSummary> levels;
  std::vector<CaseResult> cases;
  Trend trend;
  bool pass = false;

  std::string verdict() const { return pass ? "PASS" : "FAIL"; }
  std::string verdictNote() const {
    if (pass == (expectation == "pass")) return pass ? "PASS" : "FAIL-as-expected";
    return pass ? "PASS-unexpected" : "FAIL";
  }
};

// 0/0 -> 0 (flagged), x/0 -> inf
inline double safeRatio(double lhs, double rhs, bool* zeroOverZero = nullptr) {
  if (zeroOverZero) *zeroOverZero = false;
  if (lhs == 0.0) {
    if (rhs == 0.0 && zeroOverZero) *zeroOverZero = true;
    return 0.0;
  }
  if (rhs == 0.0) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

inline std::string fmt17(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csvHeader() { return "suite,level,case_id,generator,lhs,rhs,ratio\n"; }

inline std::string toCsv(const VerificationReport& r) {
  std::ostringstream os;
  os << csvHeader();
  for (const auto& c : r.cases)
    os << r.suite << ',' << c.level << ',' << c.caseId << ',' << c.generator << ',' << fmt17(c.lhs) << ','
       << fmt17(c.rhs) << ',' << fmt17(c.ratio) << '\n';
  return os.str();
}

// doubles go through fmt17 strings when non-finite, so the JSON stays valid
inline nlohmann::json num(double x) {
  if (std::isfinite(x)) return x;
  return fmt17(x);
}

inline double unnum(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

inline nlohmann::json toJson(const VerificationReport& r) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"level", l.level},
                      {"cases", l.cases},
                      {"supRatio", num(l.supRatio)},
                      {"argmaxCase", l.argmaxCase},
                      {"zeroOverZero", l.zeroOverZero},
                      {"violations", l.violations}});
  nlohmann::json growth = nlohmann::json::array();
  bool increasing = !r.trend.growth.empty();
  for (double g : r.trend.growth) {
    growth.push_back(num(g));
    increasing = increasing && g > 1.0;
  }
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : r.cases) {
    nlohmann::json jc{{"level", c.level},   {"case_id", c.caseId}, {"generator", c.generator},
                      {"hash", c.hash},     {"lhs", num(c.lhs)},   {"rhs", num(c.rhs)},
                      {"ratio", num(c.ratio)}, {"zeroOverZero", c.zeroOverZero}};
    if (!c.violations.empty()) jc["violations"] = c.violations;
    cases.push_back(std::move(jc));
  }
  return {{"suite", r.suite},
          {"header",
           {{"threshold", r.threshold},
            {"corpus", r.corpus},
            {"seed", r.seed},
            {"exact", r.exact},
            {"passRule", r.exact ? "no exact-check violations"
                                 : "supRatio finite at every level and level-to-level growth below threshold"}}},
          {"params", r.params},
          {"constants", r.constants},
          {"levels", levels},
          {"trend",
           {{"growth", growth},
            {"class", toString(r.trend.cls)},
            {"maxGrowth", num(r.trend.maxGrowth)},
            {"strictlyIncreasing", increasing}}},
          {"expectation", r.expectation},
          {"verdict", r.verdict()},
          {"note", r.verdictNote()},
          {"cases", cases}};
}

// inverse of toJson for the fields the CSV needs
inline VerificationReport reportFromJson(const nlohmann::json& j) {
  VerificationReport r;
  try {
    r.suite = j.at("suite").get<std::string>();
    for (const auto& jc : j.at("cases")) {
      CaseResult c;
      c.level = jc.at("level").get<int>();
      c.caseId = jc.at("case_id").get<std::size_t>();
      c.generator = jc.at("generator").get<std::string>();
      c.lhs = unnum(jc.at("lhs"));
      c.rhs = unnum(jc.at("rhs"));
      c.ratio = unnum(jc.at("ratio"));
      r.cases.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("summary", e.what());
  }
  return r;
}

inline void writeText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << text;
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

inline std::string readText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace medosc::harness
