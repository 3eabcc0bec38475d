// JSON and CSV views of the library's inputs and reports.
//
// Scenario files round-trip byte-identically: keys keep insertion order,
// rationals are emitted as exact [numerator, denominator] pairs, and the
// renderer always produces two-space indentation with a trailing newline.
// Angle literals accept exact turns ("1/4", "0", and comma-separated
// tuples like "1/9,8/9" for higher levels).

#pragma once

#include <json.hpp>

#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "mermin/abgroup.hpp"
#include "mermin/errors.hpp"
#include "mermin/frel.hpp"
#include "mermin/lhv.hpp"
#include "mermin/phase.hpp"
#include "mermin/qss.hpp"
#include "mermin/qudit.hpp"
#include "mermin/scenario.hpp"

namespace mermin::serialize {

using Json = nlohmann::ordered_json;
using phase::PhasePoint;
using phase::Rat;

// ---------------------------------------------------------------- parsing

inline Rat parse_rat(const std::string& text) {
  std::size_t slash = text.find('/');
  long long num = 0, den = 1;
  try {
    if (slash == std::string::npos) {
      num = std::stoll(text);
    } else {
      num = std::stoll(text.substr(0, slash));
      den = std::stoll(text.substr(slash + 1));
    }
  } catch (const std::logic_error&) {
    throw malformed_input("cannot parse rational '" + text + "'");
  }
  if (den == 0) throw malformed_input("zero denominator in '" + text + "'");
  return Rat(num, den);
}

// A phase point literal: D−1 comma-separated turns.
inline PhasePoint parse_point(long long d, const std::string& text) {
  std::vector<Rat> turns;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) turns.push_back(parse_rat(part));
  return phase::make_point(d, std::move(turns));
}

inline std::vector<long long> parse_int_list(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string part;
  try {
    while (std::getline(ss, part, ',')) out.push_back(std::stoll(part));
  } catch (const std::logic_error&) {
    throw malformed_input("cannot parse integer list '" + text + "'");
  }
  if (out.empty()) throw malformed_input("empty integer list");
  return out;
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw malformed_input(std::string("invalid JSON: ") + e.what());
  }
}

// ------------------------------------------------------------ primitives

inline Json rat_json(const Rat& r) { return Json::array({r.numerator(), r.denominator()}); }

inline Rat rat_from(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
      !j[1].is_number_integer())
    throw malformed_input("rational must be [numerator, denominator]");
  long long den = j[1].get<long long>();
  if (den == 0) throw malformed_input("zero denominator");
  return Rat(j[0].get<long long>(), den);
}

inline Json turns_json(const std::vector<Rat>& turns) {
  Json a = Json::array();
  for (const Rat& t : turns) a.push_back(rat_json(t));
  return a;
}

inline std::vector<Rat> turns_from(const Json& j) {
  if (!j.is_array()) throw malformed_input("turn list must be an array");
  std::vector<Rat> turns;
  for (const auto& t : j) turns.push_back(rat_from(t));
  return turns;
}

inline Json point_json(const PhasePoint& p) {
  return Json{{"d", p.d}, {"turns", turns_json(p.turns)}};
}

inline PhasePoint point_from(const Json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("turns"))
    throw malformed_input("phase point needs d and turns");
  return phase::make_point(j["d"].get<long long>(), turns_from(j["turns"]));
}

inline Json element_json(const abgroup::Element& e) {
  Json a = Json::array();
  for (long long v : e) a.push_back(v);
  return a;
}

// ------------------------------------------------------------- scenarios

inline Json scenario_json(const scenario::MerminScenario& s) {
  Json rows = Json::array();
  for (const auto& row : s.rows) {
    Json r = Json::array();
    for (const auto& p : row) r.push_back(turns_json(p.turns));
    rows.push_back(std::move(r));
  }
  return Json{{"d", s.d}, {"parties", s.parties}, {"rows", std::move(rows)}};
}

inline scenario::MerminScenario scenario_from(const Json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("parties") ||
      !j.contains("rows"))
    throw malformed_input("scenario needs d, parties, and rows");
  scenario::MerminScenario s{j["d"].get<long long>(), j["parties"].get<int>(), {}};
  if (!j["rows"].is_array()) throw malformed_input("rows must be an array");
  for (const auto& row : j["rows"]) {
    if (!row.is_array()) throw malformed_input("each row must be an array");
    std::vector<PhasePoint> r;
    for (const auto& cell : row)
      r.push_back(phase::make_point(s.d, turns_from(cell)));
    s.rows.push_back(std::move(r));
  }
  scenario::validate(s);
  return s;
}

inline Json built_json(const scenario::BuiltScenario& b) {
  return Json{{"controls", b.controls},
              {"variations", b.variations},
              {"target", b.target},
              {"scenario", scenario_json(b.scenario)}};
}

inline Json scenario_report_json(const scenario::ScenarioReport& rep) {
  Json rows = Json::array();
  for (const auto& r : rep.rows)
    rows.push_back(Json{{"classical", r.classical},
                        {"classical_value", r.classical_value},
                        {"total", turns_json(r.total.turns)}});
  Json off = Json::array();
  for (std::size_t i : rep.offending) off.push_back(i);
  return Json{{"ok", rep.ok}, {"rows", std::move(rows)}, {"offending", std::move(off)}};
}

// ------------------------------------------------------------- verdicts

// "2x = 2" or "3x = (0, 1)" for higher-arity groups.
inline std::string witness_equation(const abgroup::ExtensionVerdict& v) {
  std::ostringstream os;
  os << v.divisor << "x = ";
  if (v.target.size() == 1) {
    os << v.target[0];
  } else {
    os << "(";
    for (std::size_t c = 0; c < v.target.size(); ++c)
      os << (c ? ", " : "") << v.target[c];
    os << ")";
  }
  return os.str();
}

inline Json extension_json(const abgroup::FinAbGroup& g,
                           const std::vector<abgroup::Element>& generators,
                           const abgroup::ExtensionVerdict& v) {
  Json gens = Json::array();
  for (const auto& e : generators) gens.push_back(element_json(e));
  Json out{{"group", Json(g.factors)},
           {"subgroup_generators", std::move(gens)},
           {"trivial", v.trivial}};
  if (!v.trivial) {
    out["divisor"] = v.divisor;
    out["witness"] = witness_equation(v);
    out["target"] = element_json(v.target);
    out["solution"] = element_json(v.solution);
  }
  out["checked_divisors"] = Json(v.checked_divisors);
  return out;
}

inline Json newcond_json(const scenario::TwoMeasScenario& ts,
                         const scenario::NewCondResult& r) {
  return Json{{"d", ts.d},
              {"parties", ts.parties},
              {"variations", ts.variations},
              {"beta", ts.beta},
              {"b", turns_json(ts.b.turns)},
              {"effective", r.effective},
              {"structurally_ineffective", r.structurally_ineffective},
              {"residual", Json::array({r.residual.real(), r.residual.imag()})},
              {"c_turns", turns_json(r.c_turns)},
              {"tol", r.tol}};
}

inline Json pair_count_json(int parties, long long d, long long q,
                            const std::string& policy,
                            const scenario::PairCountResult& r) {
  Json reps = Json::array();
  for (const auto& p : r.representatives) reps.push_back(turns_json(p.turns));
  return Json{{"parties", parties}, {"d", d},
              {"q", q},             {"policy", policy},
              {"count", r.count},   {"representatives", std::move(reps)}};
}

// ----------------------------------------------------------- lhv reports

inline Json parity_json(const lhv::ParityAnalysis& a) {
  Json out{{"mode", "parity"}, {"exists", a.exists}};
  if (a.exists) {
    Json rows = Json::array();
    for (const auto& per_party : a.assignment) rows.push_back(Json(per_party));
    out["assignment"] = std::move(rows);
  }
  if (a.certificate) {
    out["certificate"] = Json{{"multipliers", Json(a.certificate->multipliers)},
                              {"modulus", a.certificate->modulus},
                              {"combined_rhs", a.certificate->combined_rhs},
                              {"rendered", a.certificate->rendered}};
  }
  return out;
}

inline Json possibilistic_json(const lhv::PossibilisticAnalysis& a) {
  Json out{{"mode", "possibilistic"},
           {"exists", a.exists},
           {"consistent_assignments", a.consistent_assignments}};
  if (a.uncovered)
    out["uncovered"] = Json{{"row", a.uncovered->first}, {"outcome", a.uncovered->second}};
  return out;
}

// ---------------------------------------------------------- law reports

inline Json law_report_json(const qudit::LawReport& r) {
  return Json{{"frobenius_ok", r.frobenius_ok},
              {"quasi_special_ok", r.quasi_special_ok},
              {"bialgebra_ok", r.bialgebra_ok},
              {"coherence_ok", r.coherence_ok},
              {"quasi_special_scalar", r.quasi_special_scalar},
              {"point_copyables", r.point_copyables.size()},
              {"group_copyables", r.group_copyables.size()},
              {"all_ok", r.all_ok()}};
}

inline Json rel_report_json(const frel::RelLawReport& r,
                            const frel::RelLocalityVerdict& v) {
  return Json{{"frobenius_ok", r.frobenius_ok},
              {"special_ok", r.special_ok},
              {"bialgebra_ok", r.bialgebra_ok},
              {"coherence_ok", r.coherence_ok},
              {"all_ok", r.all_ok()},
              {"phase_group_order", v.phase_group_order},
              {"classical_subgroup", v.classical_subgroup},
              {"local", v.local}};
}

// ------------------------------------------------------------ qss reports

inline Json round_stats_json(const qss::RoundStats& s) {
  return Json{{"rounds", s.rounds},
              {"accuracy", s.accuracy},
              {"offset_histogram", Json(s.offset_histogram)},
              {"tv_from_uniform", s.tv_from_uniform},
              {"mutual_information", s.mutual_information}};
}

inline Json intercept_json(const qss::InterceptStats& s) {
  Json out = round_stats_json(s.round);
  out["failure_rate"] = s.failure_rate;
  out["predicted_failure"] = s.predicted_failure;
  out["formula_applicable"] = s.formula_applicable;
  out["attacker_guess_rate"] = s.attacker_guess_rate;
  out["predicted_guess_rate"] = s.predicted_guess_rate;
  out["naive_guess_rate"] = s.naive_guess_rate;
  out["modal_context"] = Json(s.modal_context);
  return out;
}

inline Json detection_json(const qss::DetectionReport& r) {
  return Json{{"rounds", r.rounds},
              {"support_violation", r.support_violation},
              {"first_violation_round", r.first_violation_round},
              {"pooled_tv", r.pooled_tv},
              {"detected", r.detected}};
}

// --------------------------------------------------------------- output

inline std::string render(const Json& j) { return j.dump(2) + "\n"; }

inline Json error_json(const std::string& kind, const std::string& message) {
  return Json{{"error", kind}, {"message", message}};
}

namespace detail {

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace detail

// One row per outcome tuple: digits space-separated, then the probability.
inline std::string distribution_csv(long long d, int parties,
                                    const std::vector<double>& probs) {
  std::ostringstream os;
  os << "outcome_tuple,probability\n";
  for (std::size_t idx = 0; idx < probs.size(); ++idx) {
    std::vector<long long> digits(parties);
    std::size_t rest = idx;
    for (int i = parties - 1; i >= 0; --i) {
      digits[i] = static_cast<long long>(rest % static_cast<std::size_t>(d));
      rest /= static_cast<std::size_t>(d);
    }
    for (int i = 0; i < parties; ++i) os << (i ? " " : "") << digits[i];
    os << "," << detail::format_double(probs[idx]) << "\n";
  }
  return os.str();
}

struct CountRow {
  int parties = 0;
  long long d = 0, q = 0;
  std::string policy;
  long long count = 0;
};

inline std::string counts_csv(const std::vector<CountRow>& rows) {
  std::ostringstream os;
  os << "N,D,q,policy,count\n";
  for (const auto& r : rows)
    os << r.parties << "," << r.d << "," << r.q << "," << r.policy << ","
       << r.count << "\n";
  return os.str();
}

inline std::string qss_csv(long long rounds, double accuracy, double failure_rate,
                           double tv_distance) {
  std::ostringstream os;
  os << "rounds,accuracy,failure_rate,tv_distance\n";
  os << rounds << "," << detail::format_double(accuracy) << ","
     << detail::format_double(failure_rate) << ","
     << detail::format_double(tv_distance) << "\n";
  return os.str();
}

}  // namespace mermin::serialize
