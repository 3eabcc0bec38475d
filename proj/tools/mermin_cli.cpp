// Command line front end.
//
// Subcommands cover the library end to end: exact extension checks,
// scenario construction/validation/simulation, deterministic-model
// analysis, two-setting effectiveness scans, relational-model law
// verification, and the secret-sharing simulator.
//
// Exit codes: 0 on success, 2 when the input is rejected (a JSON error
// object is printed), 64 for unusable command lines.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
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
#include "mermin/serialize.hpp"

namespace abgroup = mermin::abgroup;
namespace frel = mermin::frel;
namespace lhv = mermin::lhv;
namespace phase = mermin::phase;
namespace qss = mermin::qss;
namespace qudit = mermin::qudit;
namespace scenario = mermin::scenario;
namespace serialize = mermin::serialize;

using mermin::kDefaultAmplitudeBound;
using mermin::kDefaultEnumerationBound;
using serialize::Json;

namespace {

void emit(const Json& j) { std::cout << serialize::render(j); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mermin::malformed_input("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

scenario::MerminScenario load_scenario(const std::string& path) {
  return serialize::scenario_from(serialize::parse_json(read_file(path)));
}

// Semicolon-separated list of comma-separated integer tuples.
std::vector<abgroup::Element> parse_generators(const std::string& text) {
  std::vector<abgroup::Element> gens;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';'))
    gens.push_back(serialize::parse_int_list(part));
  if (gens.empty()) throw mermin::malformed_input("empty generator list");
  return gens;
}

// Semicolon-separated list of phase point literals.
std::vector<phase::PhasePoint> parse_points(long long d, const std::string& text) {
  std::vector<phase::PhasePoint> points;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';'))
    points.push_back(serialize::parse_point(d, part));
  if (points.empty()) throw mermin::malformed_input("empty phase list");
  return points;
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact analysis of multiparty phase scenarios"};
  app.require_subcommand(1);

  // ---------------------------------------------------------- ext-check
  struct {
    std::string group, subgroup;
    long long bound = kDefaultEnumerationBound;
    bool json = false;
  } ext;
  auto* ext_cmd =
      app.add_subcommand("ext-check", "Decide whether a subgroup is a direct summand");
  ext_cmd->add_option("--group", ext.group, "ambient cyclic factors, e.g. 4 or 2,4")
      ->required();
  ext_cmd->add_option("--subgroup", ext.subgroup,
                      "generators, tuples joined by ';', e.g. 2 or 1,0;0,2")
      ->required();
  ext_cmd->add_option("--bound", ext.bound, "enumeration ceiling");
  ext_cmd->add_flag("--json", ext.json, "machine-readable output");
  ext_cmd->callback([&] {
    abgroup::FinAbGroup g{serialize::parse_int_list(ext.group)};
    auto gens = parse_generators(ext.subgroup);
    auto v = abgroup::is_trivial_extension(g, abgroup::Subgroup{g, gens}, ext.bound);
    if (ext.json) {
      emit(serialize::extension_json(g, gens, v));
      return;
    }
    std::cout << "trivial: " << yesno(v.trivial) << "\n";
    if (!v.trivial)
      std::cout << "witness: " << serialize::witness_equation(v) << "\n";
  });

  // ------------------------------------------------------ scenario-build
  struct {
    long long d = 2;
    std::string coeffs, phases, output;
    bool json = false;
  } build;
  auto* build_cmd =
      app.add_subcommand("scenario-build", "Construct rows from a witness equation");
  build_cmd->add_option("--d", build.d, "level count")->required();
  build_cmd->add_option("--coeffs", build.coeffs, "multiplicities, e.g. 2 or 2,3")
      ->required();
  build_cmd
      ->add_option("--phases", build.phases,
                   "phase per coefficient, points joined by ';', e.g. 1/4 or 1/9,8/9")
      ->required();
  build_cmd->add_option("--output", build.output, "write the scenario document here");
  build_cmd->add_flag("--json", build.json, "machine-readable output");
  build_cmd->callback([&] {
    auto built = scenario::build_nonlocal_scenario(
        build.d, serialize::parse_int_list(build.coeffs),
        parse_points(build.d, build.phases));
    if (!build.output.empty()) {
      std::ofstream out(build.output);
      if (!out)
        throw mermin::malformed_input("cannot write file '" + build.output + "'");
      out << serialize::render(serialize::scenario_json(built.scenario));
    }
    if (build.json) {
      emit(serialize::built_json(built));
      return;
    }
    std::cout << "parties: " << built.scenario.parties << "\n"
              << "rows: " << built.scenario.rows.size() << "\n"
              << "controls: " << built.controls << "\n"
              << "variations: " << built.variations << "\n"
              << "target: " << built.target << "\n";
  });

  // --------------------------------------------------- scenario-validate
  struct {
    std::string input;
    bool json = false;
  } sval;
  auto* sval_cmd =
      app.add_subcommand("scenario-validate", "Check that every row total is classical");
  sval_cmd->add_option("--input", sval.input, "scenario document")->required();
  sval_cmd->add_flag("--json", sval.json, "machine-readable output");
  sval_cmd->callback([&] {
    auto rep = scenario::validate_scenario(load_scenario(sval.input));
    if (sval.json) {
      emit(serialize::scenario_report_json(rep));
      return;
    }
    std::cout << "ok: " << yesno(rep.ok) << "\n";
    for (std::size_t r = 0; r < rep.rows.size(); ++r) {
      std::cout << "row " << r << ": ";
      if (rep.rows[r].classical)
        std::cout << "classical value " << rep.rows[r].classical_value << "\n";
      else
        std::cout << "not classical\n";
    }
  });

  // ------------------------------------------------------------ simulate
  struct {
    std::string input;
    std::size_t row = 0;
    double tol = qudit::kDefaultTol;
    long long bound = kDefaultAmplitudeBound;
    bool json = false, csv = false;
  } sim;
  auto* sim_cmd =
      app.add_subcommand("simulate", "Outcome distribution of one scenario row");
  sim_cmd->add_option("--input", sim.input, "scenario document")->required();
  sim_cmd->add_option("--row", sim.row, "row index (default 0)");
  sim_cmd->add_option("--tol", sim.tol, "support tolerance");
  sim_cmd->add_option("--bound", sim.bound, "state size ceiling");
  sim_cmd->add_flag("--json", sim.json, "machine-readable output");
  sim_cmd->add_flag("--csv", sim.csv, "CSV output");
  sim_cmd->callback([&] {
    auto s = load_scenario(sim.input);
    auto table = lhv::quantum_table(s, sim.tol, sim.bound);
    if (sim.row >= table.probs.size())
      throw mermin::malformed_input("row index out of range");
    const auto& probs = table.probs[sim.row];
    if (sim.csv) {
      std::cout << serialize::distribution_csv(s.d, s.parties, probs);
      return;
    }
    if (sim.json) {
      emit(Json{{"d", s.d},
                {"parties", s.parties},
                {"row", sim.row},
                {"probabilities", Json(probs)}});
      return;
    }
    std::cout << serialize::distribution_csv(s.d, s.parties, probs);
  });

  // ----------------------------------------------------------- lhv-check
  struct {
    std::string input, mode = "parity";
    double tol = qudit::kDefaultTol;
    long long bound = kDefaultEnumerationBound;
    bool json = false;
  } lhvc;
  auto* lhv_cmd = app.add_subcommand(
      "lhv-check", "Existence of a deterministic local model for a scenario");
  lhv_cmd->add_option("--input", lhvc.input, "scenario document")->required();
  lhv_cmd->add_option("--mode", lhvc.mode, "parity (default) or possibilistic");
  lhv_cmd->add_option("--tol", lhvc.tol, "support tolerance");
  lhv_cmd->add_option("--bound", lhvc.bound, "enumeration ceiling");
  lhv_cmd->add_flag("--json", lhvc.json, "machine-readable output");
  lhv_cmd->callback([&] {
    auto table = lhv::quantum_table(load_scenario(lhvc.input), lhvc.tol);
    if (lhvc.mode == "parity") {
      auto a = lhv::lhv_exists_parity(table, lhvc.bound);
      if (lhvc.json) {
        emit(serialize::parity_json(a));
        return;
      }
      std::cout << "exists: " << yesno(a.exists) << "\n";
      if (a.certificate)
        std::cout << "certificate: " << a.certificate->rendered << "\n";
    } else if (lhvc.mode == "possibilistic") {
      auto a = lhv::lhv_exists_possibilistic(table, lhvc.bound);
      if (lhvc.json) {
        emit(serialize::possibilistic_json(a));
        return;
      }
      std::cout << "exists: " << yesno(a.exists) << "\n"
                << "consistent assignments: " << a.consistent_assignments << "\n";
    } else {
      throw mermin::malformed_input("unknown mode: " + lhvc.mode);
    }
  });

  // ------------------------------------------------------------- newcond
  struct {
    long long d = 2, v = 1, beta = 1;
    int parties = 0;  // 0: smallest that fits beta
    std::string b;
    double tol = qudit::kDefaultTol;
    bool json = false;
  } nc;
  auto* nc_cmd = app.add_subcommand(
      "newcond", "Effectiveness of a two-setting variation family");
  nc_cmd->add_option("--D", nc.d, "level count")->required();
  nc_cmd->add_option("--V", nc.v, "variation count")->required();
  nc_cmd->add_option("--beta", nc.beta, "B-measurements per variation")->required();
  nc_cmd->add_option("--b", nc.b, "second-observable phase, exact turns")->required();
  nc_cmd->add_option("--parties", nc.parties, "party count (default: beta)");
  nc_cmd->add_option("--tol", nc.tol, "residual tolerance");
  nc_cmd->add_flag("--json", nc.json, "machine-readable output");
  nc_cmd->callback([&] {
    scenario::TwoMeasScenario ts;
    ts.d = nc.d;
    ts.variations = nc.v;
    ts.beta = nc.beta;
    ts.parties = nc.parties > 0 ? nc.parties
                                : static_cast<int>(std::max<long long>(nc.beta, 1));
    ts.b = serialize::parse_point(nc.d, nc.b);
    auto r = scenario::newcond_check(ts, nc.tol);
    if (nc.json) {
      emit(serialize::newcond_json(ts, r));
      return;
    }
    std::cout << "effective: " << yesno(r.effective) << "\n"
              << "residual: " << std::abs(r.residual) << "\n";
  });

  // --------------------------------------------------------- pairs-count
  struct {
    int parties = 1;
    long long d = 2, q = 1;
    std::string policy = "canonical";
    double tol = qudit::kDefaultTol;
    long long bound = kDefaultEnumerationBound;
    bool json = false, csv = false;
  } pc;
  auto* pc_cmd = app.add_subcommand(
      "pairs-count", "Count effective second-observable phases on a 1/q grid");
  pc_cmd->add_option("--parties", pc.parties, "party count")->required();
  pc_cmd->add_option("--d", pc.d, "level count")->required();
  pc_cmd->add_option("--q", pc.q, "grid denominator")->required();
  pc_cmd->add_option("--policy", pc.policy, "variation policy (canonical)");
  pc_cmd->add_option("--tol", pc.tol, "residual tolerance");
  pc_cmd->add_option("--bound", pc.bound, "enumeration ceiling");
  pc_cmd->add_flag("--json", pc.json, "machine-readable output");
  pc_cmd->add_flag("--csv", pc.csv, "CSV output");
  pc_cmd->callback([&] {
    auto policy = scenario::parse_policy(pc.policy);
    auto r = scenario::count_effective_pairs(pc.parties, pc.d, pc.q, policy, pc.tol,
                                             pc.bound);
    if (pc.csv) {
      std::cout << serialize::counts_csv({{pc.parties, pc.d, pc.q, pc.policy, r.count}});
      return;
    }
    if (pc.json) {
      emit(serialize::pair_count_json(pc.parties, pc.d, pc.q, pc.policy, r));
      return;
    }
    std::cout << "count: " << r.count << "\n";
  });

  // --------------------------------------------------------- frel-verify
  struct {
    std::string g, h;
    long long bound = mermin::kDefaultRelationCarrierBound;
    bool json = false;
  } fv;
  auto* fv_cmd = app.add_subcommand(
      "frel-verify", "Verify the relational model's laws and locality");
  fv_cmd->set_help_flag("--help", "print help");  // frees -h for the option below
  fv_cmd->add_option("--g", fv.g, "first group's cyclic factors, e.g. 2,2")->required();
  fv_cmd->add_option("--h", fv.h, "second group's cyclic factors")->required();
  fv_cmd->add_option("--bound", fv.bound, "carrier size ceiling");
  fv_cmd->add_flag("--json", fv.json, "machine-readable output");
  fv_cmd->callback([&] {
    frel::RelCarrier carrier{abgroup::FinAbGroup{serialize::parse_int_list(fv.g)},
                             abgroup::FinAbGroup{serialize::parse_int_list(fv.h)}};
    auto laws = frel::verify_rel_laws(frel::slicewise_first(carrier, fv.bound),
                                      frel::slicewise_second(carrier, fv.bound));
    auto local = frel::frel_locality_check(carrier, fv.bound);
    if (fv.json) {
      emit(serialize::rel_report_json(laws, local));
      return;
    }
    std::cout << "laws: " << (laws.all_ok() ? "pass" : "fail") << "\n"
              << "local: " << yesno(local.local) << "\n"
              << "phase group order: " << local.phase_group_order << "\n";
  });

  // ------------------------------------------------------------- qss-run
  struct {
    long long d = 2;
    int players = 2;
    std::vector<std::string> alphabet;
    long long rounds = 10000;
    std::uint64_t seed = 0;
    std::string mode = "honest";
    int withholder = 1;
    double tol = qudit::kDefaultTol;
    long long bound = kDefaultEnumerationBound;
    bool json = false, csv = false;
  } qr;
  auto* qr_cmd =
      app.add_subcommand("qss-run", "Simulate the secret-sharing protocol");
  qr_cmd->add_option("--d", qr.d, "level count")->required();
  qr_cmd->add_option("--players", qr.players, "players besides the dealer")->required();
  qr_cmd
      ->add_option("--alphabet", qr.alphabet,
                   "measurement phase, exact turns; repeat per letter")
      ->required()
      ->expected(-1);
  qr_cmd->add_option("--rounds", qr.rounds, "rounds to simulate");
  qr_cmd->add_option("--seed", qr.seed, "random seed");
  qr_cmd->add_option("--mode", qr.mode,
                     "honest (default), withhold, intercept, or sweep");
  qr_cmd->add_option("--withholder", qr.withholder, "player index for withhold mode");
  qr_cmd->add_option("--tol", qr.tol, "support tolerance");
  qr_cmd->add_option("--bound", qr.bound, "enumeration ceiling");
  qr_cmd->add_flag("--json", qr.json, "machine-readable output");
  qr_cmd->add_flag("--csv", qr.csv, "CSV output");
  qr_cmd->callback([&] {
    qss::Protocol p;
    p.d = qr.d;
    p.players = qr.players;
    p.tol = qr.tol;
    for (const auto& lit : qr.alphabet)
      p.alphabet.push_back(serialize::parse_point(qr.d, lit));
    if (qr.mode == "honest" || qr.mode == "withhold") {
      std::optional<int> withholder;
      if (qr.mode == "withhold") withholder = qr.withholder;
      auto stats = qss::run_protocol(p, qr.rounds, qr.seed, withholder, std::nullopt,
                                     qr.bound);
      if (qr.csv) {
        std::cout << serialize::qss_csv(stats.rounds, stats.accuracy,
                                        1.0 - stats.accuracy, stats.tv_from_uniform);
        return;
      }
      if (qr.json) {
        emit(serialize::round_stats_json(stats));
        return;
      }
      std::cout << "accuracy: " << stats.accuracy << "\n"
                << "offset tv from uniform: " << stats.tv_from_uniform << "\n";
    } else if (qr.mode == "intercept") {
      auto stats = qss::run_intercepted(p, qr.rounds, qr.seed, qr.bound);
      if (qr.csv) {
        std::cout << serialize::qss_csv(stats.round.rounds, stats.round.accuracy,
                                        stats.failure_rate,
                                        stats.round.tv_from_uniform);
        return;
      }
      if (qr.json) {
        emit(serialize::intercept_json(stats));
        return;
      }
      std::cout << "failure rate: " << stats.failure_rate << "\n"
                << "predicted failure: " << stats.predicted_failure << "\n"
                << "attacker guess rate: " << stats.attacker_guess_rate << "\n";
    } else if (qr.mode == "sweep") {
      auto sweep = qss::sweep_deterministic_tables(p, qr.bound);
      if (qr.json) {
        Json out{{"tables", sweep.tables},
                 {"detected", sweep.detected},
                 {"all_detected", sweep.all_detected},
                 {"survivor_found", !sweep.surviving.empty()}};
        if (!sweep.surviving.empty()) out["survivor"] = Json(sweep.surviving);
        emit(out);
        return;
      }
      std::cout << "tables: " << sweep.tables << "\n"
                << "detected: " << sweep.detected << "\n"
                << "all detected: " << yesno(sweep.all_detected) << "\n";
    } else {
      throw mermin::malformed_input("unknown mode: " + qr.mode);
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << e.what() << "\n" << app.help();
    return 64;
  } catch (const mermin::malformed_input& e) {
    emit(serialize::error_json("malformed_input", e.what()));
    return 2;
  } catch (const mermin::domain_error& e) {
    emit(serialize::error_json("domain_error", e.what()));
    return 2;
  } catch (const mermin::resource_error& e) {
    emit(serialize::error_json("resource_error", e.what()));
    return 2;
  }
  return 0;
}
