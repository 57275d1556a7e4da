// Command-line front end. Exit codes: 0 success, 1 verification failure, 2 input error.

#include "gcq/chain.hpp"
#include "gcq/compiler.hpp"
#include "gcq/cu_redundancy.hpp"
#include "gcq/ft_verify.hpp"
#include "gcq/monte_carlo.hpp"
#include "gcq/report.hpp"
#include "gcq/threshold.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace gcq;
using nlohmann::json;
using report::fmt;

namespace {

constexpr int kOk = 0, kVerifyFailed = 1, kInputError = 2;

/// Input problems detected after parsing (missing files, malformed content).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes to `path`, or to stdout when it is empty.
void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

CountOptions count_options(int layers, int moves) {
  CountOptions o;
  o.resource_layers = layers;
  o.movement_steps = moves;
  return o;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string pulses, init, out;
  std::uint64_t seed = 1;
  bool allow_large = false;
};

int run_simulate(const SimulateArgs& a) {
  PulseProgram prog = text::parse_program(read_file(a.pulses));
  const int n = static_cast<int>(a.init.size());
  DenseChain s(n, a.init, a.allow_large);
  const DenseChain start = s;
  Rng rng(a.seed);
  auto meas = run_program(s, prog, rng);
  json amps = json::array();
  for (std::size_t i = 0; i < s.amp.size(); ++i) {
    if (std::norm(s.amp[i]) < 1e-24) continue;
    std::string bits(n, '0');
    for (int p = 1; p <= n; ++p)
      if ((i >> (p - 1)) & 1) bits[p - 1] = '1';
    amps.push_back({{"bits", bits}, {"re", fmt(s.amp[i].real())}, {"im", fmt(s.amp[i].imag())}});
  }
  json j{{"n_spins", n},
         {"pulses", prog.size()},
         {"seed", a.seed},
         {"norm", fmt(s.norm())},
         {"fidelity_with_initial", fmt(fidelity(start, s))},
         {"measurements", meas},
         {"amplitudes", amps}};
  emit(dump(j), a.out);
  return kOk;
}

// ---------------------------------------------------------------- compile

struct CompileArgs {
  std::string op, out;
  std::string layout = "standard";
  int n_comp = 0, n_blocks = 2, block_l = 1;
  bool marker = false;
};

DeviceLayout layout_for(const CompileArgs& a, const LogicalOp& op) {
  if (a.layout == "blocked") return blocked_layout(a.n_blocks, a.block_l);
  if (a.layout != "standard") throw InputError("layout must be standard or blocked");
  int n = a.n_comp;
  if (n == 0) {
    using K = LogicalOp::Kind;
    n = 2;
    if (op.kind == K::Gate1Q || op.kind == K::MeasureComp) n = std::max(n, op.a + 1);
    if (op.kind == K::Gate2Q) n = std::max({n, op.a + 1, op.b + 1});
    if (op.kind == K::CompareGEq) n = 2 * op.a + 1;
  }
  return standard_layout(n, a.marker || op.kind == LogicalOp::Kind::BufferReset);
}

/// The logical circuit behind an op, where it has one.
json logical_circuit(const LogicalOp& op) {
  using K = LogicalOp::Kind;
  Circuit c;
  if (op.kind == K::CompareGEq) return to_json(compile_compare_geq(op.a, op.b));
  if (op.kind == K::Gate1Q) {
    for (auto& [k, name] : gate_names())
      if (name == op.u_name && gate_arity(k) == 1) {
        c = Circuit(op.a + 1);
        c.add(k, {op.a});
        return to_json(c);
      }
  }
  if (op.kind == K::Gate2Q && (op.u_name == "X" || op.u_name == "Z")) {
    c = Circuit(std::max(op.a, op.b) + 1);
    c.add(op.u_name == "X" ? GateKind::CNOT : GateKind::CZ, {op.a, op.b});
    return to_json(c);
  }
  return nullptr;
}

int run_compile(const CompileArgs& a) {
  json spec = json::parse(read_file(a.op));
  LogicalOp op = logical_op_from_json(spec);
  DeviceLayout d = layout_for(a, op);
  CompileResult r = compile(d, op);
  const std::string program = text::to_string(r.program);
  json j{{"op", spec},
         {"layout", {{"n_spins", d.n_spins}, {"n_comp", d.n_comp}, {"initial_bits", d.initial_bits()}}},
         {"circuit", logical_circuit(op)},
         {"pulse_count", r.program.size()}};
  if (a.out.empty()) {
    j["program"] = program;
  } else {
    emit(program, a.out + ".pp");
    emit(dump(j), a.out + ".json");
  }
  std::cout << dump(j);
  return kOk;
}

// ---------------------------------------------------------------- count

struct CountArgs {
  std::string gadget = "all", regime, out;
  bool all_regimes = false, tally = false;
  int layers = 15, moves = 3;
};

/// Table cells for a gadget: table rows use their regime-specific realisations.
report::Row row_for(const std::string& name, const CountOptions& o) {
  for (auto& spec : report::row_specs())
    if (spec.name == name) return report::count_row(spec, o);
  Gadget g = gadgets::build_by_name(name);
  report::RowSpec spec{name, [g](Regime r) -> std::optional<Gadget> {
                         if (g.circ.count(GateKind::Measure) && r != Regime::Unrestricted) return std::nullopt;
                         return g;
                       }};
  return report::count_row(spec, o);
}

int run_count(const CountArgs& a) {
  const CountOptions o = count_options(a.layers, a.moves);
  std::vector<Regime> regimes = all_regimes();
  if (!a.regime.empty() && !a.all_regimes) regimes = {regime_from_name(a.regime)};
  std::vector<report::Row> rows;
  if (a.gadget == "all") rows = report::location_table(o);
  else rows.push_back(row_for(a.gadget, o));

  std::string s;
  if (a.tally) {
    s = "gadget,regime,gate_locations,wait_locations,total,A,B\n";
    for (auto& row : rows)
      for (Regime r : regimes) {
        auto& c = row.cells.at(r);
        if (!c) continue;
        s += row.name + "," + regime_name(r) + "," + std::to_string(c->gate_locations) + "," +
             std::to_string(c->wait_locations) + "," + std::to_string(c->total) + "," + std::to_string(c->A) + "," +
             fmt(c->B) + "\n";
      }
  } else {
    s = "gadget";
    for (Regime r : regimes) s += "," + regime_name(r);
    s += "\n";
    for (auto& row : rows) {
      s += row.name;
      for (Regime r : regimes) {
        auto& c = row.cells.at(r);
        s += "," + (c ? std::to_string(c->total) : std::string("N/A"));
      }
      s += "\n";
    }
  }
  emit(s, a.out);
  return kOk;
}

// ---------------------------------------------------------------- threshold

struct ThresholdArgs {
  double A = 0, B = -1, level1_A = 0, level1_B = -1;
  bool simple = false;
  std::string tally, out;
};

json threshold_json(double A, double B, double l1A, double l1B) {
  if (B < 0) B = choose2(A);
  ThresholdReport r = threshold_report(A, B);
  json j{{"A", fmt(A)}, {"B", fmt(B)}, {"eps_simple", fmt(r.eps0_simple)}, {"eps_benign", fmt(r.eps0_benign)}};
  if (l1A > 0) {
    if (l1B < 0) l1B = choose2(l1A);
    j["level1_A"] = fmt(l1A);
    j["level1_B"] = fmt(l1B);
    j["eps_phys"] = fmt(threshold_two_level(A, B, l1A, l1B));
  }
  return j;
}

/// Parses the tally CSV written by `count --tally`.
json thresholds_from_tally(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::getline(in, line);
  if (line.rfind("gadget,regime,", 0) != 0) throw InputError("not a location tally CSV: " + path);
  json out = json::array();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
    if (f.size() != 7) throw InputError("malformed tally line: " + line);
    json j = threshold_json(std::stod(f[5]), std::stod(f[6]), 0, -1);
    j["gadget"] = f[0];
    j["regime"] = f[1];
    out.push_back(j);
  }
  return out;
}

int run_threshold(const ThresholdArgs& a) {
  if (!a.tally.empty()) {
    emit(dump(thresholds_from_tally(a.tally)), a.out);
    return kOk;
  }
  if (a.A <= 0) throw InputError("threshold needs --A or --tally");
  if (a.simple) {
    emit(fmt(threshold_simple(a.A)) + "\n", a.out);
    return kOk;
  }
  emit(dump(threshold_json(a.A, a.B, a.level1_A, a.level1_B)), a.out);
  return kOk;
}

// ---------------------------------------------------------------- verify-ft

struct VerifyFtArgs {
  std::string gadget = "all", out;
  double tolerance = 1e-9;
  std::size_t max_failures = 20;
};

json report_json(const ft::Report& r, const Gadget& g) {
  json fails = json::array();
  for (auto& f : r.failures)
    fails.push_back({{"after_gate", f.fault.after},
                     {"gate", gate_name(g.circ.gates[f.fault.after].kind)},
                     {"pauli", f.fault.pauli.str(g.circ.n_qubits)},
                     {"fidelity", fmt(f.fidelity)}});
  return {{"gadget", r.gadget},
          {"pass", r.pass},
          {"clean_fidelity", fmt(r.clean_fidelity)},
          {"locations", r.locations},
          {"faults_checked", r.faults_checked},
          {"failures", fails}};
}

int run_verify_ft(const VerifyFtArgs& a) {
  const std::vector<std::string> fast{"h", "s", "cnot", "n", "n_refresh", "ec", "zero_prep"};
  std::vector<std::string> names;
  if (a.gadget == "all") {
    names = fast;
    names.insert(names.end(), {"t", "tdg", "toffoli_v1", "toffoli_v2"});
  } else {
    names = {a.gadget};
  }
  json out = json::array();
  std::set<std::string> verified;
  bool ok = true;
  auto sweep = [&](const std::string& n) {
    auto c = ft::case_by_name(n);
    auto r = ft::verify_single_faults(c, a.max_failures, a.tolerance);
    out.push_back(report_json(r, c.gadget));
    if (r.pass) verified.insert(n);
    return r.pass;
  };
  for (auto& n : names) {
    if (n == "toffoli_v1" || n == "toffoli_v2" || n == "toffoli") {
      for (auto comp : {"t", "tdg", "ec", "n_refresh"})
        if (!verified.count(comp) && std::find(names.begin(), names.end(), comp) == names.end()) ok &= sweep(comp);
      auto c = n == "toffoli_v1" ? gadgets::build_toffoli_v1(true) : gadgets::build_toffoli_v2();
      auto r = ft::verify_composite(c, verified);
      out.push_back({{"gadget", c.gadget.name},
                     {"pass", r.pass},
                     {"components", std::vector<std::string>(r.components.begin(), r.components.end())},
                     {"problems", r.problems}});
      ok &= r.pass;
    } else {
      ok &= sweep(n);
    }
  }
  emit(dump(out), a.out);
  return ok ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------- verify-cu

std::string classify(const Mat2& m) {
  auto prop = [&](const Mat2& p) { return std::abs(std::abs((p.adjoint() * m).trace()) - 2.0) < 1e-9; };
  if (prop(gates::I())) return "I";
  if (prop(gates::X())) return "X";
  if (prop(gates::Z())) return "Z";
  return "V";
}

int run_verify_cu(const std::string& out) {
  std::string s = "error,unit1_plan,unit2_plan,unit3_plan\n";
  for (int e = 0; e <= 3; ++e) {
    s += e ? "cu" + std::to_string(e) + "_off" : std::string("none");
    for (int unit : {1, 2, 3}) {
      Mat2 m = Mat2::Identity();
      for (auto& spec : cu::syndrome_plan(unit)) m = cu::syndrome_evolution(spec, e) * m;
      s += "," + classify(m);
    }
    s += "\n";
  }
  s += "flipped,unit1,unit2,unit3,ancilla,restored\n";
  bool ok = true;
  auto d = cu::triple_layout();
  for (int flipped = 0; flipped <= 3; ++flipped) {
    std::array<int, 3> units{1, 1, 1};
    if (flipped) units[flipped - 1] = 0;
    SparseChain<1> c(d.n_spins, d.initial_bits(units));
    cu::correct_all_units(c, d);
    bool restored = c.prob_one(d.ancilla_pos()) < 1e-12;
    s += flipped ? "cu" + std::to_string(flipped) : std::string("none");
    for (int u = 1; u <= 3; ++u) {
      double p = c.prob_one(d.cu_pos(u));
      restored = restored && p > 1 - 1e-12;
      s += "," + fmt(p);
    }
    s += "," + fmt(c.prob_one(d.ancilla_pos())) + "," + (restored ? "yes" : "no") + "\n";
    ok = ok && restored;
  }
  emit(s, out);
  return ok ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------- mc

struct McArgs {
  std::string gadget = "ec", regime = "no_measurement", out;
  double eps = 1e-3;
  std::uint64_t trials = 10000, seed = 1;
};

int run_mc(const McArgs& a) {
  if (a.eps < 0 || a.eps >= 0.1) throw InputError("--eps must lie in [0, 0.1)");
  if (a.trials == 0) throw InputError("--trials must be positive");
  auto r = mc::mc_logical_error(ft::case_by_name(a.gadget), a.eps, a.trials, a.seed, regime_from_name(a.regime));
  json j{{"gadget", a.gadget},  {"regime", a.regime},     {"eps", fmt(r.eps)},
         {"trials", r.trials},  {"seed", r.seed},         {"locations", r.locations},
         {"failed", r.failed},  {"estimate", fmt(r.estimate)}, {"stderr", fmt(r.stderr_)},
         {"mean_failure_weight", fmt(r.failures / double(r.trials))}};
  emit(dump(j), a.out);
  return kOk;
}

// ---------------------------------------------------------------- report

int run_report(const std::string& out_dir, int layers, int moves) {
  json s = report::summary(count_options(layers, moves));
  if (out_dir.empty()) {
    std::cout << dump(s);
    return kOk;
  }
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  emit(s["table_csv"].get<std::string>(), (dir / "table.csv").string());
  emit(s["comparison_csv"].get<std::string>(), (dir / "comparison.csv").string());
  emit(dump(s["thresholds"]), (dir / "thresholds.json").string());
  emit(dump(s), (dir / "summary.json").string());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Globally controlled chain: simulation, compilation, fault-tolerance counting"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run a pulse program on a chain");
  simulate->add_option("--pulses", sim.pulses, "Pulse program text file")->required();
  simulate->add_option("--init", sim.init, "Initial bits, position 1 first")->required();
  simulate->add_option("--seed", sim.seed, "Seed for resets and measurements");
  simulate->add_option("--out", sim.out, "Output JSON path");
  simulate->add_flag("--allow-large", sim.allow_large, "Allow more than 24 spins");

  CompileArgs cmp;
  auto* compile_cmd = app.add_subcommand("compile", "Lower a logical op JSON to a pulse program");
  compile_cmd->add_option("--op", cmp.op, "LogicalOp JSON file")->required();
  compile_cmd->add_option("--layout", cmp.layout, "standard or blocked");
  compile_cmd->add_option("--n-comp", cmp.n_comp, "Computational qubits of the standard layout");
  compile_cmd->add_option("--n-blocks", cmp.n_blocks, "Blocks of the blocked layout");
  compile_cmd->add_option("--block-l", cmp.block_l, "Qubits per block (odd)");
  compile_cmd->add_flag("--marker", cmp.marker, "Add the marker spin to the standard layout");
  compile_cmd->add_option("--out", cmp.out, "Output prefix: writes <out>.pp and <out>.json");

  CountArgs cnt;
  auto* count = app.add_subcommand("count", "Location counts per regime");
  count->add_option("--gadget", cnt.gadget, "Gadget name or 'all'");
  count->add_option("--regime", cnt.regime, "One regime");
  count->add_flag("--all-regimes", cnt.all_regimes, "Every regime (default)");
  count->add_flag("--tally", cnt.tally, "Emit the location tally CSV instead");
  count->add_option("--resource-layers", cnt.layers, "Wait layers per resource preparation");
  count->add_option("--movement-steps", cnt.moves, "Movement steps per physical step");
  count->add_option("--out", cnt.out, "Output CSV path");

  ThresholdArgs thr;
  auto* threshold = app.add_subcommand("threshold", "Thresholds from location counts");
  threshold->add_option("--A", thr.A, "Locations of the worst gadget");
  threshold->add_option("--B", thr.B, "Pairs that are not benign (default all pairs)");
  threshold->add_option("--level1-A", thr.level1_A, "Level-one A for the two-level relation");
  threshold->add_option("--level1-B", thr.level1_B, "Level-one B");
  threshold->add_flag("--simple", thr.simple, "Only 1 / C(A,2)");
  threshold->add_option("--tally", thr.tally, "Location tally CSV from count --tally");
  threshold->add_option("--out", thr.out, "Output path");

  VerifyFtArgs vft;
  auto* verify_ft = app.add_subcommand("verify-ft", "Exhaustive single-fault verification");
  verify_ft->add_option("--gadget", vft.gadget, "Gadget name or 'all'");
  verify_ft->add_option("--tolerance", vft.tolerance, "Fidelity tolerance");
  verify_ft->add_option("--max-failures", vft.max_failures, "Failures listed per gadget");
  verify_ft->add_option("--out", vft.out, "Output JSON path");

  std::string cu_out;
  auto* verify_cu = app.add_subcommand("verify-cu", "Control-unit syndrome table and single-flip sweep");
  verify_cu->add_option("--out", cu_out, "Output CSV path");

  McArgs mca;
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo logical error rate");
  mc_cmd->add_option("--gadget", mca.gadget, "Gadget with a verification case");
  mc_cmd->add_option("--eps", mca.eps, "Physical error rate per location");
  mc_cmd->add_option("--trials", mca.trials, "Trials");
  mc_cmd->add_option("--seed", mca.seed, "Seed");
  mc_cmd->add_option("--regime", mca.regime, "Regime whose locations carry faults");
  mc_cmd->add_option("--out", mca.out, "Output JSON path");

  std::string rep_out;
  int rep_layers = 15, rep_moves = 3;
  std::uint64_t rep_seed = 1;
  auto* report_cmd = app.add_subcommand("report", "Location table, comparison and threshold summary");
  report_cmd->add_option("--out", rep_out, "Output directory");
  report_cmd->add_option("--resource-layers", rep_layers, "Wait layers per resource preparation");
  report_cmd->add_option("--movement-steps", rep_moves, "Movement steps per physical step");
  report_cmd->add_option("--seed", rep_seed, "Accepted for uniformity; the report is deterministic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n\n" << app.help();
    return kInputError;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*compile_cmd) return run_compile(cmp);
    if (*count) return run_count(cnt);
    if (*threshold) return run_threshold(thr);
    if (*verify_ft) return run_verify_ft(vft);
    if (*verify_cu) return run_verify_cu(cu_out);
    if (*mc_cmd) return run_mc(mca);
    if (*report_cmd) return run_report(rep_out, rep_layers, rep_moves);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::out_of_range& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
