#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcq {

enum class GateKind {
  I, X, Y, Z, H, S, Sdg, T, Tdg,
  CNOT, CZ, SWAP, CS, CSdg,
  CCX, CCZ, MCX,
  Reset, Measure,
  PrepMagic, PrepMagicDg, PrepAnd
};

inline const std::map<GateKind, std::string>& gate_names() {
  static const std::map<GateKind, std::string> m = {
      {GateKind::I, "I"},         {GateKind::X, "X"},       {GateKind::Y, "Y"},
      {GateKind::Z, "Z"},         {GateKind::H, "H"},       {GateKind::S, "S"},
      {GateKind::Sdg, "SDG"},     {GateKind::T, "T"},       {GateKind::Tdg, "TDG"},
      {GateKind::CNOT, "CNOT"},   {GateKind::CZ, "CZ"},     {GateKind::SWAP, "SWAP"},
      {GateKind::CS, "CS"},       {GateKind::CSdg, "CSDG"}, {GateKind::CCX, "TOFFOLI"},
      {GateKind::CCZ, "CCZ"},     {GateKind::MCX, "MCX"},   {GateKind::Reset, "RESET"},
      {GateKind::Measure, "MEASURE"}, {GateKind::PrepMagic, "PREP_MAGIC"},
      {GateKind::PrepMagicDg, "PREP_MAGIC_DG"}, {GateKind::PrepAnd, "PREP_AND"}};
  return m;
}

inline std::string gate_name(GateKind k) { return gate_names().at(k); }

inline GateKind gate_kind(const std::string& s) {
  for (auto& [k, n] : gate_names())
    if (n == s) return k;
  throw std::invalid_argument("unknown gate: " + s);
}

/// Qubit count a gate kind expects; 0 means variable.
inline int gate_arity(GateKind k) {
  switch (k) {
    case GateKind::CNOT: case GateKind::CZ: case GateKind::SWAP:
    case GateKind::CS: case GateKind::CSdg:
      return 2;
    case GateKind::CCX: case GateKind::CCZ:
      return 3;
    case GateKind::MCX: case GateKind::PrepMagic: case GateKind::PrepMagicDg:
    case GateKind::PrepAnd:
      return 0;
    default:
      return 1;
  }
}

inline bool is_clifford(GateKind k) {
  switch (k) {
    case GateKind::I: case GateKind::X: case GateKind::Y: case GateKind::Z:
    case GateKind::H: case GateKind::S: case GateKind::Sdg: case GateKind::CNOT:
    case GateKind::CZ: case GateKind::SWAP: case GateKind::Reset:
      return true;
    default:
      return false;
  }
}

/// Resource preparations stand for a sub-block and are not fault sites themselves.
inline bool is_resource(GateKind k) {
  return k == GateKind::PrepMagic || k == GateKind::PrepMagicDg || k == GateKind::PrepAnd;
}

/// One gate: for controlled kinds the controls come first and the target last.
struct Gate {
  GateKind kind = GateKind::I;
  std::vector<int> q;
  int step = -1;
};

struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(int n) : n_qubits(n) {}

  Circuit& add(GateKind k, std::vector<int> q) {
    int a = gate_arity(k);
    if (a && static_cast<int>(q.size()) != a)
      throw std::invalid_argument(gate_name(k) + " expects " + std::to_string(a) + " qubits");
    if (k == GateKind::MCX && q.size() < 2) throw std::invalid_argument("MCX needs a control");
    for (int x : q)
      if (x < 0 || x >= n_qubits) throw std::out_of_range("gate qubit out of range");
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = i + 1; j < q.size(); ++j)
        if (q[i] == q[j]) throw std::invalid_argument("repeated qubit in gate");
    gates.push_back(Gate{k, std::move(q), -1});
    return *this;
  }

  void append(const Circuit& o, const std::vector<int>& map) {
    for (auto g : o.gates) {
      for (int& x : g.q) x = map.at(x);
      add(g.kind, g.q);
    }
  }

  /// As-soon-as-possible steps starting at 0; returns depth.
  int schedule_asap() {
    std::vector<int> busy(n_qubits, -1);
    int depth = 0;
    for (auto& g : gates) {
      int s = 0;
      for (int x : g.q) s = std::max(s, busy[x] + 1);
      g.step = s;
      for (int x : g.q) busy[x] = s;
      depth = std::max(depth, s + 1);
    }
    return depth;
  }

  /// True when no qubit is used twice in one step.
  bool valid_schedule() const {
    std::map<std::pair<int, int>, int> used;
    for (auto& g : gates) {
      if (g.step < 0) return false;
      for (int x : g.q)
        if (used[{g.step, x}]++) return false;
    }
    return true;
  }

  std::size_t count(GateKind k) const {
    return static_cast<std::size_t>(
        std::count_if(gates.begin(), gates.end(), [&](const Gate& g) { return g.kind == k; }));
  }
};

/// Evaluates a circuit of permutation gates on a bit vector.
inline std::vector<int> eval_classical(const Circuit& c, std::vector<int> bits) {
  if (static_cast<int>(bits.size()) != c.n_qubits) throw std::invalid_argument("bit count mismatch");
  for (auto& g : c.gates) {
    auto& q = g.q;
    switch (g.kind) {
      case GateKind::I: break;
      case GateKind::X: bits[q[0]] ^= 1; break;
      case GateKind::CNOT: bits[q[1]] ^= bits[q[0]]; break;
      case GateKind::SWAP: std::swap(bits[q[0]], bits[q[1]]); break;
      case GateKind::CCX: bits[q[2]] ^= bits[q[0]] & bits[q[1]]; break;
      case GateKind::MCX: {
        int all = 1;
        for (std::size_t i = 0; i + 1 < q.size(); ++i) all &= bits[q[i]];
        bits[q.back()] ^= all;
        break;
      }
      case GateKind::Reset: bits[q[0]] = 0; break;
      default:
        throw std::invalid_argument("non-classical gate in classical evaluation: " + gate_name(g.kind));
    }
  }
  return bits;
}

inline nlohmann::json to_json(const Circuit& c) {
  nlohmann::json arr = nlohmann::json::array();
  for (auto& g : c.gates) arr.push_back({{"gate", gate_name(g.kind)}, {"qubits", g.q}, {"step", g.step}});
  return {{"n_qubits", c.n_qubits}, {"gates", arr}};
}

inline Circuit circuit_from_json(const nlohmann::json& j) {
  Circuit c(j.at("n_qubits").get<int>());
  for (auto& g : j.at("gates")) {
    c.add(gate_kind(g.at("gate").get<std::string>()), g.at("qubits").get<std::vector<int>>());
    c.gates.back().step = g.value("step", -1);
  }
  return c;
}

// ---------------------------------------------------------------- gadgets

enum class RegKind { Steane, Repetition, Ancilla, Resource };

struct Register {
  std::string name;
  RegKind kind = RegKind::Ancilla;
  std::vector<int> qubits;
};

/// A logical-level circuit with named registers, designated I/O blocks and EC placements.
struct Gadget {
  std::string name;
  Circuit circ;
  std::vector<Register> regs;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  int ec_inputs = 0;
  int ec_outputs = 0;
  bool uses_measurement = false;

  const Register& reg(const std::string& n) const {
    for (auto& r : regs)
      if (r.name == n) return r;
    throw std::out_of_range("no register " + n);
  }
  bool has_reg(const std::string& n) const {
    for (auto& r : regs)
      if (r.name == n) return true;
    return false;
  }
  int add_reg(const std::string& n, RegKind k, int size) {
    Register r{n, k, {}};
    for (int i = 0; i < size; ++i) r.qubits.push_back(circ.n_qubits++);
    regs.push_back(r);
    return r.qubits.front();
  }
  std::vector<int> q(const std::string& n) const { return reg(n).qubits; }
  int q(const std::string& n, int i) const { return reg(n).qubits.at(i); }
};

inline nlohmann::json to_json(const Gadget& g) {
  nlohmann::json regs = nlohmann::json::array();
  for (auto& r : g.regs) {
    std::string k = r.kind == RegKind::Steane ? "steane"
                    : r.kind == RegKind::Repetition ? "repetition"
                    : r.kind == RegKind::Resource ? "resource" : "ancilla";
    regs.push_back({{"name", r.name}, {"kind", k}, {"qubits", r.qubits}});
  }
  return {{"name", g.name},
          {"circuit", to_json(g.circ)},
          {"blocks", regs},
          {"inputs", g.inputs},
          {"outputs", g.outputs},
          {"ec_placements", {{"inputs", g.ec_inputs}, {"outputs", g.ec_outputs}}}};
}

inline Gadget gadget_from_json(const nlohmann::json& j) {
  Gadget g;
  g.name = j.at("name").get<std::string>();
  g.circ = circuit_from_json(j.at("circuit"));
  for (auto& r : j.at("blocks")) {
    std::string k = r.at("kind").get<std::string>();
    RegKind rk = k == "steane" ? RegKind::Steane
                 : k == "repetition" ? RegKind::Repetition
                 : k == "resource" ? RegKind::Resource : RegKind::Ancilla;
    g.regs.push_back({r.at("name").get<std::string>(), rk, r.at("qubits").get<std::vector<int>>()});
  }
  g.inputs = j.at("inputs").get<std::vector<std::string>>();
  g.outputs = j.at("outputs").get<std::vector<std::string>>();
  g.ec_inputs = j.at("ec_placements").at("inputs").get<int>();
  g.ec_outputs = j.at("ec_placements").at("outputs").get<int>();
  for (auto& x : g.circ.gates)
    if (x.kind == GateKind::Measure) g.uses_measurement = true;
  return g;
}

}  // namespace gcq
