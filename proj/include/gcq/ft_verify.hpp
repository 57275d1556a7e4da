#pragma once

// Single-fault verification. A gadget runs on its logical inputs entangled with untouched
// reference qubits; every fault location and every Pauli there is injected in turn, ideal
// decoders are applied to the output blocks, and the decoded blocks plus references must match
// the ideal logical action exactly. Repetition outputs are classical, so their phase is ignored.

#include "gcq/circuit.hpp"
#include "gcq/gadgets.hpp"
#include "gcq/pauli.hpp"
#include "gcq/statevec.hpp"
#include "gcq/steane.hpp"

#include <bit>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace gcq::ft {

using sv::Key;

/// A Pauli applied right after gate `after`.
struct Fault {
  std::size_t after = 0;
  Pauli pauli;
};

struct FaultResult {
  Fault fault;
  double fidelity = 0;
};

struct Report {
  std::string gadget;
  bool pass = false;
  double clean_fidelity = 0;
  std::size_t locations = 0;
  std::size_t faults_checked = 0;
  std::vector<FaultResult> failures;
};

struct OutputBlock {
  std::vector<int> qubits;
  RegKind kind = RegKind::Steane;
};

/// Everything needed to run a gadget and judge its output.
struct Case {
  Gadget gadget;
  int n_ref = 0;
  sv::SparseState input;
  std::vector<OutputBlock> outputs;
  Key system = 0;                          ///< qubits compared against the targets
  std::vector<sv::SparseState> targets;    ///< orthonormal; the output must lie in their span
  bool decode = true;                      ///< apply ideal decoders before comparing
};

// ---------------------------------------------------------------- ideal decoders

/// Coherent Steane decoding of one block: syndromes go to six fresh qubits from `junk` upward.
inline void decode_steane(sv::SparseState& s, const std::vector<int>& b, int junk) {
  auto pass = [&](int base) {
    s.permute([&](Key k) {
      std::uint8_t w = 0;
      for (int i = 0; i < 7; ++i) w |= std::uint8_t(sv::bit(k, b[i]) << i);
      int syn = steane::syndrome(w);
      Key out = k ^ sv::spread(steane::correction(syn), b);
      return out | (Key(syn) << base);
    });
  };
  pass(junk);
  for (int q : b) s.single(q, gates::H());
  pass(junk + 3);
  for (int q : b) s.single(q, gates::H());
}

/// Majority decoding of a repetition block; the error pattern goes to seven fresh qubits.
inline void decode_repetition(sv::SparseState& s, const std::vector<int>& b, int junk) {
  s.permute([&](Key k) {
    std::uint8_t w = 0;
    for (int i = 0; i < 7; ++i) w |= std::uint8_t(sv::bit(k, b[i]) << i);
    std::uint8_t fixed = std::popcount(unsigned(w)) >= 4 ? 0x7F : 0;
    std::uint8_t e = w ^ fixed;
    Key out = (k & ~sv::spread(0x7F, b)) | sv::spread(fixed, b);
    return out | (Key(e) << junk);
  });
}

inline int junk_needed(const std::vector<OutputBlock>& outs) {
  int n = 0;
  for (auto& o : outs) n += o.kind == RegKind::Repetition ? 7 : 6;
  return n;
}

inline void decode_outputs(sv::Mixture& m, const Case& c) {
  int junk = c.gadget.circ.n_qubits + c.n_ref;
  for (auto& o : c.outputs) {
    for (auto& [w, s] : m.branches) {
      s.n = std::max(s.n, junk + 7);
      if (o.kind == RegKind::Repetition) decode_repetition(s, o.qubits, junk);
      else decode_steane(s, o.qubits, junk);
    }
    junk += o.kind == RegKind::Repetition ? 7 : 6;
  }
}

/// Weight of the state inside the span of the targets, with everything off `system` traced out.
inline double captured_weight(const sv::Mixture& m, Key system, const std::vector<sv::SparseState>& targets) {
  double total = 0;
  for (auto& [w, s] : m.branches) {
    for (auto& t : targets) {
      std::unordered_map<Key, cplx> acc;
      for (auto& [k, a] : s.amp) {
        auto it = t.amp.find(k & system);
        if (it != t.amp.end()) acc[k & ~system] += std::conj(it->second) * a;
      }
      for (auto& [j, v] : acc) total += w * std::norm(v);
    }
  }
  return total;
}

// ---------------------------------------------------------------- case construction

/// Amplitudes of one output basis index (bit j = output block j) for one input basis index.
using LogicalMap = std::function<std::vector<cplx>(int)>;

inline std::vector<std::pair<Key, cplx>> encode_block(int value, const OutputBlock& b) {
  if (b.kind == RegKind::Repetition) return {{value ? sv::spread(0x7F, b.qubits) : 0, 1.0}};
  std::vector<std::pair<Key, cplx>> t;
  for (auto w : steane::codewords(value)) t.push_back({sv::spread(w, b.qubits), 1 / std::sqrt(8.0)});
  return t;
}

/// Sum over basis assignments of the product of block encodings, times a coefficient.
inline void add_encoded(sv::SparseState& s, const std::vector<OutputBlock>& blocks, int bits, Key extra, cplx coef) {
  std::vector<std::pair<Key, cplx>> terms{{extra, coef}};
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    std::vector<std::pair<Key, cplx>> next;
    for (auto& [k, a] : terms)
      for (auto& [t, c] : encode_block((bits >> j) & 1, blocks[j])) next.push_back({k | t, a * c});
    terms.swap(next);
  }
  for (auto& [k, a] : terms) s.amp[k] += a;
}

inline OutputBlock block_of(const Gadget& g, const std::string& name) {
  return {g.q(name), g.reg(name).kind};
}

/// Builds a case whose inputs are maximally entangled with one reference qubit per input block.
inline Case logical_case(const Gadget& g, const LogicalMap& f) {
  Case c;
  c.gadget = g;
  c.n_ref = static_cast<int>(g.inputs.size());
  const int n = g.circ.n_qubits, k = c.n_ref;
  std::vector<OutputBlock> in;
  for (auto& name : g.inputs) in.push_back(block_of(g, name));
  for (auto& name : g.outputs) c.outputs.push_back(block_of(g, name));

  c.input = sv::SparseState(n + k + junk_needed(c.outputs));
  c.input.amp.clear();
  const double norm = 1 / std::sqrt(double(1 << k));
  for (int i = 0; i < (1 << k); ++i) add_encoded(c.input, in, i, Key(i) << n, norm);

  for (auto& o : c.outputs)
    for (int q : o.qubits) c.system |= sv::mask(q);
  for (int r = 0; r < k; ++r) c.system |= sv::mask(n + r);

  // Repetition outputs are dephased: one target per value of the classical bits.
  int rep_mask = 0;
  for (std::size_t j = 0; j < c.outputs.size(); ++j)
    if (c.outputs[j].kind == RegKind::Repetition) rep_mask |= 1 << j;
  std::map<int, sv::SparseState> by_class;
  for (int i = 0; i < (1 << k); ++i) {
    auto amps = f(i);
    for (std::size_t o = 0; o < amps.size(); ++o) {
      if (std::norm(amps[o]) < 1e-30) continue;
      auto& t = by_class[int(o) & rep_mask];
      t.n = c.input.n;
      add_encoded(t, c.outputs, int(o), Key(i) << n, amps[o] * norm);
    }
  }
  for (auto& [cls, t] : by_class) {
    t.normalize();
    c.targets.push_back(t);
  }
  return c;
}

inline Case case_ec(const Gadget& g = gadgets::build_ec()) {
  return logical_case(g, [](int i) {
    std::vector<cplx> v(2, 0);
    v[i] = 1;
    return v;
  });
}

inline Case case_zero_prep() {
  Gadget g = gadgets::build_zero_prep();
  return logical_case(g, [](int) { return std::vector<cplx>{1, 0}; });
}

inline Case case_t(bool dagger) {
  const cplx w = std::polar(1.0, (dagger ? -1 : 1) * kPi / 4);
  return logical_case(gadgets::build_t(dagger), [w](int i) {
    std::vector<cplx> v(2, 0);
    v[i] = i ? w : 1;
    return v;
  });
}

/// N outputs the data block (bit 0) and the repetition block (bit 1), both holding the value.
inline Case case_n(bool refresh) {
  return logical_case(gadgets::build_n(refresh), [](int i) {
    std::vector<cplx> v(4, 0);
    v[i ? 3 : 0] = 1;
    return v;
  });
}

inline Case case_cnot() {
  return logical_case(gadgets::build_bitwise_cnot(), [](int i) {
    std::vector<cplx> v(4, 0);
    int a = i & 1, b = (i >> 1) & 1;
    v[a | ((a ^ b) << 1)] = 1;
    return v;
  });
}

/// Logical action of seven copies of a single-qubit gate on the Steane code.
inline Mat2 transversal_logical(GateKind k) {
  switch (k) {
    case GateKind::S: return gates::Sdg();
    case GateKind::Sdg: return gates::S();
    case GateKind::H: case GateKind::X: case GateKind::Z: case GateKind::I:
      return sv::single_matrix(k);
    default: throw std::invalid_argument("gate is not transversal on the Steane code");
  }
}

inline Case case_bitwise_1q(GateKind k) {
  Mat2 u = transversal_logical(k);
  return logical_case(gadgets::build_bitwise_1q(k), [u](int i) {
    return std::vector<cplx>{u(0, i), u(1, i)};
  });
}

inline Case case_by_name(const std::string& n) {
  if (n == "ec") return case_ec();
  if (n == "ec_non_ft") return case_ec(gadgets::build_ec_non_ft());
  if (n == "zero_prep") return case_zero_prep();
  if (n == "t") return case_t(false);
  if (n == "tdg") return case_t(true);
  if (n == "n") return case_n(false);
  if (n == "n_refresh") return case_n(true);
  if (n == "cnot") return case_cnot();
  if (n == "h") return case_bitwise_1q(GateKind::H);
  if (n == "x") return case_bitwise_1q(GateKind::X);
  if (n == "z") return case_bitwise_1q(GateKind::Z);
  if (n == "s") return case_bitwise_1q(GateKind::S);
  throw std::invalid_argument("no verification case for gadget: " + n);
}

// ---------------------------------------------------------------- running

inline void apply_pauli(sv::Mixture& m, const Pauli& p) {
  for (int q = 0; q < 64; ++q) {
    char ch = p.at(q);
    if (ch != 'I') m.pauli(q, ch);
  }
}

/// Runs the gadget with optional faults (sorted by position) and returns the captured weight.
inline double run_case(const Case& c, const std::vector<Fault>& faults = {}) {
  sv::Mixture m(c.input);
  std::size_t fi = 0;
  const auto& gs = c.gadget.circ.gates;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    m.apply(gs[i]);
    for (; fi < faults.size() && faults[fi].after == i; ++fi) apply_pauli(m, faults[fi].pauli);
  }
  if (c.decode) decode_outputs(m, c);
  return captured_weight(m, c.system, c.targets);
}

/// For each gate and each of its qubits: whether a Pauli left there right after the gate can
/// matter. It cannot when the qubit's next operation is a reset, or when nothing touches it
/// again and it is not compared at the end.
inline std::vector<std::vector<bool>> live_after(const Case& c) {
  const auto& gs = c.gadget.circ.gates;
  std::vector<std::vector<bool>> live(gs.size());
  std::vector<int> next_kind(c.gadget.circ.n_qubits, -1);  // -1 none, 0 reset, 1 other
  for (std::size_t i = gs.size(); i-- > 0;) {
    for (int q : gs[i].q) {
      bool compared = (c.system >> q) & 1;
      bool l = next_kind[q] == 1 || (next_kind[q] == -1 && compared);
      live[i].push_back(l);
    }
    for (int q : gs[i].q) next_kind[q] = gs[i].kind == GateKind::Reset ? 0 : 1;
  }
  return live;
}

/// Distinct faults of one location after dropping components that cannot matter. Resource
/// preparations are treated as delivering their block with at most one single-qubit error.
inline std::vector<Pauli> location_faults(const Gate& g, const std::vector<bool>& live) {
  std::vector<int> qs;
  for (std::size_t j = 0; j < g.q.size(); ++j)
    if (live[j]) qs.push_back(g.q[j]);
  std::vector<Pauli> out;
  if (is_resource(g.kind)) {
    for (int q : qs)
      for (char p : {'X', 'Y', 'Z'}) out.push_back(Pauli::single(q, p));
    return out;
  }
  const std::size_t n = qs.size(), total = std::size_t{1} << (2 * n);
  for (std::size_t code = 1; code < total; ++code) {
    Pauli p;
    for (std::size_t j = 0; j < n; ++j) p = p * Pauli::single(qs[j], "IXYZ"[(code >> (2 * j)) & 3]);
    out.push_back(p);
  }
  return out;
}

/// Exhaustive single-fault sweep with checkpointed prefixes. `max_failures` bounds the list.
inline Report verify_single_faults(const Case& c, std::size_t max_failures = 50, double tol = 1e-9) {
  Report r;
  r.gadget = c.gadget.name;
  const auto& gs = c.gadget.circ.gates;
  std::vector<sv::Mixture> after;
  after.reserve(gs.size());
  sv::Mixture m(c.input);
  for (auto& g : gs) {
    m.apply(g);
    after.push_back(m);
  }
  auto finish = [&](sv::Mixture x, std::size_t from) {
    for (std::size_t i = from; i < gs.size(); ++i) x.apply(gs[i]);
    if (c.decode) decode_outputs(x, c);
    return captured_weight(x, c.system, c.targets);
  };
  r.clean_fidelity = finish(after.empty() ? sv::Mixture(c.input) : after.back(), gs.size());
  r.pass = r.clean_fidelity > 1 - tol;
  auto live = live_after(c);
  for (std::size_t i = 0; i < gs.size(); ++i) {
    auto faults = location_faults(gs[i], live[i]);
    if (!faults.empty()) ++r.locations;
    for (auto& p : faults) {
      sv::Mixture x = after[i];
      apply_pauli(x, p);
      double f = finish(std::move(x), i + 1);
      ++r.faults_checked;
      if (f < 1 - tol) {
        r.pass = false;
        if (r.failures.size() < max_failures) r.failures.push_back({{i, p}, f});
      }
    }
  }
  return r;
}

/// Runs the case with a weight-one Pauli on an input qubit and no fault inside.
inline double run_with_input_error(const Case& c, int qubit, char p) {
  Case d = c;
  d.input.pauli(qubit, p);
  return run_case(d);
}

// ---------------------------------------------------------------- propagation

/// Residual Pauli on each output block after propagating a fault through a Clifford gadget.
/// SWAPs are bookkeeping only unless `swaps_propagate`.
inline std::map<std::string, std::string> propagate_fault(const Gadget& g, const Fault& f,
                                                          bool swaps_propagate = false) {
  Pauli p = propagate(g.circ, f.pauli, static_cast<int>(f.after), swaps_propagate);
  std::map<std::string, std::string> out;
  for (auto& name : g.outputs) {
    std::string s;
    for (int q : g.q(name)) s += p.at(q);
    out[name] = s;
  }
  return out;
}

// ---------------------------------------------------------------- composites

struct CompositeReport {
  bool pass = false;
  std::vector<std::string> problems;
  std::set<std::string> components;
};

/// Whether every gate in [begin, end) acts on distinct registers at one common index.
inline bool is_bitwise(const Gadget& g, std::size_t begin, std::size_t end, std::string* why = nullptr) {
  std::map<int, std::pair<std::string, int>> where;
  for (auto& r : g.regs)
    for (std::size_t i = 0; i < r.qubits.size(); ++i) where[r.qubits[i]] = {r.name, int(i)};
  for (std::size_t i = begin; i < end; ++i) {
    const auto& gt = g.circ.gates[i];
    std::set<std::string> regs;
    int index = -1;
    for (int q : gt.q) {
      auto [name, idx] = where.at(q);
      if (!regs.insert(name).second || (index >= 0 && idx != index)) {
        if (why) *why = "gate " + std::to_string(i) + " couples two qubits of one block or different indices";
        return false;
      }
      index = idx;
    }
  }
  return true;
}

/// A composite passes when its parts tile the circuit, every unnamed part is bitwise, and every
/// named part is a component in `verified` (or an injected resource).
inline CompositeReport verify_composite(const gadgets::Composite& c, const std::set<std::string>& verified) {
  CompositeReport r;
  std::size_t pos = 0;
  for (auto& p : c.parts) {
    if (p.begin != pos) r.problems.push_back("parts do not tile the circuit at gate " + std::to_string(pos));
    pos = p.end;
    if (p.component.empty()) {
      std::string why;
      if (!is_bitwise(c.gadget, p.begin, p.end, &why)) r.problems.push_back(why);
    } else {
      r.components.insert(p.component);
      if (p.component != "resource" && !verified.count(p.component))
        r.problems.push_back("component " + p.component + " is not verified");
    }
  }
  if (pos != c.gadget.circ.gates.size()) r.problems.push_back("parts stop before the end of the circuit");
  r.pass = r.problems.empty();
  return r;
}

}  // namespace gcq::ft
