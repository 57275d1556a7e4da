#pragma once

// Fault-location enumeration under five control regimes, rule-based benign-pair counting and the
// worst-case location count that feeds the threshold formulas.
//
// A location is one gate application or one qubit waiting for one time step. Which qubits wait
// in a step is decided by the step's block: every qubit of the gadget's logical registers
// (Steane, repetition, resource) plus the ancilla registers that the step's gates touch.

#include "gcq/circuit.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcq {

enum class Regime { Unrestricted, NoMeasurement, SerialCU, NearestNeighbour, PhysicalModel };

inline const std::vector<Regime>& all_regimes() {
  static const std::vector<Regime> r{Regime::Unrestricted, Regime::NoMeasurement, Regime::SerialCU,
                                     Regime::NearestNeighbour, Regime::PhysicalModel};
  return r;
}

inline std::string regime_name(Regime r) {
  switch (r) {
    case Regime::Unrestricted: return "unrestricted";
    case Regime::NoMeasurement: return "no_measurement";
    case Regime::SerialCU: return "serial_cu";
    case Regime::NearestNeighbour: return "nearest_neighbour";
    case Regime::PhysicalModel: return "physical_model";
  }
  return "?";
}

inline Regime regime_from_name(const std::string& s) {
  for (Regime r : all_regimes())
    if (regime_name(r) == s) return r;
  throw std::invalid_argument("unknown regime: " + s);
}

struct CountOptions {
  /// Layers of single-qubit placeholder gates that stand for one resource-block preparation.
  /// Fitted so the measured T gadget lands near 237 unrestricted locations.
  int resource_layers = 15;
  /// Control-unit movement steps charged before every step in the physical model.
  int movement_steps = 3;
};

/// One location. Gate locations index `LocationList::ops`; waits carry `op = -1`.
struct Location {
  int step = 0;
  int op = -1;
  int qubit = -1;
};

/// An operation as scheduled: a gate of the gadget (`origin` is its index), a routing SWAP or
/// a resource placeholder (`origin` is -1 for SWAPs, the resource gate's index otherwise).
struct ScheduledOp {
  Gate gate;
  int origin = -1;
  bool routing = false;
};

struct LocationList {
  int n_qubits = 0;
  int steps = 0;
  std::vector<ScheduledOp> ops;
  std::vector<Location> locs;

  std::size_t gate_count() const {
    return static_cast<std::size_t>(std::count_if(locs.begin(), locs.end(), [](const Location& l) { return l.op >= 0; }));
  }
  std::size_t wait_count() const { return locs.size() - gate_count(); }
};

struct LocationTally {
  std::string gadget_name;
  Regime regime = Regime::Unrestricted;
  std::uint64_t gate_locations = 0;
  std::uint64_t wait_locations = 0;
  std::uint64_t total = 0;
  std::uint64_t A = 0;  ///< total with the EC blocks around the gadget
  double B = 0;         ///< pairs not certified benign among the A locations
};

/// Locations of one serial step: the gate, waits on the rest of its block and, in the physical
/// model, the movement steps in which the whole block waits.
inline std::uint64_t serial_step_locations(int block, int arity, bool physical, const CountOptions& o = {}) {
  if (arity > block) throw std::invalid_argument("gate wider than its block");
  return 1 + std::uint64_t(block - arity) + (physical ? std::uint64_t(o.movement_steps) * block : 0);
}

inline double choose2(double n) { return n * (n - 1) / 2; }
inline double choose3(double n) { return n * (n - 1) * (n - 2) / 6; }

namespace detail {

inline bool is_logical(RegKind k) { return k != RegKind::Ancilla; }

/// Qubit -> register index, plus the union of logical-register qubits.
struct BlockMap {
  std::vector<int> reg_of;
  std::vector<std::vector<int>> reg_qubits;
  std::vector<bool> logical_reg;
  std::vector<int> logical;

  explicit BlockMap(const Gadget& g) : reg_of(g.circ.n_qubits, -1) {
    for (std::size_t r = 0; r < g.regs.size(); ++r) {
      reg_qubits.push_back(g.regs[r].qubits);
      logical_reg.push_back(is_logical(g.regs[r].kind));
      for (int q : g.regs[r].qubits) {
        reg_of.at(q) = static_cast<int>(r);
        if (is_logical(g.regs[r].kind)) logical.push_back(q);
      }
    }
    // qubits outside any register behave like a one-qubit ancilla register each
    for (int q = 0; q < g.circ.n_qubits; ++q)
      if (reg_of[q] < 0) {
        reg_of[q] = static_cast<int>(reg_qubits.size());
        reg_qubits.push_back({q});
        logical_reg.push_back(false);
      }
  }

  /// Block of a step whose operations act on `acted`.
  std::vector<int> block(const std::vector<int>& acted) const {
    std::vector<char> in(reg_of.size(), 0);
    std::vector<int> out;
    for (int q : logical)
      if (!in[q]) in[q] = 1, out.push_back(q);
    for (int q : acted)
      for (int x : reg_qubits[reg_of[q]])
        if (!in[x]) in[x] = 1, out.push_back(x);
    return out;
  }
};

/// The gadget's gates with each resource preparation replaced by placeholder layers.
inline std::vector<ScheduledOp> expand(const Gadget& g, const CountOptions& o) {
  std::vector<ScheduledOp> ops;
  for (std::size_t i = 0; i < g.circ.gates.size(); ++i) {
    const Gate& gt = g.circ.gates[i];
    if (is_resource(gt.kind)) {
      for (int l = 0; l < o.resource_layers; ++l)
        for (int q : gt.q) ops.push_back({Gate{GateKind::I, {q}, -1}, static_cast<int>(i), false});
    } else {
      ops.push_back({gt, static_cast<int>(i), false});
    }
  }
  return ops;
}

/// Emits one serial step for `ops[k]`: the gate plus waits on the rest of its block, preceded
/// in the physical model by movement steps in which the whole block waits.
inline void serial_step(LocationList& L, const BlockMap& bm, int k, bool physical, const CountOptions& o) {
  const Gate& g = L.ops[k].gate;
  auto blk = bm.block(g.q);
  if (physical)
    for (int m = 0; m < o.movement_steps; ++m, ++L.steps)
      for (int q : blk) L.locs.push_back({L.steps, -1, q});
  L.locs.push_back({L.steps, k, -1});
  for (int q : blk)
    if (std::find(g.q.begin(), g.q.end(), q) == g.q.end()) L.locs.push_back({L.steps, -1, q});
  ++L.steps;
}

}  // namespace detail

/// Enumerates every location of `g` under `regime`.
inline LocationList enumerate_locations(const Gadget& g, Regime regime, const CountOptions& o = {}) {
  LocationList L;
  L.n_qubits = g.circ.n_qubits;
  if (regime != Regime::Unrestricted)
    for (auto& gt : g.circ.gates)
      if (gt.kind == GateKind::Measure)
        throw std::invalid_argument("scheduling error: " + g.name + " measures, which " + regime_name(regime) +
                                    " forbids");
  detail::BlockMap bm(g);
  auto ops = detail::expand(g, o);

  if (regime == Regime::Unrestricted || regime == Regime::NoMeasurement) {
    Circuit c(g.circ.n_qubits);
    for (auto& op : ops) c.gates.push_back(op.gate);
    L.steps = c.schedule_asap();
    L.ops = ops;
    std::vector<std::vector<int>> by_step(L.steps);
    for (std::size_t k = 0; k < ops.size(); ++k) {
      L.ops[k].gate.step = c.gates[k].step;
      by_step[c.gates[k].step].push_back(static_cast<int>(k));
    }
    for (int s = 0; s < L.steps; ++s) {
      std::vector<int> acted;
      for (int k : by_step[s]) {
        L.locs.push_back({s, k, -1});
        acted.insert(acted.end(), ops[k].gate.q.begin(), ops[k].gate.q.end());
      }
      for (int q : bm.block(acted))
        if (std::find(acted.begin(), acted.end(), q) == acted.end()) L.locs.push_back({s, -1, q});
    }
    return L;
  }

  const bool routed = regime != Regime::SerialCU;
  const bool physical = regime == Regime::PhysicalModel;
  std::vector<int> pos(g.circ.n_qubits), at(g.circ.n_qubits);
  for (int q = 0; q < g.circ.n_qubits; ++q) pos[q] = at[q] = q;

  auto do_swap = [&](int p) {  // exchange the occupants of positions p and p+1
    int a = at[p], b = at[p + 1];
    L.ops.push_back({Gate{GateKind::SWAP, {a, b}, -1}, -1, true});
    detail::serial_step(L, bm, static_cast<int>(L.ops.size()) - 1, physical, o);
    std::swap(at[p], at[p + 1]);
    pos[a] = p + 1;
    pos[b] = p;
  };

  for (auto& op : ops) {
    if (routed && op.gate.q.size() > 1) {
      // Gather the gate's qubits into the contiguous window that costs the fewest adjacent
      // SWAPs (the median of position minus rank), keeping their order; nothing is undone.
      auto qs = op.gate.q;
      std::sort(qs.begin(), qs.end(), [&](int a, int b) { return pos[a] < pos[b]; });
      const int k = static_cast<int>(qs.size());
      std::vector<int> off(k);
      for (int j = 0; j < k; ++j) off[j] = pos[qs[j]] - j;
      std::vector<int> sorted_off = off;
      std::nth_element(sorted_off.begin(), sorted_off.begin() + (k - 1) / 2, sorted_off.end());
      const int w = sorted_off[(k - 1) / 2];
      for (int j = 0; j < k; ++j)
        while (pos[qs[j]] > w + j) do_swap(pos[qs[j]] - 1);
      for (int j = k - 1; j >= 0; --j)
        while (pos[qs[j]] < w + j) do_swap(pos[qs[j]]);
    }
    L.ops.push_back(op);
    detail::serial_step(L, bm, static_cast<int>(L.ops.size()) - 1, physical, o);
  }
  if (routed) {
    // Restore the home layout by adjacent exchanges: one SWAP per inversion.
    bool moved = true;
    while (moved) {
      moved = false;
      for (int p = 0; p + 1 < g.circ.n_qubits; ++p)
        if (at[p] > at[p + 1]) do_swap(p), moved = true;
    }
  }
  return L;
}

/// Groups of locations whose faults combine into one fault. A gate location forms a group
/// with the waits on its qubits up to each qubit's next gate; waits before a qubit's first gate
/// form a group per qubit. Entries are indices into `L.locs`.
inline std::vector<std::vector<std::size_t>> rule1_groups(const LocationList& L) {
  std::vector<std::vector<std::size_t>> per_step(L.steps);
  for (std::size_t i = 0; i < L.locs.size(); ++i) per_step.at(L.locs[i].step).push_back(i);
  std::vector<int> group_of_op(L.ops.size(), -1);
  std::vector<int> lead(L.n_qubits, -1);  // group of waits before a qubit's first gate
  std::vector<int> last(L.n_qubits, -1);  // group of the qubit's latest gate
  std::vector<std::vector<std::size_t>> groups;
  for (int s = 0; s < L.steps; ++s) {
    for (std::size_t i : per_step[s]) {
      const Location& l = L.locs[i];
      if (l.op >= 0) {
        if (group_of_op[l.op] < 0) {
          group_of_op[l.op] = static_cast<int>(groups.size());
          groups.push_back({});
        }
        groups[group_of_op[l.op]].push_back(i);
        for (int q : L.ops[l.op].gate.q) last[q] = group_of_op[l.op];
      } else if (last[l.qubit] >= 0) {
        groups[last[l.qubit]].push_back(i);
      } else {
        if (lead[l.qubit] < 0) {
          lead[l.qubit] = static_cast<int>(groups.size());
          groups.push_back({});
        }
        groups[lead[l.qubit]].push_back(i);
      }
    }
  }
  return groups;
}

/// Pairs certified benign by the wait rule: every pair inside one group of `rule1_groups`.
inline double rule1_benign_pairs(const LocationList& L) {
  double b = 0;
  for (auto& g : rule1_groups(L)) b += choose2(double(g.size()));
  return b;
}

/// Counts the locations of `g` alone (A = total, B from the wait rule only).
inline LocationTally count_locations(const Gadget& g, Regime regime, const CountOptions& o = {}) {
  auto L = enumerate_locations(g, regime, o);
  LocationTally t;
  t.gadget_name = g.name;
  t.regime = regime;
  t.gate_locations = L.gate_count();
  t.wait_locations = L.wait_count();
  t.total = L.locs.size();
  t.A = t.total;
  t.B = choose2(double(t.total)) - rule1_benign_pairs(L);
  return t;
}

/// Benign pairs of a gadget already tallied (its wait-rule pairs are C(total,2) - B).
inline double own_benign(const LocationTally& t) { return choose2(double(t.total)) - t.B; }

/// Extends a gadget tally by its EC blocks: A = total + (inputs + outputs) x EC total. Pairs
/// inside an input EC, pairs split over two output ECs and wait-rule pairs inside the gadget
/// and inside each output EC are benign.
inline LocationTally with_ec(LocationTally t, int ec_inputs, int ec_outputs, const LocationTally& ec) {
  const double e = double(ec.total);
  t.A = t.total + std::uint64_t(ec_inputs + ec_outputs) * ec.total;
  double benign = own_benign(t) + ec_inputs * choose2(e) + ec_outputs * own_benign(ec) +
                  choose2(double(ec_outputs)) * e * e;
  t.B = choose2(double(t.A)) - benign;
  return t;
}

/// B for a gadget with its EC placements. Counts the gadget, then applies `with_ec`.
inline double classify_benign_pairs(const Gadget& g, Regime regime, const LocationTally& ec,
                                    const CountOptions& o = {}) {
  return with_ec(count_locations(g, regime, o), g.ec_inputs, g.ec_outputs, ec).B;
}

/// One entry of the worst-case search: a gadget tally and how many EC blocks surround it.
struct GadgetEntry {
  LocationTally tally;
  int ec_inputs = 0;
  int ec_outputs = 0;
};

/// The gadget with the most locations once its EC blocks are added. With no gadget entries
/// the EC alone (one input and one output) is returned.
inline LocationTally worst_gadget_A(const std::vector<GadgetEntry>& gadgets, const LocationTally& ec) {
  if (gadgets.empty() && ec.total == 0) throw std::invalid_argument("worst_gadget_A needs at least one tally");
  if (gadgets.empty()) {
    LocationTally t;
    t.gadget_name = "ec_only";
    t.regime = ec.regime;
    return with_ec(t, 1, 1, ec);
  }
  std::optional<LocationTally> best;
  for (auto& e : gadgets) {
    auto t = with_ec(e.tally, e.ec_inputs, e.ec_outputs, ec);
    if (!best || t.A > best->A) best = t;
  }
  return *best;
}

}  // namespace gcq
