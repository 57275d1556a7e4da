#pragma once

#include "gcq/chain.hpp"
#include "gcq/circuit.hpp"
#include "gcq/linalg.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcq {

enum class LayoutKind { Standard, Blocked };
enum class Mode { ALG, EC };

/// Where every computational qubit, switching station and the CU currently sit.
struct DeviceLayout {
  LayoutKind kind = LayoutKind::Standard;
  int n_spins = 0;
  int n_comp = 0;
  std::vector<int> comp_positions;  ///< A sites
  std::vector<int> ss_positions;    ///< A sites, one per block (blocked layout only)
  int padding_left = 0;
  int padding_right = 0;
  int block_size_L = 0;
  int cu_position = 0;  ///< B site of the active CU
  int marker_position = 0;  ///< fixed |1> A site five sites left of the CU home; 0 when absent
  Mode mode = Mode::ALG;
  std::vector<int> ss_labels;  ///< switching bit per block: 1 parks the block's CU
  int active_block = 0;

  bool has_stored_patterns() const {
    if (kind != LayoutKind::Blocked || mode != Mode::ALG) return false;
    return std::count(ss_labels.begin(), ss_labels.end(), 1) > 0;
  }

  int block_period() const { return 6 * (block_size_L + 1); }
  int cu_slot(int block) const { return ss_positions.at(block) + 1; }
  int scratch_slot(int block) const { return ss_positions.at(block) + 2; }

  /// Initial chain bits with the given computational basis values.
  std::string initial_bits(const std::vector<int>& comp_bits = {}) const {
    std::string s(n_spins, '0');
    for (std::size_t i = 0; i < comp_bits.size() && i < comp_positions.size(); ++i)
      if (comp_bits[i]) s[comp_positions[i] - 1] = '1';
    if (marker_position) s[marker_position - 1] = '1';
    if (kind == LayoutKind::Standard) {
      s[cu_position - 1] = '1';
    } else {
      for (std::size_t b = 0; b < ss_positions.size(); ++b) {
        s[ss_positions[b] - 1] = ss_labels[b] ? '1' : '0';
        bool active = mode == Mode::EC || !ss_labels[b];
        s[cu_slot(static_cast<int>(b)) - 1] = active ? '1' : '0';
        s[scratch_slot(static_cast<int>(b)) - 1] = (!active) ? '1' : '0';
      }
    }
    return s;
  }
};

/// 12 spins per computational qubit; qubits on every third A site; CU parked left of qubit 0.
/// The marker variant adds 6 spins per qubit of left padding and a fixed classical |1> five
/// sites left of the CU home, which lets a buffer reset single out the CU.
inline DeviceLayout standard_layout(int n_comp, bool with_marker = false) {
  if (n_comp < 1) throw std::invalid_argument("need at least one computational qubit");
  DeviceLayout d;
  d.kind = LayoutKind::Standard;
  d.n_comp = n_comp;
  const int extra = with_marker ? 6 * n_comp : 0;
  d.n_spins = 12 * n_comp + extra;
  int first = 3 * n_comp + 1;
  if (first % 2 == 0) ++first;
  first += extra;
  for (int j = 0; j < n_comp; ++j) d.comp_positions.push_back(first + 6 * j);
  d.padding_left = first - 2;
  d.padding_right = d.n_spins - d.comp_positions.back();
  d.cu_position = first - 1;
  if (with_marker) d.marker_position = d.cu_position - 5;
  d.mode = Mode::ALG;
  return d;
}

/// Blocks of [SS, CU slot, scratch, 3 empty, L qubits spaced by 6]; L odd.
inline DeviceLayout blocked_layout(int n_blocks, int L, int active_block = 0, Mode mode = Mode::ALG) {
  if (n_blocks < 1 || L < 1 || L % 2 == 0)
    throw std::invalid_argument("blocked layout needs n_blocks >= 1 and odd L");
  if (active_block < 0 || active_block >= n_blocks) throw std::out_of_range("active block");
  DeviceLayout d;
  d.kind = LayoutKind::Blocked;
  d.block_size_L = L;
  int period = 6 * (L + 1);
  int pad = period * std::max(1, n_blocks - 1) / 2 + 6;
  if (pad % 2) ++pad;
  d.padding_left = d.padding_right = pad;
  d.n_spins = 2 * pad + n_blocks * period;
  for (int b = 0; b < n_blocks; ++b) {
    int s = pad + 1 + b * period;
    d.ss_positions.push_back(s);
    for (int i = 0; i < L; ++i) d.comp_positions.push_back(s + 6 + 6 * i);
  }
  d.n_comp = static_cast<int>(d.comp_positions.size());
  d.mode = mode;
  d.active_block = active_block;
  d.ss_labels.assign(n_blocks, 1);
  d.ss_labels[active_block] = 0;
  d.cu_position = d.cu_slot(active_block);
  return d;
}

inline int standard_spin_count(int n_comp) { return 12 * n_comp; }
/// Paired-qubit packing: 10 spins for every 2 qubits (size calculation only).
inline int compact_spin_count(int n_comp) { return 10 * ((n_comp + 1) / 2); }

/// Primitive cost of moving a CU between neighbouring stations.
struct RelocationCost {
  int controlled_gates = 0;
  int swaps = 0;
};
inline RelocationCost relocation_cost(bool lowest_level) {
  return lowest_level ? RelocationCost{4, 28} : RelocationCost{4, 7};
}

// ---------------------------------------------------------------- transfer

/// Exact content permutation under SWAP pulses, including reflection at the chain ends.
struct PositionTracker {
  int n = 0;
  std::vector<int> label_at;  ///< label_at[pos] = original position of the content now at pos
  std::vector<int> pos_of;    ///< pos_of[label] = current position

  explicit PositionTracker(int n_spins = 0) : n(n_spins), label_at(n_spins + 1), pos_of(n_spins + 1) {
    for (int p = 0; p <= n; ++p) label_at[p] = pos_of[p] = p;
  }

  void swap_grouping(PulseKind k) {
    for (auto [l, r] : pair_sites(k, n)) {
      std::swap(label_at[l], label_at[r]);
      pos_of[label_at[l]] = l;
      pos_of[label_at[r]] = r;
    }
  }
  /// k > 0: k (beta, alpha) pairs; k < 0: |k| (alpha, beta) pairs.
  void shift(int k) {
    for (int i = 0; i < std::abs(k); ++i) {
      if (k > 0) { swap_grouping(PulseKind::Beta); swap_grouping(PulseKind::Alpha); }
      else { swap_grouping(PulseKind::Alpha); swap_grouping(PulseKind::Beta); }
    }
  }
};

inline PulseProgram transfer_program(int k) {
  PulseProgram p;
  for (int i = 0; i < std::abs(k); ++i) {
    if (k > 0) { p.push(pulse::beta("SWAP")); p.push(pulse::alpha("SWAP")); }
    else { p.push(pulse::alpha("SWAP")); p.push(pulse::beta("SWAP")); }
  }
  return p;
}

// ---------------------------------------------------------------- logical ops

struct LogicalOp {
  enum class Kind { Transfer, Gate1Q, Gate2Q, MeasureComp, SwitchMode, RelocateCU, BufferReset, CompareGEq };
  Kind kind = Kind::Transfer;
  int a = 0;  ///< from_B / target / control / ss_from / a_width
  int b = 0;  ///< to_B / target / ss_to / b_value
  Mat2 u = Mat2::Identity();
  std::string u_name = "I";
  Mode to = Mode::ALG;

  static LogicalOp transfer(int from_b, int to_b) { LogicalOp o; o.kind = Kind::Transfer; o.a = from_b; o.b = to_b; return o; }
  static LogicalOp gate1q(int t, const std::string& u) {
    LogicalOp o; o.kind = Kind::Gate1Q; o.a = t; o.u_name = u; o.u = gates::by_name(u); return o;
  }
  static LogicalOp gate1q(int t, const Mat2& u) { LogicalOp o; o.kind = Kind::Gate1Q; o.a = t; o.u = u; o.u_name.clear(); return o; }
  static LogicalOp gate2q(int c, int t, const std::string& u) {
    LogicalOp o; o.kind = Kind::Gate2Q; o.a = c; o.b = t; o.u_name = u; o.u = gates::by_name(u); return o;
  }
  static LogicalOp measure(int t) { LogicalOp o; o.kind = Kind::MeasureComp; o.a = t; return o; }
  static LogicalOp switch_mode(Mode m) { LogicalOp o; o.kind = Kind::SwitchMode; o.to = m; return o; }
  static LogicalOp relocate(int from, int to) { LogicalOp o; o.kind = Kind::RelocateCU; o.a = from; o.b = to; return o; }
  static LogicalOp buffer_reset() { LogicalOp o; o.kind = Kind::BufferReset; return o; }
  static LogicalOp compare_geq(int w, int bv) { LogicalOp o; o.kind = Kind::CompareGEq; o.a = w; o.b = bv; return o; }
};

struct CompileResult {
  PulseProgram program;
  DeviceLayout layout;  ///< layout after the program (commit by assignment)
};

// ---------------------------------------------------------------- comparator

/// Reversible r = [a >= b]; a bits MSB first at 0..w-1, ancillas c at w..2w-1, r at 2w.
inline Circuit compile_compare_geq(int a_width, long long b_value) {
  if (a_width < 1) throw std::invalid_argument("a_width must be positive");
  if (b_value < 0 || b_value >= (1LL << a_width)) throw std::invalid_argument("b_value out of range");
  const int w = a_width;
  Circuit c(2 * w + 1);
  auto A = [&](int i) { return i - 1; };      // a_i, 1-indexed from the top bit
  auto C = [&](int i) { return w + i - 1; };  // c_i
  const int r = 2 * w;
  auto bit = [&](int i) { return static_cast<int>((b_value >> (w - i)) & 1); };
  int step = 0;
  auto put = [&](GateKind k, std::vector<int> q) { c.add(k, std::move(q)); c.gates.back().step = step; };
  if (w == 1) {
    if (bit(1) == 0) put(GateKind::X, {r});
    else put(GateKind::CNOT, {A(1), r});
    return c;
  }
  // initial step: r flags a > b so far, c_1 flags equality so far
  if (bit(1) == 0) {
    put(GateKind::CNOT, {A(1), r});
    put(GateKind::CNOT, {A(1), C(1)});
    put(GateKind::X, {C(1)});
  } else {
    put(GateKind::CNOT, {A(1), C(1)});
  }
  for (int n = 2; n < w; ++n) {
    ++step;
    if (bit(n) == 0) {
      put(GateKind::CCX, {C(n - 1), A(n), r});
      put(GateKind::CCX, {C(n - 1), A(n), C(n)});
      put(GateKind::CNOT, {C(n - 1), C(n)});
    } else {
      put(GateKind::CCX, {C(n - 1), A(n), C(n)});
    }
  }
  ++step;
  if (bit(w) == 0) put(GateKind::CNOT, {C(w - 1), r});
  else put(GateKind::CCX, {C(w - 1), A(w), r});
  return c;
}

// ---------------------------------------------------------------- 1-2-4 relabel

/// Qubit map for the relabel circuit: per station b0, b1 (label bits), f (nonzero flag), o (or-ancilla).
struct RelabelMap {
  int n_ss = 0;
  int b0(int i) const { return 4 * i; }
  int b1(int i) const { return 4 * i + 1; }
  int f(int i) const { return 4 * i + 2; }
  int o(int i) const { return 4 * i + 3; }
  int n_qubits() const { return 4 * n_ss; }
};

/// Increment nonzero labels, then set zero labels at offsets 1 and 3 after a nonzero one to 1.
inline Circuit relabel_124_circuit(int n_ss) {
  if (n_ss < 1) throw std::invalid_argument("need at least one station");
  RelabelMap m{n_ss};
  Circuit c(m.n_qubits());
  for (int i = 0; i < n_ss; ++i) {
    c.add(GateKind::X, {m.b0(i)}).add(GateKind::X, {m.b1(i)});
    c.add(GateKind::CCX, {m.b0(i), m.b1(i), m.f(i)});
    c.add(GateKind::X, {m.f(i)}).add(GateKind::X, {m.b0(i)}).add(GateKind::X, {m.b1(i)});
  }
  for (int i = 0; i < n_ss; ++i) {
    c.add(GateKind::CCX, {m.f(i), m.b0(i), m.b1(i)});
    c.add(GateKind::CNOT, {m.f(i), m.b0(i)});
  }
  for (int j = 1; j < n_ss; ++j) {
    if (j >= 3) {
      c.add(GateKind::X, {m.f(j - 1)}).add(GateKind::X, {m.f(j - 3)});
      c.add(GateKind::CCX, {m.f(j - 1), m.f(j - 3), m.o(j)});
      c.add(GateKind::X, {m.o(j)}).add(GateKind::X, {m.f(j - 1)}).add(GateKind::X, {m.f(j - 3)});
    } else {
      c.add(GateKind::CNOT, {m.f(j - 1), m.o(j)});
    }
  }
  for (int j = 1; j < n_ss; ++j) {
    c.add(GateKind::X, {m.f(j)});
    c.add(GateKind::CCX, {m.f(j), m.o(j), m.b0(j)});
    c.add(GateKind::X, {m.f(j)});
  }
  c.schedule_asap();
  return c;
}

/// Direct application of the relabel rule (oracle for the circuit).
inline std::vector<int> relabel_124_rule(const std::vector<int>& labels) {
  if (labels.empty()) throw std::invalid_argument("labels missing");
  if (std::all_of(labels.begin(), labels.end(), [](int x) { return x == 0; }))
    throw std::invalid_argument("all-zero labels leave no active station");
  std::vector<int> out = labels;
  int n = static_cast<int>(labels.size());
  for (int i = 0; i < n; ++i)
    if (labels[i]) out[i] = (labels[i] + 1) % 4;
  for (int j = 0; j < n; ++j) {
    if (labels[j]) continue;
    bool hit = (j >= 1 && labels[j - 1]) || (j >= 3 && labels[j - 3]);
    if (hit) out[j] = 1;
  }
  return out;
}

/// Stations whose CU survives deactivation of zero labels (1-indexed).
inline std::vector<int> surviving_stations(const std::vector<int>& labels) {
  std::vector<int> s;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i]) s.push_back(static_cast<int>(i) + 1);
  return s;
}

// ---------------------------------------------------------------- compiler

namespace detail {

/// Emits pulses while tracking contents and which of them may hold |1>.
class Emitter {
 public:
  explicit Emitter(const DeviceLayout& d) : lay_(d), tr_(d.n_spins) {
    for (int p : d.comp_positions) live_.insert(p);
    for (int p : d.ss_positions) live_.insert(p), live_.insert(p + 2);
    if (d.marker_position) live_.insert(d.marker_position);
    cu_ = d.cu_position;
  }

  PulseProgram prog;

  int pos(int label) const { return tr_.pos_of[label]; }
  int cu_label() const { return cu_; }
  void add_live(int label) { live_.insert(label); }
  void drop_live(int label) { live_.erase(label); }
  int shift_total() const { return shift_; }

  void shift(int k) {
    if (!k) return;
    prog.append(transfer_program(k));
    tr_.shift(k);
    shift_ += k;
  }

  /// +1: CU immediately left of target (beta grouping); -1: immediately right (alpha grouping).
  int side_now(int target_label) const {
    int c = pos(cu_), t = pos(target_label);
    if (!is_b_site(c) || !is_a_site(t)) return 0;
    if (t - c == 1) return +1;
    if (c - t == 1) return -1;
    return 0;
  }

  bool others_on_a(int except) const {
    for (int l : live_)
      if (l != except && l != cu_ && !is_a_site(pos(l))) return false;
    return true;
  }

  /// Shifts until the CU sits next to the target; returns (pairs moved, side).
  std::pair<int, int> align(int target_label) {
    int limit = lay_.n_spins;
    for (int m = 0; m <= limit; ++m) {
      for (int k : {m, -m}) {
        if (m == 0 && k < 0) continue;
        PositionTracker t = tr_;
        t.shift(k);
        int c = t.pos_of[cu_], x = t.pos_of[target_label];
        int side = 0;
        if (is_b_site(c) && is_a_site(x)) side = (x - c == 1) ? 1 : (c - x == 1) ? -1 : 0;
        if (!side) continue;
        bool ok = true;
        for (int l : live_)
          if (l != cu_ && !is_a_site(t.pos_of[l])) ok = false;
        if (!ok) continue;
        shift(k);
        return {k, side};
      }
    }
    throw std::runtime_error("no transfer aligns the CU with the target");
  }

  void controlled(const Mat2& u, int side, const std::string& name) {
    if (side > 0) prog.push(pulse::beta(gates::controlled_left(u), name.empty() ? "" : "C-" + name));
    else prog.push(pulse::alpha(gates::controlled_right(u), name.empty() ? "" : name + "-C"));
  }

  /// Entangler for CU on the given side of the control; returns the pulses used.
  std::vector<GlobalPulse> entangle(int control_label, int side) {
    std::vector<GlobalPulse> seq;
    if (side < 0) {
      seq = {pulse::alpha("Y-C"), pulse::beta("C-X"), pulse::alpha("C-H"), pulse::beta("C-Z"), pulse::alpha("C-H")};
      extra_ = tr_.label_at[pos(control_label) + 2];
    } else {
      seq = {pulse::beta("C-Y"), pulse::alpha("X-C"), pulse::beta("H-C"), pulse::alpha("Z-C"), pulse::beta("H-C")};
      extra_ = tr_.label_at[pos(control_label) - 2];
    }
    if (live_.count(extra_)) throw std::runtime_error("entangler needs an empty A site beyond the control");
    live_.insert(extra_);
    prog.note("entangle");
    for (auto& p : seq) prog.push(p);
    return seq;
  }

  void disentangle(const std::vector<GlobalPulse>& seq) {
    prog.note("disentangle");
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) prog.push(*it);
    live_.erase(extra_);
  }

  const DeviceLayout& layout() const { return lay_; }

 private:
  DeviceLayout lay_;
  PositionTracker tr_;
  std::set<int> live_;
  int cu_ = 0;
  int extra_ = 0;
  int shift_ = 0;
};

inline void check_comp(const DeviceLayout& d, int q) {
  if (q < 0 || q >= d.n_comp) throw std::out_of_range("computational qubit out of range");
}

inline void check_standard(const DeviceLayout& d, const char* what) {
  if (d.kind != LayoutKind::Standard) throw std::invalid_argument(std::string(what) + " needs the standard layout");
}

}  // namespace detail

inline PulseProgram compile_gate1q(const DeviceLayout& d, int t, const Mat2& u, const std::string& name = "") {
  detail::check_comp(d, t);
  detail::Emitter e(d);
  e.prog.note("gate1q");
  auto [k, side] = e.align(d.comp_positions[t]);
  e.controlled(u, side, name);
  e.shift(-k);
  return e.prog;
}

inline PulseProgram compile_gate2q(const DeviceLayout& d, int c, int t, const Mat2& u, const std::string& name = "") {
  detail::check_comp(d, c);
  detail::check_comp(d, t);
  if (c == t) throw std::invalid_argument("Gate2Q control equals target");
  if (d.has_stored_patterns()) throw std::invalid_argument("layout holds parked CU patterns");
  detail::Emitter e(d);
  auto [k1, s1] = e.align(d.comp_positions[c]);
  auto seq = e.entangle(d.comp_positions[c], s1);
  e.prog.note("move conditional CU");
  auto [k2, s2] = e.align(d.comp_positions[t]);
  e.controlled(u, s2, name);
  e.shift(-k2);
  e.disentangle(seq);
  e.shift(-k1);
  return e.prog;
}

/// Entangle, read every B site, un-entangle; meta["readout_site"] is the CU's B site at readout.
inline PulseProgram compile_measure(const DeviceLayout& d, int t) {
  detail::check_comp(d, t);
  if (d.has_stored_patterns()) throw std::invalid_argument("layout holds parked CU patterns");
  detail::Emitter e(d);
  auto [k, s] = e.align(d.comp_positions[t]);
  auto seq = e.entangle(d.comp_positions[t], s);
  e.prog.note("measure B");
  e.prog.meta["readout_site"] = e.pos(e.cu_label());
  e.prog.push(pulse::measure_b());
  e.disentangle(seq);
  e.shift(-k);
  return e.prog;
}

/// Logical outcome from a MeasureB bit string (index i is B site 2(i+1)) and the all-zero background.
inline int decode_measurement(const std::vector<int>& b_bits, long long readout_site, int* discrepancies = nullptr) {
  int d = 0;
  for (int x : b_bits) d += x;
  if (discrepancies) *discrepancies = d;
  return b_bits.at(static_cast<std::size_t>(readout_site / 2 - 1));
}

/// Palindrome that parks (SS=1) or keeps (SS=0) each block's CU; self-inverse.
inline PulseProgram switch_program() {
  PulseProgram p;
  p.note("switch");
  p.push(pulse::beta("C-X"));
  p.push(pulse::alpha("C-H"));
  p.push(pulse::beta("C-Z"));
  p.push(pulse::alpha("C-H"));
  p.push(pulse::beta("C-X"));
  return p;
}

inline CompileResult compile(const DeviceLayout& d, const LogicalOp& op);

inline PulseProgram lower_circuit(const DeviceLayout& d, const Circuit& c);

inline CompileResult compile(const DeviceLayout& d, const LogicalOp& op) {
  using K = LogicalOp::Kind;
  CompileResult r{{}, d};
  switch (op.kind) {
    case K::Transfer: {
      if (op.a == op.b) return r;
      if (!is_b_site(op.a) || !is_b_site(op.b) || op.a < 1 || op.b < 1 || op.a > d.n_spins || op.b > d.n_spins)
        throw std::out_of_range("transfer endpoints must be B sites inside the chain");
      int k = (op.b - op.a) / 2;
      PositionTracker t(d.n_spins);
      t.shift(k);
      if (t.pos_of[op.a] != op.b) throw std::runtime_error("transfer would reflect at the chain end");
      r.program = transfer_program(k);
      return r;
    }
    case K::Gate1Q:
      r.program = compile_gate1q(d, op.a, op.u, op.u_name);
      return r;
    case K::Gate2Q:
      r.program = compile_gate2q(d, op.a, op.b, op.u, op.u_name);
      return r;
    case K::MeasureComp:
      r.program = compile_measure(d, op.a);
      return r;
    case K::SwitchMode: {
      if (d.kind != LayoutKind::Blocked) throw std::invalid_argument("switching needs the blocked layout");
      if (d.mode == op.to) throw std::invalid_argument("already in that mode");
      r.program = switch_program();
      r.layout.mode = op.to;
      return r;
    }
    case K::RelocateCU: {
      if (d.kind != LayoutKind::Blocked || d.mode != Mode::ALG)
        throw std::invalid_argument("relocation needs the blocked layout in ALG mode");
      int nb = static_cast<int>(d.ss_positions.size());
      if (op.a < 0 || op.a >= nb || op.b < 0 || op.b >= nb) throw std::out_of_range("station out of range");
      if (op.a != d.active_block) throw std::invalid_argument("source station does not hold the CU");
      if (op.a == op.b) return r;
      int k = d.block_period() * (op.b - op.a) / 4;
      PositionTracker t(d.n_spins);
      t.shift(k);
      for (int p : d.comp_positions)
        if (t.pos_of[p] != p - 2 * k) throw std::runtime_error("relocation would reflect at the chain end");
      for (int p : d.ss_positions)
        if (t.pos_of[p] != p - 2 * k || t.pos_of[p + 2] != p + 2 - 2 * k)
          throw std::runtime_error("relocation would reflect at the chain end");
      if (t.pos_of[d.cu_position] != d.cu_position + 2 * k) throw std::runtime_error("relocation would reflect");
      PulseProgram& p = r.program;
      p.note("park at source");
      p.push(pulse::alpha("X-C"));
      p.push(pulse::beta("C-X"));
      p.note("carry");
      p.append(transfer_program(k));
      p.note("unpark at destination");
      p.push(pulse::alpha("X-C"));
      p.push(pulse::beta("C-X"));
      DeviceLayout& L = r.layout;
      for (int& x : L.comp_positions) x -= 2 * k;
      for (int& x : L.ss_positions) x -= 2 * k;
      L.ss_labels[op.a] = 1;
      L.ss_labels[op.b] = 0;
      L.active_block = op.b;
      L.cu_position = L.cu_slot(op.b);
      return r;
    }
    case K::BufferReset: {
      detail::check_standard(d, "buffer reset");
      if (!d.marker_position) throw std::invalid_argument("buffer reset needs the marker spin");
      PulseProgram& p = r.program;
      auto sandwich = [&] {
        p.push(pulse::alpha("C-H"));
        p.push(pulse::beta("C-Z"));
        p.push(pulse::alpha("C-H"));
      };
      // One reverse pair puts the marker immediately left of the CU. Copying the CU onto its
      // right A site then completes the only |1>_|1> pattern, and the sandwich stores the CU there.
      p.note("store CU beside the marker");
      p.append(transfer_program(-1));
      p.push(pulse::beta("C-X"));
      sandwich();
      p.note("reset");
      p.push(pulse::reset_b());
      p.note("restore CU");
      sandwich();
      p.push(pulse::beta("C-X"));
      p.append(transfer_program(1));
      return r;
    }
    case K::CompareGEq: {
      detail::check_standard(d, "comparator lowering");
      if (d.n_comp < 2 * op.a + 1) throw std::out_of_range("layout too small for comparator");
      r.program = lower_circuit(d, compile_compare_geq(op.a, op.b));
      return r;
    }
  }
  return r;
}

/// Standard Toffoli decomposition: 6 CNOT, 7 T/T-dagger, 2 H.
inline Circuit toffoli_decomposition() {
  Circuit c(3);
  const int a = 0, b = 1, t = 2;
  c.add(GateKind::H, {t});
  c.add(GateKind::CNOT, {b, t}).add(GateKind::Tdg, {t});
  c.add(GateKind::CNOT, {a, t}).add(GateKind::T, {t});
  c.add(GateKind::CNOT, {b, t}).add(GateKind::Tdg, {t});
  c.add(GateKind::CNOT, {a, t}).add(GateKind::T, {b}).add(GateKind::T, {t});
  c.add(GateKind::H, {t});
  c.add(GateKind::CNOT, {a, b}).add(GateKind::T, {a}).add(GateKind::Tdg, {b});
  c.add(GateKind::CNOT, {a, b});
  return c;
}

inline PulseProgram lower_circuit(const DeviceLayout& d, const Circuit& c) {
  if (c.n_qubits > d.n_comp) throw std::out_of_range("circuit wider than layout");
  PulseProgram p;
  std::function<void(const Gate&)> emit = [&](const Gate& g) {
    const auto& q = g.q;
    switch (g.kind) {
      case GateKind::I: break;
      case GateKind::X: case GateKind::Y: case GateKind::Z: case GateKind::H:
      case GateKind::S: case GateKind::Sdg: case GateKind::T: case GateKind::Tdg: {
        std::string n = gate_name(g.kind);
        p.append(compile_gate1q(d, q[0], gates::by_name(n), n));
        break;
      }
      case GateKind::CNOT: p.append(compile_gate2q(d, q[0], q[1], gates::X(), "X")); break;
      case GateKind::CZ: p.append(compile_gate2q(d, q[0], q[1], gates::Z(), "Z")); break;
      case GateKind::CS: p.append(compile_gate2q(d, q[0], q[1], gates::S(), "S")); break;
      case GateKind::CSdg: p.append(compile_gate2q(d, q[0], q[1], gates::Sdg(), "SDG")); break;
      case GateKind::SWAP:
        emit(Gate{GateKind::CNOT, {q[0], q[1]}});
        emit(Gate{GateKind::CNOT, {q[1], q[0]}});
        emit(Gate{GateKind::CNOT, {q[0], q[1]}});
        break;
      case GateKind::CCX: {
        Circuit t = toffoli_decomposition();
        for (auto h : t.gates) {
          for (int& x : h.q) x = q[x];
          emit(h);
        }
        break;
      }
      default:
        throw std::invalid_argument("cannot lower gate " + gate_name(g.kind));
    }
  };
  for (auto& g : c.gates) emit(g);
  return p;
}

// ---------------------------------------------------------------- JSON

inline LogicalOp logical_op_from_json(const nlohmann::json& j) {
  std::string op = j.at("op").get<std::string>();
  if (op == "Transfer") return LogicalOp::transfer(j.at("from").get<int>(), j.at("to").get<int>());
  if (op == "Gate1Q") return LogicalOp::gate1q(j.at("target").get<int>(), j.value("u", std::string("X")));
  if (op == "Gate2Q")
    return LogicalOp::gate2q(j.at("control").get<int>(), j.at("target").get<int>(), j.value("u", std::string("X")));
  if (op == "MeasureComp") return LogicalOp::measure(j.at("target").get<int>());
  if (op == "SwitchMode") return LogicalOp::switch_mode(j.at("to").get<std::string>() == "EC" ? Mode::EC : Mode::ALG);
  if (op == "RelocateCU") return LogicalOp::relocate(j.at("from").get<int>(), j.at("to").get<int>());
  if (op == "BufferReset") return LogicalOp::buffer_reset();
  if (op == "CompareGEq") return LogicalOp::compare_geq(j.at("a_width").get<int>(), j.at("b_value").get<int>());
  throw std::invalid_argument("unknown op " + op);
}

}  // namespace gcq
