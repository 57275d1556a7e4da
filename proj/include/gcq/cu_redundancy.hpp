#pragma once

// Three redundant control units: targeted rotations from interleaved controlled-phase
// pulses, syndrome extraction onto an ancilla, and feedback that repairs one flipped unit.

#include "gcq/chain.hpp"
#include "gcq/compiler.hpp"
#include "gcq/linalg.hpp"
#include "gcq/locations.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcq::cu {

/// Rotations applied to every A spin between the three controlled-phase pulses.
/// The closing rotation is fixed so that unhit spins see the identity.
struct RotationTriple {
  Mat2 u1 = Mat2::Identity();
  Mat2 u2 = Mat2::Identity();
  Mat2 u3 = Mat2::Identity();
  Mat2 u4() const { return u3.adjoint() * u2.adjoint() * u1.adjoint(); }
};

/// Which of the middle rotations is switched off during syndrome extraction.
enum class IdleRotation { Second, Third };

struct SyndromeSpec {
  IdleRotation idle = IdleRotation::Second;
  Mat2 u1 = Mat2::Identity();
  Mat2 un = Mat2::Identity();  ///< the middle rotation that stays on

  RotationTriple triple() const {
    RotationTriple t;
    t.u1 = u1;
    (idle == IdleRotation::Second ? t.u3 : t.u2) = un;
    return t;
  }
};

/// Evolution seen by a spin during one pass; hit[j] says whether unit j+1's pulse reached it.
/// Operator order: U1 Z1 U2 Z2 U3 Z3 U4, rightmost acting first.
inline Mat2 single_pass_evolution(const RotationTriple& t, const std::array<bool, 3>& hit) {
  const Mat2 z = gates::Z(), id = Mat2::Identity();
  return t.u1 * (hit[0] ? z : id) * t.u2 * (hit[1] ? z : id) * t.u3 * (hit[2] ? z : id) * t.u4();
}

/// Evolution of the targeted spin over `passes` repetitions with the given units present.
inline Mat2 target_evolution(const RotationTriple& t, const std::array<bool, 3>& present,
                             int passes = 2) {
  Mat2 once = single_pass_evolution(t, present);
  Mat2 m = Mat2::Identity();
  for (int i = 0; i < passes; ++i) m = once * m;
  return m;
}

/// U1 (Z Un Z Un^dag)^2 U1^dag: the residual evolution when one middle rotation is idle.
inline Mat2 v_operator(const Mat2& u1, const Mat2& un) {
  const Mat2 z = gates::Z();
  Mat2 k = z * un * z * un.adjoint();
  return u1 * k * k * u1.adjoint();
}

inline Mat2 v_operator(const SyndromeSpec& s) { return v_operator(s.u1, s.un); }

/// Doubled-sequence evolution of the ancilla when unit `error_on` (1..3, 0 for none) is off.
inline Mat2 syndrome_evolution(const SyndromeSpec& s, int error_on) {
  if (error_on < 0 || error_on > 3) throw std::invalid_argument("error_on must be 0..3");
  std::array<bool, 3> present{true, true, true};
  if (error_on) present[error_on - 1] = false;
  return target_evolution(s.triple(), present, 2);
}

/// Middle rotation turning the residual into X: exp(-i X pi/8).
inline Mat2 flip_rotation() { return gates::pauli_exp(gates::X(), kPi / 8); }

/// Outer rotation for a Hadamard residual: a pi/8 real rotation composed with H.
inline Mat2 hadamard_u1() {
  const double q = std::pow(8.0, 0.25);
  const double c = std::sqrt(std::sqrt(2.0) + 1) / q, s = std::sqrt(std::sqrt(2.0) - 1) / q;
  Mat2 r;
  r << c, -s, s, c;
  return r * gates::H();
}

enum class Residual { X, Z, H };

inline SyndromeSpec syndrome_spec(IdleRotation idle, Residual r) {
  SyndromeSpec s;
  s.idle = idle;
  s.un = flip_rotation();
  s.u1 = r == Residual::X ? Mat2::Identity() : r == Residual::Z ? gates::H() : hadamard_u1();
  return s;
}

// ---------------------------------------------------------------- chain geometry

/// A strip of A slots four sites apart with units parked left of slots 0, 1 and 3.
/// The ancilla is slot 3; moving contents one transfer pair closes a gap of one slot, so
/// the ancilla meets unit 3 at shift 0, unit 2 at shift 2 and unit 1 at shift 3.
struct TripleLayout {
  int n_spins = 0;
  int first_slot = 0;  ///< A position of slot 0
  std::array<int, 3> cu_slots{0, 1, 3};
  int target_slot = 3;

  int slot_pos(int s) const { return first_slot + 4 * s; }
  int cu_pos(int unit) const { return slot_pos(cu_slots.at(unit - 1)) - 1; }
  int ancilla_pos() const { return slot_pos(target_slot); }
  /// Shift (transfer pairs) at which `unit` reaches the ancilla.
  int meeting_shift(int unit) const { return target_slot - cu_slots.at(unit - 1); }
  /// Slots inside the chain.
  int n_slots() const { return (n_spins - first_slot) / 4 + 1; }

  std::string initial_bits(const std::array<int, 3>& units = {1, 1, 1}) const {
    std::string b(n_spins, '0');
    for (int u = 1; u <= 3; ++u) b[cu_pos(u) - 1] = units[u - 1] ? '1' : '0';
    return b;
  }
};

inline void check_pattern(const TripleLayout& d) {
  const auto& s = d.cu_slots;
  if (!(s[1] - s[0] == 1 && s[2] - s[1] == 2) || d.target_slot != s[2])
    throw std::invalid_argument("control units are not in the 1-2-4 pattern");
  if (d.first_slot % 2 == 0 || d.first_slot < 3) throw std::invalid_argument("slot 0 must be an A site past the edge");
  if (d.slot_pos(d.target_slot) > d.n_spins) throw std::invalid_argument("ancilla slot lies outside the chain");
}

/// Default strip: 32 spins, slot 0 at site 15, slot 4 at site 31. The 14 sites of left
/// padding absorb the contents reflected off the end during shifts; they pick up phase
/// garbage that never reaches the slots.
inline TripleLayout triple_layout(int n_spins = 32, int first_slot = 15) {
  TripleLayout d;
  d.n_spins = n_spins;
  d.first_slot = first_slot;
  check_pattern(d);
  return d;
}

/// One pass: U4, pulse at unit 3's shift, U3, pulse at unit 2's shift, U2, pulse at unit 1's
/// shift, U1. Every rotation is applied at home: A contents reflected off the left end during a
/// shift would otherwise miss rotations and act as superposed controls.
inline PulseProgram rotation_pass(const TripleLayout& d, const RotationTriple& t) {
  check_pattern(d);
  PulseProgram p;
  auto rot = [&](const Mat2& u, const char* name) {
    p.note(name);
    p.pulses.push_back(pulse::ga(u));
  };
  auto cp = [&](int unit) {
    const int k = d.meeting_shift(unit);
    if (k) p.append(transfer_program(k));
    p.note("phase from unit " + std::to_string(unit));
    p.pulses.push_back(pulse::beta("C-Z"));
    if (k) p.append(transfer_program(-k));
  };
  rot(t.u4(), "U4");
  cp(3);
  rot(t.u3, "U3");
  cp(2);
  rot(t.u2, "U2");
  cp(1);
  rot(t.u1, "U1");
  return p;
}

/// The pass applied twice, which cancels the single-pulse patterns on neighbouring slots.
inline PulseProgram doubled_rotation_sequence(const TripleLayout& d, const RotationTriple& t) {
  PulseProgram p = rotation_pass(d, t);
  p.append(rotation_pass(d, t));
  return p;
}

/// Which of the three phase pulses of a pass land on `slot` (all units present). Entry j is
/// the pulse taken at unit j+1's meeting shift, whichever unit happens to deliver it.
inline std::array<bool, 3> slot_hits(const TripleLayout& d, int slot) {
  std::array<bool, 3> h{false, false, false};
  for (int pulse_of = 1; pulse_of <= 3; ++pulse_of)
    for (int from = 1; from <= 3; ++from)
      if (d.cu_slots[from - 1] + d.meeting_shift(pulse_of) == slot) h[pulse_of - 1] = true;
  return h;
}

// ---------------------------------------------------------------- state helpers

/// Single-site reduced density matrix.
template <std::size_t W>
Mat2 reduced_site(const SparseChain<W>& s, int p) {
  Mat2 rho = Mat2::Zero();
  for (auto& [k, a] : s.amp) {
    int b = k.get(p - 1);
    rho(b, b) += std::norm(a);
    if (b == 0) {
      Bits<W> k1 = k;
      k1.set(p - 1, true);
      auto it = s.amp.find(k1);
      if (it != s.amp.end()) {
        rho(0, 1) += a * std::conj(it->second);
        rho(1, 0) += it->second * std::conj(a);
      }
    }
  }
  return rho;
}

/// Flips `target` on every branch where all `controls` read 1.
template <std::size_t W>
void controlled_flip(SparseChain<W>& s, int target, const std::vector<int>& controls) {
  decltype(s.amp) out;
  out.reserve(s.amp.size());
  for (auto& [k, a] : s.amp) {
    bool all = true;
    for (int c : controls) all = all && k.get(c - 1);
    Bits<W> kk = k;
    if (all) kk.set(target - 1, !k.get(target - 1));
    out[kk] += a;
  }
  s.amp.swap(out);
}

/// Returns a site to |0>; the site must already be classical to within `tol`.
template <std::size_t W>
void reset_classical_site(SparseChain<W>& s, int p, double tol = 1e-9) {
  double p1 = s.prob_one(p);
  if (p1 > tol && p1 < 1 - tol) throw std::runtime_error("site is not classical; reset would collapse it");
  if (p1 >= 1 - tol) {
    s.project(p, 1);
    s.flip(p);
  } else {
    s.project(p, 0);
  }
}

// ---------------------------------------------------------------- correction

/// Syndrome programs that flip the ancilla exactly when the given unit, or its partner, is off:
/// unit 1 uses an idle second rotation (flags 1 or 2), unit 3 an idle third (flags 2 or 3),
/// unit 2 the H.Z.H composition (flags 2 only).
inline std::vector<SyndromeSpec> syndrome_plan(int unit) {
  switch (unit) {
    case 1: return {syndrome_spec(IdleRotation::Second, Residual::X)};
    case 3: return {syndrome_spec(IdleRotation::Third, Residual::X)};
    case 2:
      return {syndrome_spec(IdleRotation::Third, Residual::H),
              syndrome_spec(IdleRotation::Second, Residual::Z),
              syndrome_spec(IdleRotation::Third, Residual::H)};
    default: throw std::invalid_argument("unit must be 1, 2 or 3");
  }
}

inline PulseProgram syndrome_program(const TripleLayout& d, int unit) {
  PulseProgram p;
  for (auto& s : syndrome_plan(unit)) p.append(doubled_rotation_sequence(d, s.triple()));
  return p;
}

/// One extract-and-feedback round for `unit`: the syndrome lands on the ancilla, the unit is
/// flipped when the ancilla and the two other units all read 1, and the ancilla is reset.
template <std::size_t W>
void correct_cu_triple(SparseChain<W>& s, const TripleLayout& d, int unit) {
  if (unit < 1 || unit > 3) throw std::invalid_argument("unit must be 1, 2 or 3");
  run_unitary(s, syndrome_program(d, unit));
  std::vector<int> controls{d.ancilla_pos()};
  for (int u = 1; u <= 3; ++u)
    if (u != unit) controls.push_back(d.cu_pos(u));
  controlled_flip(s, d.cu_pos(unit), controls);
  reset_classical_site(s, d.ancilla_pos());
}

/// Full maintenance: rounds for units 1, 3, 2; any single flipped unit is restored.
template <std::size_t W>
void correct_all_units(SparseChain<W>& s, const TripleLayout& d) {
  for (int unit : {1, 3, 2}) correct_cu_triple(s, d, unit);
}

// ---------------------------------------------------------------- classical location count

/// Sizes behind one maintenance cycle of a control-unit triple.
struct ClassicalLayout {
  int units = 3;              ///< redundant control units
  int syndrome = 1;           ///< syndrome ancilla
  int station_bits = 4;       ///< switching-station bits touched by a relocation (two per station)
  int controlled_moves = 4;   ///< controlled gates that hand the unit from one station to the next
  int swaps = 28;             ///< 28 past the buffer sites at the lowest level, 7 above it
  int lower_units = 7;        ///< units of the level below, reset from the triple
};

struct ClassicalPart {
  std::string name;
  std::uint64_t steps = 0;
  std::uint64_t locations = 0;
};

struct ClassicalTally {
  std::vector<ClassicalPart> parts;
  std::uint64_t total = 0;
  double pairs = 0;
};

/// Locations of one cycle counted step by step with the physical-model rule (gate, waits on the
/// rest of the block, movement steps over the whole block). Relocation and the pattern switch
/// act on the triple plus the station bits; syndrome rounds act on the triple plus the
/// ancilla. A round for one unit runs its syndrome programs (each a doubled pass of three
/// unit-ancilla contacts and four rotations, with the rotations that meet between passes
/// merged), the controlled feedback and the ancilla reset. The three rounds cover units 1, 3
/// and 2. Each lower unit is then reset by one gate controlled on the triple.
inline ClassicalTally classical_location_count(const ClassicalLayout& lay = {}, const CountOptions& o = {}) {
  ClassicalTally t;
  auto cost = [&](int block, int arity) { return serial_step_locations(block, arity, true, o); };
  auto add = [&](const std::string& name, std::uint64_t steps, std::uint64_t locs) {
    t.parts.push_back({name, steps, locs});
    t.total += locs;
  };
  const int move_block = lay.units + lay.station_bits;
  const int syn_block = lay.units + lay.syndrome;
  add("relocation: controlled gates", lay.controlled_moves, lay.controlled_moves * cost(move_block, 2));
  add("relocation: swaps", lay.swaps, lay.swaps * cost(move_block + 1, 2));
  add("pattern switch", 1, cost(move_block, 1));
  for (int unit : {1, 3, 2}) {
    const std::uint64_t passes = 2 * syndrome_plan(unit).size();
    const std::uint64_t contacts = 3 * passes, rotations = 4 * passes - (passes - 1);
    add("round for unit " + std::to_string(unit), contacts + rotations + 2,
        contacts * cost(syn_block, 2) + rotations * cost(syn_block, 1) + cost(syn_block, syn_block) +
            cost(syn_block, 1));
  }
  add("reset of lower units", lay.lower_units, lay.lower_units * cost(lay.units + 1, lay.units + 1));
  t.pairs = choose2(double(t.total));
  return t;
}

}  // namespace gcq::cu
