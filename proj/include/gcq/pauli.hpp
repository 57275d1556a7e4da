#pragma once

// Pauli operators as X/Z bit masks and their exact conjugation through Clifford circuits.

#include "gcq/circuit.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gcq {

/// i^phase * X^x Z^z over up to 64 qubits (bit q is qubit q).
struct Pauli {
  std::uint64_t x = 0, z = 0;
  int phase = 0;  ///< power of i, mod 4

  static Pauli single(int q, char p) {
    Pauli r;
    const std::uint64_t m = std::uint64_t{1} << q;
    if (p == 'X' || p == 'Y') r.x = m;
    if (p == 'Z' || p == 'Y') r.z = m;
    if (p == 'Y') r.phase = 1;  // Y = i X Z
    if (p != 'I' && p != 'X' && p != 'Y' && p != 'Z') throw std::invalid_argument("unknown Pauli letter");
    return r;
  }
  static Pauli from_string(const std::string& s) {
    Pauli r;
    for (std::size_t q = 0; q < s.size(); ++q) r = r * single(static_cast<int>(q), s[q]);
    return r;
  }

  char at(int q) const {
    bool bx = (x >> q) & 1, bz = (z >> q) & 1;
    return bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
  }
  std::string str(int n) const {
    std::string s;
    for (int q = 0; q < n; ++q) s += at(q);
    return s;
  }
  int weight() const { return __builtin_popcountll(x | z); }
  bool is_identity() const { return !x && !z; }
  bool operator==(const Pauli& o) const { return x == o.x && z == o.z && (phase & 3) == (o.phase & 3); }
  bool equal_up_to_phase(const Pauli& o) const { return x == o.x && z == o.z; }

  /// Product this * o, tracking the phase from reordering Z past X.
  Pauli operator*(const Pauli& o) const {
    Pauli r;
    r.x = x ^ o.x;
    r.z = z ^ o.z;
    // (X^a Z^b)(X^c Z^d) = (-1)^{b.c} X^{a+c} Z^{b+d}
    int sign = __builtin_popcountll(z & o.x) & 1;
    r.phase = (phase + o.phase + 2 * sign) & 3;
    return r;
  }
};

/// Conjugates p by one gate: p -> G p G^dag. SWAP gates are skipped when `swaps_propagate` is
/// false, which models SWAPs that only stand in for control-unit movement.
inline Pauli conjugate(Pauli p, const Gate& g, bool swaps_propagate = true) {
  auto getx = [&](int q) { return int((p.x >> q) & 1); };
  auto getz = [&](int q) { return int((p.z >> q) & 1); };
  auto setx = [&](int q, int v) { p.x = (p.x & ~(std::uint64_t{1} << q)) | (std::uint64_t(v) << q); };
  auto setz = [&](int q, int v) { p.z = (p.z & ~(std::uint64_t{1} << q)) | (std::uint64_t(v) << q); };
  const auto& q = g.q;
  switch (g.kind) {
    case GateKind::I:
      break;
    case GateKind::Reset:  // whatever the qubit carried is discarded
      setx(q[0], 0);
      setz(q[0], 0);
      break;
    case GateKind::X:  // X Z X = -Z
      if (getz(q[0])) p.phase = (p.phase + 2) & 3;
      break;
    case GateKind::Z:
      if (getx(q[0])) p.phase = (p.phase + 2) & 3;
      break;
    case GateKind::Y:
      if (getx(q[0]) != getz(q[0])) p.phase = (p.phase + 2) & 3;
      break;
    case GateKind::H: {
      int a = getx(q[0]), b = getz(q[0]);
      if (a && b) p.phase = (p.phase + 2) & 3;  // H Y H = -Y
      setx(q[0], b);
      setz(q[0], a);
      break;
    }
    case GateKind::S: case GateKind::Sdg:
      // S X S^dag = i X Z and S (X Z) S^dag = i X; the adjoint picks up -i instead.
      if (getx(q[0])) {
        p.phase = (p.phase + (g.kind == GateKind::S ? 1 : 3)) & 3;
        setz(q[0], getz(q[0]) ^ 1);
      }
      break;
    case GateKind::CNOT: {
      // X_c -> X_c X_t and Z_t -> Z_c Z_t keep the X-before-Z order, so no sign appears.
      int c = q[0], t = q[1];
      setx(t, getx(t) ^ getx(c));
      setz(c, getz(c) ^ getz(t));
      break;
    }
    case GateKind::CZ: {
      int a = q[0], b = q[1];
      int xa = getx(a), za = getz(a), xb = getx(b), zb = getz(b);
      if (xa && xb) p.phase = (p.phase + 2) & 3;  // Z_b X_b = -X_b Z_b
      setz(a, za ^ xb);
      setz(b, zb ^ xa);
      break;
    }
    case GateKind::SWAP:
      if (swaps_propagate) {
        int xa = getx(q[0]), za = getz(q[0]);
        setx(q[0], getx(q[1]));
        setz(q[0], getz(q[1]));
        setx(q[1], xa);
        setz(q[1], za);
      }
      break;
    default:
      throw std::invalid_argument("cannot propagate a Pauli through " + gate_name(g.kind));
  }
  return p;
}

/// Propagates a fault injected after gate `after` (or before the circuit when -1) to the end.
inline Pauli propagate(const Circuit& c, Pauli p, int after = -1, bool swaps_propagate = true) {
  for (std::size_t i = static_cast<std::size_t>(after + 1); i < c.gates.size(); ++i)
    p = conjugate(p, c.gates[i], swaps_propagate);
  return p;
}

}  // namespace gcq
