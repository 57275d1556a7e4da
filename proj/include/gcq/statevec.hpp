#pragma once

// Circuit-level state simulation. SparseState keeps only nonzero amplitudes over up to 64
// qubits, which suits encoded blocks whose states have few basis terms; DenseState is a plain
// amplitude vector kept as an independent reference. Mixture carries the probabilistic branches
// that resets create on entangled qubits.

#include "gcq/circuit.hpp"
#include "gcq/linalg.hpp"
#include "gcq/steane.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gcq::sv {

using Key = std::uint64_t;
inline constexpr int kMaxQubits = 64;
inline constexpr double kDropTol = 1e-28;  ///< squared magnitude below which an amplitude is dropped

inline bool bit(Key k, int q) { return (k >> q) & 1u; }
inline Key mask(int q) { return Key{1} << q; }

/// Seven-qubit amplitudes of a|0_L> + b|1_L> keyed by the block's 7-bit word.
inline std::vector<std::pair<std::uint8_t, cplx>> block_terms(cplx a, cplx b) {
  std::vector<std::pair<std::uint8_t, cplx>> t;
  const double s = 1 / std::sqrt(8.0);
  for (int l = 0; l < 2; ++l)
    for (auto w : steane::codewords(l)) t.push_back({w, (l ? b : a) * s});
  return t;
}

inline Key spread(std::uint8_t word, const std::vector<int>& qs, std::size_t offset = 0) {
  Key k = 0;
  for (int i = 0; i < 7; ++i)
    if ((word >> i) & 1) k |= mask(qs.at(offset + i));
  return k;
}

struct SparseState {
  int n = 0;
  std::unordered_map<Key, cplx> amp;

  SparseState() = default;
  explicit SparseState(int n_qubits, Key k = 0) : n(n_qubits) {
    if (n < 0 || n > kMaxQubits) throw std::invalid_argument("sparse state holds at most 64 qubits");
    amp[k] = 1;
  }

  double norm2() const {
    double s = 0;
    for (auto& [k, a] : amp) s += std::norm(a);
    return s;
  }
  void normalize() {
    double s = std::sqrt(norm2());
    if (s == 0) throw std::runtime_error("cannot normalize a zero state");
    for (auto& [k, a] : amp) a /= s;
  }
  cplx inner(const SparseState& o) const {  ///< <this|o>
    cplx s = 0;
    const auto& small = amp.size() <= o.amp.size() ? amp : o.amp;
    const auto& big = amp.size() <= o.amp.size() ? o.amp : amp;
    for (auto& [k, a] : small) {
      auto it = big.find(k);
      if (it != big.end()) s += &small == &amp ? std::conj(a) * it->second : std::conj(it->second) * a;
    }
    return s;
  }
  double prob_one(int q) const {
    double p = 0;
    for (auto& [k, a] : amp)
      if (bit(k, q)) p += std::norm(a);
    return p;
  }

  // ---- primitive kernels
  template <class F>
  void permute(F f) {
    std::unordered_map<Key, cplx> out;
    out.reserve(amp.size());
    for (auto& [k, a] : amp) out[f(k)] += a;
    amp.swap(out);
  }
  template <class F>
  void phase(F f) {
    for (auto& [k, a] : amp) a *= f(k);
  }
  void single(int q, const Mat2& u) {
    std::unordered_map<Key, cplx> out;
    out.reserve(amp.size() * 2);
    for (auto& [k, a] : amp) {
      int b = bit(k, q);
      Key k0 = k & ~mask(q), k1 = k | mask(q);
      if (u(0, b) != cplx(0)) out[k0] += u(0, b) * a;
      if (u(1, b) != cplx(0)) out[k1] += u(1, b) * a;
    }
    prune(out);
    amp.swap(out);
  }
  static void prune(std::unordered_map<Key, cplx>& m) {
    for (auto it = m.begin(); it != m.end();)
      it = std::norm(it->second) < kDropTol ? m.erase(it) : std::next(it);
  }

  void pauli(int q, char p) {
    switch (p) {
      case 'I': return;
      case 'X': return permute([&](Key k) { return k ^ mask(q); });
      case 'Z': return phase([&](Key k) { return bit(k, q) ? cplx(-1) : cplx(1); });
      case 'Y':
        phase([&](Key k) { return bit(k, q) ? cplx(0, -1) : cplx(0, 1); });
        return permute([&](Key k) { return k ^ mask(q); });
      default: throw std::invalid_argument("unknown Pauli letter");
    }
  }

  /// Writes a resource state onto qubits that currently read 0 on every branch.
  void prepare_block(const std::vector<int>& qs, const std::vector<std::pair<Key, cplx>>& terms) {
    Key m = 0;
    for (int q : qs) m |= mask(q);
    std::unordered_map<Key, cplx> out;
    for (auto& [k, a] : amp) {
      if (k & m) throw std::runtime_error("resource block is not fresh");
      for (auto& [t, c] : terms) out[k | t] += a * c;
    }
    amp.swap(out);
  }
};

/// Amplitudes of the injected resources on their declared qubits.
inline std::vector<std::pair<Key, cplx>> resource_terms(GateKind k, const std::vector<int>& q) {
  std::vector<std::pair<Key, cplx>> t;
  const double r = 1 / std::sqrt(2.0);
  if (k == GateKind::PrepMagic || k == GateKind::PrepMagicDg) {
    if (q.size() != 7 && q.size() != 1) throw std::invalid_argument("magic state needs 1 or 7 qubits");
    cplx w = std::polar(1.0, (k == GateKind::PrepMagic ? 1 : -1) * kPi / 4);
    if (q.size() == 1) return {{0, r}, {mask(q[0]), r * w}};
    for (auto& [word, c] : block_terms(r, r * w)) t.push_back({spread(word, q), c});
    return t;
  }
  if (k == GateKind::PrepAnd) {
    if (q.size() != 21 && q.size() != 3) throw std::invalid_argument("AND state needs 3 or 21 qubits");
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        if (q.size() == 3) {
          Key key = (a ? mask(q[0]) : 0) | (b ? mask(q[1]) : 0) | ((a & b) ? mask(q[2]) : 0);
          t.push_back({key, 0.5});
          continue;
        }
        for (auto& [w0, c0] : block_terms(a ? 0 : 1, a ? 1 : 0))
          for (auto& [w1, c1] : block_terms(b ? 0 : 1, b ? 1 : 0))
            for (auto& [w2, c2] : block_terms((a & b) ? 0 : 1, (a & b) ? 1 : 0))
              t.push_back({spread(w0, q, 0) | spread(w1, q, 7) | spread(w2, q, 14), 0.5 * c0 * c1 * c2});
      }
    return t;
  }
  throw std::invalid_argument("not a resource gate");
}

inline Mat2 single_matrix(GateKind k) {
  switch (k) {
    case GateKind::I: return gates::I();
    case GateKind::X: return gates::X();
    case GateKind::Y: return gates::Y();
    case GateKind::Z: return gates::Z();
    case GateKind::H: return gates::H();
    case GateKind::S: return gates::S();
    case GateKind::Sdg: return gates::Sdg();
    case GateKind::T: return gates::T();
    case GateKind::Tdg: return gates::Tdg();
    default: throw std::invalid_argument("not a single-qubit unitary");
  }
}

/// Phase picked up when all listed qubits read 1.
inline cplx controlled_phase_of(GateKind k) {
  switch (k) {
    case GateKind::CZ: case GateKind::CCZ: return -1;
    case GateKind::CS: return cplx(0, 1);
    case GateKind::CSdg: return cplx(0, -1);
    default: throw std::invalid_argument("not a controlled phase");
  }
}

/// Applies any gate except Reset and Measure.
inline void apply(SparseState& s, const Gate& g) {
  const auto& q = g.q;
  auto all_set = [&](Key k, std::size_t upto) {
    for (std::size_t i = 0; i < upto; ++i)
      if (!bit(k, q[i])) return false;
    return true;
  };
  switch (g.kind) {
    case GateKind::I: return;
    case GateKind::X: case GateKind::Y: case GateKind::Z:
      return s.pauli(q[0], gate_name(g.kind)[0]);
    case GateKind::S: case GateKind::Sdg: case GateKind::T: case GateKind::Tdg: {
      cplx ph = single_matrix(g.kind)(1, 1);
      return s.phase([&](Key k) { return bit(k, q[0]) ? ph : cplx(1); });
    }
    case GateKind::H: return s.single(q[0], gates::H());
    case GateKind::CNOT: case GateKind::CCX: case GateKind::MCX:
      return s.permute([&](Key k) { return all_set(k, q.size() - 1) ? k ^ mask(q.back()) : k; });
    case GateKind::SWAP:
      return s.permute([&](Key k) {
        Key a = bit(k, q[0]), b = bit(k, q[1]);
        k &= ~(mask(q[0]) | mask(q[1]));
        return k | (b << q[0]) | (a << q[1]);
      });
    case GateKind::CZ: case GateKind::CCZ: case GateKind::CS: case GateKind::CSdg: {
      cplx ph = controlled_phase_of(g.kind);
      return s.phase([&](Key k) { return all_set(k, q.size()) ? ph : cplx(1); });
    }
    case GateKind::PrepMagic: case GateKind::PrepMagicDg: case GateKind::PrepAnd:
      return s.prepare_block(q, resource_terms(g.kind, q));
    case GateKind::Reset: case GateKind::Measure:
      throw std::invalid_argument(gate_name(g.kind) + " is not unitary; use a Mixture");
  }
}

inline void apply(SparseState& s, const Circuit& c) {
  for (auto& g : c.gates) apply(s, g);
}

/// Whether two normalized states agree up to a global phase.
inline bool same_ray(const SparseState& a, const SparseState& b, double tol = 1e-10) {
  if (a.amp.size() != b.amp.size()) return false;
  return 1 - std::norm(a.inner(b)) < tol;
}

/// Probabilistic mixture of pure branches; resets split branches only when the reset qubits are
/// entangled with the rest, and branches that coincide are merged.
struct Mixture {
  std::vector<std::pair<double, SparseState>> branches;

  Mixture() = default;
  explicit Mixture(SparseState s) {
    s.normalize();
    branches.push_back({1.0, std::move(s)});
  }

  void apply(const Gate& g) {
    if (g.kind == GateKind::Reset) return reset(g.q);
    if (g.kind == GateKind::Measure) throw std::invalid_argument("measurement circuits are counted, not simulated");
    for (auto& [w, s] : branches) sv::apply(s, g);
  }
  void pauli(int q, char p) {
    for (auto& [w, s] : branches) s.pauli(q, p);
  }

  /// Returns every listed qubit to |0>, tracing out what it held.
  void reset(const std::vector<int>& qs) {
    Key m = 0;
    for (int q : qs) m |= mask(q);
    std::vector<std::pair<double, SparseState>> out;
    for (auto& [w, s] : branches) {
      std::unordered_map<Key, SparseState> parts;
      for (auto& [k, a] : s.amp) {
        auto& p = parts[k & m];
        p.n = s.n;
        p.amp[k & ~m] = a;
      }
      for (auto& [v, p] : parts) {
        double pw = p.norm2();
        if (pw < kDropTol) continue;
        p.normalize();
        add_branch(out, w * pw, std::move(p));
      }
    }
    branches.swap(out);
  }

  static void add_branch(std::vector<std::pair<double, SparseState>>& out, double w, SparseState s) {
    for (auto& [w2, s2] : out)
      if (same_ray(s, s2)) {
        w2 += w;
        return;
      }
    out.push_back({w, std::move(s)});
  }

  double total_weight() const {
    double t = 0;
    for (auto& [w, s] : branches) t += w;
    return t;
  }
};

inline void apply(Mixture& m, const Circuit& c) {
  for (auto& g : c.gates) m.apply(g);
}

// ---------------------------------------------------------------- dense reference

/// Full amplitude vector, used to cross-check the sparse kernels on small circuits.
struct DenseState {
  int n = 0;
  std::vector<cplx> amp;

  explicit DenseState(int n_qubits, Key k = 0) : n(n_qubits) {
    if (n > 24) throw std::invalid_argument("dense state capped at 24 qubits");
    amp.assign(std::size_t{1} << n, 0);
    amp[k] = 1;
  }

  /// Applies a 2^m x 2^m matrix on the listed qubits; column index bit j is qubit q[j].
  void apply_matrix(const std::vector<int>& q, const Eigen::MatrixXcd& u) {
    const std::size_t m = q.size(), dim = std::size_t{1} << m;
    std::vector<cplx> out(amp.size(), 0);
    for (std::size_t k = 0; k < amp.size(); ++k) {
      if (amp[k] == cplx(0)) continue;
      std::size_t col = 0, base = k;
      for (std::size_t j = 0; j < m; ++j) {
        col |= ((k >> q[j]) & 1u) << j;
        base &= ~(std::size_t{1} << q[j]);
      }
      for (std::size_t row = 0; row < dim; ++row) {
        cplx c = u(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
        if (c == cplx(0)) continue;
        std::size_t t = base;
        for (std::size_t j = 0; j < m; ++j) t |= ((row >> j) & 1u) << q[j];
        out[t] += c * amp[k];
      }
    }
    amp.swap(out);
  }
};

/// Matrix of a unitary gate on its own qubits, built from textbook definitions.
inline Eigen::MatrixXcd gate_matrix(const Gate& g) {
  const std::size_t m = g.q.size(), dim = std::size_t{1} << m;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  const std::size_t all = dim - 1, ctrl = (dim >> 1) - 1;
  switch (g.kind) {
    case GateKind::CNOT: case GateKind::CCX: case GateKind::MCX:
      u.setZero();
      for (std::size_t c = 0; c < dim; ++c) u((c & ctrl) == ctrl ? c ^ (dim >> 1) : c, c) = 1;
      return u;
    case GateKind::SWAP:
      u.setZero();
      u(0, 0) = u(3, 3) = u(1, 2) = u(2, 1) = 1;
      return u;
    case GateKind::CZ: case GateKind::CCZ: case GateKind::CS: case GateKind::CSdg:
      u(all, all) = controlled_phase_of(g.kind);
      return u;
    default:
      return single_matrix(g.kind);
  }
}

inline void apply(DenseState& s, const Gate& g) { s.apply_matrix(g.q, gate_matrix(g)); }

}  // namespace gcq::sv
