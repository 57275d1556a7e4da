#pragma once

#include "gcq/bits.hpp"
#include "gcq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gcq {

using Rng = std::mt19937_64;

/// Sites are 1-indexed; odd positions are A, even positions are B.
inline bool is_a_site(int pos) { return pos % 2 == 1; }
inline bool is_b_site(int pos) { return pos % 2 == 0; }

enum class PulseKind { Beta, Alpha, GlobalA, GlobalB, ResetA, ResetB, MeasureB };

struct GlobalPulse {
  PulseKind kind = PulseKind::Alpha;
  Mat4 u2 = Mat4::Identity();
  Mat2 u1 = Mat2::Identity();
  std::string label;  ///< shorthand name when the matrix came from one

  bool is_pair() const { return kind == PulseKind::Beta || kind == PulseKind::Alpha; }
  bool is_single() const { return kind == PulseKind::GlobalA || kind == PulseKind::GlobalB; }
  bool is_unitary_kind() const { return is_pair() || is_single(); }
};

namespace pulse {

inline Mat2 gate_from_name(const std::string& g) { return gates::by_name(g); }

/// Two-site matrix from shorthand: SWAP, I, C-G (control left) or G-C (control right).
inline Mat4 pair_from_name(const std::string& n) {
  if (n == "SWAP") return gates::swap();
  if (n == "I") return Mat4::Identity();
  auto dash = n.find('-');
  if (dash == std::string::npos) throw std::invalid_argument("unknown pair shorthand: " + n);
  std::string l = n.substr(0, dash), r = n.substr(dash + 1);
  if (l == "C") return gates::controlled_left(gate_from_name(r));
  if (r == "C") return gates::controlled_right(gate_from_name(l));
  throw std::invalid_argument("unknown pair shorthand: " + n);
}

inline GlobalPulse beta(const Mat4& u, std::string label = {}) {
  GlobalPulse p; p.kind = PulseKind::Beta; p.u2 = u; p.label = std::move(label); return p;
}
inline GlobalPulse alpha(const Mat4& u, std::string label = {}) {
  GlobalPulse p; p.kind = PulseKind::Alpha; p.u2 = u; p.label = std::move(label); return p;
}
inline GlobalPulse beta(const std::string& name) { return beta(pair_from_name(name), name); }
inline GlobalPulse alpha(const std::string& name) { return alpha(pair_from_name(name), name); }
inline GlobalPulse ga(const Mat2& u, std::string label = {}) {
  GlobalPulse p; p.kind = PulseKind::GlobalA; p.u1 = u; p.label = std::move(label); return p;
}
inline GlobalPulse gb(const Mat2& u, std::string label = {}) {
  GlobalPulse p; p.kind = PulseKind::GlobalB; p.u1 = u; p.label = std::move(label); return p;
}
inline GlobalPulse reset_a() { GlobalPulse p; p.kind = PulseKind::ResetA; return p; }
inline GlobalPulse reset_b() { GlobalPulse p; p.kind = PulseKind::ResetB; return p; }
inline GlobalPulse measure_b() { GlobalPulse p; p.kind = PulseKind::MeasureB; return p; }

}  // namespace pulse

/// Ordered pulse list plus free-form annotations keyed by pulse index.
struct PulseProgram {
  std::vector<GlobalPulse> pulses;
  std::vector<std::pair<std::size_t, std::string>> notes;
  std::map<std::string, long long> meta;

  void push(const GlobalPulse& p) { pulses.push_back(p); }
  void note(const std::string& s) { notes.emplace_back(pulses.size(), s); }
  void append(const PulseProgram& o) {
    std::size_t base = pulses.size();
    for (auto& [i, s] : o.notes) notes.emplace_back(base + i, s);
    pulses.insert(pulses.end(), o.pulses.begin(), o.pulses.end());
  }
  std::size_t size() const { return pulses.size(); }
  bool empty() const { return pulses.empty(); }
};

/// Index pairs (left, right) of a pair pulse on an n-spin chain; incomplete pairs skipped.
inline std::vector<std::pair<int, int>> pair_sites(PulseKind k, int n) {
  std::vector<std::pair<int, int>> out;
  int first = (k == PulseKind::Beta) ? 2 : 1;
  for (int l = first; l + 1 <= n; l += 2) out.emplace_back(l, l + 1);
  return out;
}

inline std::vector<int> sublattice_sites(bool a, int n) {
  std::vector<int> out;
  for (int p = a ? 1 : 2; p <= n; p += 2) out.push_back(p);
  return out;
}

// ---------------------------------------------------------------- dense

/// Full amplitude vector; bit p-1 of the index is position p.
struct DenseChain {
  static constexpr int kDefaultCap = 24;

  int n = 0;
  std::vector<cplx> amp;

  DenseChain() = default;
  DenseChain(int n_spins, const std::string& bits, bool allow_large = false) {
    if (n_spins < 2) throw std::invalid_argument("n_spins must be at least 2");
    if (static_cast<int>(bits.size()) != n_spins)
      throw std::invalid_argument("initial bits length does not match n_spins");
    if (n_spins > kDefaultCap && !allow_large)
      throw std::invalid_argument("dense chain above 24 spins needs allow_large");
    n = n_spins;
    amp.assign(std::size_t{1} << n, cplx{0, 0});
    std::size_t idx = 0;
    for (int p = 1; p <= n; ++p) {
      char c = bits[p - 1];
      if (c != '0' && c != '1') throw std::invalid_argument("initial bits must be 0/1");
      if (c == '1') idx |= std::size_t{1} << (p - 1);
    }
    amp[idx] = 1.0;
  }

  double norm() const {
    double s = 0;
    for (auto& a : amp) s += std::norm(a);
    return std::sqrt(s);
  }

  void apply_pair(int l, int r, const Mat4& u) {
    const std::size_t ml = std::size_t{1} << (l - 1), mr = std::size_t{1} << (r - 1);
    for (std::size_t i = 0; i < amp.size(); ++i) {
      if (i & (ml | mr)) continue;
      cplx v[4] = {amp[i], amp[i | mr], amp[i | ml], amp[i | ml | mr]};
      cplx o[4];
      for (int a = 0; a < 4; ++a) {
        o[a] = 0;
        for (int b = 0; b < 4; ++b) o[a] += u(a, b) * v[b];
      }
      amp[i] = o[0]; amp[i | mr] = o[1]; amp[i | ml] = o[2]; amp[i | ml | mr] = o[3];
    }
  }

  void apply_single(int p, const Mat2& u) {
    const std::size_t m = std::size_t{1} << (p - 1);
    for (std::size_t i = 0; i < amp.size(); ++i) {
      if (i & m) continue;
      cplx a0 = amp[i], a1 = amp[i | m];
      amp[i] = u(0, 0) * a0 + u(0, 1) * a1;
      amp[i | m] = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }

  double prob_one(int p) const {
    const std::size_t m = std::size_t{1} << (p - 1);
    double s = 0;
    for (std::size_t i = 0; i < amp.size(); ++i) if (i & m) s += std::norm(amp[i]);
    return s;
  }

  /// Projects site p onto outcome and renormalizes.
  void project(int p, int outcome) {
    const std::size_t m = std::size_t{1} << (p - 1);
    double s = 0;
    for (std::size_t i = 0; i < amp.size(); ++i) {
      bool one = (i & m) != 0;
      if (one != (outcome == 1)) amp[i] = 0; else s += std::norm(amp[i]);
    }
    double f = 1.0 / std::sqrt(s);
    for (auto& a : amp) a *= f;
  }

  void flip(int p) {
    const std::size_t m = std::size_t{1} << (p - 1);
    for (std::size_t i = 0; i < amp.size(); ++i)
      if (!(i & m)) std::swap(amp[i], amp[i | m]);
  }

  cplx amplitude(const std::string& bits) const {
    std::size_t idx = 0;
    for (int p = 1; p <= n; ++p) if (bits[p - 1] == '1') idx |= std::size_t{1} << (p - 1);
    return amp[idx];
  }
};

// ---------------------------------------------------------------- sparse

/// Hashed map of nonzero amplitudes; supports up to 64*W spins.
template <std::size_t W = 2>
struct SparseChain {
  using Key = Bits<W>;
  int n = 0;
  std::unordered_map<Key, cplx, BitsHash> amp;
  double prune = 1e-14;

  SparseChain() = default;
  SparseChain(int n_spins, const std::string& bits) {
    if (n_spins < 2) throw std::invalid_argument("n_spins must be at least 2");
    if (static_cast<int>(bits.size()) != n_spins)
      throw std::invalid_argument("initial bits length does not match n_spins");
    if (static_cast<std::size_t>(n_spins) > Key::capacity)
      throw std::invalid_argument("chain exceeds sparse key width");
    n = n_spins;
    Key k;
    for (int p = 1; p <= n; ++p) {
      char c = bits[p - 1];
      if (c != '0' && c != '1') throw std::invalid_argument("initial bits must be 0/1");
      if (c == '1') k.set(p - 1, true);
    }
    amp[k] = 1.0;
  }

  double norm() const {
    double s = 0;
    for (auto& [k, a] : amp) s += std::norm(a);
    return std::sqrt(s);
  }

  static bool col_trivial(const Mat4& u, int v) {
    for (int r = 0; r < 4; ++r)
      if (std::abs(u(r, v) - (r == v ? cplx(1) : cplx(0))) > 1e-15) return false;
    return true;
  }

  void apply_pairs(const std::vector<std::pair<int, int>>& pairs, const Mat4& u) {
    bool triv[4];
    for (int v = 0; v < 4; ++v) triv[v] = col_trivial(u, v);
    if (triv[0] && triv[1] && triv[2] && triv[3]) return;
    // pair lookup by left site so set bits can find their pair quickly
    std::vector<int> pair_of(n + 2, -1);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      pair_of[pairs[i].first] = static_cast<int>(i);
      pair_of[pairs[i].second] = static_cast<int>(i);
    }
    std::unordered_map<Key, cplx, BitsHash> out;
    out.reserve(amp.size() * 2);
    std::vector<std::pair<Key, cplx>> cur, nxt;
    std::vector<int> touched;
    for (auto& [k0, a0] : amp) {
      cur.clear();
      cur.emplace_back(k0, a0);
      touched.clear();
      if (triv[0]) {
        k0.for_each_set([&](std::size_t b) {
          int pi = pair_of[static_cast<int>(b) + 1];
          if (pi >= 0 && (touched.empty() || touched.back() != pi)) touched.push_back(pi);
        });
      } else {
        for (std::size_t i = 0; i < pairs.size(); ++i) touched.push_back(static_cast<int>(i));
      }
      for (int pi : touched) {
        auto [l, r] = pairs[pi];
        int v = 2 * k0.get(l - 1) + k0.get(r - 1);
        if (triv[v]) continue;
        nxt.clear();
        for (auto& [k, a] : cur) {
          for (int row = 0; row < 4; ++row) {
            cplx c = u(row, v);
            if (std::abs(c) < 1e-15) continue;
            Key kk = k;
            kk.set(l - 1, row >> 1);
            kk.set(r - 1, row & 1);
            nxt.emplace_back(kk, a * c);
          }
        }
        std::swap(cur, nxt);
      }
      for (auto& [k, a] : cur) out[k] += a;
    }
    amp.clear();
    for (auto& [k, a] : out)
      if (std::abs(a) > prune) amp.emplace(k, a);
  }

  void apply_sites(const std::vector<int>& sites, const Mat2& u) {
    bool t0 = std::abs(u(0, 0) - 1.0) < 1e-15 && std::abs(u(1, 0)) < 1e-15;
    for (int p : sites) {
      if (t0) {
        bool any = false;
        for (auto& [k, a] : amp) if (k.get(p - 1)) { any = true; break; }
        if (!any) continue;
      }
      std::unordered_map<Key, cplx, BitsHash> out;
      out.reserve(amp.size() * 2);
      for (auto& [k, a] : amp) {
        int v = k.get(p - 1);
        for (int row = 0; row < 2; ++row) {
          cplx c = u(row, v);
          if (std::abs(c) < 1e-15) continue;
          Key kk = k;
          kk.set(p - 1, row);
          out[kk] += a * c;
        }
      }
      amp.clear();
      for (auto& [k, a] : out)
        if (std::abs(a) > prune) amp.emplace(k, a);
    }
  }

  double prob_one(int p) const {
    double s = 0;
    for (auto& [k, a] : amp) if (k.get(p - 1)) s += std::norm(a);
    return s;
  }

  void project(int p, int outcome) {
    double s = 0;
    for (auto it = amp.begin(); it != amp.end();) {
      if (static_cast<int>(it->first.get(p - 1)) != outcome) it = amp.erase(it);
      else { s += std::norm(it->second); ++it; }
    }
    double f = 1.0 / std::sqrt(s);
    for (auto& [k, a] : amp) a *= f;
  }

  void flip(int p) {
    std::unordered_map<Key, cplx, BitsHash> out;
    out.reserve(amp.size());
    for (auto& [k, a] : amp) { Key kk = k; kk.flip(p - 1); out.emplace(kk, a); }
    amp.swap(out);
  }

  bool is_classical_one(int p) const { return prob_one(p) > 1 - 1e-12; }
};

// ---------------------------------------------------------------- product

/// Every spin holds its own 2-vector; pair pulses must not entangle.
struct ProductChain {
  int n = 0;
  std::vector<Vec2> site;  ///< site[p-1]
  double tol = 1e-10;

  ProductChain() = default;
  ProductChain(int n_spins, const std::string& bits) {
    if (n_spins < 2) throw std::invalid_argument("n_spins must be at least 2");
    if (static_cast<int>(bits.size()) != n_spins)
      throw std::invalid_argument("initial bits length does not match n_spins");
    n = n_spins;
    site.resize(n);
    for (int p = 1; p <= n; ++p) {
      char c = bits[p - 1];
      if (c != '0' && c != '1') throw std::invalid_argument("initial bits must be 0/1");
      site[p - 1] = c == '1' ? Vec2(0, 1) : Vec2(1, 0);
    }
  }

  double norm() const {
    double s = 1;
    for (auto& v : site) s *= v.squaredNorm();
    return std::sqrt(s);
  }

  void apply_pair(int l, int r, const Mat4& u) {
    Eigen::Vector4cd v;
    const Vec2& a = site[l - 1];
    const Vec2& b = site[r - 1];
    v << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
    Eigen::Vector4cd w = u * v;
    Mat2 m;
    m << w(0), w(1), w(2), w(3);
    int j = m.col(0).norm() >= m.col(1).norm() ? 0 : 1;
    Vec2 lv = m.col(j);
    double ln = lv.norm();
    if (ln < 1e-300) throw std::runtime_error("product pulse produced a zero vector");
    lv /= ln;
    Vec2 rv = (lv.adjoint() * m).transpose();
    Mat2 rebuilt = lv * rv.transpose();
    if ((rebuilt - m).cwiseAbs().maxCoeff() > tol)
      throw std::runtime_error("pair pulse entangles sites " + std::to_string(l) + "," +
                               std::to_string(r) + " in product representation");
    site[l - 1] = lv;
    site[r - 1] = rv;
  }

  void apply_single(int p, const Mat2& u) { site[p - 1] = u * site[p - 1]; }
  double prob_one(int p) const { return std::norm(site[p - 1](1)) / site[p - 1].squaredNorm(); }
  void project(int p, int outcome) {
    Vec2 v = outcome ? Vec2(0, site[p - 1](1)) : Vec2(site[p - 1](0), 0);
    site[p - 1] = v / v.norm();
  }
  void flip(int p) { std::swap(site[p - 1](0), site[p - 1](1)); }
  bool is_classical_one(int p) const { return prob_one(p) > 1 - 1e-12; }
  bool is_classical_zero(int p) const { return prob_one(p) < 1e-12; }
};

// ---------------------------------------------------------------- pulses

namespace detail {

template <class S>
void apply_pair_pulse(S& s, PulseKind k, const Mat4& u) {
  auto pairs = pair_sites(k, s.n);
  if constexpr (requires { s.apply_pairs(pairs, u); }) {
    s.apply_pairs(pairs, u);
  } else {
    for (auto [l, r] : pairs) s.apply_pair(l, r, u);
  }
}

template <class S>
void apply_single_pulse(S& s, bool a, const Mat2& u) {
  auto sites = sublattice_sites(a, s.n);
  if constexpr (requires { s.apply_sites(sites, u); }) {
    s.apply_sites(sites, u);
  } else {
    for (int p : sites) s.apply_single(p, u);
  }
}

template <class S>
int measure_site(S& s, int p, Rng& rng) {
  double p1 = s.prob_one(p);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int out = u(rng) < p1 ? 1 : 0;
  s.project(p, out);
  return out;
}

}  // namespace detail

/// Applies one pulse in place; returns the sampled B bits for MeasureB, else empty.
template <class S>
std::vector<int> apply_pulse(S& s, const GlobalPulse& p, Rng& rng) {
  switch (p.kind) {
    case PulseKind::Beta:
    case PulseKind::Alpha:
      detail::apply_pair_pulse(s, p.kind, p.u2);
      return {};
    case PulseKind::GlobalA:
      detail::apply_single_pulse(s, true, p.u1);
      return {};
    case PulseKind::GlobalB:
      detail::apply_single_pulse(s, false, p.u1);
      return {};
    case PulseKind::ResetA:
    case PulseKind::ResetB:
      for (int q : sublattice_sites(p.kind == PulseKind::ResetA, s.n))
        if (detail::measure_site(s, q, rng)) s.flip(q);
      return {};
    case PulseKind::MeasureB: {
      std::vector<int> bits;
      for (int q : sublattice_sites(false, s.n)) bits.push_back(detail::measure_site(s, q, rng));
      return bits;
    }
  }
  return {};
}

/// Unitary-only convenience: throws if the pulse needs randomness.
template <class S>
void apply_pulse(S& s, const GlobalPulse& p) {
  if (!p.is_unitary_kind()) throw std::invalid_argument("non-unitary pulse needs a random source");
  Rng dummy(0);
  apply_pulse(s, p, dummy);
}

/// Runs a program; returns one bit string per MeasureB pulse.
template <class S>
std::vector<std::vector<int>> run_program(S& s, const PulseProgram& prog, Rng& rng) {
  std::vector<std::vector<int>> meas;
  for (auto& p : prog.pulses) {
    auto r = apply_pulse(s, p, rng);
    if (p.kind == PulseKind::MeasureB) meas.push_back(std::move(r));
  }
  return meas;
}

template <class S>
void run_unitary(S& s, const PulseProgram& prog) {
  for (auto& p : prog.pulses) apply_pulse(s, p);
}

// ---------------------------------------------------------------- overlaps

inline double fidelity(const DenseChain& a, const DenseChain& b) {
  if (a.n != b.n) throw std::invalid_argument("fidelity: dimension mismatch");
  cplx s = 0;
  for (std::size_t i = 0; i < a.amp.size(); ++i) s += std::conj(a.amp[i]) * b.amp[i];
  return std::norm(s);
}

template <std::size_t W>
cplx inner(const SparseChain<W>& a, const SparseChain<W>& b) {
  cplx s = 0;
  const auto& small = a.amp.size() <= b.amp.size() ? a.amp : b.amp;
  const auto& big = a.amp.size() <= b.amp.size() ? b.amp : a.amp;
  bool a_small = &small == &a.amp;
  for (auto& [k, v] : small) {
    auto it = big.find(k);
    if (it == big.end()) continue;
    s += a_small ? std::conj(v) * it->second : std::conj(it->second) * v;
  }
  return s;
}

template <std::size_t W>
double fidelity(const SparseChain<W>& a, const SparseChain<W>& b) {
  if (a.n != b.n) throw std::invalid_argument("fidelity: dimension mismatch");
  return std::norm(inner(a, b));
}

inline double fidelity(const ProductChain& a, const ProductChain& b) {
  if (a.n != b.n) throw std::invalid_argument("fidelity: dimension mismatch");
  double f = 1;
  for (int i = 0; i < a.n; ++i) {
    cplx s = a.site[i].dot(b.site[i]);
    f *= std::norm(s) / (a.site[i].squaredNorm() * b.site[i].squaredNorm());
  }
  return f;
}

template <std::size_t W>
DenseChain to_dense(const SparseChain<W>& s, bool allow_large = false) {
  DenseChain d(s.n, std::string(s.n, '0'), allow_large);
  d.amp.assign(d.amp.size(), 0);
  for (auto& [k, a] : s.amp) {
    std::size_t idx = 0;
    for (int p = 0; p < s.n; ++p) if (k.get(p)) idx |= std::size_t{1} << p;
    d.amp[idx] = a;
  }
  return d;
}

template <std::size_t W = 2>
SparseChain<W> to_sparse(const ProductChain& pc) {
  SparseChain<W> s(pc.n, std::string(pc.n, '0'));
  s.amp.clear();
  std::vector<std::pair<Bits<W>, cplx>> cur{{Bits<W>{}, cplx(1)}};
  for (int p = 0; p < pc.n; ++p) {
    std::vector<std::pair<Bits<W>, cplx>> nxt;
    for (auto& [k, a] : cur)
      for (int b = 0; b < 2; ++b) {
        cplx c = pc.site[p](b);
        if (std::abs(c) < 1e-15) continue;
        Bits<W> kk = k;
        kk.set(p, b);
        nxt.emplace_back(kk, a * c);
      }
    cur.swap(nxt);
  }
  for (auto& [k, a] : cur) s.amp[k] += a;
  return s;
}

// ---------------------------------------------------------------- text format

namespace text {

inline std::string format_complex(cplx c) {
  std::ostringstream os;
  os << std::setprecision(17) << c.real();
  double im = c.imag();
  if (std::signbit(im)) os << "-" << std::setprecision(17) << -im << "j";
  else os << "+" << std::setprecision(17) << im << "j";
  return os.str();
}

/// Parses re+imj, re-imj, re, or imj.
inline cplx parse_complex(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty complex literal");
  std::string t = s;
  bool has_j = t.back() == 'j' || t.back() == 'J';
  if (!has_j) return {std::stod(t), 0.0};
  t.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t i = t.size(); i-- > 1;) {
    if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') { split = i; break; }
  }
  if (split == std::string::npos) {
    if (t.empty() || t == "+") return {0, 1};
    if (t == "-") return {0, -1};
    return {0, std::stod(t)};
  }
  std::string re = t.substr(0, split), im = t.substr(split);
  double imv = (im == "+") ? 1.0 : (im == "-") ? -1.0 : std::stod(im);
  return {std::stod(re), imv};
}

inline std::string kind_token(PulseKind k) {
  switch (k) {
    case PulseKind::Beta: return "BETA";
    case PulseKind::Alpha: return "ALPHA";
    case PulseKind::GlobalA: return "GA";
    case PulseKind::GlobalB: return "GB";
    case PulseKind::ResetA: return "RESETA";
    case PulseKind::ResetB: return "RESETB";
    case PulseKind::MeasureB: return "MEASB";
  }
  return "?";
}

inline void write_program(std::ostream& os, const PulseProgram& prog) {
  for (auto& p : prog.pulses) {
    os << kind_token(p.kind);
    if (p.is_pair() || p.is_single()) {
      if (!p.label.empty()) {
        os << ' ' << p.label;
      } else if (p.is_pair()) {
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c) os << ' ' << format_complex(p.u2(r, c));
      } else {
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) os << ' ' << format_complex(p.u1(r, c));
      }
    }
    os << '\n';
  }
}

inline std::string to_string(const PulseProgram& prog) {
  std::ostringstream os;
  write_program(os, prog);
  return os.str();
}

/// Reads one pulse per line; blank lines and lines starting with # are ignored.
inline PulseProgram parse_program(std::istream& is) {
  PulseProgram prog;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind) || kind[0] == '#') continue;
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + why);
    };
    if (kind == "BETA" || kind == "ALPHA") {
      Mat4 u;
      std::string label;
      if (tok.size() == 1) {
        u = pulse::pair_from_name(tok[0]);
        label = tok[0];
      } else if (tok.size() == 16) {
        for (int i = 0; i < 16; ++i) u(i / 4, i % 4) = parse_complex(tok[i]);
      } else {
        fail("pair pulse needs a shorthand or 16 entries");
      }
      if (!is_unitary(u)) fail("pair matrix is not unitary");
      prog.push(kind == "BETA" ? pulse::beta(u, label) : pulse::alpha(u, label));
    } else if (kind == "GA" || kind == "GB") {
      Mat2 u;
      std::string label;
      if (tok.size() == 1) {
        u = gates::by_name(tok[0]);
        label = tok[0];
      } else if (tok.size() == 4) {
        for (int i = 0; i < 4; ++i) u(i / 2, i % 2) = parse_complex(tok[i]);
      } else {
        fail("single-site pulse needs a shorthand or 4 entries");
      }
      if (!is_unitary(u)) fail("single-site matrix is not unitary");
      prog.push(kind == "GA" ? pulse::ga(u, label) : pulse::gb(u, label));
    } else if (kind == "RESETA" && tok.empty()) {
      prog.push(pulse::reset_a());
    } else if (kind == "RESETB" && tok.empty()) {
      prog.push(pulse::reset_b());
    } else if (kind == "MEASB" && tok.empty()) {
      prog.push(pulse::measure_b());
    } else {
      fail("malformed pulse: " + kind);
    }
  }
  return prog;
}

inline PulseProgram parse_program(const std::string& s) {
  std::istringstream is(s);
  return parse_program(is);
}

}  // namespace text

}  // namespace gcq
