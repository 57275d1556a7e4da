#pragma once

// Gadget library over Steane blocks: cat states, majority votes, coherent error correction,
// conversion to a 7-bit repetition code, the T gate, and two Toffoli constructions. Every
// circuit uses resets instead of measurement unless its name says otherwise.

#include "gcq/circuit.hpp"
#include "gcq/steane.hpp"

#include <array>
#include <string>
#include <vector>

namespace gcq::gadgets {

using K = GateKind;

// ---------------------------------------------------------------- small pieces

/// (|0..0> + |1..1>)/sqrt2 on fresh qubits: H then a CNOT chain.
inline void append_cat(Circuit& c, const std::vector<int>& q) {
  c.add(K::H, {q[0]});
  for (std::size_t i = 0; i + 1 < q.size(); ++i) c.add(K::CNOT, {q[i], q[i + 1]});
}

/// Uniform superposition of even-weight strings: H on all but the last, which takes their parity.
inline void append_even_cat(Circuit& c, const std::vector<int>& q) {
  for (std::size_t i = 0; i + 1 < q.size(); ++i) c.add(K::H, {q[i]});
  for (std::size_t i = 0; i + 1 < q.size(); ++i) c.add(K::CNOT, {q[i], q.back()});
}

inline void append_reset(Circuit& c, const std::vector<int>& q) {
  for (int x : q) c.add(K::Reset, {x});
}

inline std::vector<int> pick(const std::vector<int>& reg, const std::vector<int>& idx) {
  std::vector<int> r;
  for (int i : idx) r.push_back(reg.at(i));
  return r;
}

inline Gadget build_cat(int k) {
  if (k < 2 || k > 7) throw std::invalid_argument("cat size must be 2..7");
  Gadget g;
  g.name = "cat" + std::to_string(k);
  g.add_reg("cat", RegKind::Ancilla, k);
  append_cat(g.circ, g.q("cat"));
  g.outputs = {"cat"};
  return g;
}

/// Parity of four targets read through a 4-qubit even cat onto a fifth qubit. A single fault
/// flips at most one target (its Z error) or the vote bit.
inline Gadget build_weak_vote() {
  Gadget g;
  g.name = "weak_vote";
  g.add_reg("targets", RegKind::Ancilla, 4);
  g.add_reg("cat", RegKind::Ancilla, 4);
  g.add_reg("vote", RegKind::Ancilla, 1);
  auto t = g.q("targets"), c = g.q("cat");
  append_even_cat(g.circ, c);
  for (int i = 0; i < 4; ++i) g.circ.add(K::CNOT, {t[i], c[i]});
  for (int i = 0; i < 4; ++i) g.circ.add(K::CNOT, {c[i], g.q("vote", 0)});
  g.inputs = {"targets"};
  g.outputs = {"targets", "vote"};
  return g;
}

/// Three ancillas read q (in the X basis when `x_basis`, else in Z by conjugating q with H) and
/// their pairwise products accumulate the majority on a.
inline Gadget build_strong_vote(bool x_basis = false) {
  Gadget g;
  g.name = "strong_vote";
  g.add_reg("q", RegKind::Ancilla, 1);
  g.add_reg("b", RegKind::Ancilla, 3);
  g.add_reg("a", RegKind::Ancilla, 1);
  int q = g.q("q", 0), a = g.q("a", 0);
  auto b = g.q("b");
  if (!x_basis) g.circ.add(K::H, {q});
  for (int x : b) g.circ.add(K::H, {x});
  for (int x : b) g.circ.add(K::CNOT, {x, q});
  for (int x : b) g.circ.add(K::H, {x});
  if (!x_basis) g.circ.add(K::H, {q});
  g.circ.add(K::CCX, {b[0], b[1], a});
  g.circ.add(K::CCX, {b[0], b[2], a});
  g.circ.add(K::CCX, {b[1], b[2], a});
  g.inputs = {"q"};
  g.outputs = {"q", "a"};
  return g;
}

// ---------------------------------------------------------------- error correction

/// Ancilla registers shared by both halves of an EC pass.
struct EcAncillas {
  std::vector<int> cat, flag, s1, s2, scratch;
};

inline EcAncillas add_ec_ancillas(Gadget& g, const std::string& prefix = "") {
  g.add_reg(prefix + "cat", RegKind::Ancilla, 4);
  g.add_reg(prefix + "flag", RegKind::Ancilla, 2);
  g.add_reg(prefix + "s1", RegKind::Ancilla, 3);
  g.add_reg(prefix + "s2", RegKind::Ancilla, 3);
  g.add_reg(prefix + "scratch", RegKind::Ancilla, 6);
  return {g.q(prefix + "cat"), g.q(prefix + "flag"), g.q(prefix + "s1"), g.q(prefix + "s2"),
          g.q(prefix + "scratch")};
}

/// Verified 4-qubit cat. One fault in the chain H, c0->c1, c1->c2, c2->c3 leaves X on at most
/// one qubit or on c2 c3. The parities c0^c2 and c1^c2 are both odd exactly for X2 and X2 X3, so
/// a Toffoli from the two flags onto c2 leaves at most one flipped qubit; a faulty flag alone
/// never fires it.
inline void append_verified_cat(Circuit& c, const EcAncillas& a) {
  const auto& q = a.cat;
  append_cat(c, q);
  c.add(K::CNOT, {q[0], a.flag[0]});
  c.add(K::CNOT, {q[2], a.flag[0]});
  c.add(K::CNOT, {q[1], a.flag[1]});
  c.add(K::CNOT, {q[2], a.flag[1]});
  c.add(K::CCX, {a.flag[0], a.flag[1], q[2]});
  append_reset(c, a.flag);
}

/// Corrects Z errors on `data` (X errors when the caller conjugates by H): two rounds of the
/// three X-type checks through verified cats, then a Z on qubit j only when both rounds report
/// j's syndrome. Each correction reads private copies of the syndrome, so a fault there touches
/// one data qubit and nothing any later correction reads.
inline void append_ec_half(Circuit& c, const std::vector<int>& data, const EcAncillas& a) {
  for (int round = 0; round < 2; ++round) {
    const auto& s = round ? a.s2 : a.s1;
    for (int k = 0; k < 3; ++k) {
      append_verified_cat(c, a);
      auto supp = steane::check_qubits(k);
      for (int i = 0; i < 4; ++i) c.add(K::CNOT, {a.cat[i], data[supp[i]]});
      for (int x : a.cat) c.add(K::H, {x});
      for (int x : a.cat) c.add(K::CNOT, {x, s[k]});
      append_reset(c, a.cat);
    }
  }
  for (int j = 0; j < 7; ++j) {
    const int pattern = j + 1;
    for (int k = 0; k < 3; ++k) {
      c.add(K::CNOT, {a.s1[k], a.scratch[k]});
      c.add(K::CNOT, {a.s2[k], a.scratch[3 + k]});
    }
    for (int k = 0; k < 3; ++k)
      if (!((pattern >> k) & 1)) {
        c.add(K::X, {a.scratch[k]});
        c.add(K::X, {a.scratch[3 + k]});
      }
    std::vector<int> mcx = a.scratch;
    mcx.push_back(data[j]);
    c.add(K::H, {data[j]});
    c.add(K::MCX, mcx);
    c.add(K::H, {data[j]});
    append_reset(c, a.scratch);
  }
  append_reset(c, a.s1);
  append_reset(c, a.s2);
}

/// Full EC pass: the Z-correcting half, then the same half conjugated by transversal H.
inline void append_ec(Circuit& c, const std::vector<int>& data, const EcAncillas& a) {
  append_ec_half(c, data, a);
  for (int x : data) c.add(K::H, {x});
  append_ec_half(c, data, a);
  for (int x : data) c.add(K::H, {x});
}

inline Gadget build_ec() {
  Gadget g;
  g.name = "ec";
  g.add_reg("d", RegKind::Steane, 7);
  auto a = add_ec_ancillas(g);
  append_ec(g.circ, g.q("d"), a);
  g.inputs = {"d"};
  g.outputs = {"d"};
  return g;
}

/// One EC pass on |0000000>, which leaves |0_L>.
inline Gadget build_zero_prep() {
  Gadget g = build_ec();
  g.name = "zero_prep";
  g.inputs = {};
  return g;
}

/// Textbook correction without cats or repetition: each check's data qubits feed one syndrome
/// qubit directly and a single round drives the coherent correction. A phase fault on a
/// syndrome qubit reaches several data qubits.
inline Gadget build_ec_non_ft() {
  Gadget g;
  g.name = "ec_non_ft";
  g.add_reg("d", RegKind::Steane, 7);
  g.add_reg("s", RegKind::Ancilla, 3);
  auto d = g.q("d"), s = g.q("s");
  auto& c = g.circ;
  auto half = [&](bool z_half) {
    if (z_half)
      for (int x : d) c.add(K::H, {x});
    for (int k = 0; k < 3; ++k)
      for (int q : steane::check_qubits(k)) c.add(K::CNOT, {d[q], s[k]});
    for (int j = 0; j < 7; ++j) {
      const int pattern = j + 1;
      for (int k = 0; k < 3; ++k)
        if (!((pattern >> k) & 1)) c.add(K::X, {s[k]});
      c.add(K::MCX, {s[0], s[1], s[2], d[j]});
      for (int k = 0; k < 3; ++k)
        if (!((pattern >> k) & 1)) c.add(K::X, {s[k]});
    }
    append_reset(c, s);
    if (z_half)
      for (int x : d) c.add(K::H, {x});
  };
  half(false);
  half(true);
  g.inputs = {"d"};
  g.outputs = {"d"};
  return g;
}

/// Shor-style correction with measured cats and classically controlled Paulis. Counted only.
inline Gadget build_ec_measured() {
  Gadget g;
  g.name = "ec_measured";
  g.add_reg("d", RegKind::Steane, 7);
  g.add_reg("cat", RegKind::Ancilla, 4);
  auto d = g.q("d"), cat = g.q("cat");
  auto& c = g.circ;
  for (int half = 0; half < 2; ++half) {
    for (int k = 0; k < 3; ++k) {
      append_cat(c, cat);
      auto supp = steane::check_qubits(k);
      for (int i = 0; i < 4; ++i)
        c.add(half ? K::CZ : K::CNOT, {cat[i], d[supp[i]]});
      for (int x : cat) c.add(K::H, {x});
      for (int x : cat) c.add(K::Measure, {x});
    }
    for (int x : d) c.add(half ? K::X : K::Z, {x});  // the classically selected correction
  }
  g.inputs = {"d"};
  g.outputs = {"d"};
  g.uses_measurement = true;
  return g;
}

// ---------------------------------------------------------------- N and repetition refresh

/// Reads the seven weight-3 logical lines of `data` onto `reps` through unverified 3-qubit even
/// cats; each cat is returned to a state independent of the data before it is reset.
inline void append_n(Circuit& c, const std::vector<int>& data, const std::vector<int>& cat,
                     const std::vector<int>& reps) {
  for (int i = 0; i < 7; ++i) {
    auto line = steane::line_qubits(i);
    append_even_cat(c, cat);
    for (int m = 0; m < 3; ++m) c.add(K::CNOT, {data[line[m]], cat[m]});
    for (int m = 0; m < 3; ++m) c.add(K::CNOT, {cat[m], reps[i]});
    c.add(K::CNOT, {reps[i], cat[2]});
    append_reset(c, cat);
  }
}

/// Replaces a repetition block by fresh bits, each the majority of all seven old bits, computed
/// through its own three-bit counter. One fault leaves at most one fresh bit wrong.
inline void append_refresh(Circuit& c, const std::vector<int>& reps, const std::vector<int>& counter,
                           const std::vector<int>& fresh) {
  for (int i = 0; i < 7; ++i) {
    for (int r : reps) {
      c.add(K::MCX, {r, counter[0], counter[1], counter[2]});
      c.add(K::CCX, {r, counter[0], counter[1]});
      c.add(K::CNOT, {r, counter[0]});
    }
    c.add(K::CNOT, {counter[2], fresh[i]});
    append_reset(c, counter);
  }
}

/// alpha|0_L> + beta|1_L>  ->  alpha|0_L>|0000000> + beta|1_L>|1111111>. With `refresh`, the
/// seven reads are replaced by majority-refreshed bits before output.
inline Gadget build_n(bool refresh = false) {
  Gadget g;
  g.name = refresh ? "n_refresh" : "n";
  g.add_reg("d", RegKind::Steane, 7);
  g.add_reg("cat", RegKind::Ancilla, 3);
  g.add_reg("reads", refresh ? RegKind::Ancilla : RegKind::Repetition, 7);
  append_n(g.circ, g.q("d"), g.q("cat"), g.q("reads"));
  g.inputs = {"d"};
  g.outputs = {"d", "reads"};
  g.ec_inputs = 1;
  g.ec_outputs = 1;
  if (refresh) {
    g.add_reg("counter", RegKind::Ancilla, 3);
    g.add_reg("r", RegKind::Repetition, 7);
    append_refresh(g.circ, g.q("reads"), g.q("counter"), g.q("r"));
    g.outputs = {"d", "r"};
  }
  return g;
}

// ---------------------------------------------------------------- T

/// Registers a T gadget needs besides its data block.
struct TAncillas {
  std::vector<int> magic, cat, reads, counter, bits;
};

inline TAncillas add_t_ancillas(Gadget& g, const std::string& prefix = "") {
  g.add_reg(prefix + "magic", RegKind::Steane, 7);
  g.add_reg(prefix + "cat", RegKind::Ancilla, 3);
  g.add_reg(prefix + "reads", RegKind::Ancilla, 7);
  g.add_reg(prefix + "counter", RegKind::Ancilla, 3);
  g.add_reg(prefix + "bits", RegKind::Repetition, 7);
  return {g.q(prefix + "magic"), g.q(prefix + "cat"), g.q(prefix + "reads"), g.q(prefix + "counter"),
          g.q(prefix + "bits")};
}

/// Magic-state T on `x`: CNOT into the magic block, convert it to a refreshed repetition code,
/// and apply logical S (transversal S-dagger) controlled bitwise by the repetition bits. The
/// dagger variant uses the conjugate magic state and logical S-dagger.
inline void append_t(Circuit& c, const std::vector<int>& x, const TAncillas& a, bool dagger) {
  c.add(dagger ? K::PrepMagicDg : K::PrepMagic, a.magic);
  for (int i = 0; i < 7; ++i) c.add(K::CNOT, {x[i], a.magic[i]});
  append_n(c, a.magic, a.cat, a.reads);
  append_refresh(c, a.reads, a.counter, a.bits);
  for (int i = 0; i < 7; ++i) c.add(dagger ? K::CS : K::CSdg, {a.bits[i], x[i]});
}

/// Returns the T ancillas to |0> for reuse.
inline void append_t_cleanup(Circuit& c, const TAncillas& a) {
  append_reset(c, a.magic);
  append_reset(c, a.reads);
  append_reset(c, a.bits);
}

inline Gadget build_t(bool dagger = false) {
  Gadget g;
  g.name = dagger ? "tdg" : "t";
  g.add_reg("x", RegKind::Steane, 7);
  auto a = add_t_ancillas(g);
  append_t(g.circ, g.q("x"), a, dagger);
  g.inputs = {"x"};
  g.outputs = {"x"};
  g.ec_inputs = 1;
  g.ec_outputs = 1;
  return g;
}

/// Measurement version of the T gadget. Counted only.
inline Gadget build_t_measured() {
  Gadget g;
  g.name = "t_measured";
  g.add_reg("x", RegKind::Steane, 7);
  g.add_reg("magic", RegKind::Steane, 7);
  auto x = g.q("x"), m = g.q("magic");
  g.circ.add(K::PrepMagic, m);
  for (int i = 0; i < 7; ++i) g.circ.add(K::CNOT, {x[i], m[i]});
  for (int i = 0; i < 7; ++i) g.circ.add(K::Measure, {m[i]});
  for (int i = 0; i < 7; ++i) g.circ.add(K::CSdg, {m[i], x[i]});
  g.inputs = {"x"};
  g.outputs = {"x"};
  g.ec_inputs = 1;
  g.ec_outputs = 1;
  g.uses_measurement = true;
  return g;
}

// ---------------------------------------------------------------- bitwise gates

inline Gadget build_bitwise_1q(GateKind k) {
  Gadget g;
  g.name = "bitwise_" + gate_name(k);
  g.add_reg("x", RegKind::Steane, 7);
  for (int q : g.q("x")) g.circ.add(k, {q});
  g.inputs = {"x"};
  g.outputs = {"x"};
  g.ec_inputs = 1;
  g.ec_outputs = 1;
  return g;
}

inline Gadget build_bitwise_cnot() {
  Gadget g;
  g.name = "cnot";
  g.add_reg("a", RegKind::Steane, 7);
  g.add_reg("b", RegKind::Steane, 7);
  for (int i = 0; i < 7; ++i) g.circ.add(K::CNOT, {g.q("a", i), g.q("b", i)});
  g.inputs = {"a", "b"};
  g.outputs = {"a", "b"};
  g.ec_inputs = 2;
  g.ec_outputs = 2;
  return g;
}

// ---------------------------------------------------------------- composites

/// A contiguous run of gates inside a composite gadget: either a verified component (named) or
/// a bitwise layer (empty name).
struct Part {
  std::string component;
  std::size_t begin = 0, end = 0;
};

struct Composite {
  Gadget gadget;
  std::vector<Part> parts;
};

/// Tracks part boundaries while a composite is being built.
struct PartRecorder {
  Composite& comp;
  void mark(const std::string& name, std::size_t begin) {
    std::size_t end = comp.gadget.circ.gates.size();
    if (end > begin) comp.parts.push_back({name, begin, end});
  }
  std::size_t here() const { return comp.gadget.circ.gates.size(); }
};

/// Toffoli from an |AND> resource: CNOTs from the resource into x and y, from z into the third
/// resource block, H on z, refreshed N on x, y, z, then gates controlled bitwise by the
/// repetition bits. Output is on the three resource blocks.
inline Composite build_toffoli_v2() {
  Composite comp;
  Gadget& g = comp.gadget;
  g.name = "toffoli_v2";
  for (auto n : {"a1", "a2", "a3"}) g.add_reg(n, RegKind::Steane, 7);
  for (auto n : {"x", "y", "z"}) g.add_reg(n, RegKind::Steane, 7);
  for (auto n : {"xr", "yr", "zr"}) g.add_reg(n, RegKind::Repetition, 7);
  g.add_reg("cat", RegKind::Ancilla, 3);
  g.add_reg("reads", RegKind::Ancilla, 7);
  g.add_reg("counter", RegKind::Ancilla, 3);
  auto& c = g.circ;
  PartRecorder rec{comp};
  auto q = [&](const char* n) { return g.q(n); };

  std::size_t b = rec.here();
  std::vector<int> and_qubits = q("a1");
  for (auto n : {"a2", "a3"})
    for (int x : g.q(n)) and_qubits.push_back(x);
  c.add(K::PrepAnd, and_qubits);
  rec.mark("resource", b);

  b = rec.here();
  for (int i = 0; i < 7; ++i) {
    c.add(K::CNOT, {g.q("a1", i), g.q("x", i)});
    c.add(K::CNOT, {g.q("a2", i), g.q("y", i)});
    c.add(K::CNOT, {g.q("z", i), g.q("a3", i)});
  }
  for (int x : q("z")) c.add(K::H, {x});
  rec.mark("", b);

  for (auto [src, dst] : {std::pair{"x", "xr"}, {"y", "yr"}, {"z", "zr"}}) {
    b = rec.here();
    append_n(c, q(src), q("cat"), q("reads"));
    append_refresh(c, q("reads"), q("counter"), q(dst));
    rec.mark("n_refresh", b);
    b = rec.here();
    append_reset(c, q("reads"));
    rec.mark("", b);
  }

  b = rec.here();
  for (int i = 0; i < 7; ++i) {
    int a1 = g.q("a1", i), a2 = g.q("a2", i), a3 = g.q("a3", i);
    int xr = g.q("xr", i), yr = g.q("yr", i), zr = g.q("zr", i);
    c.add(K::CZ, {zr, a3});
    c.add(K::CCZ, {a1, a2, zr});
    c.add(K::CCX, {a1, yr, a3});
    c.add(K::CNOT, {yr, a2});
    c.add(K::CCX, {a2, xr, a3});
    c.add(K::CNOT, {xr, a1});
  }
  rec.mark("", b);

  g.inputs = {"x", "y", "z"};
  g.outputs = {"a1", "a2", "a3"};
  g.ec_inputs = 3;
  g.ec_outputs = 3;
  return comp;
}

/// One step of the three-wire Toffoli decomposition with six T-type gates.
struct WireOp {
  GateKind kind;
  std::vector<int> wires;
};

/// The decomposition (wire 2 is the target). As usually drawn it equals Toffoli times a
/// controlled-Z; the last two T-type gates are flipped and S-dagger closes wire 1.
inline std::vector<WireOp> toffoli_decomposition() {
  return {{K::SWAP, {1, 2}}, {K::H, {1}},    {K::CNOT, {2, 1}}, {K::T, {1}},   {K::CNOT, {0, 1}},
          {K::Tdg, {1}},     {K::CNOT, {2, 1}}, {K::T, {1}},    {K::CNOT, {0, 1}}, {K::Tdg, {1}},
          {K::T, {2}},       {K::SWAP, {1, 2}}, {K::CNOT, {0, 1}}, {K::H, {2}},  {K::T, {1}},
          {K::CNOT, {0, 1}}, {K::Tdg, {0}},  {K::Sdg, {1}}};
}

/// Encoded Toffoli from the decomposition: Clifford steps are transversal (logical S-dagger is
/// transversal S), T-type steps are T gadgets, and with `with_ec` every touched block is
/// corrected after each step.
inline Composite build_toffoli_v1(bool with_ec = true) {
  Composite comp;
  Gadget& g = comp.gadget;
  g.name = "toffoli_v1";
  for (auto n : {"q0", "q1", "q2"}) g.add_reg(n, RegKind::Steane, 7);
  auto t = add_t_ancillas(g, "t_");
  EcAncillas ec{};
  if (with_ec) ec = add_ec_ancillas(g, "ec_");
  auto& c = g.circ;
  PartRecorder rec{comp};
  auto block = [&](int w) { return g.q("q" + std::to_string(w)); };

  for (auto& op : toffoli_decomposition()) {
    std::size_t b = rec.here();
    switch (op.kind) {
      case K::T: case K::Tdg:
        append_t(c, block(op.wires[0]), t, op.kind == K::Tdg);
        rec.mark(op.kind == K::T ? "t" : "tdg", b);
        b = rec.here();
        append_t_cleanup(c, t);
        rec.mark("", b);
        break;
      case K::Sdg:
        for (int x : block(op.wires[0])) c.add(K::S, {x});
        rec.mark("", b);
        break;
      default:
        for (int i = 0; i < 7; ++i) {
          std::vector<int> qs;
          for (int w : op.wires) qs.push_back(block(w)[i]);
          c.add(op.kind, qs);
        }
        rec.mark("", b);
    }
    if (with_ec)
      for (int w : op.wires) {
        b = rec.here();
        append_ec(c, block(w), ec);
        rec.mark("ec", b);
      }
  }
  g.inputs = {"q0", "q1", "q2"};
  g.outputs = {"q0", "q1", "q2"};
  g.ec_inputs = 3;
  g.ec_outputs = 3;
  return comp;
}

/// The library by name, for the CLI and reports.
inline Gadget build_by_name(const std::string& n) {
  if (n == "ec") return build_ec();
  if (n == "ec_measured") return build_ec_measured();
  if (n == "ec_non_ft") return build_ec_non_ft();
  if (n == "zero_prep") return build_zero_prep();
  if (n == "t") return build_t(false);
  if (n == "tdg") return build_t(true);
  if (n == "t_measured") return build_t_measured();
  if (n == "n") return build_n(false);
  if (n == "n_refresh") return build_n(true);
  if (n == "toffoli" || n == "toffoli_v2") return build_toffoli_v2().gadget;
  if (n == "toffoli_v1") return build_toffoli_v1().gadget;
  if (n == "cnot") return build_bitwise_cnot();
  if (n == "1q" || n == "h") return build_bitwise_1q(GateKind::H);
  if (n == "x") return build_bitwise_1q(GateKind::X);
  if (n == "z") return build_bitwise_1q(GateKind::Z);
  if (n == "s") return build_bitwise_1q(GateKind::S);
  if (n == "weak_vote") return build_weak_vote();
  if (n == "strong_vote") return build_strong_vote();
  if (n.rfind("cat", 0) == 0 && n.size() == 4) return build_cat(n[3] - '0');
  throw std::invalid_argument("unknown gadget: " + n);
}

}  // namespace gcq::gadgets
