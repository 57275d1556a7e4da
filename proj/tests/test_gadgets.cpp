#include "gcq/ft_verify.hpp"
#include "gcq/gadgets.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

using namespace gcq;
using sv::Key;

namespace {

sv::Mixture run(const Gadget& g, sv::SparseState s) {
  sv::Mixture m(std::move(s));
  for (auto& gt : g.circ.gates) m.apply(gt);
  return m;
}

/// Probability that qubit q reads 1, over all branches.
double prob_one(const sv::Mixture& m, int q) {
  double p = 0;
  for (auto& [w, s] : m.branches) p += w * s.prob_one(q);
  return p;
}

Key mask_of(const std::vector<int>& qs) {
  Key k = 0;
  for (int q : qs) k |= sv::mask(q);
  return k;
}

/// Encoded basis or superposed logical state of one Steane block.
sv::SparseState encoded(int n, const std::vector<int>& block, cplx a, cplx b) {
  sv::SparseState s(n);
  s.amp.clear();
  ft::OutputBlock ob{block, RegKind::Steane};
  ft::add_encoded(s, {ob}, 0, 0, a);
  ft::add_encoded(s, {ob}, 1, 0, b);
  s.normalize();
  return s;
}

}  // namespace

TEST(Gadgets, CatIsGhz) {
  for (int k = 2; k <= 7; ++k) {
    auto g = gadgets::build_cat(k);
    sv::SparseState s(k);
    sv::apply(s, g.circ);
    ASSERT_EQ(s.amp.size(), 2u);
    EXPECT_NEAR(std::abs(s.amp[0] - 1 / std::sqrt(2.0)), 0, 1e-12);
    EXPECT_NEAR(std::abs(s.amp[(Key{1} << k) - 1] - 1 / std::sqrt(2.0)), 0, 1e-12);
  }
  EXPECT_THROW(gadgets::build_cat(1), std::invalid_argument);
}

TEST(Gadgets, WeakVoteReadsTheParityOfItsTargets) {
  auto g = gadgets::build_weak_vote();
  auto t = g.q("targets");
  for (int v = 0; v < 16; ++v) {
    Key start = 0;
    for (int i = 0; i < 4; ++i)
      if ((v >> i) & 1) start |= sv::mask(t[i]);
    auto m = run(g, sv::SparseState(g.circ.n_qubits, start));
    EXPECT_NEAR(prob_one(m, g.q("vote", 0)), std::popcount(unsigned(v)) & 1, 1e-12) << v;
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(prob_one(m, t[i]), (v >> i) & 1, 1e-12);
  }
}

TEST(Gadgets, StrongVoteCopiesTheValueInTheChosenBasis) {
  for (bool xb : {false, true}) {
    auto g = gadgets::build_strong_vote(xb);
    const int q = g.q("q", 0), a = g.q("a", 0);
    for (int v = 0; v < 2; ++v) {
      sv::SparseState s(g.circ.n_qubits, v ? sv::mask(q) : 0);
      if (xb) sv::apply(s, Gate{GateKind::H, {q}, -1});  // |+> or |->
      auto m = run(g, s);
      EXPECT_NEAR(prob_one(m, a), v, 1e-12);
      if (!xb) {
        EXPECT_NEAR(prob_one(m, q), v, 1e-12);
      }
    }
  }
}

TEST(Gadgets, CleanErrorCorrectionAndZeroPreparation) {
  for (auto c : {ft::case_ec(), ft::case_zero_prep()}) {
    c.decode = false;
    EXPECT_NEAR(ft::run_case(c), 1, 1e-9) << c.gadget.name;
  }
}

TEST(Gadgets, ErrorCorrectionFixesEverySingleInputError) {
  auto c = ft::case_ec();
  c.decode = false;  // the gadget itself must remove the error
  int fixed = 0;
  for (int q : c.gadget.q("d"))
    for (char p : {'X', 'Y', 'Z'}) {
      double f = ft::run_with_input_error(c, q, p);
      EXPECT_NEAR(f, 1, 1e-9) << "qubit " << q << " " << p;
      fixed += f > 1 - 1e-9;
    }
  EXPECT_EQ(fixed, 21);
}

TEST(Gadgets, TwoInputErrorsDefeatErrorCorrection) {
  auto c = ft::case_ec();
  c.decode = false;
  c.input.pauli(c.gadget.q("d", 0), 'X');
  EXPECT_LT(ft::run_with_input_error(c, c.gadget.q("d", 1), 'X'), 0.5);
}

TEST(Gadgets, ZeroPreparationYieldsLogicalZero) {
  auto g = gadgets::build_zero_prep();
  auto m = run(g, sv::SparseState(g.circ.n_qubits));
  auto target = encoded(g.circ.n_qubits, g.q("d"), 1, 0);
  EXPECT_NEAR(ft::captured_weight(m, mask_of(g.q("d")), {target}), 1, 1e-9);
}

TEST(Gadgets, TGadgetOnLogicalPlus) {
  const double r = 1 / std::sqrt(2.0);
  for (bool dagger : {false, true}) {
    auto g = gadgets::build_t(dagger);
    const int n = g.circ.n_qubits;
    auto m = run(g, encoded(n, g.q("x"), r, r));
    const cplx w = std::polar(1.0, (dagger ? -1 : 1) * std::numbers::pi / 4);
    auto target = encoded(n, g.q("x"), r, r * w);
    EXPECT_NEAR(ft::captured_weight(m, mask_of(g.q("x")), {target}), 1, 1e-9);
    // T|+> and T^dagger|+> are distinguishable, so the check has teeth.
    auto wrong = encoded(n, g.q("x"), r, r * std::conj(w));
    EXPECT_LT(ft::captured_weight(m, mask_of(g.q("x")), {wrong}), 0.6);
  }
}

TEST(Gadgets, NCopiesTheLogicalValueIntoSevenBits) {
  for (bool refresh : {false, true}) {
    auto g = gadgets::build_n(refresh);
    auto out = g.q(refresh ? "r" : "reads");
    const int n = g.circ.n_qubits;
    for (int v = 0; v < 2; ++v) {
      auto m = run(g, encoded(n, g.q("d"), v == 0, v == 1));
      for (int q : out) EXPECT_NEAR(prob_one(m, q), v, 1e-12);
    }
    // On |+_L> the bits are perfectly correlated with the block and with each other.
    const double r = 1 / std::sqrt(2.0);
    auto m = run(g, encoded(n, g.q("d"), r, r));
    const Key rm = mask_of(out);
    for (auto& [w, s] : m.branches)
      for (auto& [k, a] : s.amp) {
        Key bits = k & rm;
        ASSERT_TRUE(bits == 0 || bits == rm);
        std::uint8_t word = 0;
        for (int i = 0; i < 7; ++i) word |= std::uint8_t(sv::bit(k, g.q("d", i)) << i);
        EXPECT_EQ(steane::logical_value(word), bits ? 1 : 0);
      }
  }
}

TEST(Gadgets, ToffoliV1EncodedTruthTable) {
  auto g = gadgets::build_toffoli_v1(false).gadget;
  std::vector<ft::OutputBlock> blocks;
  for (auto nm : {"q0", "q1", "q2"}) blocks.push_back(ft::block_of(g, nm));
  Key sys = 0;
  for (auto& b : blocks) sys |= mask_of(b.qubits);
  for (int x = 0; x < 8; ++x) {
    sv::SparseState s(g.circ.n_qubits);
    s.amp.clear();
    ft::add_encoded(s, blocks, x, 0, 1);
    s.normalize();
    auto m = run(g, s);
    const int y = x ^ ((x & 1) && (x & 2) ? 4 : 0);
    sv::SparseState t(g.circ.n_qubits);
    t.amp.clear();
    ft::add_encoded(t, blocks, y, 0, 1);
    t.normalize();
    EXPECT_NEAR(ft::captured_weight(m, sys, {t}), 1, 1e-9) << "input " << x;
  }
}

TEST(Gadgets, ToffoliDecompositionIsExactOnThreeWires) {
  // The wire-level decomposition on basis states against the Toffoli truth table, phase included.
  for (int x = 0; x < 8; ++x) {
    sv::SparseState s(3, Key(x));
    for (auto& op : gadgets::toffoli_decomposition()) sv::apply(s, Gate{op.kind, op.wires, -1});
    const int y = x ^ ((x & 1) && (x & 2) ? 4 : 0);
    ASSERT_EQ(s.amp.size(), 1u) << x;
    EXPECT_EQ(s.amp.begin()->first, Key(y));
    EXPECT_NEAR(std::abs(s.amp.begin()->second - 1.0), 0, 1e-12) << "input " << x;
  }
}

// The AND-resource Toffoli acts on each code index separately, so its logic can be checked on
// one index: the resource and the first and last layers are taken from the gadget itself and
// the refreshed N reads are replaced by the Z-basis copies they implement.
TEST(Gadgets, ToffoliV2LogicOnOneCodeIndexIsCoherent) {
  auto comp = gadgets::build_toffoli_v2();
  const auto& g = comp.gadget;
  const std::vector<std::string> names{"a1", "a2", "a3", "x", "y", "z", "xr", "yr", "zr"};
  std::map<int, int> small;
  for (std::size_t i = 0; i < names.size(); ++i) small[g.q(names[i], 0)] = int(i);
  auto slice = [&](const gadgets::Part& p) {
    std::vector<Gate> out;
    for (std::size_t i = p.begin; i < p.end; ++i) {
      const auto& gt = g.circ.gates[i];
      std::vector<int> q;
      for (int x : gt.q)
        if (small.count(x)) q.push_back(small[x]);
      if (q.size() == gt.q.size()) out.push_back({gt.kind, q, -1});
    }
    return out;
  };
  ASSERT_GE(comp.parts.size(), 3u);
  ASSERT_EQ(comp.parts.front().component, "resource");
  const int n = 12;  // nine wires and three reference qubits
  sv::SparseState s(n);
  s.amp.clear();
  for (int v = 0; v < 8; ++v) s.amp[Key(v) << 3 | Key(v) << 9] = 1 / std::sqrt(8.0);
  s.prepare_block({0, 1, 2}, sv::resource_terms(GateKind::PrepAnd, {0, 1, 2}));
  for (auto& gt : slice(comp.parts[1])) sv::apply(s, gt);
  for (int i = 0; i < 3; ++i) sv::apply(s, Gate{GateKind::CNOT, {3 + i, 6 + i}, -1});
  for (auto& gt : slice(comp.parts.back())) sv::apply(s, gt);

  sv::SparseState t(n);
  t.amp.clear();
  for (int v = 0; v < 8; ++v) {
    int out = v ^ ((v & 1) && (v & 2) ? 4 : 0);
    t.amp[Key(out) | Key(v) << 9] = 1 / std::sqrt(8.0);
  }
  const Key sys = 0b111 | Key(0b111) << 9;
  EXPECT_NEAR(ft::captured_weight(sv::Mixture(s), sys, {t}), 1, 1e-9);
}

TEST(Gadgets, LibraryLookup) {
  for (auto n : {"ec", "ec_measured", "ec_non_ft", "zero_prep", "t", "tdg", "t_measured", "n", "n_refresh",
                 "toffoli", "toffoli_v1", "cnot", "1q", "s", "weak_vote", "strong_vote", "cat4"})
    EXPECT_NO_THROW(gadgets::build_by_name(n)) << n;
  EXPECT_THROW(gadgets::build_by_name("nope"), std::invalid_argument);
  EXPECT_TRUE(gadgets::build_t_measured().circ.count(GateKind::Measure) > 0);
}
