#include "gcq/compiler.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace gcq;

namespace {

using Sparse = SparseChain<2>;

/// Chain state for a computational-register vector (qubit 0 is the most significant index bit).
Sparse embed(const DeviceLayout& d, const oracle::VecX& comp) {
  Sparse s(d.n_spins, d.initial_bits());
  s.amp.clear();
  for (Eigen::Index i = 0; i < comp.size(); ++i) {
    if (std::abs(comp(i)) < 1e-15) continue;
    std::vector<int> bits(d.n_comp);
    for (int q = 0; q < d.n_comp; ++q) bits[q] = (i >> (d.n_comp - 1 - q)) & 1;
    Sparse b(d.n_spins, d.initial_bits(bits));
    s.amp[b.amp.begin()->first] += comp(i);
  }
  return s;
}

oracle::VecX basis(int n, int idx) {
  oracle::VecX v = oracle::VecX::Zero(1 << n);
  v(idx) = 1;
  return v;
}

/// Ideal operator of a gate on qubits of an n-qubit register (qubit 0 most significant).
oracle::MatX embed_1q(int n, int t, const Mat2& u) {
  oracle::MatX m = oracle::MatX::Zero(1 << n, 1 << n);
  for (int c = 0; c < (1 << n); ++c) {
    int b = (c >> (n - 1 - t)) & 1;
    for (int o = 0; o < 2; ++o) m(c ^ ((b ^ o) << (n - 1 - t)), c) += u(o, b);
  }
  return m;
}

oracle::MatX embed_controlled(int n, int c, int t, const Mat2& u) {
  oracle::MatX m = oracle::MatX::Zero(1 << n, 1 << n);
  oracle::MatX g = embed_1q(n, t, u);
  for (int col = 0; col < (1 << n); ++col) {
    if ((col >> (n - 1 - c)) & 1) m.col(col) = g.col(col);
    else m(col, col) = 1;
  }
  return m;
}

/// Runs the program on every basis input; checks the common-phase process matches the ideal operator.
void expect_process(const DeviceLayout& d, const PulseProgram& prog, const oracle::MatX& ideal, double tol) {
  const int dim = 1 << d.n_comp;
  cplx phase = 0;
  for (int i = 0; i < dim; ++i) {
    Sparse s = embed(d, basis(d.n_comp, i));
    run_unitary(s, prog);
    Sparse want = embed(d, ideal.col(i));
    cplx ov = inner(want, s);
    if (i == 0) phase = ov;
    EXPECT_NEAR(std::abs(ov), 1.0, tol) << "basis input " << i;
    EXPECT_LT(std::abs(ov - phase), tol) << "relative phase on basis input " << i;
  }
  Rng rng(99);
  for (int trial = 0; trial < 2; ++trial) {
    std::vector<Vec2> q;
    for (int k = 0; k < d.n_comp; ++k) q.push_back(oracle::random_qubit(rng));
    oracle::VecX in = oracle::VecX::Zero(dim);
    for (int i = 0; i < dim; ++i) {
      cplx a = 1;
      for (int k = 0; k < d.n_comp; ++k) a *= q[k]((i >> (d.n_comp - 1 - k)) & 1);
      in(i) = a;
    }
    Sparse s = embed(d, in);
    run_unitary(s, prog);
    Sparse want = embed(d, ideal * in);
    EXPECT_LT(std::abs(inner(want, s) - phase), tol) << "superposition input " << trial;
  }
}

}  // namespace

TEST(Layout, StandardShape) {
  for (int n = 1; n <= 6; ++n) {
    auto d = standard_layout(n);
    EXPECT_EQ(d.n_spins, 12 * n);
    for (int j = 0; j < n; ++j) {
      EXPECT_TRUE(is_a_site(d.comp_positions[j]));
      if (j) {
        EXPECT_EQ(d.comp_positions[j] - d.comp_positions[j - 1], 6);
      }
    }
    EXPECT_TRUE(is_b_site(d.cu_position));
  }
  EXPECT_EQ(compact_spin_count(2), 10);
  EXPECT_EQ(compact_spin_count(6), 30);
  EXPECT_THROW(standard_layout(0), std::invalid_argument);
}

TEST(Layout, BlockedShape) {
  auto d = blocked_layout(3, 3);
  EXPECT_EQ(d.block_period(), 24);
  EXPECT_EQ(d.n_comp, 9);
  for (int p : d.ss_positions) EXPECT_TRUE(is_a_site(p));
  EXPECT_TRUE(is_b_site(d.cu_position));
  EXPECT_THROW(blocked_layout(2, 2), std::invalid_argument);
}

TEST(Transfer, NullTransferIsEmpty) {
  auto d = standard_layout(2);
  EXPECT_TRUE(compile(d, LogicalOp::transfer(6, 6)).program.empty());
  EXPECT_THROW(compile(d, LogicalOp::transfer(5, 7)), std::out_of_range);
}

TEST(Transfer, MovesTheCUBetweenBSites) {
  auto d = standard_layout(2);
  auto r = compile(d, LogicalOp::transfer(6, 10));
  EXPECT_EQ(r.program.size(), 4u);
  DenseChain c(12, "000001000000");
  run_unitary(c, r.program);
  EXPECT_NEAR(std::norm(c.amplitude("000000000100")), 1.0, 1e-15);
}

TEST(Entangler, ContractOnThreeSiteWindow) {
  // control A at 1, CU B at 2, empty A at 3; the extra spin keeps every pair complete
  PulseProgram e;
  for (auto n : {"Y-C", "C-X", "C-H", "C-Z", "C-H"}) {
    std::string s(n);
    bool alpha = (e.size() % 2 == 0);
    e.push(alpha ? pulse::alpha(s) : pulse::beta(s));
  }
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Vec2 psi = oracle::random_qubit(rng);
    // CU absent: invariant
    {
      DenseChain c(4, "0000");
      c.amp.assign(16, 0);
      c.amp[0] = psi(0);
      c.amp[1] = psi(1);
      DenseChain ref = c;
      run_unitary(c, e);
      EXPECT_NEAR(fidelity(c, ref), 1.0, 1e-12);
    }
    // CU present: control and CU correlate, the right A site receives |1>, control carries an X frame
    {
      DenseChain c(4, "0000");
      c.amp.assign(16, 0);
      c.amp[0b0010] = psi(0);
      c.amp[0b0011] = psi(1);
      run_unitary(c, e);
      DenseChain want(4, "0000");
      want.amp.assign(16, 0);
      want.amp[0b0100] = psi(0);
      want.amp[0b0111] = psi(1);
      EXPECT_LT(fidelity(c, want), 1e-12);
      DenseChain framed = want;
      framed.apply_single(1, gates::X());
      EXPECT_NEAR(fidelity(c, framed), 1.0, 1e-12);
    }
  }
}

TEST(Gate1Q, MatchesIdealOnStandardLayout) {
  auto d = standard_layout(2);
  Rng rng(11);
  std::vector<std::pair<std::string, Mat2>> us = {{"X", gates::X()}, {"H", gates::H()}, {"T", gates::T()},
                                                  {"", oracle::random_unitary(rng)}};
  for (auto& [name, u] : us) {
    for (int t = 0; t < 2; ++t) {
      auto r = compile(d, name.empty() ? LogicalOp::gate1q(t, u) : LogicalOp::gate1q(t, name));
      expect_process(d, r.program, embed_1q(2, t, u), 1e-10);
    }
  }
}

TEST(Gate2Q, ControlledNotProcess) {
  auto d = standard_layout(2);
  auto r = compile(d, LogicalOp::gate2q(0, 1, "X"));
  expect_process(d, r.program, embed_controlled(2, 0, 1, gates::X()), 1e-10);
  auto r2 = compile(d, LogicalOp::gate2q(1, 0, "X"));
  expect_process(d, r2.program, embed_controlled(2, 1, 0, gates::X()), 1e-10);
}

TEST(Gate2Q, DistantQubitsAndOtherGates) {
  auto d = standard_layout(3);
  for (auto [c, t] : {std::pair{0, 2}, std::pair{2, 0}, std::pair{1, 2}}) {
    auto r = compile(d, LogicalOp::gate2q(c, t, "Z"));
    expect_process(d, r.program, embed_controlled(3, c, t, gates::Z()), 1e-10);
  }
  auto r = compile(d, LogicalOp::gate2q(2, 1, "H"));
  expect_process(d, r.program, embed_controlled(3, 2, 1, gates::H()), 1e-10);
}

TEST(Gate2Q, StructureAndErrors) {
  auto d = standard_layout(2);
  auto p = compile(d, LogicalOp::gate2q(0, 1, "X")).program;
  // the disentangle block is the entangle block reversed
  std::size_t ent = 0, dis = 0;
  for (auto& [i, s] : p.notes) {
    if (s == "entangle") ent = i;
    if (s == "disentangle") dis = i;
  }
  ASSERT_GT(dis, ent);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_EQ(p.pulses[ent + k].kind, p.pulses[dis + 4 - k].kind);
    EXPECT_EQ(p.pulses[ent + k].u2, p.pulses[dis + 4 - k].u2);
  }
  EXPECT_THROW(compile(d, LogicalOp::gate2q(1, 1, "X")), std::invalid_argument);
  EXPECT_THROW(compile(d, LogicalOp::gate2q(0, 2, "X")), std::out_of_range);
  EXPECT_THROW(compile(d, LogicalOp::gate1q(-1, "X")), std::out_of_range);
}

TEST(Compile, Deterministic) {
  auto d = standard_layout(3);
  auto a = text::to_string(compile(d, LogicalOp::gate2q(0, 2, "X")).program);
  auto b = text::to_string(compile(d, LogicalOp::gate2q(0, 2, "X")).program);
  EXPECT_EQ(a, b);
}

TEST(Compile, LeavesOtherQubitsAlone) {
  auto d = standard_layout(4);
  auto r = compile(d, LogicalOp::gate2q(1, 3, "X"));
  expect_process(d, r.program, embed_controlled(4, 1, 3, gates::X()), 1e-10);
}

TEST(MeasureComp, ReadsTheControlAndRecoversTheCU) {
  auto d = standard_layout(2);
  for (int q = 0; q < 2; ++q) {
    auto prog = compile(d, LogicalOp::measure(q)).program;
    ASSERT_TRUE(prog.meta.count("readout_site"));
    for (int v = 0; v < 2; ++v) {
      std::vector<int> bits = {0, 0};
      bits[q] = v;
      Sparse s(d.n_spins, d.initial_bits(bits));
      Sparse start = s;
      Rng rng(3);
      auto m = run_program(s, prog, rng);
      ASSERT_EQ(m.size(), 1u);
      int disc = 0;
      EXPECT_EQ(decode_measurement(m[0], prog.meta["readout_site"], &disc), v);
      EXPECT_EQ(disc, v);
      EXPECT_NEAR(fidelity(s, start), 1.0, 1e-12);
    }
  }
}

TEST(MeasureComp, SuperpositionCollapsesConsistently) {
  auto d = standard_layout(2);
  auto prog = compile(d, LogicalOp::measure(1)).program;
  int ones = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    oracle::VecX in = oracle::VecX::Zero(4);
    in(0) = 1 / std::sqrt(2.0);
    in(1) = 1 / std::sqrt(2.0);
    Sparse s = embed(d, in);
    Rng rng(seed);
    auto m = run_program(s, prog, rng);
    int v = decode_measurement(m[0], prog.meta["readout_site"]);
    ones += v;
    Sparse want = embed(d, basis(2, v));
    EXPECT_NEAR(fidelity(s, want), 1.0, 1e-12);
  }
  EXPECT_GT(ones, 60);
  EXPECT_LT(ones, 140);
}

TEST(SwitchMode, CycleRestoresThePattern) {
  auto ec = blocked_layout(3, 1, 1, Mode::EC);
  ec.ss_labels = {1, 0, 1};
  auto to_alg = compile(ec, LogicalOp::switch_mode(Mode::ALG));
  EXPECT_EQ(to_alg.layout.mode, Mode::ALG);
  EXPECT_THROW(compile(ec, LogicalOp::switch_mode(Mode::EC)), std::invalid_argument);
  Sparse s(ec.n_spins, ec.initial_bits({1, 0, 1}));
  Sparse start = s;
  run_unitary(s, to_alg.program);
  Sparse parked(ec.n_spins, to_alg.layout.initial_bits({1, 0, 1}));
  EXPECT_NEAR(fidelity(s, parked), 1.0, 1e-12);
  auto back = compile(to_alg.layout, LogicalOp::switch_mode(Mode::EC));
  run_unitary(s, back.program);
  EXPECT_NEAR(fidelity(s, start), 1.0, 1e-12);
  EXPECT_EQ(back.layout.mode, Mode::EC);
}

TEST(RelocateCU, MovesTheActiveStation) {
  for (auto [from, to] : {std::pair{0, 1}, std::pair{1, 0}, std::pair{0, 2}}) {
    auto d = blocked_layout(3, 1, from);
    auto r = compile(d, LogicalOp::relocate(from, to));
    Sparse s(d.n_spins, d.initial_bits({1, 0, 1}));
    run_unitary(s, r.program);
    Sparse want(d.n_spins, r.layout.initial_bits({1, 0, 1}));
    EXPECT_NEAR(fidelity(s, want), 1.0, 1e-12) << from << "->" << to;
    EXPECT_EQ(r.layout.active_block, to);
  }
  auto d = blocked_layout(3, 1, 0);
  EXPECT_THROW(compile(d, LogicalOp::relocate(1, 2)), std::invalid_argument);
  EXPECT_EQ(relocation_cost(false).controlled_gates, 4);
  EXPECT_EQ(relocation_cost(false).swaps, 7);
  EXPECT_EQ(relocation_cost(true).swaps, 28);
}

TEST(RelocateCU, GateWorksAtTheNewStation) {
  auto d = blocked_layout(2, 1, 0);
  auto r = compile(d, LogicalOp::relocate(0, 1));
  auto g = compile(r.layout, LogicalOp::gate1q(1, "X"));
  Sparse s(d.n_spins, d.initial_bits({0, 0}));
  run_unitary(s, r.program);
  run_unitary(s, g.program);
  Sparse want(d.n_spins, r.layout.initial_bits({0, 1}));
  EXPECT_NEAR(fidelity(s, want), 1.0, 1e-12);
  EXPECT_THROW(compile(r.layout, LogicalOp::gate2q(0, 1, "X")), std::invalid_argument);
}

TEST(BufferReset, ClearsStrayBExcitationsAndKeepsTheCU) {
  auto d = standard_layout(2, true);
  auto r = compile(d, LogicalOp::buffer_reset());
  EXPECT_THROW(compile(standard_layout(2), LogicalOp::buffer_reset()), std::invalid_argument);
  for (int v = 0; v < 4; ++v) {
    std::vector<int> bits = {v >> 1, v & 1};
    std::string init = d.initial_bits(bits);
    for (std::vector<int> stray : {std::vector<int>{}, {34}, {36}}) {
      std::string garbage = init, want_bits = init;
      for (int g : stray) {
        garbage[g - 1] = '1';
        // each stray excitation is handed to the A site three to its left
        want_bits[g - 4] = want_bits[g - 4] == '1' ? '0' : '1';
      }
      Sparse s(d.n_spins, garbage);
      Rng rng(1);
      run_program(s, r.program, rng);
      Sparse want(d.n_spins, want_bits);
      EXPECT_NEAR(fidelity(s, want), 1.0, 1e-12) << v << " strays " << stray.size();
    }
  }
}

TEST(BufferReset, StrayNextToAComputationalQubitIsOutsideTheContract) {
  // a stray whose hand-off lands two sites from a |1> qubit forms a second pattern and survives
  auto d = standard_layout(2, true);
  auto r = compile(d, LogicalOp::buffer_reset());
  std::string garbage = d.initial_bits({0, 1}), predicted = d.initial_bits({0, 1});
  garbage[30 - 1] = '1';
  predicted[30 - 4] = '1';
  Sparse s(d.n_spins, garbage);
  Rng rng(1);
  run_program(s, r.program, rng);
  EXPECT_LT(fidelity(s, Sparse(d.n_spins, predicted)), 0.5);
}

TEST(BufferReset, MarkerLeavesGatesIntact) {
  auto d = standard_layout(3, true);
  expect_process(d, compile(d, LogicalOp::gate2q(0, 1, "X")).program, embed_controlled(3, 0, 1, gates::X()), 1e-10);
  expect_process(d, compile(d, LogicalOp::gate2q(2, 0, "Z")).program, embed_controlled(3, 2, 0, gates::Z()), 1e-10);
  expect_process(d, compile(d, LogicalOp::gate1q(0, "H")).program, embed_1q(3, 0, gates::H()), 1e-10);
}

TEST(Comparator, ExhaustiveGeq) {
  for (int w = 1; w <= 4; ++w) {
    for (int b = 0; b < (1 << w); ++b) {
      Circuit c = compile_compare_geq(w, b);
      for (int a = 0; a < (1 << w); ++a) {
        std::vector<int> bits(2 * w + 1, 0);
        for (int i = 0; i < w; ++i) bits[i] = (a >> (w - 1 - i)) & 1;
        auto out = eval_classical(c, bits);
        EXPECT_EQ(out[2 * w], a >= b ? 1 : 0) << w << " " << a << " " << b;
        for (int i = 0; i < w; ++i) EXPECT_EQ(out[i], bits[i]);
      }
    }
  }
  EXPECT_THROW(compile_compare_geq(3, 8), std::invalid_argument);
  EXPECT_THROW(compile_compare_geq(0, 0), std::invalid_argument);
}

TEST(Comparator, LoweredToPulsesOnTheChain) {
  auto d = standard_layout(3);
  auto r = compile(d, LogicalOp::compare_geq(1, 1));
  for (int a = 0; a < 2; ++a) {
    Sparse s(d.n_spins, d.initial_bits({a, 0, 0}));
    run_unitary(s, r.program);
    Sparse want(d.n_spins, d.initial_bits({a, 0, a}));
    EXPECT_NEAR(fidelity(s, want), 1.0, 1e-10);
  }
}

TEST(LowerCircuit, ToffoliOnTheChain) {
  auto d = standard_layout(3);
  Circuit c(3);
  c.add(GateKind::CCX, {0, 1, 2});
  auto prog = lower_circuit(d, c);
  for (int v = 0; v < 8; ++v) {
    std::vector<int> in = {v >> 2 & 1, v >> 1 & 1, v & 1};
    auto out = in;
    out[2] ^= in[0] & in[1];
    Sparse s(d.n_spins, d.initial_bits(in));
    run_unitary(s, prog);
    Sparse want(d.n_spins, d.initial_bits(out));
    EXPECT_NEAR(fidelity(s, want), 1.0, 1e-10) << v;
  }
}

TEST(Relabel124, RuleExamples) {
  EXPECT_EQ(relabel_124_rule({2, 0, 0, 0, 0}), (std::vector<int>{3, 1, 0, 1, 0}));
  EXPECT_EQ(surviving_stations(relabel_124_rule({1, 0, 0, 0, 0, 0, 0})), (std::vector<int>{1, 2, 4}));
  EXPECT_THROW(relabel_124_rule({0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(relabel_124_rule({}), std::invalid_argument);
}

TEST(Relabel124, CircuitMatchesRuleOnAllSingleSeeds) {
  for (int n : {5, 7}) {
    Circuit c = relabel_124_circuit(n);
    RelabelMap m{n};
    for (int pos = 0; pos < n; ++pos) {
      for (int lab = 1; lab < 4; ++lab) {
        std::vector<int> labels(n, 0);
        labels[pos] = lab;
        std::vector<int> bits(m.n_qubits(), 0);
        for (int i = 0; i < n; ++i) bits[m.b0(i)] = labels[i] & 1, bits[m.b1(i)] = labels[i] >> 1;
        auto out = eval_classical(c, bits);
        auto want = relabel_124_rule(labels);
        for (int i = 0; i < n; ++i) EXPECT_EQ(out[m.b0(i)] + 2 * out[m.b1(i)], want[i]);
      }
    }
  }
}

TEST(Relabel124, LoweredOnTheChain) {
  // two stations, eight computational qubits
  Circuit c = relabel_124_circuit(2);
  auto d = standard_layout(8);
  auto prog = lower_circuit(d, c);
  RelabelMap m{2};
  for (int lab : {1, 2}) {
    std::vector<int> bits(8, 0);
    bits[m.b0(0)] = lab & 1;
    bits[m.b1(0)] = lab >> 1;
    auto out = eval_classical(c, bits);
    Sparse s(d.n_spins, d.initial_bits(bits));
    run_unitary(s, prog);
    Sparse want(d.n_spins, d.initial_bits(out));
    EXPECT_NEAR(fidelity(s, want), 1.0, 1e-9) << lab;
  }
}

TEST(LogicalOpJson, Parses) {
  auto op = logical_op_from_json(nlohmann::json::parse(R"({"op":"Gate2Q","control":0,"target":1,"u":"X"})"));
  EXPECT_EQ(op.kind, LogicalOp::Kind::Gate2Q);
  EXPECT_EQ(op.b, 1);
  EXPECT_THROW(logical_op_from_json(nlohmann::json::parse(R"({"op":"Nope"})")), std::invalid_argument);
}
