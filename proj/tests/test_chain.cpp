#include "gcq/chain.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace gcq;

namespace {

DenseChain from_vector(const oracle::VecX& v, int n) {
  DenseChain d(n, std::string(n, '0'), n > DenseChain::kDefaultCap);
  for (std::size_t i = 0; i < d.amp.size(); ++i) d.amp[i] = v(static_cast<Eigen::Index>(i));
  return d;
}

oracle::VecX to_vector(const DenseChain& d) {
  oracle::VecX v(static_cast<Eigen::Index>(d.amp.size()));
  for (std::size_t i = 0; i < d.amp.size(); ++i) v(static_cast<Eigen::Index>(i)) = d.amp[i];
  return v;
}

oracle::VecX random_state(int n, Rng& rng) {
  std::vector<Vec2> s;
  for (int i = 0; i < n; ++i) s.push_back(oracle::random_qubit(rng));
  return oracle::product_state(s);
}

}  // namespace

TEST(NewChain, BasisStates) {
  DenseChain a(4, "0000");
  EXPECT_EQ(a.amp[0], cplx(1));
  DenseChain b(6, "010000");
  EXPECT_EQ(b.amplitude("010000"), cplx(1));
  EXPECT_TRUE(is_b_site(2));
  DenseChain c(2, "01");
  EXPECT_DOUBLE_EQ(c.norm(), 1.0);
}

TEST(NewChain, RejectsBadInput) {
  EXPECT_THROW(DenseChain(4, "000"), std::invalid_argument);
  EXPECT_THROW(DenseChain(1, "0"), std::invalid_argument);
  EXPECT_THROW(DenseChain(4, "0020"), std::invalid_argument);
  EXPECT_THROW(DenseChain(25, std::string(25, '0')), std::invalid_argument);
  EXPECT_THROW(SparseChain<2>(4, "00000"), std::invalid_argument);
}

TEST(Fidelity, SelfOrthogonalAndHalf) {
  DenseChain a(3, "010");
  EXPECT_NEAR(fidelity(a, a), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(DenseChain(2, "00"), DenseChain(2, "01")), 0.0, 1e-15);
  DenseChain h(2, "00");
  apply_pulse(h, pulse::ga(gates::H()));
  // only site 1 is A on a 2-spin chain
  EXPECT_NEAR(fidelity(DenseChain(2, "00"), h), 0.5, 1e-15);
  EXPECT_NEAR(fidelity(h, DenseChain(2, "00")), 0.5, 1e-15);
  EXPECT_THROW(fidelity(DenseChain(2, "00"), DenseChain(3, "000")), std::invalid_argument);
}

TEST(ApplyPulse, AlphaIdentityIsExact) {
  Rng rng(1);
  auto v = random_state(7, rng);
  auto d = from_vector(v, 7);
  apply_pulse(d, pulse::alpha(Mat4::Identity()));
  for (std::size_t i = 0; i < d.amp.size(); ++i) EXPECT_EQ(d.amp[i], v(static_cast<Eigen::Index>(i)));
}

TEST(ApplyPulse, MatchesBruteForceOperators) {
  Rng rng(2);
  for (int n : {2, 3, 5, 6, 8}) {
    for (int trial = 0; trial < 3; ++trial) {
      Mat4 u = oracle::random_unitary4(rng);
      Mat2 g = oracle::random_unitary(rng);
      auto v = random_state(n, rng);
      oracle::VecX entangled = oracle::beta_operator(n, oracle::random_unitary4(rng)) * v;
      auto d = from_vector(entangled, n);
      apply_pulse(d, pulse::beta(u));
      apply_pulse(d, pulse::alpha(u));
      apply_pulse(d, pulse::gb(g));
      oracle::VecX ref = oracle::alpha_operator(n, u) * (oracle::beta_operator(n, u) * entangled);
      for (int p = 2; p <= n; p += 2) ref = oracle::single_operator(n, p, g) * ref;
      EXPECT_LT((to_vector(d) - ref).cwiseAbs().maxCoeff(), 1e-12) << "n=" << n;
    }
  }
}

TEST(ApplyPulse, PairOrderWithinPulseIsIrrelevant) {
  Rng rng(3);
  const int n = 8;
  Mat4 u = oracle::random_unitary4(rng);
  auto v = random_state(n, rng);
  oracle::VecX fwd = v, rev = v;
  for (int l = 1; l + 1 <= n; l += 2) fwd = oracle::pair_operator(n, l, u) * fwd;
  for (int l = n - 1; l >= 1; l -= 2) rev = oracle::pair_operator(n, l, u) * rev;
  auto d = from_vector(v, n);
  apply_pulse(d, pulse::alpha(u));
  EXPECT_LT((fwd - rev).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((to_vector(d) - fwd).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ApplyPulse, NormPreservedOverLongRandomSequences) {
  Rng rng(4);
  const int n = 8;
  auto d = from_vector(random_state(n, rng), n);
  std::uniform_int_distribution<int> kind(0, 3);
  for (int i = 0; i < 10000; ++i) {
    switch (kind(rng)) {
      case 0: apply_pulse(d, pulse::beta(oracle::random_unitary4(rng))); break;
      case 1: apply_pulse(d, pulse::alpha(oracle::random_unitary4(rng))); break;
      case 2: apply_pulse(d, pulse::ga(oracle::random_unitary(rng))); break;
      default: apply_pulse(d, pulse::gb(oracle::random_unitary(rng))); break;
    }
    if (i % 1000 == 999) {
      ASSERT_NEAR(d.norm(), 1.0, 1e-12);
    }
  }
}

TEST(StateTransfer, AContentsMoveTwoSitesPerPairOfSwapPulses) {
  Rng rng(5);
  for (int n = 4; n <= 12; ++n) {
    for (int start = 3; start <= n; start += 2) {
      for (int k = 1; 2 * k < start - 1; ++k) {
        Vec2 psi = oracle::random_qubit(rng);
        std::vector<Vec2> sites(n, Vec2(1, 0));
        sites[start - 1] = psi;
        auto d = from_vector(oracle::product_state(sites), n);
        for (int i = 0; i < k; ++i) {
          apply_pulse(d, pulse::beta("SWAP"));
          apply_pulse(d, pulse::alpha("SWAP"));
        }
        std::vector<Vec2> want(n, Vec2(1, 0));
        want[start - 2 * k - 1] = psi;
        auto ref = from_vector(oracle::product_state(want), n);
        EXPECT_NEAR(fidelity(d, ref), 1.0, 1e-12) << n << " " << start << " " << k;
      }
    }
  }
}

TEST(StateTransfer, BContentsMoveOppositeToAContents) {
  DenseChain d(10, "0001000000");  // B site 4
  for (int i = 0; i < 2; ++i) {
    apply_pulse(d, pulse::beta("SWAP"));
    apply_pulse(d, pulse::alpha("SWAP"));
  }
  EXPECT_NEAR(std::norm(d.amplitude("0000000100")), 1.0, 1e-15);
}

TEST(StateTransfer, IndependentOfOtherAQubits) {
  Rng rng(6);
  const int n = 12;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Vec2> sites(n, Vec2(1, 0));
    for (int p = 1; p <= n; p += 2) sites[p - 1] = oracle::random_qubit(rng);
    auto d = from_vector(oracle::product_state(sites), n);
    apply_pulse(d, pulse::beta("SWAP"));
    apply_pulse(d, pulse::alpha("SWAP"));
    // bulk A contents shift by -2; the content of site 1 is carried onto B site 2
    std::vector<Vec2> want(n, Vec2(1, 0));
    for (int p = 3; p <= n; p += 2) want[p - 3] = sites[p - 1];
    want[1] = sites[0];
    auto ref = from_vector(oracle::product_state(want), n);
    EXPECT_NEAR(fidelity(d, ref), 1.0, 1e-12);
  }
}

TEST(Representations, SparseAndProductAgreeWithDense) {
  Rng rng(7);
  const int n = 10;
  std::string bits = "0100100001";
  DenseChain d(n, bits);
  SparseChain<1> s(n, bits);
  ProductChain p(n, bits);
  std::vector<GlobalPulse> seq = {pulse::ga(gates::H()), pulse::beta("SWAP"), pulse::alpha("C-X"),
                                  pulse::beta("C-H"), pulse::gb(gates::T()), pulse::alpha("SWAP")};
  for (auto& g : seq) {
    apply_pulse(d, g);
    apply_pulse(s, g);
  }
  EXPECT_NEAR(fidelity(d, to_dense(s)), 1.0, 1e-12);
  std::vector<GlobalPulse> local = {pulse::ga(gates::H()), pulse::beta("SWAP"), pulse::gb(gates::T()),
                                    pulse::alpha("SWAP")};
  DenseChain d2(n, bits);
  for (auto& g : local) {
    apply_pulse(d2, g);
    apply_pulse(p, g);
  }
  EXPECT_NEAR(fidelity(d2, to_dense(to_sparse<1>(p))), 1.0, 1e-12);
  ProductChain q(4, "0000");
  apply_pulse(q, pulse::ga(gates::H()));
  EXPECT_THROW(apply_pulse(q, pulse::alpha("C-X")), std::runtime_error);
}

TEST(Measurement, SeededAndReproducible) {
  auto run = [](std::uint64_t seed) {
    DenseChain d(8, "00000000");
    apply_pulse(d, pulse::alpha("SWAP"));
    apply_pulse(d, pulse::gb(gates::H()));
    Rng rng(seed);
    return apply_pulse(d, pulse::measure_b(), rng);
  };
  EXPECT_EQ(run(11), run(11));
  EXPECT_EQ(run(11).size(), 4u);
}

TEST(Measurement, ResetClearsTargetSublattice) {
  DenseChain d(6, "111111");
  Rng rng(1);
  apply_pulse(d, pulse::reset_b(), rng);
  EXPECT_NEAR(std::norm(d.amplitude("101010")), 1.0, 1e-15);
  apply_pulse(d, pulse::gb(gates::H()));
  apply_pulse(d, pulse::reset_b(), rng);
  apply_pulse(d, pulse::reset_a(), rng);
  EXPECT_NEAR(std::norm(d.amplitude("000000")), 1.0, 1e-12);
  EXPECT_THROW(apply_pulse(d, pulse::reset_a()), std::invalid_argument);
}

TEST(Determinism, UnitaryProgramsReplayIdentically) {
  Rng rng(8);
  PulseProgram prog;
  for (int i = 0; i < 50; ++i) prog.push(i % 2 ? pulse::alpha(oracle::random_unitary4(rng)) : pulse::beta(oracle::random_unitary4(rng)));
  DenseChain a(8, "01000100"), b(8, "01000100");
  run_unitary(a, prog);
  run_unitary(b, prog);
  EXPECT_EQ(a.amp, b.amp);
}

TEST(TextFormat, RoundTrip) {
  Rng rng(9);
  PulseProgram prog;
  prog.push(pulse::beta("SWAP"));
  prog.push(pulse::alpha("C-H"));
  prog.push(pulse::alpha("Y-C"));
  prog.push(pulse::beta(oracle::random_unitary4(rng)));
  prog.push(pulse::ga(oracle::random_unitary(rng)));
  prog.push(pulse::gb(gates::T(), "T"));
  prog.push(pulse::reset_a());
  prog.push(pulse::reset_b());
  prog.push(pulse::measure_b());
  std::string txt = text::to_string(prog);
  PulseProgram back = text::parse_program("# header\n\n" + txt);
  ASSERT_EQ(back.size(), prog.size());
  for (std::size_t i = 0; i < prog.size(); ++i) {
    EXPECT_EQ(back.pulses[i].kind, prog.pulses[i].kind);
    EXPECT_LT(max_abs_diff(back.pulses[i].u2, prog.pulses[i].u2), 1e-15);
    EXPECT_LT(max_abs_diff(back.pulses[i].u1, prog.pulses[i].u1), 1e-15);
  }
  EXPECT_EQ(text::to_string(back), txt);
}

TEST(TextFormat, ComplexLiterals) {
  EXPECT_EQ(text::parse_complex("1.5-2j"), cplx(1.5, -2));
  EXPECT_EQ(text::parse_complex("-1e-3+4e+2j"), cplx(-1e-3, 400));
  EXPECT_EQ(text::parse_complex("0.5"), cplx(0.5, 0));
  EXPECT_EQ(text::parse_complex("-j"), cplx(0, -1));
  EXPECT_EQ(text::parse_complex(text::format_complex(cplx(0.1, -0.3))), cplx(0.1, -0.3));
}

TEST(TextFormat, RejectsMalformedLines) {
  EXPECT_THROW(text::parse_program("BETA"), std::invalid_argument);
  EXPECT_THROW(text::parse_program("BETA FOO"), std::invalid_argument);
  EXPECT_THROW(text::parse_program("GA 1 0 0 2"), std::invalid_argument);
  EXPECT_THROW(text::parse_program("MEASB 3"), std::invalid_argument);
  EXPECT_THROW(text::parse_program("WAIT"), std::invalid_argument);
}
