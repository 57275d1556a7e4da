#include "gcq/ft_verify.hpp"
#include "gcq/pauli.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gcq;

namespace {

/// Applies i^phase X^x Z^z to a dense vector (Z first, as the product is written).
void apply_pauli_dense(std::vector<cplx>& v, const Pauli& p, int n) {
  for (int q = 0; q < n; ++q)
    if ((p.z >> q) & 1) oracle::apply_gate(v, GateKind::Z, {q});
  for (int q = 0; q < n; ++q)
    if ((p.x >> q) & 1) oracle::apply_gate(v, GateKind::X, {q});
  const cplx ph[4] = {1, cplx(0, 1), -1, cplx(0, -1)};
  for (auto& a : v) a *= ph[p.phase & 3];
}

std::vector<cplx> random_state(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(std::size_t{1} << n);
  double norm = 0;
  for (auto& a : v) a = cplx(g(rng), g(rng)), norm += std::norm(a);
  for (auto& a : v) a /= std::sqrt(norm);
  return v;
}

Pauli random_pauli(std::mt19937_64& rng, int n) {
  Pauli p;
  p.x = rng() & ((std::uint64_t{1} << n) - 1);
  p.z = rng() & ((std::uint64_t{1} << n) - 1);
  p.phase = int(rng() % 4);
  return p;
}

Circuit random_clifford(std::mt19937_64& rng, int n, int len) {
  static const std::vector<GateKind> kinds{GateKind::H,   GateKind::S,  GateKind::Sdg, GateKind::X,
                                           GateKind::Y,   GateKind::Z,  GateKind::CNOT, GateKind::CZ,
                                           GateKind::SWAP};
  Circuit c(n);
  for (int i = 0; i < len; ++i) {
    GateKind k = kinds[rng() % kinds.size()];
    int a = int(rng() % n), b = int(rng() % (n - 1));
    if (b >= a) ++b;
    if (gate_arity(k) == 2) c.add(k, {a, b});
    else c.add(k, {a});
  }
  return c;
}

}  // namespace

TEST(Pauli, ProductTracksPhase) {
  Pauli x = Pauli::single(0, 'X'), y = Pauli::single(0, 'Y'), z = Pauli::single(0, 'Z');
  Pauli xz = x * z;  // X Z = -i Y
  EXPECT_TRUE(xz.equal_up_to_phase(y));
  EXPECT_EQ((xz.phase - y.phase + 4) % 4, 3);
  EXPECT_EQ(z * x, (y * Pauli{0, 0, 1}));  // Z X = i Y
  EXPECT_TRUE((x * x).is_identity());
}

TEST(Pauli, ProductMatchesDenseMultiplication) {
  std::mt19937_64 rng(3);
  const int n = 4;
  for (int t = 0; t < 300; ++t) {
    Pauli a = random_pauli(rng, n), b = random_pauli(rng, n);
    auto v = random_state(rng, n), w = v;
    apply_pauli_dense(v, b, n);
    apply_pauli_dense(v, a, n);
    apply_pauli_dense(w, a * b, n);
    double d = 0;
    for (std::size_t i = 0; i < v.size(); ++i) d += std::norm(v[i] - w[i]);
    EXPECT_LT(d, 1e-20);
  }
}

TEST(Pauli, CnotPropagationIdentities) {
  Gate cx{GateKind::CNOT, {0, 1}, -1};
  EXPECT_EQ(conjugate(Pauli::from_string("XI"), cx).str(2), "XX");
  EXPECT_EQ(conjugate(Pauli::from_string("IX"), cx).str(2), "IX");
  EXPECT_EQ(conjugate(Pauli::from_string("ZI"), cx).str(2), "ZI");
  EXPECT_EQ(conjugate(Pauli::from_string("IZ"), cx).str(2), "ZZ");
  EXPECT_EQ(conjugate(Pauli::from_string("XI"), cx), Pauli::from_string("XX"));
}

TEST(Pauli, ConjugationMatchesDenseOnRandomCliffordCircuits) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + int(rng() % 7);
    Circuit c = random_clifford(rng, n, 25);
    Pauli p = random_pauli(rng, n);
    const int after = int(rng() % (c.gates.size() + 1)) - 1;
    Pauli out = propagate(c, p, after);
    // U_rest P |psi> must equal P' U_rest |psi> for the gates after the injection point.
    auto v = random_state(rng, n), w = v;
    apply_pauli_dense(v, p, n);
    for (std::size_t i = after + 1; i < c.gates.size(); ++i) {
      oracle::apply_gate(v, c.gates[i].kind, c.gates[i].q);
      oracle::apply_gate(w, c.gates[i].kind, c.gates[i].q);
    }
    apply_pauli_dense(w, out, n);
    double d = 0;
    for (std::size_t i = 0; i < v.size(); ++i) d += std::norm(v[i] - w[i]);
    ASSERT_LT(d, 1e-20) << "trial " << t;
  }
}

TEST(Pauli, ResetDiscardsAndNonCliffordThrows) {
  Pauli p = Pauli::from_string("YX");
  EXPECT_EQ(conjugate(p, Gate{GateKind::Reset, {0}, -1}).str(2), "IX");
  EXPECT_THROW(conjugate(p, Gate{GateKind::T, {0}, -1}), std::invalid_argument);
}

TEST(Pauli, BookkeepingSwapsDoNotMoveErrors) {
  Gate sw{GateKind::SWAP, {0, 1}, -1};
  EXPECT_EQ(conjugate(Pauli::from_string("XI"), sw, true).str(2), "IX");
  EXPECT_EQ(conjugate(Pauli::from_string("XI"), sw, false).str(2), "XI");
}

TEST(Pauli, TransversalCnotKeepsSingleErrorsOnOneIndex) {
  auto g = gadgets::build_bitwise_cnot();
  for (int i = 0; i < 7; ++i)
    for (char p : {'X', 'Z'}) {
      auto res = ft::propagate_fault(g, {0, Pauli::single(g.q("a", i), p)});
      int touched = 0;
      for (auto& [name, s] : res) {
        for (int j = 0; j < 7; ++j) {
          if (s[j] != 'I') {
            EXPECT_EQ(j, i);
          }
        }
        touched += s != "IIIIIII";
      }
      EXPECT_GE(touched, 1);
    }
}
