#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace gcq {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec2 = Eigen::Vector2cd;

inline constexpr double kPi = 3.14159265358979323846;

namespace gates {

inline Mat2 I() { return Mat2::Identity(); }
inline Mat2 X() { Mat2 m; m << 0, 1, 1, 0; return m; }
inline Mat2 Y() { Mat2 m; m << 0, cplx(0, -1), cplx(0, 1), 0; return m; }
inline Mat2 Z() { Mat2 m; m << 1, 0, 0, -1; return m; }
inline Mat2 H() { Mat2 m; m << 1, 1, 1, -1; return m / std::sqrt(2.0); }
inline Mat2 S() { Mat2 m; m << 1, 0, 0, cplx(0, 1); return m; }
inline Mat2 Sdg() { return S().adjoint(); }
inline Mat2 T() { Mat2 m; m << 1, 0, 0, std::polar(1.0, kPi / 4); return m; }
inline Mat2 Tdg() { return T().adjoint(); }

/// exp(-i theta P) for a Pauli P (P^2 = I).
inline Mat2 pauli_exp(const Mat2& p, double theta) {
  return std::cos(theta) * Mat2::Identity() - cplx(0, 1) * std::sin(theta) * p;
}

/// Control on the left factor, u on the right.
inline Mat4 controlled_left(const Mat2& u) {
  Mat4 m = Mat4::Identity();
  m.block<2, 2>(2, 2) = u;
  return m;
}

/// u on the left factor, control on the right.
inline Mat4 controlled_right(const Mat2& u) {
  Mat4 m = Mat4::Zero();
  m(0, 0) = 1;
  m(2, 2) = 1;
  m(1, 1) = u(0, 0);
  m(1, 3) = u(0, 1);
  m(3, 1) = u(1, 0);
  m(3, 3) = u(1, 1);
  return m;
}

inline Mat4 swap() {
  Mat4 m = Mat4::Zero();
  m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
  return m;
}

/// Single-letter gate name to matrix; throws on unknown names.
inline Mat2 by_name(const std::string& n) {
  if (n == "I") return I();
  if (n == "X") return X();
  if (n == "Y") return Y();
  if (n == "Z") return Z();
  if (n == "H") return H();
  if (n == "S") return S();
  if (n == "SDG") return Sdg();
  if (n == "T") return T();
  if (n == "TDG") return Tdg();
  throw std::invalid_argument("unknown gate name: " + n);
}

}  // namespace gates

template <class M>
bool is_unitary(const M& m, double tol = 1e-10) {
  return (m.adjoint() * m - M::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() < tol;
}

/// True when a = e^{i phi} b for some phi.
template <class M>
bool equal_up_to_phase(const M& a, const M& b, double tol = 1e-10) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(b(r, c)) < tol) return a.cwiseAbs().maxCoeff() < tol;
  cplx ph = a(r, c) / b(r, c);
  if (std::abs(std::abs(ph) - 1.0) > tol) return false;
  return (a - ph * b).cwiseAbs().maxCoeff() < tol;
}

template <class M>
double max_abs_diff(const M& a, const M& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return m;
}

}  // namespace gcq
