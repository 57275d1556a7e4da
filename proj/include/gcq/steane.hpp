#pragma once

// The [[7,1,3]] Steane code: stabilizer supports, codewords, weight-3 logical lines and the
// syndrome tables used by ideal decoders.

#include <array>
#include <bit>
#include <cstdint>
#include <vector>

namespace gcq::steane {

inline constexpr int kN = 7;

/// Supports of the three weight-4 checks as 7-bit masks; qubit i sits at bit i. The same
/// supports serve as X-type and Z-type generators. An error on qubit i has syndrome i+1.
inline constexpr std::array<std::uint8_t, 3> kChecks{0b1010101, 0b1100110, 0b1111000};

inline std::vector<int> check_qubits(int k) {
  std::vector<int> q;
  for (int i = 0; i < kN; ++i)
    if ((kChecks[k] >> i) & 1) q.push_back(i);
  return q;
}

/// Three-bit syndrome of a 7-bit error pattern.
inline int syndrome(std::uint8_t bits) {
  int s = 0;
  for (int k = 0; k < 3; ++k) s |= (std::popcount(unsigned(bits & kChecks[k])) & 1) << k;
  return s;
}

/// Single-qubit correction for a syndrome (0 for none).
inline std::uint8_t correction(int s) { return s ? std::uint8_t(1u << (s - 1)) : 0; }

/// The eight words of the even codeword: sums of the check supports.
inline const std::array<std::uint8_t, 8>& even_words() {
  static const std::array<std::uint8_t, 8> w = [] {
    std::array<std::uint8_t, 8> r{};
    for (int m = 0; m < 8; ++m) {
      std::uint8_t x = 0;
      for (int k = 0; k < 3; ++k)
        if ((m >> k) & 1) x ^= kChecks[k];
      r[m] = x;
    }
    return r;
  }();
  return w;
}

/// Words of |0_L> (even weight) or |1_L> (their complements, odd weight).
inline std::array<std::uint8_t, 8> codewords(int logical) {
  auto w = even_words();
  if (logical)
    for (auto& x : w) x ^= 0x7F;
  return w;
}

/// The seven weight-3 supports on which a Z parity reads the logical bit.
inline const std::array<std::uint8_t, 7>& lines() {
  static const std::array<std::uint8_t, 7> l = [] {
    std::array<std::uint8_t, 7> r{};
    int n = 0;
    for (auto w : even_words())
      if (w) r[n++] = w ^ 0x7F;
    return r;
  }();
  return l;
}

inline std::vector<int> line_qubits(int i) {
  std::vector<int> q;
  for (int j = 0; j < kN; ++j)
    if ((lines()[i] >> j) & 1) q.push_back(j);
  return q;
}

/// Whether a 7-bit word lies in the classical Hamming code.
inline bool in_code(std::uint8_t w) { return syndrome(w) == 0; }

/// Logical value of a Hamming codeword (its weight parity).
inline int logical_value(std::uint8_t w) { return std::popcount(unsigned(w)) & 1; }

}  // namespace gcq::steane
