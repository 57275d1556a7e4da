#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace gcq {

/// Fixed-width bit key for sparse amplitude maps; W words of 64 bits.
template <std::size_t W>
struct Bits {
  std::array<std::uint64_t, W> w{};

  static constexpr std::size_t capacity = 64 * W;

  bool get(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v) {
    std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v) w[i >> 6] |= m; else w[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { w[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto x : w) c += static_cast<std::size_t>(std::popcount(x));
    return c;
  }

  Bits& operator^=(const Bits& o) { for (std::size_t i = 0; i < W; ++i) w[i] ^= o.w[i]; return *this; }
  Bits& operator&=(const Bits& o) { for (std::size_t i = 0; i < W; ++i) w[i] &= o.w[i]; return *this; }
  Bits operator^(const Bits& o) const { Bits r = *this; r ^= o; return r; }
  Bits operator&(const Bits& o) const { Bits r = *this; r &= o; return r; }
  Bits operator~() const { Bits r; for (std::size_t i = 0; i < W; ++i) r.w[i] = ~w[i]; return r; }
  bool any() const { for (auto x : w) if (x) return true; return false; }

  friend bool operator==(const Bits& a, const Bits& b) { return a.w == b.w; }
  friend bool operator<(const Bits& a, const Bits& b) {
    for (std::size_t i = W; i-- > 0;)
      if (a.w[i] != b.w[i]) return a.w[i] < b.w[i];
    return false;
  }

  /// Calls f(i) for every set bit in ascending order.
  template <class F>
  void for_each_set(F&& f) const {
    for (std::size_t k = 0; k < W; ++k) {
      std::uint64_t x = w[k];
      while (x) {
        f(64 * k + static_cast<std::size_t>(std::countr_zero(x)));
        x &= x - 1;
      }
    }
  }
};

struct BitsHash {
  template <std::size_t W>
  std::size_t operator()(const Bits<W>& b) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (auto x : b.w) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xbf58476d1ce4e5b9ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

}  // namespace gcq
