#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "f2lab/error.hpp"

namespace f2lab {

inline constexpr int kMaxBitVecDim = 64;

inline constexpr std::uint64_t low_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

inline int parity(std::uint64_t v) { return std::popcount(v) & 1; }

// An element of F_2^n, n <= 64. Bit i holds coordinate x_{i+1}; the text
// form writes coordinate 1 first.
class BitVec {
 public:
  BitVec() = default;
  BitVec(int n, std::uint64_t bits) : bits_(bits), n_(n) {
    if (n < 0 || n > kMaxBitVecDim) throw ValidationError("BitVec dimension out of range: " + std::to_string(n));
    if (bits & ~low_mask(n)) throw ValidationError("BitVec has bits above dimension " + std::to_string(n));
  }

  static BitVec zero(int n) { return BitVec(n, 0); }
  // e_{i+1}, i zero-based.
  static BitVec unit(int n, int i) { return BitVec(n, std::uint64_t{1} << i); }
  static BitVec parse(std::string_view text);

  int size() const { return n_; }
  std::uint64_t bits() const { return bits_; }
  bool test(int i) const { return (bits_ >> i) & 1; }
  int weight() const { return std::popcount(bits_); }
  bool is_zero() const { return bits_ == 0; }

  // x . y over F_2.
  int dot(const BitVec& other) const { return parity(bits_ & other.bits_); }
  // support(*this) is a subset of support(other).
  bool dominates(const BitVec& other) const { return (bits_ & ~other.bits_) == 0; }

  BitVec operator^(const BitVec& other) const { return BitVec(n_, bits_ ^ other.bits_); }
  BitVec& operator^=(const BitVec& other) {
    bits_ ^= other.bits_;
    return *this;
  }

  std::string str() const;

  friend bool operator==(const BitVec&, const BitVec&) = default;
  friend auto operator<=>(const BitVec& a, const BitVec& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

 private:
  std::uint64_t bits_ = 0;
  int n_ = 0;
};

}  // namespace f2lab
