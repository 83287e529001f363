#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace treecluster {

/// Fixed-length bit vector over 64-bit words, used for the binary-symplectic
/// columns of the stabilizer tableau. Bits beyond size() are kept zero.
class BitVec {
public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }

  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v) {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v) w_[i >> 6] |= m; else w_[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  void clear() { for (auto& w : w_) w = 0; }
  bool any() const {
    for (auto w : w_) if (w) return true;
    return false;
  }

  std::size_t words() const { return w_.size(); }
  std::uint64_t word(std::size_t k) const { return w_[k]; }
  std::uint64_t& word(std::size_t k) { return w_[k]; }

  BitVec& operator^=(const BitVec& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
  }

  friend bool operator==(const BitVec& a, const BitVec& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }

private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

// dst ^= a & b
inline void xor_and(BitVec& dst, const BitVec& a, const BitVec& b) {
  for (std::size_t k = 0; k < dst.words(); ++k)
    dst.word(k) ^= a.word(k) & b.word(k);
}

// dst ^= a & ~b  (valid because trailing bits of a are zero)
inline void xor_andnot(BitVec& dst, const BitVec& a, const BitVec& b) {
  for (std::size_t k = 0; k < dst.words(); ++k)
    dst.word(k) ^= a.word(k) & ~b.word(k);
}

// dst ^= a & b & ~(c ^ d)  -- the CNOT sign-update mask
inline void xor_cnot_phase(BitVec& dst, const BitVec& a, const BitVec& b,
                           const BitVec& c, const BitVec& d) {
  for (std::size_t k = 0; k < dst.words(); ++k)
    dst.word(k) ^= a.word(k) & b.word(k) & ~(c.word(k) ^ d.word(k));
}

}  // namespace treecluster
