#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <string>

#include "ppat/bytes.hpp"

namespace ppat {

// Unsigned 256-bit integer, little-endian limbs. Plain value type; all
// modular structure lives in PrimeField below.
struct U256 {
  std::array<uint64_t, 4> limb{0, 0, 0, 0};

  static U256 from_u64(uint64_t v) { return U256{{v, 0, 0, 0}}; }
  static U256 from_be_bytes(BytesView b);  // requires b.size() == 32
  static U256 from_hex(std::string_view hex);

  Bytes to_be_bytes() const;
  std::string to_hex() const;

  bool is_zero() const { return (limb[0] | limb[1] | limb[2] | limb[3]) == 0; }
  bool bit(unsigned i) const { return (limb[i / 64] >> (i % 64)) & 1; }
  unsigned bit_length() const;
  uint64_t low_u64() const { return limb[0]; }

  friend bool operator==(const U256&, const U256&) = default;
};

// -1 if a < b, 0 if equal, 1 if a > b.
int u256_cmp(const U256& a, const U256& b);

// a + b, returns carry-out. a - b, returns borrow-out.
uint64_t u256_add(U256& out, const U256& a, const U256& b);
uint64_t u256_sub(U256& out, const U256& a, const U256& b);

// out = a * m + carry-in chain; returns the overflow limb.
uint64_t u256_mul_u64(U256& out, const U256& a, uint64_t m);

// x mod n for arbitrary n > 0 (bit-serial; not for hot paths).
U256 u256_mod(const U256& x, const U256& n);

// x mod n for small n.
uint64_t u256_mod_u64(const U256& x, uint64_t n);

// Divide by a small constant, returns quotient, sets rem.
U256 u256_div_u64(const U256& x, uint64_t d, uint64_t* rem = nullptr);

// Montgomery multiplication over a fixed odd modulus: out = a*b*R^-1 mod n
// with R = 2^256. CIOS, 4 limbs. Inputs must be < n.
inline void mont_mul4(uint64_t out[4], const uint64_t a[4], const uint64_t b[4],
                      const uint64_t n[4], uint64_t n0) {
  using u128 = unsigned __int128;
  uint64_t t[6] = {0, 0, 0, 0, 0, 0};
  for (int i = 0; i < 4; i++) {
    u128 c = 0;
    for (int j = 0; j < 4; j++) {
      u128 s = (u128)t[j] + (u128)a[j] * b[i] + c;
      t[j] = (uint64_t)s;
      c = s >> 64;
    }
    u128 s = (u128)t[4] + c;
    t[4] = (uint64_t)s;
    t[5] = (uint64_t)(s >> 64);

    uint64_t m = t[0] * n0;
    c = ((u128)t[0] + (u128)m * n[0]) >> 64;
    for (int j = 1; j < 4; j++) {
      u128 s2 = (u128)t[j] + (u128)m * n[j] + c;
      t[j - 1] = (uint64_t)s2;
      c = s2 >> 64;
    }
    s = (u128)t[4] + c;
    t[3] = (uint64_t)s;
    t[4] = t[5] + (uint64_t)(s >> 64);
  }
  // conditional final subtraction
  U256 r{{t[0], t[1], t[2], t[3]}};
  U256 nn{{n[0], n[1], n[2], n[3]}};
  U256 d;
  uint64_t borrow = u256_sub(d, r, nn);
  bool take_sub = t[4] != 0 || borrow == 0;
  const U256& res = take_sub ? d : r;
  std::memcpy(out, res.limb.data(), 32);
}

// Prime field with runtime odd modulus. Serves the curve base field, the
// 256-bit scalar field and the toy backend's Z_q uniformly. Values passed
// in and out are canonical residues unless the _mont variants are used.
class PrimeField {
 public:
  PrimeField() = default;
  explicit PrimeField(const U256& modulus);

  const U256& modulus() const { return n_; }
  bool is_canonical(const U256& a) const { return u256_cmp(a, n_) < 0; }

  U256 add(const U256& a, const U256& b) const;
  U256 sub(const U256& a, const U256& b) const;
  U256 neg(const U256& a) const;
  U256 mul(const U256& a, const U256& b) const;
  U256 sqr(const U256& a) const { return mul(a, a); }
  U256 pow(const U256& a, const U256& e) const;
  U256 pow_u64(const U256& a, uint64_t e) const;
  U256 inv(const U256& a) const;  // a^(n-2); n must be prime

  // Montgomery-domain ops for hot users that keep residues in Montgomery
  // form themselves.
  U256 to_mont(const U256& a) const { return mmul(a, r2_); }
  U256 from_mont(const U256& a) const { return mmul(a, U256::from_u64(1)); }
  U256 mmul(const U256& a, const U256& b) const {
    U256 out;
    mont_mul4(out.limb.data(), a.limb.data(), b.limb.data(), n_.limb.data(), n0_);
    return out;
  }
  const U256& mont_one() const { return r_; }

  // Interpret up to 32 bytes (big-endian) as an integer and reduce mod n.
  U256 from_bytes_mod(BytesView b) const;

 private:
  U256 n_;
  U256 r_;   // 2^256 mod n
  U256 r2_;  // 2^512 mod n
  uint64_t n0_ = 0;
};

}  // namespace ppat
