#pragma once

#include <cstdint>
#include <vector>

#include "ppat/bytes.hpp"
#include "ppat/u256.hpp"

// Type-3 pairing-friendly BN curve at the 128-bit level with a 256-bit
// prime group order (curve parameter u = 6518589491078791937, the curve
// used by dclxvi-style implementations):
//
//   p = 36u^4 + 36u^3 + 24u^2 + 6u + 1   (base field, 256 bits)
//   q = 36u^4 + 36u^3 + 18u^2 + 6u + 1   (group order, 256 bits, prime)
//
//   G1: E(Fp):  y^2 = x^3 + 3, cofactor 1
//   G2: E'(Fp2): y^2 = x^3 + 3/xi on the sextic twist, xi = 3 + i
//   GT: order-q subgroup of Fp12*
//
// All tower coefficients are kept in Montgomery form internally.
namespace ppat::bn256 {

struct Fp {
  U256 v;  // Montgomery form
  friend bool operator==(const Fp&, const Fp&) = default;
};
struct Fp2 {
  Fp c0, c1;  // c0 + c1*i, i^2 = -1
  friend bool operator==(const Fp2&, const Fp2&) = default;
};
struct Fp6 {
  Fp2 c0, c1, c2;  // c0 + c1*tau + c2*tau^2, tau^3 = xi
  friend bool operator==(const Fp6&, const Fp6&) = default;
};
struct Fp12 {
  Fp6 c0, c1;  // c0 + c1*w, w^2 = tau
  friend bool operator==(const Fp12&, const Fp12&) = default;
};

struct G1Point {
  Fp x, y, z;  // Jacobian; z == 0 means infinity
};
struct G2Point {
  Fp2 x, y, z;
};

const U256& base_prime();
const U256& group_order();

// --- G1 ---------------------------------------------------------------
G1Point g1_infinity();
const G1Point& g1_generator();
G1Point g1_add(const G1Point& a, const G1Point& b);
G1Point g1_neg(const G1Point& a);
G1Point g1_scalar_mul(const G1Point& a, const U256& k);
bool g1_eq(const G1Point& a, const G1Point& b);
bool g1_is_infinity(const G1Point& a);
Bytes g1_encode(const G1Point& a);       // 33 bytes, compressed
G1Point g1_decode(BytesView b);          // throws EncodingError
G1Point g1_hash_to_point(BytesView domain, BytesView msg);

// --- G2 ---------------------------------------------------------------
G2Point g2_infinity();
G2Point g2_add(const G2Point& a, const G2Point& b);
G2Point g2_neg(const G2Point& a);
G2Point g2_scalar_mul(const G2Point& a, const U256& k);
bool g2_eq(const G2Point& a, const G2Point& b);
bool g2_is_infinity(const G2Point& a);
bool g2_in_subgroup(const G2Point& a);
Bytes g2_encode(const G2Point& a);       // 65 bytes, compressed
G2Point g2_decode(BytesView b);          // includes the subgroup check
G2Point g2_hash_to_point(BytesView domain, BytesView msg);  // cofactor-cleared

// --- GT ---------------------------------------------------------------
Fp12 gt_one();
Fp12 gt_mul(const Fp12& a, const Fp12& b);
Fp12 gt_inv(const Fp12& a);
Fp12 gt_pow(const Fp12& a, const U256& k);
bool gt_is_one(const Fp12& a);
Bytes gt_encode(const Fp12& a);          // 384 bytes
Fp12 gt_decode(BytesView b);             // canonical + order check

// Optimal ate pairing; returns gt_one() if either input is infinity.
Fp12 pairing(const G1Point& p, const G2Point& q);

// --- fixed-base precomputation -----------------------------------------
// 8-bit windowed table of affine multiples; mul() walks 32 mixed additions
// instead of a generic double-and-add ladder.
class G1Table {
 public:
  explicit G1Table(const G1Point& base);
  G1Point mul(const U256& k) const;

 private:
  std::vector<G1Point> tbl_;
};

class G2Table {
 public:
  explicit G2Table(const G2Point& base);
  G2Point mul(const U256& k) const;

 private:
  std::vector<G2Point> tbl_;
};

// Exposed for tests (tower arithmetic spot checks and the reference
// pairing cross-check).
Fp fp_from_u256(const U256& canonical);
U256 fp_to_u256(const Fp& a);
Fp2 fp2_mul(const Fp2& a, const Fp2& b);
Fp2 fp2_add(const Fp2& a, const Fp2& b);
Fp2 fp2_sub(const Fp2& a, const Fp2& b);
Fp2 fp2_inv(const Fp2& a);
bool fp2_sqrt(Fp2& out, const Fp2& a);
Fp12 fp12_mul(const Fp12& a, const Fp12& b);
Fp12 fp12_inv(const Fp12& a);
Fp12 fp12_frobenius(const Fp12& a);
G2Point g2_affine(const G2Point& a);
G1Point g1_affine(const G1Point& a);
const Fp2& twist_b();

}  // namespace ppat::bn256
