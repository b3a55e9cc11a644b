#include <doctest.h>

#include "ppat/bn256.hpp"
#include "ppat/errors.hpp"

using namespace ppat;
using namespace ppat::bn256;

// Frozen from an independent reference implementation (textbook affine
// Miller loop over Fp2[w]/(w^6 - xi) with big-integer arithmetic): the
// pairing of the standard G1 generator with the twist point obtained from
// x = 1 + 0i by canonical sqrt and cofactor clearing.
static const char* kKatQ0X0 =
    "0ce829a672df48d3a516691a43ef613c6dbaf14003208873a0613d925badb0ff";
static const char* kKatGt =
    "7ffded4a3297517746cfb667dda217cc2bb710749049ecd26a6f73e00f1e4c8c"
    "1260a2f06202f23121d86e1f6f2f6fe0cc04ee3c8a3e696487435f97d1deaae7"
    "16986d6bf01155bc8db15ba8ebf1ebf03fd463803ab3dea3b8ee6bb2ebbdb223"
    "0e52b16e84a95db708f32a9745a736d1b02968db5f9d7ddc57432cb426d46738"
    "0a146dbf9749f6917156c6d73e754caf6303da034ac521fdee5ee7250f25b920"
    "46e66f6c5f9338a75be0bae90335e7656741c5a9b929d6526fee25563ecabdc3"
    "5a7e31805c7e09bbfbcb207d4531148e7df7ed84104c9b7146e78c7903efbae3"
    "5a763d6acba5438b087b316dd59817d0f5b9b990928739a77e18964b4f16bd75"
    "0164a55e9b2c5842f51da0634f93f51845d02dc55492817e360a01f83bb868db"
    "7242b092ae0b4bfdd2c5a0854fad17f874262cb0e2f1735cfdc7a38a6b73ade9"
    "652f1f1389d2fe063c240cf9201835fecadba8ed6608b03175a7694733735165"
    "50ab35761a61a04fdf01c69d9bb40c2f86b3c64c12a1f9dfb47aece8c9d0e939";

static G2Point kat_q0() {
  Fp2 x{fp_from_u256(U256::from_u64(1)), fp_from_u256(U256::from_u64(0))};
  Fp2 rhs = fp2_add(fp2_mul(fp2_mul(x, x), x), twist_b());
  Fp2 y;
  REQUIRE(fp2_sqrt(y, rhs));
  U256 y0 = fp_to_u256(y.c0);
  bool odd = y0.is_zero() ? (fp_to_u256(y.c1).limb[0] & 1) : (y0.limb[0] & 1);
  if (odd) y = fp2_sub(Fp2{}, y);
  U256 cofactor, pmq;
  u256_sub(pmq, base_prime(), group_order());
  u256_add(cofactor, base_prime(), pmq);  // 2p - q
  G2Point q0 = g2_scalar_mul(
      G2Point{x, y, Fp2{fp_from_u256(U256::from_u64(1)), Fp{}}}, cofactor);
  REQUIRE(!g2_is_infinity(q0));
  return q0;
}

TEST_CASE("curve constants") {
  CHECK(base_prime().to_hex() ==
        "8fb501e34aa387f9aa6fecb86184dc21ee5b88d120b5b59e185cac6c5e089667");
  CHECK(group_order().to_hex() ==
        "8fb501e34aa387f9aa6fecb86184dc212e8d8e12f82b39241a2ef45b57ac7261");
  CHECK(base_prime().bit_length() == 256);
  CHECK(group_order().bit_length() == 256);
  // generator has order q (cofactor 1)
  CHECK(g1_is_infinity(g1_scalar_mul(g1_generator(), group_order())));
}

TEST_CASE("pairing known-answer test") {
  G2Point q0 = kat_q0();
  CHECK(fp_to_u256(g2_affine(q0).x.c0).to_hex() == kKatQ0X0);
  CHECK(g2_in_subgroup(q0));
  Fp12 e1 = pairing(g1_generator(), q0);
  CHECK(hex_encode(gt_encode(e1)) == kKatGt);
  // decode round trip incl. the subgroup check
  CHECK(gt_decode(gt_encode(e1)) == e1);
}

TEST_CASE("pairing bilinearity") {
  G2Point q0 = kat_q0();
  Fp12 e1 = pairing(g1_generator(), q0);
  CHECK(!gt_is_one(e1));
  CHECK(gt_is_one(gt_pow(e1, group_order())));
  for (uint64_t a : {2ULL, 7919ULL}) {
    for (uint64_t b : {3ULL, 65537ULL}) {
      Fp12 lhs = pairing(g1_scalar_mul(g1_generator(), U256::from_u64(a)),
                         g2_scalar_mul(q0, U256::from_u64(b)));
      CHECK(lhs == gt_pow(e1, U256::from_u64(a * b)));
    }
  }
  // additivity in each slot
  G1Point p2 = g1_scalar_mul(g1_generator(), U256::from_u64(2));
  G1Point p3 = g1_scalar_mul(g1_generator(), U256::from_u64(3));
  CHECK(pairing(g1_add(p2, p3), q0) == gt_mul(pairing(p2, q0), pairing(p3, q0)));
  CHECK(pairing(g1_infinity(), q0) == gt_one());
  CHECK(pairing(g1_generator(), g2_infinity()) == gt_one());
}

TEST_CASE("g1 scalar arithmetic edge cases") {
  const G1Point& g = g1_generator();
  CHECK(g1_is_infinity(g1_scalar_mul(g, U256{})));
  CHECK(g1_eq(g1_scalar_mul(g, U256::from_u64(1)), g));
  U256 qm1;
  u256_sub(qm1, group_order(), U256::from_u64(1));
  CHECK(g1_eq(g1_scalar_mul(g, qm1), g1_neg(g)));
  CHECK(g1_is_infinity(g1_add(g, g1_neg(g))));
  // doubling consistency
  CHECK(g1_eq(g1_add(g, g), g1_scalar_mul(g, U256::from_u64(2))));
}

TEST_CASE("point encodings round trip and reject junk") {
  G1Point p = g1_scalar_mul(g1_generator(), U256::from_u64(123456789));
  Bytes e = g1_encode(p);
  CHECK(e.size() == 33);
  CHECK(g1_eq(g1_decode(e), p));
  CHECK(g1_is_infinity(g1_decode(g1_encode(g1_infinity()))));

  Bytes bad = e;
  bad[0] = 0x05;
  CHECK_THROWS_AS((void)g1_decode(bad), EncodingError);
  Bytes noninf(33, 0);
  noninf[32] = 1;  // claims infinity but has payload
  CHECK_THROWS_AS((void)g1_decode(noninf), EncodingError);
  Bytes oor = e;
  for (int i = 1; i <= 32; i++) oor[(size_t)i] = 0xff;  // x >= p
  CHECK_THROWS_AS((void)g1_decode(oor), EncodingError);
  CHECK_THROWS_AS((void)g1_decode(Bytes(32, 0)), EncodingError);

  G2Point q = kat_q0();
  Bytes e2 = g2_encode(q);
  CHECK(e2.size() == 65);
  CHECK(g2_eq(g2_decode(e2), q));
}

TEST_CASE("g2 decode enforces the subgroup") {
  // a point on the twist but outside the q-subgroup: the raw hash point
  // before cofactor clearing (with overwhelming probability)
  Fp2 x{fp_from_u256(U256::from_u64(1)), Fp{}};
  Fp2 rhs = fp2_add(fp2_mul(fp2_mul(x, x), x), twist_b());
  Fp2 y;
  REQUIRE(fp2_sqrt(y, rhs));
  G2Point raw{x, y, Fp2{fp_from_u256(U256::from_u64(1)), Fp{}}};
  REQUIRE(!g2_in_subgroup(raw));
  CHECK_THROWS_AS((void)g2_decode(g2_encode(raw)), EncodingError);
}

TEST_CASE("hash to point is deterministic and lands on the curve") {
  G1Point a = g1_hash_to_point(to_bytes("dom"), to_bytes("msg"));
  G1Point b = g1_hash_to_point(to_bytes("dom"), to_bytes("msg"));
  CHECK(g1_eq(a, b));
  CHECK(!g1_eq(a, g1_hash_to_point(to_bytes("dom"), to_bytes("msg2"))));
  CHECK(g1_is_infinity(g1_scalar_mul(a, group_order())));  // order q

  G2Point c = g2_hash_to_point(to_bytes("dom"), to_bytes("msg"));
  CHECK(g2_in_subgroup(c));
  CHECK(g2_eq(c, g2_hash_to_point(to_bytes("dom"), to_bytes("msg"))));
}

TEST_CASE("fixed-base tables match generic scalar multiplication") {
  U256 k = U256::from_hex("3a2f51da0634f93f51845d02dc55492817e360a01f83bb868db7242b092ae0b4");
  G1Table t1(g1_generator());
  CHECK(g1_eq(t1.mul(k), g1_scalar_mul(g1_generator(), k)));
  CHECK(g1_is_infinity(t1.mul(U256{})));
  G2Point q0 = kat_q0();
  G2Table t2(q0);
  CHECK(g2_eq(t2.mul(k), g2_scalar_mul(q0, k)));
  for (uint64_t v : {1ULL, 2ULL, 255ULL, 256ULL, 65535ULL}) {
    CHECK(g1_eq(t1.mul(U256::from_u64(v)), g1_scalar_mul(g1_generator(), U256::from_u64(v))));
  }
}

TEST_CASE("gt decode rejects out-of-subgroup values") {
  // 384 zero bytes decode to the zero of Fp12, which is not in GT
  CHECK_THROWS_AS((void)gt_decode(Bytes(384, 0)), EncodingError);
  Bytes one_enc = gt_encode(gt_one());
  CHECK(gt_decode(one_enc) == gt_one());
  Bytes oor(384, 0xff);
  CHECK_THROWS_AS((void)gt_decode(oor), EncodingError);
}
