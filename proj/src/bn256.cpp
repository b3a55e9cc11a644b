#include "ppat/bn256.hpp"

#include <cstring>

#include "ppat/errors.hpp"

namespace ppat::bn256 {

namespace {

constexpr uint64_t kCurveU = 6518589491078791937ULL;

struct Ctx;
const Ctx& C();

// ---------------------------------------------------------------- Fp ---

struct FpCtx {
  U256 p;
  U256 r;    // 2^256 mod p (Montgomery one)
  U256 r2;   // 2^512 mod p
  uint64_t n0;
};

FpCtx make_fp_ctx(const U256& p) {
  PrimeField f(p);
  FpCtx c;
  c.p = p;
  c.r = f.mont_one();
  c.r2 = f.to_mont(f.to_mont(U256::from_u64(1)));  // 2^512 mod p
  // recompute n0 the same way PrimeField does
  uint64_t x = p.limb[0], inv = x;
  for (int i = 0; i < 5; i++) inv *= 2 - x * inv;
  c.n0 = ~inv + 1;
  return c;
}

const FpCtx& FC();

inline Fp fadd(const Fp& a, const Fp& b) {
  Fp out;
  uint64_t carry = u256_add(out.v, a.v, b.v);
  if (carry || u256_cmp(out.v, FC().p) >= 0) u256_sub(out.v, out.v, FC().p);
  return out;
}
inline Fp fsub(const Fp& a, const Fp& b) {
  Fp out;
  if (u256_sub(out.v, a.v, b.v)) u256_add(out.v, out.v, FC().p);
  return out;
}
inline Fp fneg(const Fp& a) {
  Fp out{};
  if (!a.v.is_zero()) u256_sub(out.v, FC().p, a.v);
  return out;
}
inline Fp fmul(const Fp& a, const Fp& b) {
  Fp out;
  mont_mul4(out.v.limb.data(), a.v.limb.data(), b.v.limb.data(),
            FC().p.limb.data(), FC().n0);
  return out;
}
inline Fp fsqr(const Fp& a) { return fmul(a, a); }
inline Fp fdbl(const Fp& a) { return fadd(a, a); }
inline Fp ftpl(const Fp& a) { return fadd(fdbl(a), a); }
inline bool fiszero(const Fp& a) { return a.v.is_zero(); }
inline Fp fzero() { return Fp{}; }
inline Fp fone() { return Fp{FC().r}; }

Fp fp_from_canonical(const U256& v) {
  Fp out;
  mont_mul4(out.v.limb.data(), v.limb.data(), FC().r2.limb.data(),
            FC().p.limb.data(), FC().n0);
  return out;
}
U256 fp_to_canonical(const Fp& a) {
  U256 one = U256::from_u64(1), out;
  mont_mul4(out.limb.data(), a.v.limb.data(), one.limb.data(),
            FC().p.limb.data(), FC().n0);
  return out;
}
Fp fp_from_u64(uint64_t v) { return fp_from_canonical(U256::from_u64(v)); }

Fp fp_pow(const Fp& a, const U256& e) {
  Fp acc = fone();
  unsigned n = e.bit_length();
  for (int i = (int)n - 1; i >= 0; i--) {
    acc = fsqr(acc);
    if (e.bit((unsigned)i)) acc = fmul(acc, a);
  }
  return acc;
}
Fp fp_inv(const Fp& a) {
  U256 e;
  u256_sub(e, FC().p, U256::from_u64(2));
  return fp_pow(a, e);
}
bool fp_sqrt(Fp& out, const Fp& a) {
  // p = 3 mod 4: candidate a^((p+1)/4)
  U256 e;
  u256_add(e, FC().p, U256::from_u64(1));
  e = u256_div_u64(e, 4);
  Fp c = fp_pow(a, e);
  if (!(fsqr(c) == a)) return false;
  out = c;
  return true;
}
inline bool fp_is_odd(const Fp& a) { return fp_to_canonical(a).limb[0] & 1; }

// ---------------------------------------------------------------- Fp2 ---

inline Fp2 f2add(const Fp2& a, const Fp2& b) { return {fadd(a.c0, b.c0), fadd(a.c1, b.c1)}; }
inline Fp2 f2sub(const Fp2& a, const Fp2& b) { return {fsub(a.c0, b.c0), fsub(a.c1, b.c1)}; }
inline Fp2 f2neg(const Fp2& a) { return {fneg(a.c0), fneg(a.c1)}; }
inline Fp2 f2dbl(const Fp2& a) { return {fdbl(a.c0), fdbl(a.c1)}; }
inline bool f2iszero(const Fp2& a) { return fiszero(a.c0) && fiszero(a.c1); }
inline Fp2 f2zero() { return Fp2{}; }
inline Fp2 f2one() { return Fp2{fone(), fzero()}; }

inline Fp2 f2mul(const Fp2& a, const Fp2& b) {
  Fp t0 = fmul(a.c0, b.c0);
  Fp t1 = fmul(a.c1, b.c1);
  Fp s = fmul(fadd(a.c0, a.c1), fadd(b.c0, b.c1));
  return {fsub(t0, t1), fsub(fsub(s, t0), t1)};
}
inline Fp2 f2sqr(const Fp2& a) {
  Fp t = fmul(a.c0, a.c1);
  return {fmul(fadd(a.c0, a.c1), fsub(a.c0, a.c1)), fdbl(t)};
}
inline Fp2 f2scale(const Fp2& a, const Fp& s) { return {fmul(a.c0, s), fmul(a.c1, s)}; }
inline Fp2 f2conj(const Fp2& a) { return {a.c0, fneg(a.c1)}; }
// (c0 + c1 i)(3 + i) = (3c0 - c1) + (c0 + 3c1) i
inline Fp2 f2mul_xi(const Fp2& a) {
  return {fsub(ftpl(a.c0), a.c1), fadd(a.c0, ftpl(a.c1))};
}
inline Fp2 f2mul_i(const Fp2& a) { return {fneg(a.c1), a.c0}; }
inline Fp2 f2inv(const Fp2& a) {
  Fp norm = fadd(fsqr(a.c0), fsqr(a.c1));
  Fp ninv = fp_inv(norm);
  return {fmul(a.c0, ninv), fneg(fmul(a.c1, ninv))};
}
Fp2 f2pow(const Fp2& a, const U256& e) {
  Fp2 acc = f2one();
  unsigned n = e.bit_length();
  for (int i = (int)n - 1; i >= 0; i--) {
    acc = f2sqr(acc);
    if (e.bit((unsigned)i)) acc = f2mul(acc, a);
  }
  return acc;
}
bool f2sqrt(Fp2& out, const Fp2& a) {
  if (f2iszero(a)) {
    out = f2zero();
    return true;
  }
  U256 e34 = u256_div_u64([] { U256 t; u256_sub(t, FC().p, U256::from_u64(3)); return t; }(), 4);
  U256 e12 = u256_div_u64([] { U256 t; u256_sub(t, FC().p, U256::from_u64(1)); return t; }(), 2);
  Fp2 a1 = f2pow(a, e34);
  Fp2 x0 = f2mul(a1, a);
  Fp2 alpha = f2mul(a1, x0);
  Fp2 minus_one{fneg(fone()), fzero()};
  Fp2 x;
  if (alpha == minus_one) {
    x = f2mul_i(x0);
  } else {
    Fp2 b = f2pow(f2add(f2one(), alpha), e12);
    x = f2mul(b, x0);
  }
  if (!(f2sqr(x) == a)) return false;
  out = x;
  return true;
}
// Canonical sign: parity of c0's canonical form, falling back to c1.
inline int f2sign(const Fp2& a) {
  if (!fiszero(a.c0)) return fp_is_odd(a.c0) ? 1 : 0;
  return fp_is_odd(a.c1) ? 1 : 0;
}

// ---------------------------------------------------------------- Fp6 ---

inline Fp6 f6add(const Fp6& a, const Fp6& b) {
  return {f2add(a.c0, b.c0), f2add(a.c1, b.c1), f2add(a.c2, b.c2)};
}
inline Fp6 f6sub(const Fp6& a, const Fp6& b) {
  return {f2sub(a.c0, b.c0), f2sub(a.c1, b.c1), f2sub(a.c2, b.c2)};
}
inline Fp6 f6neg(const Fp6& a) { return {f2neg(a.c0), f2neg(a.c1), f2neg(a.c2)}; }
inline Fp6 f6zero() { return Fp6{}; }
inline Fp6 f6one() { return Fp6{f2one(), f2zero(), f2zero()}; }
inline bool f6iszero(const Fp6& a) {
  return f2iszero(a.c0) && f2iszero(a.c1) && f2iszero(a.c2);
}

Fp6 f6mul(const Fp6& a, const Fp6& b) {
  Fp2 v0 = f2mul(a.c0, b.c0);
  Fp2 v1 = f2mul(a.c1, b.c1);
  Fp2 v2 = f2mul(a.c2, b.c2);
  Fp2 c0 = f2add(v0, f2mul_xi(f2sub(f2sub(f2mul(f2add(a.c1, a.c2), f2add(b.c1, b.c2)), v1), v2)));
  Fp2 c1 = f2add(f2sub(f2sub(f2mul(f2add(a.c0, a.c1), f2add(b.c0, b.c1)), v0), v1), f2mul_xi(v2));
  Fp2 c2 = f2add(f2sub(f2sub(f2mul(f2add(a.c0, a.c2), f2add(b.c0, b.c2)), v0), v2), v1);
  return {c0, c1, c2};
}
Fp6 f6sqr(const Fp6& a) {
  Fp2 t_ab = f2dbl(f2mul(a.c0, a.c1));
  Fp2 t_bc = f2dbl(f2mul(a.c1, a.c2));
  Fp2 s0 = f2sqr(a.c0);
  Fp2 s2 = f2sqr(a.c2);
  Fp2 m = f2sqr(f2sub(f2add(a.c0, a.c2), a.c1));
  Fp2 c0 = f2add(s0, f2mul_xi(t_bc));
  Fp2 c1 = f2add(t_ab, f2mul_xi(s2));
  Fp2 c2 = f2sub(f2add(f2add(f2sub(t_ab, s2), m), t_bc), s0);
  return {c0, c1, c2};
}
inline Fp6 f6scale(const Fp6& a, const Fp2& s) {
  return {f2mul(a.c0, s), f2mul(a.c1, s), f2mul(a.c2, s)};
}
inline Fp6 f6dbl(const Fp6& a) { return f6add(a, a); }
// multiply by tau: (c0, c1, c2) -> (xi*c2, c0, c1)
inline Fp6 f6mul_tau(const Fp6& a) { return {f2mul_xi(a.c2), a.c0, a.c1}; }

Fp6 f6inv(const Fp6& a) {
  Fp2 A = f2sub(f2sqr(a.c0), f2mul_xi(f2mul(a.c1, a.c2)));
  Fp2 B = f2sub(f2mul_xi(f2sqr(a.c2)), f2mul(a.c0, a.c1));
  Fp2 Cc = f2sub(f2sqr(a.c1), f2mul(a.c0, a.c2));
  Fp2 F = f2add(f2mul(a.c0, A), f2mul_xi(f2add(f2mul(a.c2, B), f2mul(a.c1, Cc))));
  Fp2 Finv = f2inv(F);
  return {f2mul(A, Finv), f2mul(B, Finv), f2mul(Cc, Finv)};
}

// ---------------------------------------------------------------- Fp12 ---

inline Fp12 f12one() { return Fp12{f6one(), f6zero()}; }
inline bool f12iszero(const Fp12& a) { return f6iszero(a.c0) && f6iszero(a.c1); }

Fp12 f12mul(const Fp12& a, const Fp12& b) {
  Fp6 v0 = f6mul(a.c0, b.c0);
  Fp6 v1 = f6mul(a.c1, b.c1);
  Fp6 c1 = f6sub(f6sub(f6mul(f6add(a.c0, a.c1), f6add(b.c0, b.c1)), v0), v1);
  Fp6 c0 = f6add(v0, f6mul_tau(v1));
  return {c0, c1};
}
Fp12 f12sqr(const Fp12& a) {
  Fp6 v = f6mul(a.c0, a.c1);
  Fp6 t = f6mul(f6add(a.c0, a.c1), f6add(a.c0, f6mul_tau(a.c1)));
  return {f6sub(f6sub(t, v), f6mul_tau(v)), f6dbl(v)};
}

Fp12 f12conj(const Fp12& a) { return {a.c0, f6neg(a.c1)}; }

Fp12 f12inv(const Fp12& a) {
  Fp6 t = f6sub(f6sqr(a.c0), f6mul_tau(f6sqr(a.c1)));
  Fp6 tinv = f6inv(t);
  return {f6mul(a.c0, tinv), f6neg(f6mul(a.c1, tinv))};
}

Fp12 f12pow(const Fp12& a, const U256& e) {
  Fp12 acc = f12one();
  unsigned n = e.bit_length();
  for (int i = (int)n - 1; i >= 0; i--) {
    acc = f12sqr(acc);
    if (e.bit((unsigned)i)) acc = f12mul(acc, a);
  }
  return acc;
}
Fp12 f12pow_u64(const Fp12& a, uint64_t e) { return f12pow(a, U256::from_u64(e)); }

// ------------------------------------------------------------- context ---

struct Ctx {
  U256 p, q, c2;         // base prime, group order, twist cofactor 2p - q
  U256 six_u_plus_2;
  std::vector<int8_t> naf_loop;  // NAF digits of 6u+2, LSB first
  Fp2 xi;                // 3 + i
  Fp2 b_twist;           // 3 / xi
  Fp b_curve;            // 3
  Fp2 gamma1[6];         // xi^{k(p-1)/6}, k = 0..5
  Fp2 gamma2[6];         // gamma1[k] * conj(gamma1[k])
  G1Point g1_gen;
};

// Polynomial evaluation in u over u64 with U256 accumulation.
U256 bn_poly(uint64_t u, uint64_t c4, uint64_t c3, uint64_t c2c, uint64_t c1, uint64_t c0) {
  U256 acc = U256::from_u64(c4);
  auto step = [&](uint64_t c) {
    U256 t;
    uint64_t ov = u256_mul_u64(t, acc, u);
    (void)ov;  // fits by construction for the BN polynomials used here
    U256 res;
    u256_add(res, t, U256::from_u64(c));
    acc = res;
  };
  step(c3);
  step(c2c);
  step(c1);
  step(c0);
  return acc;
}

std::vector<int8_t> naf_digits(const U256& k_in) {
  std::vector<int8_t> out;
  U256 k = k_in;
  while (!k.is_zero()) {
    if (k.limb[0] & 1) {
      int d = (int)(k.limb[0] & 3);  // k mod 4
      int8_t digit = d == 3 ? -1 : 1;
      out.push_back(digit);
      if (digit == 1)
        u256_sub(k, k, U256::from_u64(1));
      else
        u256_add(k, k, U256::from_u64(1));
    } else {
      out.push_back(0);
    }
    // k >>= 1
    for (int i = 0; i < 3; i++) k.limb[i] = k.limb[i] >> 1 | k.limb[i + 1] << 63;
    k.limb[3] >>= 1;
  }
  return out;
}

const FpCtx& FC() {
  static const FpCtx ctx = make_fp_ctx(bn_poly(kCurveU, 36, 36, 24, 6, 1));
  return ctx;
}

const Ctx& C() {
  static const Ctx ctx = [] {
    Ctx c;
    c.p = bn_poly(kCurveU, 36, 36, 24, 6, 1);
    c.q = bn_poly(kCurveU, 36, 36, 18, 6, 1);
    // twist cofactor 2p - q = p + 6u^2
    U256 six_u2 = bn_poly(kCurveU, 0, 0, 6, 0, 0);
    u256_add(c.c2, c.p, six_u2);
    U256 six_u;
    u256_mul_u64(six_u, U256::from_u64(kCurveU), 6);
    u256_add(c.six_u_plus_2, six_u, U256::from_u64(2));
    c.naf_loop = naf_digits(c.six_u_plus_2);

    c.xi = Fp2{fp_from_u64(3), fp_from_u64(1)};
    c.b_curve = fp_from_u64(3);
    c.b_twist = f2mul(Fp2{c.b_curve, fzero()}, f2inv(c.xi));

    U256 pm1;
    u256_sub(pm1, c.p, U256::from_u64(1));
    U256 e = u256_div_u64(pm1, 6);
    c.gamma1[0] = f2one();
    c.gamma1[1] = f2pow(c.xi, e);
    for (int k = 2; k < 6; k++) c.gamma1[k] = f2mul(c.gamma1[k - 1], c.gamma1[1]);
    for (int k = 0; k < 6; k++) c.gamma2[k] = f2mul(c.gamma1[k], f2conj(c.gamma1[k]));

    c.g1_gen = G1Point{fp_from_u64(1), fneg(fp_from_u64(2)), fone()};
    return c;
  }();
  return ctx;
}

Fp12 f12frob(const Fp12& a) {
  const Ctx& c = C();
  Fp6 g{f2conj(a.c0.c0), f2mul(f2conj(a.c0.c1), c.gamma1[2]),
        f2mul(f2conj(a.c0.c2), c.gamma1[4])};
  Fp6 h{f2mul(f2conj(a.c1.c0), c.gamma1[1]), f2mul(f2conj(a.c1.c1), c.gamma1[3]),
        f2mul(f2conj(a.c1.c2), c.gamma1[5])};
  return {g, h};
}
Fp12 f12frob_p2(const Fp12& a) {
  const Ctx& c = C();
  Fp6 g{a.c0.c0, f2mul(a.c0.c1, c.gamma2[2]), f2mul(a.c0.c2, c.gamma2[4])};
  Fp6 h{f2mul(a.c1.c0, c.gamma2[1]), f2mul(a.c1.c1, c.gamma2[3]),
        f2mul(a.c1.c2, c.gamma2[5])};
  return {g, h};
}

// ---------------------------------------------------------- point ops ---

inline bool pt_is_inf(const G1Point& a) { return fiszero(a.z); }
inline bool pt_is_inf(const G2Point& a) { return f2iszero(a.z); }

template <typename P>
P pt_infinity() {
  P out{};
  return out;  // zero-initialized: z == 0
}

// element-generic aliases
inline Fp e_add(const Fp& a, const Fp& b) { return fadd(a, b); }
inline Fp2 e_add(const Fp2& a, const Fp2& b) { return f2add(a, b); }
inline Fp e_sub(const Fp& a, const Fp& b) { return fsub(a, b); }
inline Fp2 e_sub(const Fp2& a, const Fp2& b) { return f2sub(a, b); }
inline Fp e_mul(const Fp& a, const Fp& b) { return fmul(a, b); }
inline Fp2 e_mul(const Fp2& a, const Fp2& b) { return f2mul(a, b); }
inline Fp e_sqr(const Fp& a) { return fsqr(a); }
inline Fp2 e_sqr(const Fp2& a) { return f2sqr(a); }
inline Fp e_dbl(const Fp& a) { return fdbl(a); }
inline Fp2 e_dbl(const Fp2& a) { return f2dbl(a); }
inline Fp e_neg(const Fp& a) { return fneg(a); }
inline Fp2 e_neg(const Fp2& a) { return f2neg(a); }
inline bool e_iszero(const Fp& a) { return fiszero(a); }
inline bool e_iszero(const Fp2& a) { return f2iszero(a); }
inline Fp e_one(const Fp&) { return fone(); }
inline Fp2 e_one(const Fp2&) { return f2one(); }
inline Fp e_inv(const Fp& a) { return fp_inv(a); }
inline Fp2 e_inv(const Fp2& a) { return f2inv(a); }

template <typename P>
P pt_dbl(const P& a) {
  if (pt_is_inf(a)) return a;
  auto A = e_sqr(a.x);
  auto B = e_sqr(a.y);
  auto Cc = e_sqr(B);
  auto D = e_sqr(e_add(a.x, B));
  D = e_dbl(e_sub(e_sub(D, A), Cc));
  auto E = e_add(e_dbl(A), A);
  auto F = e_sqr(E);
  P out;
  out.x = e_sub(F, e_dbl(D));
  auto C8 = e_dbl(e_dbl(e_dbl(Cc)));
  out.y = e_sub(e_mul(E, e_sub(D, out.x)), C8);
  out.z = e_dbl(e_mul(a.y, a.z));
  return out;
}

template <typename P>
P pt_add(const P& a, const P& b) {
  if (pt_is_inf(a)) return b;
  if (pt_is_inf(b)) return a;
  auto z1z1 = e_sqr(a.z);
  auto z2z2 = e_sqr(b.z);
  auto u1 = e_mul(a.x, z2z2);
  auto u2 = e_mul(b.x, z1z1);
  auto s1 = e_mul(e_mul(a.y, b.z), z2z2);
  auto s2 = e_mul(e_mul(b.y, a.z), z1z1);
  auto h = e_sub(u2, u1);
  auto rr = e_sub(s2, s1);
  if (e_iszero(h)) {
    if (e_iszero(rr)) return pt_dbl(a);
    return pt_infinity<P>();
  }
  rr = e_dbl(rr);
  auto i = e_sqr(h);
  i = e_dbl(e_dbl(i));
  auto j = e_mul(h, i);
  auto v = e_mul(u1, i);
  P out;
  out.x = e_sub(e_sub(e_sqr(rr), j), e_dbl(v));
  out.y = e_sub(e_mul(rr, e_sub(v, out.x)), e_dbl(e_mul(s1, j)));
  auto z = e_sqr(e_add(a.z, b.z));
  z = e_sub(e_sub(z, z1z1), z2z2);
  out.z = e_mul(z, h);
  return out;
}

// Mixed addition with affine b (b.z == 1).
template <typename P>
P pt_madd(const P& a, const P& b) {
  if (pt_is_inf(a)) return b;
  if (pt_is_inf(b)) return a;
  auto z1z1 = e_sqr(a.z);
  auto u2 = e_mul(b.x, z1z1);
  auto s2 = e_mul(e_mul(b.y, a.z), z1z1);
  auto h = e_sub(u2, a.x);
  auto rr = e_sub(s2, a.y);
  if (e_iszero(h)) {
    if (e_iszero(rr)) return pt_dbl(a);
    return pt_infinity<P>();
  }
  auto hh = e_sqr(h);
  auto i = e_dbl(e_dbl(hh));
  auto j = e_mul(h, i);
  rr = e_dbl(rr);
  auto v = e_mul(a.x, i);
  P out;
  out.x = e_sub(e_sub(e_sqr(rr), j), e_dbl(v));
  out.y = e_sub(e_mul(rr, e_sub(v, out.x)), e_dbl(e_mul(a.y, j)));
  out.z = e_sub(e_sub(e_sqr(e_add(a.z, h)), z1z1), hh);
  return out;
}

template <typename P>
P pt_neg(const P& a) {
  P out = a;
  out.y = e_neg(out.y);
  return out;
}

template <typename P>
bool pt_eq(const P& a, const P& b) {
  bool ia = pt_is_inf(a), ib = pt_is_inf(b);
  if (ia || ib) return ia == ib;
  auto z1z1 = e_sqr(a.z);
  auto z2z2 = e_sqr(b.z);
  if (!(e_mul(a.x, z2z2) == e_mul(b.x, z1z1))) return false;
  return e_mul(e_mul(a.y, b.z), z2z2) == e_mul(e_mul(b.y, a.z), z1z1);
}

template <typename P>
P pt_to_affine(const P& a) {
  if (pt_is_inf(a)) return a;
  auto zinv = e_inv(a.z);
  auto zinv2 = e_sqr(zinv);
  P out;
  out.x = e_mul(a.x, zinv2);
  out.y = e_mul(a.y, e_mul(zinv2, zinv));
  out.z = e_one(a.z);
  return out;
}

// 4-bit wNAF ladder.
template <typename P>
P pt_scalar_mul(const P& base, const U256& k) {
  if (k.is_zero() || pt_is_inf(base)) return pt_infinity<P>();
  // wNAF digits
  std::vector<int8_t> digits;
  digits.reserve(260);
  U256 n = k;
  while (!n.is_zero()) {
    int8_t d = 0;
    if (n.limb[0] & 1) {
      int v = (int)(n.limb[0] & 0x1f);  // n mod 32
      d = (int8_t)(v >= 16 ? v - 32 : v);
      if (d > 0) {
        U256 t = U256::from_u64((uint64_t)d);
        u256_sub(n, n, t);
      } else {
        U256 t = U256::from_u64((uint64_t)(-d));
        u256_add(n, n, t);
      }
    }
    digits.push_back(d);
    for (int i = 0; i < 3; i++) n.limb[i] = n.limb[i] >> 1 | n.limb[i + 1] << 63;
    n.limb[3] >>= 1;
  }
  // odd multiples 1,3,...,15
  P tb[8];
  tb[0] = base;
  P twice = pt_dbl(base);
  for (int i = 1; i < 8; i++) tb[i] = pt_add(tb[i - 1], twice);
  P acc = pt_infinity<P>();
  for (int i = (int)digits.size() - 1; i >= 0; i--) {
    acc = pt_dbl(acc);
    int8_t d = digits[(size_t)i];
    if (d > 0) acc = pt_add(acc, tb[(d - 1) / 2]);
    if (d < 0) acc = pt_add(acc, pt_neg(tb[(-d - 1) / 2]));
  }
  return acc;
}

template <typename P>
void batch_normalize(std::vector<P>& pts) {
  size_t n = pts.size();
  if (n == 0) return;
  using E = decltype(pts[0].z);
  std::vector<E> prefix(n);
  E acc = e_one(pts[0].z);
  for (size_t i = 0; i < n; i++) {
    prefix[i] = acc;
    if (!pt_is_inf(pts[i])) acc = e_mul(acc, pts[i].z);
  }
  E inv = e_inv(acc);
  for (size_t i = n; i-- > 0;) {
    if (pt_is_inf(pts[i])) continue;
    E zinv = e_mul(inv, prefix[i]);
    inv = e_mul(inv, pts[i].z);
    E zinv2 = e_sqr(zinv);
    pts[i].x = e_mul(pts[i].x, zinv2);
    pts[i].y = e_mul(pts[i].y, e_mul(zinv2, zinv));
    pts[i].z = e_one(pts[i].z);
  }
}

template <typename P>
std::vector<P> build_table(const P& base) {
  std::vector<P> tbl;
  if (pt_is_inf(base)) return tbl;
  tbl.reserve(32 * 255);
  P cur = base;
  for (int win = 0; win < 32; win++) {
    P row = cur;
    for (int d = 1; d <= 255; d++) {
      tbl.push_back(row);
      row = pt_add(row, cur);
    }
    cur = row;  // 256 * previous window base
  }
  batch_normalize(tbl);
  return tbl;
}

template <typename P>
P table_mul(const std::vector<P>& tbl, const U256& k) {
  P acc = pt_infinity<P>();
  if (tbl.empty()) return acc;
  for (int win = 0; win < 32; win++) {
    unsigned byte = (unsigned)(k.limb[win / 8] >> (8 * (win % 8))) & 0xff;
    if (byte) acc = pt_madd(acc, tbl[(size_t)win * 255 + byte - 1]);
  }
  return acc;
}

// -------------------------------------------------------------- hashing ---

U256 hash_to_fp_int(BytesView domain, BytesView msg, uint32_t ctr, uint8_t which) {
  ByteWriter w;
  w.field(domain);
  w.field(msg);
  w.u32(ctr);
  w.raw_u8(which);
  U256 v = U256::from_be_bytes(sha256(w.bytes()));
  // digest < 2^256 < 2p, so one conditional subtraction reduces mod p
  if (u256_cmp(v, FC().p) >= 0) u256_sub(v, v, FC().p);
  return v;
}

// -------------------------------------------------------------- pairing ---

// Multiplies f by the sparse line value  c + b*w + a*tau*w.
void mul_line(Fp12& f, const Fp2& a, const Fp2& b, const Fp2& cc) {
  Fp6 t1 = f6mul(f.c1, Fp6{b, a, f2zero()});
  Fp6 t3 = f6scale(f.c0, cc);
  Fp6 sum = f6add(f.c1, f.c0);
  Fp6 t2 = f6mul(sum, Fp6{f2add(b, cc), a, f2zero()});
  f.c1 = f6sub(f6sub(t2, t1), t3);
  f.c0 = f6add(t3, f6mul_tau(t1));
}

// Doubling step: updates T and multiplies f by the tangent line at T
// evaluated at affine P. Coordinates follow the dclxvi-style Jacobian
// line formulas.
void line_double(Fp12& f, G2Point& T, const G1Point& P) {
  Fp2 r_t = f2sqr(T.z);
  Fp2 A = f2sqr(T.x);
  Fp2 B = f2sqr(T.y);
  Fp2 Cc = f2sqr(B);
  Fp2 D = f2sqr(f2add(T.x, B));
  D = f2dbl(f2sub(f2sub(D, A), Cc));
  Fp2 E = f2add(f2dbl(A), A);
  Fp2 F = f2sqr(E);
  Fp2 x3 = f2sub(F, f2dbl(D));
  Fp2 y3 = f2sub(f2mul(E, f2sub(D, x3)), f2dbl(f2dbl(f2dbl(Cc))));
  Fp2 z3 = f2sub(f2sub(f2sqr(f2add(T.y, T.z)), B), r_t);

  Fp2 a = f2sqr(f2add(T.x, E));
  a = f2sub(a, f2add(f2add(A, F), f2dbl(f2dbl(B))));
  Fp2 b = f2scale(f2neg(f2dbl(f2mul(E, r_t))), P.x);
  Fp2 cc = f2scale(f2dbl(f2mul(z3, r_t)), P.y);

  T = G2Point{x3, y3, z3};
  mul_line(f, a, b, cc);
}

// Addition step with affine twist point Q (r2 = Q.y^2 precomputed).
void line_add(Fp12& f, G2Point& T, const G2Point& Q, const G1Point& P, const Fp2& r2) {
  Fp2 r_t = f2sqr(T.z);
  Fp2 B = f2mul(Q.x, r_t);
  Fp2 D = f2sub(f2sub(f2sqr(f2add(Q.y, T.z)), r2), r_t);
  D = f2mul(D, r_t);
  Fp2 H = f2sub(B, T.x);
  Fp2 I = f2sqr(H);
  Fp2 E = f2dbl(f2dbl(I));
  Fp2 J = f2mul(H, E);
  Fp2 L1 = f2sub(f2sub(D, T.y), T.y);
  Fp2 V = f2mul(T.x, E);
  Fp2 x3 = f2sub(f2sub(f2sqr(L1), J), f2dbl(V));
  Fp2 z3 = f2sub(f2sub(f2sqr(f2add(T.z, H)), r_t), I);
  Fp2 y3 = f2sub(f2mul(f2sub(V, x3), L1), f2dbl(f2mul(T.y, J)));

  Fp2 t = f2sub(f2sub(f2sqr(f2add(Q.y, z3)), r2), f2sqr(z3));
  Fp2 a = f2sub(f2dbl(f2mul(L1, Q.x)), t);
  Fp2 cc = f2scale(f2dbl(z3), P.y);
  Fp2 b = f2scale(f2neg(f2dbl(L1)), P.x);

  T = G2Point{x3, y3, z3};
  mul_line(f, a, b, cc);
}

Fp12 miller_loop(const G1Point& p_in, const G2Point& q_in) {
  const Ctx& c = C();
  G1Point P = pt_to_affine(p_in);
  G2Point Q = pt_to_affine(q_in);
  G2Point mQ = pt_neg(Q);
  Fp2 r2 = f2sqr(Q.y);

  Fp12 f = f12one();
  G2Point T = Q;
  const auto& naf = c.naf_loop;
  for (int i = (int)naf.size() - 2; i >= 0; i--) {
    f = f12sqr(f);
    line_double(f, T, P);
    if (naf[(size_t)i] == 1) line_add(f, T, Q, P, r2);
    if (naf[(size_t)i] == -1) line_add(f, T, mQ, P, r2);
  }

  // Q1 = psi(Q), mQ2 = -psi^2(Q)
  G2Point Q1{f2mul(f2conj(Q.x), c.gamma1[2]), f2mul(f2conj(Q.y), c.gamma1[3]), f2one()};
  G2Point mQ2{f2mul(Q.x, c.gamma2[2]), Q.y, f2one()};
  line_add(f, T, Q1, P, f2sqr(Q1.y));
  line_add(f, T, mQ2, P, f2sqr(mQ2.y));
  return f;
}

Fp12 final_exp(const Fp12& inp) {
  // easy part: inp^((p^6 - 1)(p^2 + 1))
  Fp12 t1 = f12mul(f12conj(inp), f12inv(inp));
  t1 = f12mul(f12frob_p2(t1), t1);

  // hard part, Scott et al. addition chain (as in dclxvi/go-bn256)
  Fp12 fp1 = f12frob(t1);
  Fp12 fp2v = f12frob_p2(t1);
  Fp12 fp3 = f12frob(fp2v);

  Fp12 fu1 = f12pow_u64(t1, kCurveU);
  Fp12 fu2 = f12pow_u64(fu1, kCurveU);
  Fp12 fu3 = f12pow_u64(fu2, kCurveU);

  Fp12 y3 = f12conj(f12frob(fu1));
  Fp12 fu2p = f12frob(fu2);
  Fp12 fu3p = f12frob(fu3);
  Fp12 y2 = f12frob_p2(fu2);

  Fp12 y0 = f12mul(f12mul(fp1, fp2v), fp3);
  Fp12 y1 = f12conj(t1);
  Fp12 y5 = f12conj(fu2);
  Fp12 y4 = f12conj(f12mul(fu1, fu2p));
  Fp12 y6 = f12conj(f12mul(fu3, fu3p));

  Fp12 t0 = f12mul(f12mul(f12sqr(y6), y4), y5);
  Fp12 t1b = f12mul(f12mul(y3, y5), t0);
  t0 = f12mul(t0, y2);
  t1b = f12sqr(f12mul(f12sqr(t1b), t0));
  Fp12 t0b = f12mul(t1b, y1);
  t1b = f12mul(t1b, y0);
  t0b = f12mul(f12sqr(t0b), t1b);
  return t0b;
}

}  // namespace

// ------------------------------------------------------------ public API ---

const U256& base_prime() { return C().p; }
const U256& group_order() { return C().q; }

G1Point g1_infinity() { return pt_infinity<G1Point>(); }
const G1Point& g1_generator() { return C().g1_gen; }
G1Point g1_add(const G1Point& a, const G1Point& b) { return pt_add(a, b); }
G1Point g1_neg(const G1Point& a) { return pt_neg(a); }
G1Point g1_scalar_mul(const G1Point& a, const U256& k) { return pt_scalar_mul(a, k); }
bool g1_eq(const G1Point& a, const G1Point& b) { return pt_eq(a, b); }
bool g1_is_infinity(const G1Point& a) { return pt_is_inf(a); }
G1Point g1_affine(const G1Point& a) { return pt_to_affine(a); }

G2Point g2_infinity() { return pt_infinity<G2Point>(); }
G2Point g2_add(const G2Point& a, const G2Point& b) { return pt_add(a, b); }
G2Point g2_neg(const G2Point& a) { return pt_neg(a); }
G2Point g2_scalar_mul(const G2Point& a, const U256& k) { return pt_scalar_mul(a, k); }
bool g2_eq(const G2Point& a, const G2Point& b) { return pt_eq(a, b); }
bool g2_is_infinity(const G2Point& a) { return pt_is_inf(a); }
G2Point g2_affine(const G2Point& a) { return pt_to_affine(a); }
const Fp2& twist_b() { return C().b_twist; }

bool g2_in_subgroup(const G2Point& a) {
  if (pt_is_inf(a)) return true;
  return pt_is_inf(pt_scalar_mul(a, C().q));
}

Bytes g1_encode(const G1Point& a) {
  Bytes out(33, 0);
  if (pt_is_inf(a)) return out;
  G1Point aff = pt_to_affine(a);
  out[0] = fp_is_odd(aff.y) ? 0x03 : 0x02;
  Bytes xb = fp_to_canonical(aff.x).to_be_bytes();
  std::copy(xb.begin(), xb.end(), out.begin() + 1);
  return out;
}

G1Point g1_decode(BytesView b) {
  if (b.size() != 33) throw EncodingError("G1 encoding must be 33 bytes");
  if (b[0] == 0x00) {
    for (size_t i = 1; i < 33; i++)
      if (b[i] != 0) throw EncodingError("non-canonical G1 infinity encoding");
    return g1_infinity();
  }
  if (b[0] != 0x02 && b[0] != 0x03) throw EncodingError("bad G1 compression tag");
  U256 xv = U256::from_be_bytes(b.subspan(1));
  if (u256_cmp(xv, C().p) >= 0) throw EncodingError("G1 x coordinate out of range");
  Fp x = fp_from_canonical(xv);
  Fp rhs = fadd(fmul(fsqr(x), x), C().b_curve);
  Fp y;
  if (!fp_sqrt(y, rhs)) throw EncodingError("G1 x coordinate not on the curve");
  bool want_odd = b[0] == 0x03;
  if (fp_is_odd(y) != want_odd) y = fneg(y);
  return G1Point{x, y, fone()};
}

G1Point g1_hash_to_point(BytesView domain, BytesView msg) {
  for (uint32_t ctr = 0;; ctr++) {
    Fp x = fp_from_canonical(hash_to_fp_int(domain, msg, ctr, 0));
    Fp rhs = fadd(fmul(fsqr(x), x), C().b_curve);
    Fp y;
    if (!fp_sqrt(y, rhs)) continue;
    if (fp_is_odd(y)) y = fneg(y);
    return G1Point{x, y, fone()};
  }
}

Bytes g2_encode(const G2Point& a) {
  Bytes out(65, 0);
  if (pt_is_inf(a)) return out;
  G2Point aff = pt_to_affine(a);
  out[0] = f2sign(aff.y) ? 0x03 : 0x02;
  Bytes x0 = fp_to_canonical(aff.x.c0).to_be_bytes();
  Bytes x1 = fp_to_canonical(aff.x.c1).to_be_bytes();
  std::copy(x0.begin(), x0.end(), out.begin() + 1);
  std::copy(x1.begin(), x1.end(), out.begin() + 33);
  return out;
}

G2Point g2_decode(BytesView b) {
  if (b.size() != 65) throw EncodingError("G2 encoding must be 65 bytes");
  if (b[0] == 0x00) {
    for (size_t i = 1; i < 65; i++)
      if (b[i] != 0) throw EncodingError("non-canonical G2 infinity encoding");
    return g2_infinity();
  }
  if (b[0] != 0x02 && b[0] != 0x03) throw EncodingError("bad G2 compression tag");
  U256 x0 = U256::from_be_bytes(b.subspan(1, 32));
  U256 x1 = U256::from_be_bytes(b.subspan(33, 32));
  if (u256_cmp(x0, C().p) >= 0 || u256_cmp(x1, C().p) >= 0)
    throw EncodingError("G2 x coordinate out of range");
  Fp2 x{fp_from_canonical(x0), fp_from_canonical(x1)};
  Fp2 rhs = f2add(f2mul(f2sqr(x), x), C().b_twist);
  Fp2 y;
  if (!f2sqrt(y, rhs)) throw EncodingError("G2 x coordinate not on the twist");
  if (f2sign(y) != (b[0] == 0x03 ? 1 : 0)) y = f2neg(y);
  G2Point out{x, y, f2one()};
  if (!g2_in_subgroup(out)) throw EncodingError("G2 point not in the prime-order subgroup");
  return out;
}

G2Point g2_hash_to_point(BytesView domain, BytesView msg) {
  for (uint32_t ctr = 0;; ctr++) {
    Fp2 x{fp_from_canonical(hash_to_fp_int(domain, msg, ctr, 0)),
          fp_from_canonical(hash_to_fp_int(domain, msg, ctr, 1))};
    Fp2 rhs = f2add(f2mul(f2sqr(x), x), C().b_twist);
    Fp2 y;
    if (!f2sqrt(y, rhs)) continue;
    if (f2sign(y)) y = f2neg(y);
    G2Point raw{x, y, f2one()};
    G2Point out = pt_scalar_mul(raw, C().c2);  // clear the twist cofactor
    if (pt_is_inf(out)) continue;
    return out;
  }
}

Fp12 gt_one() { return f12one(); }
Fp12 gt_mul(const Fp12& a, const Fp12& b) { return f12mul(a, b); }
Fp12 gt_inv(const Fp12& a) { return f12inv(a); }
Fp12 gt_pow(const Fp12& a, const U256& k) { return f12pow(a, k); }
bool gt_is_one(const Fp12& a) { return a == f12one(); }

Bytes gt_encode(const Fp12& a) {
  Bytes out;
  out.reserve(384);
  auto put2 = [&](const Fp2& v) {
    Bytes b0 = fp_to_canonical(v.c0).to_be_bytes();
    Bytes b1 = fp_to_canonical(v.c1).to_be_bytes();
    out.insert(out.end(), b0.begin(), b0.end());
    out.insert(out.end(), b1.begin(), b1.end());
  };
  put2(a.c0.c0);
  put2(a.c0.c1);
  put2(a.c0.c2);
  put2(a.c1.c0);
  put2(a.c1.c1);
  put2(a.c1.c2);
  return out;
}

Fp12 gt_decode(BytesView b) {
  if (b.size() != 384) throw EncodingError("GT encoding must be 384 bytes");
  auto get2 = [&](size_t i) {
    U256 c0 = U256::from_be_bytes(b.subspan(i * 64, 32));
    U256 c1 = U256::from_be_bytes(b.subspan(i * 64 + 32, 32));
    if (u256_cmp(c0, C().p) >= 0 || u256_cmp(c1, C().p) >= 0)
      throw EncodingError("GT coefficient out of range");
    return Fp2{fp_from_canonical(c0), fp_from_canonical(c1)};
  };
  Fp12 out{{get2(0), get2(1), get2(2)}, {get2(3), get2(4), get2(5)}};
  if (!gt_is_one(f12pow(out, C().q)))
    throw EncodingError("GT element not in the prime-order subgroup");
  return out;
}

Fp12 pairing(const G1Point& p, const G2Point& q) {
  if (pt_is_inf(p) || pt_is_inf(q)) return f12one();
  return final_exp(miller_loop(p, q));
}

G1Table::G1Table(const G1Point& base) : tbl_(build_table(base)) {}
G1Point G1Table::mul(const U256& k) const { return table_mul(tbl_, k); }

G2Table::G2Table(const G2Point& base) : tbl_(build_table(base)) {}
G2Point G2Table::mul(const U256& k) const { return table_mul(tbl_, k); }

Fp fp_from_u256(const U256& canonical) { return fp_from_canonical(canonical); }
U256 fp_to_u256(const Fp& a) { return fp_to_canonical(a); }
Fp2 fp2_mul(const Fp2& a, const Fp2& b) { return f2mul(a, b); }
Fp2 fp2_add(const Fp2& a, const Fp2& b) { return f2add(a, b); }
Fp2 fp2_sub(const Fp2& a, const Fp2& b) { return f2sub(a, b); }
Fp2 fp2_inv(const Fp2& a) { return f2inv(a); }
bool fp2_sqrt(Fp2& out, const Fp2& a) { return f2sqrt(out, a); }
Fp12 fp12_mul(const Fp12& a, const Fp12& b) { return f12mul(a, b); }
Fp12 fp12_inv(const Fp12& a) { return f12inv(a); }
Fp12 fp12_frobenius(const Fp12& a) { return f12frob(a); }

}  // namespace ppat::bn256
