#include "ppat/u256.hpp"

#include <openssl/crypto.h>
#include <openssl/sha.h>

#include "ppat/errors.hpp"

namespace ppat {

std::string hex_encode(BytesView data) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

static int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

Bytes hex_decode(std::string_view hex) {
  if (hex.size() % 2 != 0) throw EncodingError("hex string has odd length");
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); i++) {
    int hi = hex_nibble(hex[2 * i]), lo = hex_nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0)
      throw EncodingError("invalid hex digit at offset " + std::to_string(2 * i));
    out[i] = static_cast<uint8_t>(hi << 4 | lo);
  }
  return out;
}

Bytes sha256(BytesView data) {
  Bytes out(32);
  SHA256(data.data(), data.size(), out.data());
  return out;
}

void ByteWriter::u32(uint32_t v) {
  for (int i = 3; i >= 0; i--) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(uint64_t v) {
  for (int i = 7; i >= 0; i--) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::field(BytesView data) {
  u32(static_cast<uint32_t>(data.size()));
  raw(data);
}

void secure_wipe(void* p, size_t n) { OPENSSL_cleanse(p, n); }

U256 U256::from_be_bytes(BytesView b) {
  if (b.size() != 32) throw EncodingError("expected 32 bytes for a 256-bit value");
  U256 out;
  for (int i = 0; i < 4; i++) {
    uint64_t v = 0;
    for (int j = 0; j < 8; j++) v = v << 8 | b[(3 - i) * 8 + j];
    out.limb[i] = v;
  }
  return out;
}

U256 U256::from_hex(std::string_view hex) {
  if (hex.starts_with("0x")) hex.remove_prefix(2);
  std::string padded(64 - hex.size(), '0');
  if (hex.size() > 64) throw EncodingError("hex value wider than 256 bits");
  padded += hex;
  return from_be_bytes(hex_decode(padded));
}

Bytes U256::to_be_bytes() const {
  Bytes out(32);
  for (int i = 0; i < 4; i++)
    for (int j = 0; j < 8; j++)
      out[(3 - i) * 8 + j] = static_cast<uint8_t>(limb[i] >> (8 * (7 - j)));
  return out;
}

std::string U256::to_hex() const { return hex_encode(to_be_bytes()); }

unsigned U256::bit_length() const {
  for (int i = 3; i >= 0; i--)
    if (limb[i] != 0) return 64 * i + (64 - __builtin_clzll(limb[i]));
  return 0;
}

int u256_cmp(const U256& a, const U256& b) {
  for (int i = 3; i >= 0; i--) {
    if (a.limb[i] < b.limb[i]) return -1;
    if (a.limb[i] > b.limb[i]) return 1;
  }
  return 0;
}

uint64_t u256_add(U256& out, const U256& a, const U256& b) {
  unsigned __int128 c = 0;
  for (int i = 0; i < 4; i++) {
    c += (unsigned __int128)a.limb[i] + b.limb[i];
    out.limb[i] = (uint64_t)c;
    c >>= 64;
  }
  return (uint64_t)c;
}

uint64_t u256_sub(U256& out, const U256& a, const U256& b) {
  unsigned __int128 borrow = 0;
  for (int i = 0; i < 4; i++) {
    unsigned __int128 d = (unsigned __int128)a.limb[i] - b.limb[i] - borrow;
    out.limb[i] = (uint64_t)d;
    borrow = (d >> 64) & 1;
  }
  return (uint64_t)borrow;
}

uint64_t u256_mul_u64(U256& out, const U256& a, uint64_t m) {
  unsigned __int128 c = 0;
  for (int i = 0; i < 4; i++) {
    c += (unsigned __int128)a.limb[i] * m;
    out.limb[i] = (uint64_t)c;
    c >>= 64;
  }
  return (uint64_t)c;
}

namespace {

// 320-bit scratch value for shift-and-reduce loops.
struct U320 {
  uint64_t l[5] = {0, 0, 0, 0, 0};

  void shl1_or(bool bit) {
    for (int i = 4; i > 0; i--) l[i] = l[i] << 1 | l[i - 1] >> 63;
    l[0] = l[0] << 1 | (bit ? 1 : 0);
  }
  bool geq(const U256& n) const {
    if (l[4] != 0) return true;
    U256 v{{l[0], l[1], l[2], l[3]}};
    return u256_cmp(v, n) >= 0;
  }
  void sub(const U256& n) {
    unsigned __int128 borrow = 0;
    for (int i = 0; i < 4; i++) {
      unsigned __int128 d = (unsigned __int128)l[i] - n.limb[i] - borrow;
      l[i] = (uint64_t)d;
      borrow = (d >> 64) & 1;
    }
    l[4] -= (uint64_t)borrow;
  }
  U256 low() const { return U256{{l[0], l[1], l[2], l[3]}}; }
};

}  // namespace

U256 u256_mod(const U256& x, const U256& n) {
  U320 r;
  for (int i = 255; i >= 0; i--) {
    r.shl1_or(x.bit(i));
    if (r.geq(n)) r.sub(n);
  }
  return r.low();
}

uint64_t u256_mod_u64(const U256& x, uint64_t n) {
  unsigned __int128 r = 0;
  for (int i = 3; i >= 0; i--) r = ((r << 64) | x.limb[i]) % n;
  return (uint64_t)r;
}

U256 u256_div_u64(const U256& x, uint64_t d, uint64_t* rem) {
  U256 q;
  unsigned __int128 r = 0;
  for (int i = 3; i >= 0; i--) {
    r = (r << 64) | x.limb[i];
    q.limb[i] = (uint64_t)(r / d);
    r %= d;
  }
  if (rem) *rem = (uint64_t)r;
  return q;
}

PrimeField::PrimeField(const U256& modulus) : n_(modulus) {
  if (n_.is_zero() || (n_.limb[0] & 1) == 0)
    throw Error("PrimeField requires an odd modulus");
  // n0 = -n^-1 mod 2^64 by Newton iteration
  uint64_t x = n_.limb[0];
  uint64_t inv = x;
  for (int i = 0; i < 5; i++) inv *= 2 - x * inv;
  n0_ = ~inv + 1;
  // r = 2^256 mod n, r2 = 2^512 mod n by repeated doubling
  U256 acc = u256_mod(U256::from_u64(1), n_);
  for (int i = 0; i < 512; i++) {
    U256 dbl;
    uint64_t carry = u256_add(dbl, acc, acc);
    if (carry || u256_cmp(dbl, n_) >= 0) u256_sub(dbl, dbl, n_);
    acc = dbl;
    if (i == 255) r_ = acc;
  }
  r2_ = acc;
}

U256 PrimeField::add(const U256& a, const U256& b) const {
  U256 out;
  uint64_t carry = u256_add(out, a, b);
  if (carry || u256_cmp(out, n_) >= 0) u256_sub(out, out, n_);
  return out;
}

U256 PrimeField::sub(const U256& a, const U256& b) const {
  U256 out;
  if (u256_sub(out, a, b)) u256_add(out, out, n_);
  return out;
}

U256 PrimeField::neg(const U256& a) const {
  if (a.is_zero()) return a;
  U256 out;
  u256_sub(out, n_, a);
  return out;
}

U256 PrimeField::mul(const U256& a, const U256& b) const {
  // (a*R) * b * R^-1 = a*b, already canonical
  return mmul(to_mont(a), b);
}

U256 PrimeField::pow(const U256& a, const U256& e) const {
  U256 base = to_mont(a);
  U256 acc = r_;
  unsigned nbits = e.bit_length();
  for (int i = (int)nbits - 1; i >= 0; i--) {
    acc = mmul(acc, acc);
    if (e.bit((unsigned)i)) acc = mmul(acc, base);
  }
  return from_mont(acc);
}

U256 PrimeField::pow_u64(const U256& a, uint64_t e) const {
  return pow(a, U256::from_u64(e));
}

U256 PrimeField::inv(const U256& a) const {
  U256 e;
  u256_sub(e, n_, U256::from_u64(2));
  return pow(a, e);
}

U256 PrimeField::from_bytes_mod(BytesView b) const {
  if (b.size() > 32) throw EncodingError("from_bytes_mod input wider than 256 bits");
  Bytes padded(32 - b.size(), 0);
  padded.insert(padded.end(), b.begin(), b.end());
  return u256_mod(U256::from_be_bytes(padded), n_);
}

}  // namespace ppat
