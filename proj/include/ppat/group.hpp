#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "ppat/bn256.hpp"
#include "ppat/bytes.hpp"
#include "ppat/rng.hpp"
#include "ppat/u256.hpp"

// Bilinear group abstraction over two interchangeable backends:
//
//   real_curve — the BN curve from bn256.hpp.
//   toy        — an exhaustively testable model where every element of
//                G1/G2/GT *is* its discrete log mod a small prime q.
//                The group operation is addition mod q, exponentiation is
//                multiplication mod q and the "pairing" multiplies logs.
//                Toy seeds have the form "T<q>", e.g. "T11".
//
// Both backends share the same canonical encodings discipline: exactly one
// byte string per element, and decoding rejects anything outside the
// prime-order subgroup.
namespace ppat {

enum class Backend : uint8_t { real_curve = 1, toy = 2 };

struct Scalar {
  U256 v;  // canonical residue in [0, q)
  friend bool operator==(const Scalar&, const Scalar&) = default;
};

class G1Elem {
 public:
  G1Elem() : v_(uint64_t{0}) {}
  explicit G1Elem(uint64_t toy_log) : v_(toy_log) {}
  explicit G1Elem(const bn256::G1Point& p) : v_(p) {}

  bool is_toy() const { return std::holds_alternative<uint64_t>(v_); }
  uint64_t toy_log() const { return std::get<uint64_t>(v_); }
  const bn256::G1Point& point() const { return std::get<bn256::G1Point>(v_); }

  friend bool operator==(const G1Elem& a, const G1Elem& b);

 private:
  std::variant<uint64_t, bn256::G1Point> v_;
};

class G2Elem {
 public:
  G2Elem() : v_(uint64_t{0}) {}
  explicit G2Elem(uint64_t toy_log) : v_(toy_log) {}
  explicit G2Elem(const bn256::G2Point& p) : v_(p) {}

  bool is_toy() const { return std::holds_alternative<uint64_t>(v_); }
  uint64_t toy_log() const { return std::get<uint64_t>(v_); }
  const bn256::G2Point& point() const { return std::get<bn256::G2Point>(v_); }

  friend bool operator==(const G2Elem& a, const G2Elem& b);

 private:
  std::variant<uint64_t, bn256::G2Point> v_;
};

class GTElem {
 public:
  GTElem() : v_(uint64_t{0}) {}
  explicit GTElem(uint64_t toy_log) : v_(toy_log) {}
  explicit GTElem(const bn256::Fp12& f) : v_(f) {}

  bool is_toy() const { return std::holds_alternative<uint64_t>(v_); }
  uint64_t toy_log() const { return std::get<uint64_t>(v_); }
  const bn256::Fp12& value() const { return std::get<bn256::Fp12>(v_); }

  friend bool operator==(const GTElem& a, const GTElem& b);

 private:
  std::variant<uint64_t, bn256::Fp12> v_;
};

// Instrumentation snapshot. "exp" counters tick once per exp_* call
// (whatever the exponent) plus once per multi-exponentiation base whose
// exponent lies outside {0,1}. The fixed/var split classifies non-trivial
// base powers by whether the base is a registered fixed base; exponents 0
// and 1 are never classified since no base power is computed for them.
// This per-base convention is normative for the 6/5 accounting figure.
struct OpCounts {
  uint64_t g1_exp = 0, g2_exp = 0, gt_exp = 0, pairings = 0;
  uint64_t g1_fixed = 0, g1_var = 0, g2_fixed = 0, g2_var = 0;
};

class GroupParams {
 public:
  // Deterministic for a given (backend, seed). Toy seeds are "T<q>" with
  // q an odd prime below 2^31; the real curve ignores nothing: its group
  // is fixed but h2 is derived from the seed by hash-to-group.
  static GroupParams setup(Backend backend, std::string_view seed);

  Backend backend() const;
  const std::string& seed() const;
  const U256& order() const;
  uint64_t toy_order() const;  // toy backend only
  Bytes digest() const;        // SHA-256 over the group description

  const G1Elem& g1() const;
  const G2Elem& h1() const;
  const G2Elem& h2() const;
  const GTElem& gt() const;   // e(g1, h1)
  const GTElem& gt2() const;  // e(g1, h2), the decryption basis

  // ---- scalar field -----------------------------------------------------
  Scalar sc(uint64_t v) const;
  Scalar sc_from(const U256& v) const;  // reduces mod q
  Scalar sc_add(const Scalar& a, const Scalar& b) const;
  Scalar sc_sub(const Scalar& a, const Scalar& b) const;
  Scalar sc_mul(const Scalar& a, const Scalar& b) const;
  Scalar sc_neg(const Scalar& a) const;
  Scalar sc_inv(const Scalar& a) const;
  Scalar sc_random(RandomSource& rng) const;          // uniform in [0, q)
  Scalar sc_random_nonzero(RandomSource& rng) const;  // uniform in [1, q)

  // ---- group operations ---------------------------------------------
  G1Elem identity_g1() const;
  G2Elem identity_g2() const;
  GTElem identity_gt() const;
  bool is_identity(const G1Elem& a) const;
  bool is_identity(const G2Elem& a) const;
  bool is_identity(const GTElem& a) const;

  G1Elem mul_g1(const G1Elem& a, const G1Elem& b) const;
  G2Elem mul_g2(const G2Elem& a, const G2Elem& b) const;
  GTElem mul_gt(const GTElem& a, const GTElem& b) const;
  G1Elem inv_g1(const G1Elem& a) const;
  G2Elem inv_g2(const G2Elem& a) const;
  GTElem inv_gt(const GTElem& a) const;
  G1Elem div_g1(const G1Elem& a, const G1Elem& b) const;
  G2Elem div_g2(const G2Elem& a, const G2Elem& b) const;
  GTElem div_gt(const GTElem& a, const GTElem& b) const;

  G1Elem exp_g1(const G1Elem& base, const Scalar& k) const;
  G2Elem exp_g2(const G2Elem& base, const Scalar& k) const;
  GTElem exp_gt(const GTElem& base, const Scalar& k) const;
  GTElem exp_gt_u64(const GTElem& base, uint64_t k) const;

  GTElem pair(const G1Elem& a, const G2Elem& b) const;

  G1Elem multiexp_g1(std::span<const G1Elem> bases, std::span<const Scalar> exps) const;
  G2Elem multiexp_g2(std::span<const G2Elem> bases, std::span<const Scalar> exps) const;

  // Deterministic hash-to-group (rejection sampling), used for extra bases.
  G2Elem derive_g2(std::string_view domain, BytesView seed) const;

  // ---- encodings ------------------------------------------------------
  Bytes enc_scalar(const Scalar& s) const;
  Bytes enc_g1(const G1Elem& a) const;
  Bytes enc_g2(const G2Elem& a) const;
  Bytes enc_gt(const GTElem& a) const;
  Scalar dec_scalar(BytesView b) const;
  G1Elem dec_g1(BytesView b) const;
  G2Elem dec_g2(BytesView b) const;
  GTElem dec_gt(BytesView b) const;

  // ---- instrumentation & precomputation ------------------------------
  OpCounts counters() const;
  void reset_counters() const;
  // Registers a base for fixed-base classification and (real backend,
  // when precomputation is on) builds its window table.
  void register_fixed_base(const G1Elem& base) const;
  void register_fixed_base(const G2Elem& base) const;
  void set_precomputation(bool enabled) const;
  bool precomputation_enabled() const;

  struct Impl;

 private:
  explicit GroupParams(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<Impl> impl_;
};

}  // namespace ppat
