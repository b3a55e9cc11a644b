#include "ppat/group.hpp"

#include <atomic>
#include <mutex>
#include <shared_mutex>

#include "ppat/errors.hpp"

namespace ppat {

bool operator==(const G1Elem& a, const G1Elem& b) {
  if (a.is_toy() != b.is_toy()) return false;
  if (a.is_toy()) return a.toy_log() == b.toy_log();
  return bn256::g1_eq(a.point(), b.point());
}
bool operator==(const G2Elem& a, const G2Elem& b) {
  if (a.is_toy() != b.is_toy()) return false;
  if (a.is_toy()) return a.toy_log() == b.toy_log();
  return bn256::g2_eq(a.point(), b.point());
}
bool operator==(const GTElem& a, const GTElem& b) {
  if (a.is_toy() != b.is_toy()) return false;
  if (a.is_toy()) return a.toy_log() == b.toy_log();
  return a.value() == b.value();
}

namespace {

enum CounterIdx {
  kG1Exp = 0,
  kG2Exp,
  kGtExp,
  kPairings,
  kG1Fixed,
  kG1Var,
  kG2Fixed,
  kG2Var,
  kNumCounters
};

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; d++)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

struct GroupParams::Impl {
  Backend backend;
  std::string seed;
  U256 q;
  uint64_t toy_q = 0;  // nonzero iff toy backend
  PrimeField sf;
  G1Elem g1;
  G2Elem h1, h2;
  GTElem gt, gt2;
  Bytes digest;

  mutable std::array<std::atomic<uint64_t>, kNumCounters> ctr{};
  mutable std::shared_mutex reg_mu;
  mutable std::vector<std::pair<G1Elem, std::unique_ptr<bn256::G1Table>>> g1_reg;
  mutable std::vector<std::pair<G2Elem, std::unique_ptr<bn256::G2Table>>> g2_reg;
  mutable std::atomic<bool> precompute{true};

  bool toy() const { return backend == Backend::toy; }

  uint64_t toy_reduce(const Scalar& k) const { return k.v.low_u64() % toy_q; }

  void bump(CounterIdx i, uint64_t by = 1) const {
    ctr[i].fetch_add(by, std::memory_order_relaxed);
  }

  bool nontrivial(const Scalar& k) const {
    return !k.v.is_zero() && !(k.v == U256::from_u64(1));
  }

  const bn256::G1Table* find_g1(const G1Elem& base, bool* fixed) const {
    std::shared_lock lk(reg_mu);
    for (auto& [b, tbl] : g1_reg)
      if (b == base) {
        *fixed = true;
        return precompute.load(std::memory_order_relaxed) ? tbl.get() : nullptr;
      }
    *fixed = false;
    return nullptr;
  }
  const bn256::G2Table* find_g2(const G2Elem& base, bool* fixed) const {
    std::shared_lock lk(reg_mu);
    for (auto& [b, tbl] : g2_reg)
      if (b == base) {
        *fixed = true;
        return precompute.load(std::memory_order_relaxed) ? tbl.get() : nullptr;
      }
    *fixed = false;
    return nullptr;
  }

  void check_elem(bool elem_is_toy, const char* what) const {
    if (elem_is_toy != toy())
      throw Error(std::string("backend mismatch for ") + what);
  }

  // Core exponentiation without instrumentation.
  G1Elem exp_g1_core(const G1Elem& base, const Scalar& k, const bn256::G1Table* tbl) const {
    if (toy()) return G1Elem((unsigned __int128)base.toy_log() * toy_reduce(k) % toy_q);
    if (k.v.is_zero()) return G1Elem(bn256::g1_infinity());
    if (tbl) return G1Elem(tbl->mul(k.v));
    return G1Elem(bn256::g1_scalar_mul(base.point(), k.v));
  }
  G2Elem exp_g2_core(const G2Elem& base, const Scalar& k, const bn256::G2Table* tbl) const {
    if (toy()) return G2Elem((unsigned __int128)base.toy_log() * toy_reduce(k) % toy_q);
    if (k.v.is_zero()) return G2Elem(bn256::g2_infinity());
    if (tbl) return G2Elem(tbl->mul(k.v));
    return G2Elem(bn256::g2_scalar_mul(base.point(), k.v));
  }
};

GroupParams GroupParams::setup(Backend backend, std::string_view seed) {
  auto impl = std::make_shared<Impl>();
  impl->backend = backend;
  impl->seed = std::string(seed);

  if (backend == Backend::toy) {
    if (seed.empty()) throw Error("toy backend requires a non-empty seed");
    if (seed[0] != 'T' || seed.size() < 2)
      throw Error("toy seed must have the form T<q>, e.g. T11");
    uint64_t q = 0;
    for (char c : seed.substr(1)) {
      if (c < '0' || c > '9') throw Error("toy seed must have the form T<q>");
      q = q * 10 + (uint64_t)(c - '0');
      if (q >= (1ULL << 31)) throw Error("toy modulus too large (must be < 2^31)");
    }
    if (q < 3 || !is_prime_u64(q)) throw Error("toy modulus must be an odd prime >= 3");
    impl->toy_q = q;
    impl->q = U256::from_u64(q);
    impl->sf = PrimeField(impl->q);
    impl->g1 = G1Elem(uint64_t{1});
    impl->h1 = G2Elem(uint64_t{1});
    // h2 by seeded rejection sampling; the group op is addition mod q, so
    // any nonzero log is a generator.
    for (uint32_t ctrv = 0;; ctrv++) {
      ByteWriter w;
      w.raw(to_bytes("ppat/gen-h2"));
      w.raw_u8(0);
      w.raw(to_bytes(seed));
      w.u32(ctrv);
      uint64_t v = u256_mod_u64(U256::from_be_bytes(sha256(w.bytes())), q);
      if (v >= 1) {
        impl->h2 = G2Elem(v);
        break;
      }
    }
    impl->gt = GTElem(uint64_t{1});  // e(g1, h1) = 1*1
    impl->gt2 = GTElem(impl->h2.toy_log());
  } else if (backend == Backend::real_curve) {
    impl->q = bn256::group_order();
    impl->sf = PrimeField(impl->q);
    impl->g1 = G1Elem(bn256::g1_generator());
    impl->h1 = G2Elem(bn256::g2_hash_to_point(to_bytes("ppat/gen-g2-base"), BytesView{}));
    impl->h2 = G2Elem(bn256::g2_hash_to_point(to_bytes("ppat/gen-h2"), to_bytes(seed)));
    impl->gt = GTElem(bn256::pairing(impl->g1.point(), impl->h1.point()));
    impl->gt2 = GTElem(bn256::pairing(impl->g1.point(), impl->h2.point()));
  } else {
    throw Error("unknown backend id");
  }

  GroupParams params(impl);
  {
    ByteWriter w;
    w.field("ppat/group/v1");
    w.raw_u8(static_cast<uint8_t>(backend));
    w.field(seed);
    w.field(impl->q.to_be_bytes());
    w.field(params.enc_g1(impl->g1));
    w.field(params.enc_g2(impl->h1));
    w.field(params.enc_g2(impl->h2));
    impl->digest = sha256(w.bytes());
  }
  params.register_fixed_base(impl->g1);
  params.register_fixed_base(impl->h1);
  params.register_fixed_base(impl->h2);
  return params;
}

Backend GroupParams::backend() const { return impl_->backend; }
const std::string& GroupParams::seed() const { return impl_->seed; }
const U256& GroupParams::order() const { return impl_->q; }
uint64_t GroupParams::toy_order() const {
  if (!impl_->toy()) throw Error("toy_order is only defined for the toy backend");
  return impl_->toy_q;
}
Bytes GroupParams::digest() const { return impl_->digest; }

const G1Elem& GroupParams::g1() const { return impl_->g1; }
const G2Elem& GroupParams::h1() const { return impl_->h1; }
const G2Elem& GroupParams::h2() const { return impl_->h2; }
const GTElem& GroupParams::gt() const { return impl_->gt; }
const GTElem& GroupParams::gt2() const { return impl_->gt2; }

Scalar GroupParams::sc(uint64_t v) const {
  return Scalar{u256_mod(U256::from_u64(v), impl_->q)};
}
Scalar GroupParams::sc_from(const U256& v) const { return Scalar{u256_mod(v, impl_->q)}; }
Scalar GroupParams::sc_add(const Scalar& a, const Scalar& b) const {
  return Scalar{impl_->sf.add(a.v, b.v)};
}
Scalar GroupParams::sc_sub(const Scalar& a, const Scalar& b) const {
  return Scalar{impl_->sf.sub(a.v, b.v)};
}
Scalar GroupParams::sc_mul(const Scalar& a, const Scalar& b) const {
  return Scalar{impl_->sf.mul(a.v, b.v)};
}
Scalar GroupParams::sc_neg(const Scalar& a) const { return Scalar{impl_->sf.neg(a.v)}; }
Scalar GroupParams::sc_inv(const Scalar& a) const {
  if (a.v.is_zero()) throw Error("scalar inverse of zero");
  return Scalar{impl_->sf.inv(a.v)};
}

Scalar GroupParams::sc_random(RandomSource& rng) const {
  unsigned bits = impl_->q.bit_length();
  unsigned nbytes = (bits + 7) / 8;
  uint8_t mask = bits % 8 == 0 ? 0xff : (uint8_t)((1u << (bits % 8)) - 1);
  for (;;) {
    Bytes draw(32, 0);
    rng.fill(std::span<uint8_t>(draw.data() + (32 - nbytes), nbytes));
    draw[32 - nbytes] &= mask;
    U256 v = U256::from_be_bytes(draw);
    if (u256_cmp(v, impl_->q) < 0) return Scalar{v};
  }
}

Scalar GroupParams::sc_random_nonzero(RandomSource& rng) const {
  for (;;) {
    Scalar s = sc_random(rng);
    if (!s.v.is_zero()) return s;
  }
}

G1Elem GroupParams::identity_g1() const {
  return impl_->toy() ? G1Elem(uint64_t{0}) : G1Elem(bn256::g1_infinity());
}
G2Elem GroupParams::identity_g2() const {
  return impl_->toy() ? G2Elem(uint64_t{0}) : G2Elem(bn256::g2_infinity());
}
GTElem GroupParams::identity_gt() const {
  return impl_->toy() ? GTElem(uint64_t{0}) : GTElem(bn256::gt_one());
}
bool GroupParams::is_identity(const G1Elem& a) const { return a == identity_g1(); }
bool GroupParams::is_identity(const G2Elem& a) const { return a == identity_g2(); }
bool GroupParams::is_identity(const GTElem& a) const { return a == identity_gt(); }

G1Elem GroupParams::mul_g1(const G1Elem& a, const G1Elem& b) const {
  impl_->check_elem(a.is_toy(), "G1 element");
  impl_->check_elem(b.is_toy(), "G1 element");
  if (impl_->toy()) return G1Elem((a.toy_log() + b.toy_log()) % impl_->toy_q);
  return G1Elem(bn256::g1_add(a.point(), b.point()));
}
G2Elem GroupParams::mul_g2(const G2Elem& a, const G2Elem& b) const {
  impl_->check_elem(a.is_toy(), "G2 element");
  impl_->check_elem(b.is_toy(), "G2 element");
  if (impl_->toy()) return G2Elem((a.toy_log() + b.toy_log()) % impl_->toy_q);
  return G2Elem(bn256::g2_add(a.point(), b.point()));
}
GTElem GroupParams::mul_gt(const GTElem& a, const GTElem& b) const {
  impl_->check_elem(a.is_toy(), "GT element");
  impl_->check_elem(b.is_toy(), "GT element");
  if (impl_->toy()) return GTElem((a.toy_log() + b.toy_log()) % impl_->toy_q);
  return GTElem(bn256::gt_mul(a.value(), b.value()));
}
G1Elem GroupParams::inv_g1(const G1Elem& a) const {
  if (impl_->toy()) return G1Elem(a.toy_log() == 0 ? 0 : impl_->toy_q - a.toy_log());
  return G1Elem(bn256::g1_neg(a.point()));
}
G2Elem GroupParams::inv_g2(const G2Elem& a) const {
  if (impl_->toy()) return G2Elem(a.toy_log() == 0 ? 0 : impl_->toy_q - a.toy_log());
  return G2Elem(bn256::g2_neg(a.point()));
}
GTElem GroupParams::inv_gt(const GTElem& a) const {
  if (impl_->toy()) return GTElem(a.toy_log() == 0 ? 0 : impl_->toy_q - a.toy_log());
  return GTElem(bn256::gt_inv(a.value()));
}
G1Elem GroupParams::div_g1(const G1Elem& a, const G1Elem& b) const {
  return mul_g1(a, inv_g1(b));
}
G2Elem GroupParams::div_g2(const G2Elem& a, const G2Elem& b) const {
  return mul_g2(a, inv_g2(b));
}
GTElem GroupParams::div_gt(const GTElem& a, const GTElem& b) const {
  return mul_gt(a, inv_gt(b));
}

G1Elem GroupParams::exp_g1(const G1Elem& base, const Scalar& k) const {
  impl_->check_elem(base.is_toy(), "G1 element");
  impl_->bump(kG1Exp);
  bool fixed = false;
  const bn256::G1Table* tbl = impl_->find_g1(base, &fixed);
  if (impl_->nontrivial(k)) impl_->bump(fixed ? kG1Fixed : kG1Var);
  return impl_->exp_g1_core(base, k, tbl);
}

G2Elem GroupParams::exp_g2(const G2Elem& base, const Scalar& k) const {
  impl_->check_elem(base.is_toy(), "G2 element");
  impl_->bump(kG2Exp);
  bool fixed = false;
  const bn256::G2Table* tbl = impl_->find_g2(base, &fixed);
  if (impl_->nontrivial(k)) impl_->bump(fixed ? kG2Fixed : kG2Var);
  return impl_->exp_g2_core(base, k, tbl);
}

GTElem GroupParams::exp_gt(const GTElem& base, const Scalar& k) const {
  impl_->check_elem(base.is_toy(), "GT element");
  impl_->bump(kGtExp);
  if (impl_->toy())
    return GTElem((unsigned __int128)base.toy_log() * impl_->toy_reduce(k) % impl_->toy_q);
  return GTElem(bn256::gt_pow(base.value(), k.v));
}

GTElem GroupParams::exp_gt_u64(const GTElem& base, uint64_t k) const {
  return exp_gt(base, sc(k));
}

GTElem GroupParams::pair(const G1Elem& a, const G2Elem& b) const {
  impl_->check_elem(a.is_toy(), "G1 element");
  impl_->check_elem(b.is_toy(), "G2 element");
  impl_->bump(kPairings);
  if (impl_->toy())
    return GTElem((unsigned __int128)a.toy_log() * b.toy_log() % impl_->toy_q);
  return GTElem(bn256::pairing(a.point(), b.point()));
}

G1Elem GroupParams::multiexp_g1(std::span<const G1Elem> bases,
                                std::span<const Scalar> exps) const {
  if (bases.size() != exps.size()) throw Error("multiexp length mismatch");
  G1Elem acc = identity_g1();
  for (size_t i = 0; i < bases.size(); i++) {
    const Scalar& k = exps[i];
    if (k.v.is_zero()) continue;
    if (k.v == U256::from_u64(1)) {
      acc = mul_g1(acc, bases[i]);
      continue;
    }
    impl_->bump(kG1Exp);
    bool fixed = false;
    const bn256::G1Table* tbl = impl_->find_g1(bases[i], &fixed);
    impl_->bump(fixed ? kG1Fixed : kG1Var);
    acc = mul_g1(acc, impl_->exp_g1_core(bases[i], k, tbl));
  }
  return acc;
}

G2Elem GroupParams::multiexp_g2(std::span<const G2Elem> bases,
                                std::span<const Scalar> exps) const {
  if (bases.size() != exps.size()) throw Error("multiexp length mismatch");
  G2Elem acc = identity_g2();
  for (size_t i = 0; i < bases.size(); i++) {
    const Scalar& k = exps[i];
    if (k.v.is_zero()) continue;
    if (k.v == U256::from_u64(1)) {
      acc = mul_g2(acc, bases[i]);
      continue;
    }
    impl_->bump(kG2Exp);
    bool fixed = false;
    const bn256::G2Table* tbl = impl_->find_g2(bases[i], &fixed);
    impl_->bump(fixed ? kG2Fixed : kG2Var);
    acc = mul_g2(acc, impl_->exp_g2_core(bases[i], k, tbl));
  }
  return acc;
}

G2Elem GroupParams::derive_g2(std::string_view domain, BytesView seed) const {
  if (impl_->toy()) {
    for (uint32_t ctrv = 0;; ctrv++) {
      ByteWriter w;
      w.raw(to_bytes(domain));
      w.raw_u8(0);
      w.raw(seed);
      w.u32(ctrv);
      uint64_t v = u256_mod_u64(U256::from_be_bytes(sha256(w.bytes())), impl_->toy_q);
      if (v >= 1) return G2Elem(v);
    }
  }
  return G2Elem(bn256::g2_hash_to_point(to_bytes(domain), seed));
}

Bytes GroupParams::enc_scalar(const Scalar& s) const { return s.v.to_be_bytes(); }

Bytes GroupParams::enc_g1(const G1Elem& a) const {
  impl_->check_elem(a.is_toy(), "G1 element");
  if (impl_->toy()) {
    ByteWriter w;
    w.u64(a.toy_log());
    return w.take();
  }
  return bn256::g1_encode(a.point());
}
Bytes GroupParams::enc_g2(const G2Elem& a) const {
  impl_->check_elem(a.is_toy(), "G2 element");
  if (impl_->toy()) {
    ByteWriter w;
    w.u64(a.toy_log());
    return w.take();
  }
  return bn256::g2_encode(a.point());
}
Bytes GroupParams::enc_gt(const GTElem& a) const {
  impl_->check_elem(a.is_toy(), "GT element");
  if (impl_->toy()) {
    ByteWriter w;
    w.u64(a.toy_log());
    return w.take();
  }
  return bn256::gt_encode(a.value());
}

Scalar GroupParams::dec_scalar(BytesView b) const {
  if (b.size() != 32) throw EncodingError("scalar encoding must be 32 bytes");
  U256 v = U256::from_be_bytes(b);
  if (u256_cmp(v, impl_->q) >= 0) throw EncodingError("scalar out of range");
  return Scalar{v};
}

namespace {
uint64_t decode_toy_log(BytesView b, uint64_t q, const char* what) {
  if (b.size() != 8) throw EncodingError(std::string(what) + " toy encoding must be 8 bytes");
  uint64_t v = 0;
  for (uint8_t byte : b) v = v << 8 | byte;
  if (v >= q) throw EncodingError(std::string(what) + " encoding outside the group");
  return v;
}
}  // namespace

G1Elem GroupParams::dec_g1(BytesView b) const {
  if (impl_->toy()) return G1Elem(decode_toy_log(b, impl_->toy_q, "G1"));
  return G1Elem(bn256::g1_decode(b));
}
G2Elem GroupParams::dec_g2(BytesView b) const {
  if (impl_->toy()) return G2Elem(decode_toy_log(b, impl_->toy_q, "G2"));
  return G2Elem(bn256::g2_decode(b));
}
GTElem GroupParams::dec_gt(BytesView b) const {
  if (impl_->toy()) return GTElem(decode_toy_log(b, impl_->toy_q, "GT"));
  return GTElem(bn256::gt_decode(b));
}

OpCounts GroupParams::counters() const {
  OpCounts out;
  out.g1_exp = impl_->ctr[kG1Exp].load(std::memory_order_relaxed);
  out.g2_exp = impl_->ctr[kG2Exp].load(std::memory_order_relaxed);
  out.gt_exp = impl_->ctr[kGtExp].load(std::memory_order_relaxed);
  out.pairings = impl_->ctr[kPairings].load(std::memory_order_relaxed);
  out.g1_fixed = impl_->ctr[kG1Fixed].load(std::memory_order_relaxed);
  out.g1_var = impl_->ctr[kG1Var].load(std::memory_order_relaxed);
  out.g2_fixed = impl_->ctr[kG2Fixed].load(std::memory_order_relaxed);
  out.g2_var = impl_->ctr[kG2Var].load(std::memory_order_relaxed);
  return out;
}

void GroupParams::reset_counters() const {
  for (auto& c : impl_->ctr) c.store(0, std::memory_order_relaxed);
}

void GroupParams::register_fixed_base(const G1Elem& base) const {
  impl_->check_elem(base.is_toy(), "G1 element");
  std::unique_lock lk(impl_->reg_mu);
  for (auto& [b, t] : impl_->g1_reg)
    if (b == base) return;
  std::unique_ptr<bn256::G1Table> tbl;
  if (!impl_->toy()) tbl = std::make_unique<bn256::G1Table>(base.point());
  impl_->g1_reg.emplace_back(base, std::move(tbl));
}

void GroupParams::register_fixed_base(const G2Elem& base) const {
  impl_->check_elem(base.is_toy(), "G2 element");
  std::unique_lock lk(impl_->reg_mu);
  for (auto& [b, t] : impl_->g2_reg)
    if (b == base) return;
  std::unique_ptr<bn256::G2Table> tbl;
  if (!impl_->toy()) tbl = std::make_unique<bn256::G2Table>(base.point());
  impl_->g2_reg.emplace_back(base, std::move(tbl));
}

void GroupParams::set_precomputation(bool enabled) const {
  impl_->precompute.store(enabled, std::memory_order_relaxed);
}
bool GroupParams::precomputation_enabled() const {
  return impl_->precompute.load(std::memory_order_relaxed);
}

}  // namespace ppat
