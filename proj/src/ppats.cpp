#include "ppat/ppats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

#include "ppat/errors.hpp"

namespace ppat {

std::pair<PublicKey, SecretKey> keygen(const GroupParams& params, RandomSource& rng) {
  Scalar x = params.sc_random_nonzero(rng);
  PublicKey pk = public_key_for(params, x);
  return {pk, SecretKey(x)};
}

PublicKey public_key_for(const GroupParams& params, const Scalar& x) {
  PublicKey pk{params.exp_g1(params.g1(), x)};
  params.register_fixed_base(pk.g2);  // public ElGamal base, precomputable
  return pk;
}

CipherTriple triple_of(const Ciphertext& ct) { return CipherTriple{ct.c1, ct.c2, ct.d}; }

CipherTriple encrypt_triple(const GroupParams& params, const PublicKey& pk,
                            const Scalar& v, const Scalar& r, const Scalar& s) {
  CipherTriple t;
  t.c1 = params.exp_g1(params.g1(), s);
  std::array<G1Elem, 2> bases{params.g1(), pk.g2};
  std::array<Scalar, 2> exps{r, s};
  t.c2 = params.multiexp_g1(bases, exps);
  t.d = commit(params, v, r);
  return t;
}

Ciphertext encrypt_with_coins(const GroupParams& params, const PublicKey& pk,
                              const Scalar& v, const Scalar& r, const Scalar& s,
                              const ProofLabel& label, RandomSource& proof_rng) {
  CipherTriple t = encrypt_triple(params, pk, v, r, s);
  Ciphertext ct{t.c1, t.c2, t.d, std::nullopt};
  ct.sigma_cc = prove_consistency(params, pk.g2, t, ConsistencyWitness{r, s, v}, label,
                                  proof_rng);
  return ct;
}

Ciphertext encrypt(const GroupParams& params, const PublicKey& pk, const Scalar& v,
                   const ProofLabel& label, RandomSource& rng) {
  EncryptionWithCoins e = encrypt_keep_coins(params, pk, v, label, rng);
  secure_wipe(e.r.v.limb.data(), 32);
  secure_wipe(e.s.v.limb.data(), 32);
  return e.ct;
}

EncryptionWithCoins encrypt_keep_coins(const GroupParams& params, const PublicKey& pk,
                                       const Scalar& v, const ProofLabel& label,
                                       RandomSource& rng) {
  Scalar r = params.sc_random(rng);
  Scalar s = params.sc_random(rng);
  return EncryptionWithCoins{encrypt_with_coins(params, pk, v, r, s, label, rng), r, s};
}

bool verify_ciphertext(const GroupParams& params, const PublicKey& pk,
                       const Ciphertext& ct, const ProofLabel& label) {
  if (!ct.sigma_cc) return false;
  return verify_consistency(params, pk.g2, triple_of(ct), *ct.sigma_cc, label);
}

Ciphertext multiply(const GroupParams& params, const Ciphertext& a, const Ciphertext& b) {
  Ciphertext out;
  out.c1 = params.mul_g1(a.c1, b.c1);
  out.c2 = params.mul_g1(a.c2, b.c2);
  out.d = Commitment{params.mul_g2(a.d.d, b.d.d)};
  return out;
}

Commitment extract_commitment(const Ciphertext& ct) { return ct.d; }

Opening extract_opening(const GroupParams& params, const SecretKey& sk,
                        const Ciphertext& ct) {
  return opening_from_c1x(params, params.exp_g1(ct.c1, sk.x()), ct);
}

Opening opening_from_c1x(const GroupParams& params, const G1Elem& c1x,
                         const Ciphertext& ct) {
  return Opening{params.div_g1(ct.c2, c1x)};
}

GTElem decryption_target(const GroupParams& params, const G1Elem& c1x,
                         const Ciphertext& ct) {
  GTElem lhs = params.pair(params.div_g1(c1x, ct.c2), params.h1());
  GTElem rhs = params.pair(params.g1(), ct.d.d);
  return params.mul_gt(lhs, rhs);
}

// ---- BSGS ----------------------------------------------------------------

namespace {
uint64_t gt_key(const GroupParams& params, const GTElem& e) {
  Bytes digest = sha256(params.enc_gt(e));
  uint64_t k = 0;
  for (int i = 0; i < 8; i++) k = k << 8 | digest[(size_t)i];
  return k;
}
constexpr char kBsgsMagic[8] = {'P', 'P', 'A', 'T', 'B', 'S', 'T', '1'};
}  // namespace

BsgsTable::BsgsTable(const GroupParams& params, const GTElem& base, uint64_t baby_count)
    : base_(base), baby_count_(baby_count), params_digest_(params.digest()) {
  if (baby_count_ < 1 || baby_count_ > (1u << 22))
    throw Error("BSGS baby count out of range");
  keys_.reserve(baby_count_);
  GTElem cur = params.identity_gt();
  for (uint64_t j = 0; j < baby_count_; j++) {
    keys_.emplace(gt_key(params, cur), (uint32_t)j);
    cur = params.mul_gt(cur, base_);
  }
}

std::vector<uint64_t> BsgsTable::lookup(const GroupParams& params,
                                        const GTElem& elem) const {
  std::vector<uint64_t> out;
  auto [lo, hi] = keys_.equal_range(gt_key(params, elem));
  for (auto it = lo; it != hi; ++it) out.push_back(it->second);
  std::sort(out.begin(), out.end());
  return out;
}

void BsgsTable::save(const std::filesystem::path& path, const GroupParams& params) const {
  ByteWriter payload;
  payload.field(params_digest_);
  payload.field(params.enc_gt(base_));
  payload.u64(baby_count_);
  // entries ordered by baby index so the file is deterministic
  std::vector<std::pair<uint32_t, uint64_t>> entries;
  entries.reserve(keys_.size());
  for (const auto& [k, j] : keys_) entries.emplace_back(j, k);
  std::sort(entries.begin(), entries.end());
  for (const auto& [j, k] : entries) {
    payload.u32(j);
    payload.u64(k);
  }
  Bytes digest = sha256(payload.bytes());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(kBsgsMagic, sizeof(kBsgsMagic));
  out.write(reinterpret_cast<const char*>(digest.data()), (std::streamsize)digest.size());
  const Bytes& body = payload.bytes();
  out.write(reinterpret_cast<const char*>(body.data()), (std::streamsize)body.size());
}

std::optional<BsgsTable> BsgsTable::load(const std::filesystem::path& path,
                                         const GroupParams& params, const GTElem& base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  Bytes all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (all.size() < 8 + 32) return std::nullopt;
  if (std::memcmp(all.data(), kBsgsMagic, 8) != 0) return std::nullopt;
  Bytes digest(all.begin() + 8, all.begin() + 40);
  Bytes body(all.begin() + 40, all.end());
  if (sha256(body) != digest) return std::nullopt;

  auto rd_u32 = [&](size_t off) {
    uint32_t v = 0;
    for (int i = 0; i < 4; i++) v = v << 8 | body[off + (size_t)i];
    return v;
  };
  auto rd_u64 = [&](size_t off) {
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v = v << 8 | body[off + (size_t)i];
    return v;
  };
  size_t off = 0;
  uint32_t dlen = rd_u32(off);
  off += 4;
  if (dlen != 32 || body.size() < off + 32) return std::nullopt;
  Bytes pdigest(body.begin() + (long)off, body.begin() + (long)off + 32);
  off += 32;
  if (pdigest != params.digest()) return std::nullopt;
  if (body.size() < off + 4) return std::nullopt;
  uint32_t blen = rd_u32(off);
  off += 4;
  if (body.size() < off + blen) return std::nullopt;
  Bytes base_enc(body.begin() + (long)off, body.begin() + (long)off + blen);
  off += blen;
  if (base_enc != params.enc_gt(base)) return std::nullopt;
  if (body.size() < off + 8) return std::nullopt;
  uint64_t count = rd_u64(off);
  off += 8;
  if (body.size() != off + count * 12) return std::nullopt;

  BsgsTable t;
  t.base_ = base;
  t.baby_count_ = count;
  t.params_digest_ = pdigest;
  t.keys_.reserve(count);
  for (uint64_t i = 0; i < count; i++) {
    uint32_t j = rd_u32(off);
    uint64_t k = rd_u64(off + 4);
    off += 12;
    t.keys_.emplace(k, j);
  }
  return t;
}

std::optional<uint64_t> dl_extract(const GroupParams& params, const GTElem& base,
                                   const GTElem& target, uint64_t bound,
                                   const BsgsTable* table) {
  if (bound < 1) throw Error("dl_extract bound must be >= 1");
  std::optional<BsgsTable> local;
  if (!table) {
    uint64_t baby = (uint64_t)std::ceil(std::sqrt((double)bound + 1.0));
    baby = std::clamp<uint64_t>(baby, 1, 1u << 20);
    local.emplace(params, base, baby);
    table = &*local;
  }
  uint64_t b = table->baby_count();
  GTElem stride = params.inv_gt(params.exp_gt_u64(base, b));
  GTElem cur = target;
  for (uint64_t i = 0; i <= bound / b; i++) {
    for (uint64_t j : table->lookup(params, cur)) {
      uint64_t m = i * b + j;
      if (m > bound) break;
      // truncated table keys can collide; confirm before answering
      if (params.exp_gt_u64(base, m) == target) return m;
    }
    cur = params.mul_gt(cur, stride);
  }
  return std::nullopt;
}

Scalar decrypt(const GroupParams& params, const SecretKey& sk, const Ciphertext& ct,
               uint64_t bound, const BsgsTable* table) {
  G1Elem c1x = params.exp_g1(ct.c1, sk.x());
  GTElem target = decryption_target(params, c1x, ct);
  auto m = dl_extract(params, params.gt2(), target, bound, table);
  if (!m) throw DlNotFound("decryption exceeds the discrete-log search bound");
  return params.sc(*m);
}

}  // namespace ppat
