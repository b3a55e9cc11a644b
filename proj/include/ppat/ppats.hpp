#pragma once

#include <filesystem>
#include <optional>
#include <unordered_map>

#include "ppat/commitment.hpp"
#include "ppat/group.hpp"
#include "ppat/proofs.hpp"

// The PPATS commitment-consistent encryption scheme:
//
//   keygen:   g2 = g1^x
//   encrypt:  (c1, c2, d, sigma_cc) = (g1^s, g1^r g2^s, h1^r h2^v, sigma_cc)
//   decrypt:  discrete log of e(c1^x / c2, h1) e(g1, d) in basis e(g1, h2)
//   extract:  commitment d; opening a = c2 / c1^x
//
// Ciphertexts multiply componentwise and decrypt to the sum of the
// plaintexts, dropping the consistency proofs.
namespace ppat {

struct PublicKey {
  G1Elem g2;
  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

class SecretKey {
 public:
  SecretKey() = default;
  explicit SecretKey(const Scalar& x) : x_(x) {}
  ~SecretKey() { zeroize(); }
  SecretKey(const SecretKey&) = default;
  SecretKey& operator=(const SecretKey&) = default;

  const Scalar& x() const { return x_; }
  void zeroize() { secure_wipe(x_.v.limb.data(), sizeof(x_.v.limb)); }

 private:
  Scalar x_{};
};

struct Ciphertext {
  G1Elem c1, c2;
  Commitment d;
  std::optional<ConsistencyProof> sigma_cc;  // absent after homomorphic combination
};

std::pair<PublicKey, SecretKey> keygen(const GroupParams& params, RandomSource& rng);
PublicKey public_key_for(const GroupParams& params, const Scalar& x);

CipherTriple triple_of(const Ciphertext& ct);
CipherTriple encrypt_triple(const GroupParams& params, const PublicKey& pk,
                            const Scalar& v, const Scalar& r, const Scalar& s);
Ciphertext encrypt_with_coins(const GroupParams& params, const PublicKey& pk,
                              const Scalar& v, const Scalar& r, const Scalar& s,
                              const ProofLabel& label, RandomSource& proof_rng);
Ciphertext encrypt(const GroupParams& params, const PublicKey& pk, const Scalar& v,
                   const ProofLabel& label, RandomSource& rng);

// Like encrypt but hands the coins back; the ballot builder needs r for
// the 0/1 validity proof on d. Callers wipe the coins when done.
struct EncryptionWithCoins {
  Ciphertext ct;
  Scalar r, s;
};
EncryptionWithCoins encrypt_keep_coins(const GroupParams& params, const PublicKey& pk,
                                       const Scalar& v, const ProofLabel& label,
                                       RandomSource& rng);
bool verify_ciphertext(const GroupParams& params, const PublicKey& pk,
                       const Ciphertext& ct, const ProofLabel& label);

// Componentwise product; output carries no consistency proof.
Ciphertext multiply(const GroupParams& params, const Ciphertext& a, const Ciphertext& b);

Commitment extract_commitment(const Ciphertext& ct);
Opening extract_opening(const GroupParams& params, const SecretKey& sk,
                        const Ciphertext& ct);
Opening opening_from_c1x(const GroupParams& params, const G1Elem& c1x,
                         const Ciphertext& ct);

// Baby-step table for GT discrete logs, reusable across extractions and
// persistable as a cache file keyed by (params digest, base, size).
class BsgsTable {
 public:
  BsgsTable(const GroupParams& params, const GTElem& base, uint64_t baby_count);

  uint64_t baby_count() const { return baby_count_; }
  const GTElem& base() const { return base_; }

  // Cache file keyed by (params digest, base encoding, size) and guarded
  // by a content hash; load returns nothing on any mismatch so callers
  // rebuild instead of trusting a stale or foreign table.
  void save(const std::filesystem::path& path, const GroupParams& params) const;
  static std::optional<BsgsTable> load(const std::filesystem::path& path,
                                       const GroupParams& params, const GTElem& base);

  // All baby indices whose table key matches the element (sorted ascending;
  // candidates must be re-verified by the caller).
  std::vector<uint64_t> lookup(const GroupParams& params, const GTElem& elem) const;

 private:
  BsgsTable() = default;
  GTElem base_;
  uint64_t baby_count_ = 0;
  Bytes params_digest_;
  std::unordered_multimap<uint64_t, uint32_t> keys_;
};

// Baby-step/giant-step search for the smallest m in [0, bound] with
// base^m == target. Builds an ad-hoc table of ~sqrt(bound) entries unless
// one is supplied.
std::optional<uint64_t> dl_extract(const GroupParams& params, const GTElem& base,
                                   const GTElem& target, uint64_t bound,
                                   const BsgsTable* table = nullptr);

// e(c1x / c2, h1) * e(g1, d) — the value whose dl in basis gt2 is the
// plaintext; c1x is c1^x, however it was obtained.
GTElem decryption_target(const GroupParams& params, const G1Elem& c1x,
                         const Ciphertext& ct);

// Full decryption with a raw secret key (test/tooling path; the tally
// pipeline uses threshold partial decryptions instead). Throws DlNotFound
// if the plaintext exceeds the bound.
Scalar decrypt(const GroupParams& params, const SecretKey& sk, const Ciphertext& ct,
               uint64_t bound, const BsgsTable* table = nullptr);

}  // namespace ppat
