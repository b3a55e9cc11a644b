#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppat/commitment.hpp"
#include "ppat/group.hpp"

// Non-interactive sigma proofs under a shared Fiat-Shamir envelope:
//
//   - consistency proof: the ElGamal part and commitment part of a PPATS
//     ciphertext share the same witness (r, s, v)
//   - binary proof: a commitment opens to 0 or 1 (disjunctive Schnorr with
//     an additive challenge split e0 + e1 = H(...))
//   - dleq proof: two G1 elements share a discrete log (Chaum-Pedersen),
//     used for verifiable partial decryptions
//
// Challenges are SHA-256 digests over domain-separated, length-prefixed
// canonical encodings, reduced mod q. That reduction and the label layout
// are normative for the transcript format.
//
// Provers accept explicit coins and an injected challenge so interactive
// transcripts can be driven from fixed test vectors; the rng entry points
// are the production surface.
namespace ppat {

struct ProofLabel {
  uint8_t version = 1;
  Bytes group_digest;
  std::vector<Bytes> generators;  // canonical encodings: g1, h1, h2 [, pk]
  std::string election_id;
  std::string purpose;
  Bytes context;

  Bytes serialize() const;
  ProofLabel scoped(std::string_view new_purpose, BytesView new_context) const;
};

ProofLabel make_label(const GroupParams& params, std::string election_id);
ProofLabel make_label(const GroupParams& params, const G1Elem& pk, std::string election_id);

Scalar fiat_shamir_challenge(const GroupParams& params, std::string_view domain,
                             const ProofLabel& label, std::span<const Bytes> parts);

// ---- consistency proof (sigma_cc) --------------------------------------

struct CipherTriple {
  G1Elem c1, c2;
  Commitment d;
};

struct ConsistencyWitness {
  Scalar r, s, v;
};

struct ConsistencyCoins {
  Scalar rp, sp, vp;  // r', s', v'
};

struct ConsistencyAnnouncement {
  G1Elem c1p, c2p;
  G2Elem dp;
};

struct ConsistencyProof {
  Scalar e, f_r, f_s, f_v;
  friend bool operator==(const ConsistencyProof&, const ConsistencyProof&) = default;
};

ConsistencyAnnouncement consistency_commit(const GroupParams& params, const G1Elem& pk,
                                           const ConsistencyCoins& coins);
ConsistencyProof consistency_respond(const GroupParams& params,
                                     const ConsistencyWitness& w,
                                     const ConsistencyCoins& coins, const Scalar& e);
ConsistencyAnnouncement consistency_reconstruct(const GroupParams& params,
                                                const G1Elem& pk, const CipherTriple& c,
                                                const ConsistencyProof& proof);

struct ConsistencyTranscript {
  ConsistencyProof proof;
  ConsistencyAnnouncement announcement;
};
ConsistencyTranscript prove_consistency_with(const GroupParams& params, const G1Elem& pk,
                                             const CipherTriple& c,
                                             const ConsistencyWitness& w,
                                             const ConsistencyCoins& coins,
                                             const std::optional<Scalar>& injected_e,
                                             const ProofLabel& label);
ConsistencyProof prove_consistency(const GroupParams& params, const G1Elem& pk,
                                   const CipherTriple& c, const ConsistencyWitness& w,
                                   const ProofLabel& label, RandomSource& rng);
bool verify_consistency(const GroupParams& params, const G1Elem& pk,
                        const CipherTriple& c, const ConsistencyProof& proof,
                        const ProofLabel& label);

// ---- 0/1 validity proof (sigma_0/1) -------------------------------------

struct BinaryProof {
  Scalar e0, e1, f0, f1;
  friend bool operator==(const BinaryProof&, const BinaryProof&) = default;
};

struct BinaryCoins {
  Scalar w, e_sim, f_sim;
};

struct BinaryTranscript {
  BinaryProof proof;
  G2Elem t0, t1;
};

BinaryTranscript prove_binary_with(const GroupParams& params, const Commitment& d,
                                   const Scalar& r, unsigned v, const BinaryCoins& coins,
                                   const std::optional<Scalar>& injected_e,
                                   const ProofLabel& label);
BinaryProof prove_binary(const GroupParams& params, const Commitment& d, const Scalar& r,
                         unsigned v, const ProofLabel& label, RandomSource& rng);
bool verify_binary(const GroupParams& params, const Commitment& d,
                   const BinaryProof& proof, const ProofLabel& label);

// ---- discrete-log equality proof (Chaum-Pedersen, G1) -------------------

struct DleqProof {
  Scalar e, f;
  friend bool operator==(const DleqProof&, const DleqProof&) = default;
};

DleqProof prove_dleq_with(const GroupParams& params, const G1Elem& base1,
                          const G1Elem& y1, const G1Elem& base2, const G1Elem& y2,
                          const Scalar& k, const Scalar& w,
                          const std::optional<Scalar>& injected_e,
                          const ProofLabel& label);
DleqProof prove_dleq(const GroupParams& params, const G1Elem& base1, const G1Elem& y1,
                     const G1Elem& base2, const G1Elem& y2, const Scalar& k,
                     const ProofLabel& label, RandomSource& rng);
bool verify_dleq(const GroupParams& params, const G1Elem& base1, const G1Elem& y1,
                 const G1Elem& base2, const G1Elem& y2, const DleqProof& proof,
                 const ProofLabel& label);

}  // namespace ppat
