#pragma once

#include <span>
#include <vector>

#include "ppat/group.hpp"
#include "ppat/proofs.hpp"

// Verifiable dealer-based t-of-n sharing of the decryption key and
// distributed computation of c1^x: Shamir shares with Feldman-style public
// coefficient commitments, per-trustee partial decryptions carrying a
// Chaum-Pedersen proof, and Lagrange combination over whichever index set
// responds. The module boundary is such that a dealerless DKG could
// replace deal() without touching anything downstream.
namespace ppat {

struct KeyShare {
  uint32_t index = 0;  // 1-based, unique per trustee
  Scalar s_i;          // share of x
  G1Elem pk_i;         // g1^{s_i}

  void zeroize() { secure_wipe(s_i.v.limb.data(), sizeof(s_i.v.limb)); }
};

struct SharingTranscript {
  uint32_t threshold = 0;
  uint32_t trustees = 0;
  std::vector<G1Elem> coeff_commitments;  // A_0..A_{t-1}, A_0 = public key
};

struct PartialDecryption {
  uint32_t index = 0;
  G1Elem m_i;  // c1^{s_i}
  DleqProof dleq;
};

// Shares are evaluations of a random degree-(t-1) polynomial with constant
// term x; A_j = g1^{a_j}.
std::pair<std::vector<KeyShare>, SharingTranscript> deal(const GroupParams& params,
                                                         const Scalar& x, uint32_t t,
                                                         uint32_t n, RandomSource& rng);

// Feldman check: g1^{s_i} == prod_j A_j^{i^j}.
bool verify_share(const GroupParams& params, const KeyShare& share,
                  const SharingTranscript& transcript);

// The public key share prod_j A_j^{i^j} for a trustee index.
G1Elem share_public(const GroupParams& params, const SharingTranscript& transcript,
                    uint32_t index);

PartialDecryption partial_decrypt(const GroupParams& params, const KeyShare& share,
                                  const G1Elem& c1, const ProofLabel& label,
                                  RandomSource& rng);

bool verify_partial(const GroupParams& params, const SharingTranscript& transcript,
                    const G1Elem& c1, const PartialDecryption& partial,
                    const ProofLabel& label);

// Lagrange coefficients at zero for the given (distinct) index set.
std::vector<Scalar> lagrange_at_zero(const GroupParams& params,
                                     std::span<const uint32_t> indices);

// prod m_i^{lambda_i} = c1^x. Verifies every proof first and throws
// InvalidPartial naming the offending trustee index.
G1Elem combine_partials(const GroupParams& params, const SharingTranscript& transcript,
                        const G1Elem& c1, const ProofLabel& label,
                        std::span<const PartialDecryption> partials);

}  // namespace ppat
