#include "ppat/threshold.hpp"

#include <set>

#include "ppat/errors.hpp"

namespace ppat {

std::pair<std::vector<KeyShare>, SharingTranscript> deal(const GroupParams& params,
                                                         const Scalar& x, uint32_t t,
                                                         uint32_t n, RandomSource& rng) {
  if (t < 1 || t > n) throw Error("invalid threshold: need 1 <= t <= n");
  if (u256_cmp(U256::from_u64(n), params.order()) >= 0)
    throw Error("invalid threshold: trustee count must be below the group order");

  std::vector<Scalar> coeffs(t);
  coeffs[0] = x;
  for (uint32_t j = 1; j < t; j++) coeffs[j] = params.sc_random(rng);

  SharingTranscript transcript;
  transcript.threshold = t;
  transcript.trustees = n;
  for (uint32_t j = 0; j < t; j++)
    transcript.coeff_commitments.push_back(params.exp_g1(params.g1(), coeffs[j]));

  std::vector<KeyShare> shares;
  shares.reserve(n);
  for (uint32_t i = 1; i <= n; i++) {
    // Horner evaluation of f(i)
    Scalar xi = params.sc(i);
    Scalar acc = coeffs[t - 1];
    for (uint32_t j = t - 1; j-- > 0;) acc = params.sc_add(params.sc_mul(acc, xi), coeffs[j]);
    shares.push_back(KeyShare{i, acc, params.exp_g1(params.g1(), acc)});
  }
  for (uint32_t j = 1; j < t; j++) secure_wipe(coeffs[j].v.limb.data(), 32);
  return {std::move(shares), std::move(transcript)};
}

G1Elem share_public(const GroupParams& params, const SharingTranscript& transcript,
                    uint32_t index) {
  // prod_j A_j^{i^j}
  Scalar xi = params.sc(index);
  Scalar power = params.sc(1);
  std::vector<Scalar> exps;
  exps.reserve(transcript.coeff_commitments.size());
  for (size_t j = 0; j < transcript.coeff_commitments.size(); j++) {
    exps.push_back(power);
    power = params.sc_mul(power, xi);
  }
  return params.multiexp_g1(transcript.coeff_commitments, exps);
}

bool verify_share(const GroupParams& params, const KeyShare& share,
                  const SharingTranscript& transcript) {
  if (share.index < 1 || share.index > transcript.trustees) return false;
  G1Elem expected = share_public(params, transcript, share.index);
  if (!(params.exp_g1(params.g1(), share.s_i) == expected)) return false;
  return share.pk_i == expected;
}

PartialDecryption partial_decrypt(const GroupParams& params, const KeyShare& share,
                                  const G1Elem& c1, const ProofLabel& label,
                                  RandomSource& rng) {
  PartialDecryption out;
  out.index = share.index;
  out.m_i = params.exp_g1(c1, share.s_i);
  out.dleq =
      prove_dleq(params, params.g1(), share.pk_i, c1, out.m_i, share.s_i, label, rng);
  return out;
}

bool verify_partial(const GroupParams& params, const SharingTranscript& transcript,
                    const G1Elem& c1, const PartialDecryption& partial,
                    const ProofLabel& label) {
  if (partial.index < 1 || partial.index > transcript.trustees) return false;
  G1Elem pk_i = share_public(params, transcript, partial.index);
  return verify_dleq(params, params.g1(), pk_i, c1, partial.m_i, partial.dleq, label);
}

std::vector<Scalar> lagrange_at_zero(const GroupParams& params,
                                     std::span<const uint32_t> indices) {
  std::vector<Scalar> out;
  out.reserve(indices.size());
  for (size_t i = 0; i < indices.size(); i++) {
    Scalar num = params.sc(1), den = params.sc(1);
    Scalar xi = params.sc(indices[i]);
    for (size_t j = 0; j < indices.size(); j++) {
      if (i == j) continue;
      Scalar xj = params.sc(indices[j]);
      num = params.sc_mul(num, xj);
      den = params.sc_mul(den, params.sc_sub(xj, xi));
    }
    out.push_back(params.sc_mul(num, params.sc_inv(den)));
  }
  return out;
}

G1Elem combine_partials(const GroupParams& params, const SharingTranscript& transcript,
                        const G1Elem& c1, const ProofLabel& label,
                        std::span<const PartialDecryption> partials) {
  if (partials.size() < transcript.threshold)
    throw Error("insufficient partial decryptions: need " +
                std::to_string(transcript.threshold) + ", have " +
                std::to_string(partials.size()));
  std::set<uint32_t> seen;
  std::vector<uint32_t> indices;
  for (const PartialDecryption& p : partials) {
    if (!seen.insert(p.index).second)
      throw InvalidPartial(p.index, "duplicate partial decryption from trustee " +
                                        std::to_string(p.index));
    if (!verify_partial(params, transcript, c1, p, label))
      throw InvalidPartial(p.index, "partial decryption proof failed for trustee " +
                                        std::to_string(p.index));
    indices.push_back(p.index);
  }
  std::vector<Scalar> lambda = lagrange_at_zero(params, indices);
  std::vector<G1Elem> bases;
  bases.reserve(partials.size());
  for (const PartialDecryption& p : partials) bases.push_back(p.m_i);
  return params.multiexp_g1(bases, lambda);
}

}  // namespace ppat
