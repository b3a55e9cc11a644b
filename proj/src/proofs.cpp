#include "ppat/proofs.hpp"

#include <array>

#include "ppat/errors.hpp"

namespace ppat {

namespace {
constexpr std::string_view kDomainConsistency = "ppat/consistency/v1";
constexpr std::string_view kDomainBinary = "ppat/binary/v1";
constexpr std::string_view kDomainDleq = "ppat/dleq/v1";
}  // namespace

Bytes ProofLabel::serialize() const {
  ByteWriter w;
  w.raw_u8(version);
  w.field(group_digest);
  w.u32(static_cast<uint32_t>(generators.size()));
  for (const Bytes& g : generators) w.field(g);
  w.field(election_id);
  w.field(purpose);
  w.field(context);
  return w.take();
}

ProofLabel ProofLabel::scoped(std::string_view new_purpose, BytesView new_context) const {
  ProofLabel out = *this;
  out.purpose = std::string(new_purpose);
  out.context = Bytes(new_context.begin(), new_context.end());
  return out;
}

ProofLabel make_label(const GroupParams& params, std::string election_id) {
  ProofLabel l;
  l.group_digest = params.digest();
  l.generators = {params.enc_g1(params.g1()), params.enc_g2(params.h1()),
                  params.enc_g2(params.h2())};
  l.election_id = std::move(election_id);
  return l;
}

ProofLabel make_label(const GroupParams& params, const G1Elem& pk,
                      std::string election_id) {
  ProofLabel l = make_label(params, std::move(election_id));
  l.generators.push_back(params.enc_g1(pk));
  return l;
}

Scalar fiat_shamir_challenge(const GroupParams& params, std::string_view domain,
                             const ProofLabel& label, std::span<const Bytes> parts) {
  ByteWriter w;
  w.field("ppat/fs/v1");
  w.field(domain);
  w.field(label.serialize());
  for (const Bytes& p : parts) w.field(p);
  return params.sc_from(U256::from_be_bytes(sha256(w.bytes())));
}

// ---- consistency --------------------------------------------------------

ConsistencyAnnouncement consistency_commit(const GroupParams& params, const G1Elem& pk,
                                           const ConsistencyCoins& coins) {
  ConsistencyAnnouncement ann;
  ann.c1p = params.exp_g1(params.g1(), coins.sp);
  std::array<G1Elem, 2> b1{params.g1(), pk};
  std::array<Scalar, 2> e1{coins.rp, coins.sp};
  ann.c2p = params.multiexp_g1(b1, e1);
  std::array<G2Elem, 2> b2{params.h1(), params.h2()};
  std::array<Scalar, 2> e2{coins.rp, coins.vp};
  ann.dp = params.multiexp_g2(b2, e2);
  return ann;
}

ConsistencyProof consistency_respond(const GroupParams& params,
                                     const ConsistencyWitness& wit,
                                     const ConsistencyCoins& coins, const Scalar& e) {
  ConsistencyProof p;
  p.e = e;
  p.f_r = params.sc_add(coins.rp, params.sc_mul(e, wit.r));
  p.f_s = params.sc_add(coins.sp, params.sc_mul(e, wit.s));
  p.f_v = params.sc_add(coins.vp, params.sc_mul(e, wit.v));
  return p;
}

ConsistencyAnnouncement consistency_reconstruct(const GroupParams& params,
                                                const G1Elem& pk, const CipherTriple& c,
                                                const ConsistencyProof& proof) {
  Scalar me = params.sc_neg(proof.e);
  ConsistencyAnnouncement ann;
  {
    std::array<G1Elem, 2> b{params.g1(), c.c1};
    std::array<Scalar, 2> e{proof.f_s, me};
    ann.c1p = params.multiexp_g1(b, e);
  }
  {
    std::array<G1Elem, 3> b{params.g1(), pk, c.c2};
    std::array<Scalar, 3> e{proof.f_r, proof.f_s, me};
    ann.c2p = params.multiexp_g1(b, e);
  }
  {
    std::array<G2Elem, 3> b{params.h1(), params.h2(), c.d.d};
    std::array<Scalar, 3> e{proof.f_r, proof.f_v, me};
    ann.dp = params.multiexp_g2(b, e);
  }
  return ann;
}

static Scalar consistency_challenge(const GroupParams& params, const CipherTriple& c,
                                    const ConsistencyAnnouncement& ann,
                                    const ProofLabel& label) {
  std::array<Bytes, 6> parts{params.enc_g1(c.c1),    params.enc_g1(c.c2),
                             params.enc_g2(c.d.d),   params.enc_g1(ann.c1p),
                             params.enc_g1(ann.c2p), params.enc_g2(ann.dp)};
  return fiat_shamir_challenge(params, kDomainConsistency, label, parts);
}

ConsistencyTranscript prove_consistency_with(const GroupParams& params, const G1Elem& pk,
                                             const CipherTriple& c,
                                             const ConsistencyWitness& wit,
                                             const ConsistencyCoins& coins,
                                             const std::optional<Scalar>& injected_e,
                                             const ProofLabel& label) {
  ConsistencyTranscript out;
  out.announcement = consistency_commit(params, pk, coins);
  Scalar e = injected_e ? *injected_e
                        : consistency_challenge(params, c, out.announcement, label);
  out.proof = consistency_respond(params, wit, coins, e);
  return out;
}

ConsistencyProof prove_consistency(const GroupParams& params, const G1Elem& pk,
                                   const CipherTriple& c, const ConsistencyWitness& wit,
                                   const ProofLabel& label, RandomSource& rng) {
  ConsistencyCoins coins{params.sc_random(rng), params.sc_random(rng),
                         params.sc_random(rng)};
  return prove_consistency_with(params, pk, c, wit, coins, std::nullopt, label).proof;
}

bool verify_consistency(const GroupParams& params, const G1Elem& pk,
                        const CipherTriple& c, const ConsistencyProof& proof,
                        const ProofLabel& label) {
  ConsistencyAnnouncement ann = consistency_reconstruct(params, pk, c, proof);
  return consistency_challenge(params, c, ann, label) == proof.e;
}

// ---- binary -------------------------------------------------------------

static Scalar binary_challenge(const GroupParams& params, const Commitment& d,
                               const G2Elem& t0, const G2Elem& t1,
                               const ProofLabel& label) {
  std::array<Bytes, 3> parts{params.enc_g2(d.d), params.enc_g2(t0), params.enc_g2(t1)};
  return fiat_shamir_challenge(params, kDomainBinary, label, parts);
}

BinaryTranscript prove_binary_with(const GroupParams& params, const Commitment& d,
                                   const Scalar& r, unsigned v, const BinaryCoins& coins,
                                   const std::optional<Scalar>& injected_e,
                                   const ProofLabel& label) {
  if (v > 1) throw Error("binary proof witness must be 0 or 1");
  // branch statements: D0 = d, D1 = d / h2; the real branch knows
  // D_v = h1^r, the other is simulated from (f_sim, e_sim).
  G2Elem d0 = d.d;
  G2Elem d1 = params.div_g2(d.d, params.h2());
  const G2Elem& d_sim = v == 1 ? d0 : d1;

  G2Elem t_real = params.exp_g2(params.h1(), coins.w);
  std::array<G2Elem, 2> sb{params.h1(), d_sim};
  std::array<Scalar, 2> se{coins.f_sim, params.sc_neg(coins.e_sim)};
  G2Elem t_sim = params.multiexp_g2(sb, se);

  G2Elem t0 = v == 1 ? t_sim : t_real;
  G2Elem t1 = v == 1 ? t_real : t_sim;

  Scalar e = injected_e ? *injected_e : binary_challenge(params, d, t0, t1, label);
  Scalar e_real = params.sc_sub(e, coins.e_sim);
  Scalar f_real = params.sc_add(coins.w, params.sc_mul(e_real, r));

  BinaryTranscript out;
  out.t0 = t0;
  out.t1 = t1;
  if (v == 1)
    out.proof = BinaryProof{coins.e_sim, e_real, coins.f_sim, f_real};
  else
    out.proof = BinaryProof{e_real, coins.e_sim, f_real, coins.f_sim};
  return out;
}

BinaryProof prove_binary(const GroupParams& params, const Commitment& d, const Scalar& r,
                         unsigned v, const ProofLabel& label, RandomSource& rng) {
  BinaryCoins coins{params.sc_random(rng), params.sc_random(rng), params.sc_random(rng)};
  return prove_binary_with(params, d, r, v, coins, std::nullopt, label).proof;
}

bool verify_binary(const GroupParams& params, const Commitment& d,
                   const BinaryProof& proof, const ProofLabel& label) {
  G2Elem d0 = d.d;
  G2Elem d1 = params.div_g2(d.d, params.h2());
  std::array<G2Elem, 2> b0{params.h1(), d0};
  std::array<Scalar, 2> e0{proof.f0, params.sc_neg(proof.e0)};
  G2Elem t0 = params.multiexp_g2(b0, e0);
  std::array<G2Elem, 2> b1{params.h1(), d1};
  std::array<Scalar, 2> e1{proof.f1, params.sc_neg(proof.e1)};
  G2Elem t1 = params.multiexp_g2(b1, e1);
  Scalar e = binary_challenge(params, d, t0, t1, label);
  return params.sc_add(proof.e0, proof.e1) == e;
}

// ---- dleq ---------------------------------------------------------------

static Scalar dleq_challenge(const GroupParams& params, const G1Elem& base1,
                             const G1Elem& y1, const G1Elem& base2, const G1Elem& y2,
                             const G1Elem& t1, const G1Elem& t2,
                             const ProofLabel& label) {
  std::array<Bytes, 6> parts{params.enc_g1(base1), params.enc_g1(y1),
                             params.enc_g1(base2), params.enc_g1(y2),
                             params.enc_g1(t1),    params.enc_g1(t2)};
  return fiat_shamir_challenge(params, kDomainDleq, label, parts);
}

DleqProof prove_dleq_with(const GroupParams& params, const G1Elem& base1,
                          const G1Elem& y1, const G1Elem& base2, const G1Elem& y2,
                          const Scalar& k, const Scalar& w,
                          const std::optional<Scalar>& injected_e,
                          const ProofLabel& label) {
  G1Elem t1 = params.exp_g1(base1, w);
  G1Elem t2 = params.exp_g1(base2, w);
  Scalar e = injected_e ? *injected_e
                        : dleq_challenge(params, base1, y1, base2, y2, t1, t2, label);
  return DleqProof{e, params.sc_add(w, params.sc_mul(e, k))};
}

DleqProof prove_dleq(const GroupParams& params, const G1Elem& base1, const G1Elem& y1,
                     const G1Elem& base2, const G1Elem& y2, const Scalar& k,
                     const ProofLabel& label, RandomSource& rng) {
  return prove_dleq_with(params, base1, y1, base2, y2, k, params.sc_random(rng),
                         std::nullopt, label);
}

bool verify_dleq(const GroupParams& params, const G1Elem& base1, const G1Elem& y1,
                 const G1Elem& base2, const G1Elem& y2, const DleqProof& proof,
                 const ProofLabel& label) {
  Scalar me = params.sc_neg(proof.e);
  std::array<G1Elem, 2> b1{base1, y1};
  std::array<Scalar, 2> e1{proof.f, me};
  G1Elem t1 = params.multiexp_g1(b1, e1);
  std::array<G1Elem, 2> b2{base2, y2};
  std::array<Scalar, 2> e2{proof.f, me};
  G1Elem t2 = params.multiexp_g1(b2, e2);
  return dleq_challenge(params, base1, y1, base2, y2, t1, t2, label) == proof.e;
}

}  // namespace ppat
