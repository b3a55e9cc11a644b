#include <doctest.h>

#include <vector>

#include "ppat/errors.hpp"
#include "ppat/threshold.hpp"
#include "toy_oracle.hpp"

using namespace ppat;

namespace {

GroupParams t11() { return GroupParams::setup(Backend::toy, "T11"); }

// RandomSource emitting a constant byte; with q = 11 the scalar sampler
// masks a single byte, so 0x04 yields the scalar 4 every draw.
struct ConstRng final : RandomSource {
  uint8_t b;
  explicit ConstRng(uint8_t v) : b(v) {}
  void fill(std::span<uint8_t> out) override {
    for (auto& x : out) x = b;
  }
};

ProofLabel lbl(const GroupParams& p) {
  return make_label(p, "threshold-test").scoped("test", Bytes{});
}

// The T11 fixture sharing: x = 3, t = 2, n = 3 with coefficient a1 = 4,
// i.e. f(i) = 3 + 4i: shares (7, 0, 4), A = (log 3, log 4).
std::pair<std::vector<KeyShare>, SharingTranscript> fixture_deal(const GroupParams& p) {
  ConstRng rng(0x04);
  return deal(p, p.sc(3), 2, 3, rng);
}

}  // namespace

TEST_CASE("deal fixture: shares and coefficient commitments") {
  GroupParams p = t11();
  auto oracle = toy_oracle::t11();
  auto [shares, transcript] = fixture_deal(p);
  REQUIRE(shares.size() == 3);
  std::vector<uint64_t> coeffs{3, 4};
  CHECK(oracle.poly_eval(coeffs, 1) == 7);
  CHECK(oracle.poly_eval(coeffs, 2) == 0);
  CHECK(oracle.poly_eval(coeffs, 3) == 4);
  CHECK(shares[0].s_i == p.sc(7));
  CHECK(shares[1].s_i == p.sc(0));
  CHECK(shares[2].s_i == p.sc(4));
  REQUIRE(transcript.coeff_commitments.size() == 2);
  CHECK(transcript.coeff_commitments[0].toy_log() == 3);
  CHECK(transcript.coeff_commitments[1].toy_log() == 4);
  CHECK(transcript.threshold == 2);
  CHECK(transcript.trustees == 3);
}

TEST_CASE("deal with t = 1 gives everyone the secret") {
  GroupParams p = t11();
  ConstRng rng(0x04);
  auto [shares, transcript] = deal(p, p.sc(3), 1, 4, rng);
  for (const KeyShare& s : shares) CHECK(s.s_i == p.sc(3));
  CHECK(transcript.coeff_commitments.size() == 1);
  CHECK(transcript.coeff_commitments[0].toy_log() == 3);
}

TEST_CASE("deal rejects bad parameters") {
  GroupParams p = t11();
  ConstRng rng(0x04);
  CHECK_THROWS_AS((void)deal(p, p.sc(3), 0, 3, rng), Error);
  CHECK_THROWS_AS((void)deal(p, p.sc(3), 4, 3, rng), Error);
  CHECK_THROWS_AS((void)deal(p, p.sc(3), 2, 11, rng), Error);  // n >= q
}

TEST_CASE("verify_share fixture and perturbation") {
  GroupParams p = t11();
  auto [shares, transcript] = fixture_deal(p);
  for (const KeyShare& s : shares) CHECK(verify_share(p, s, transcript));
  KeyShare bad = shares[0];
  bad.s_i = p.sc_add(bad.s_i, p.sc(1));
  CHECK_FALSE(verify_share(p, bad, transcript));
  // every single-scalar perturbation of a valid share is rejected
  for (uint64_t delta = 1; delta < 11; delta++) {
    KeyShare b2 = shares[1];
    b2.s_i = p.sc_add(b2.s_i, p.sc(delta));
    CHECK_FALSE(verify_share(p, b2, transcript));
  }
  KeyShare off = shares[0];
  off.index = 9;
  CHECK_FALSE(verify_share(p, off, transcript));
}

TEST_CASE("any t shares reconstruct the secret; t-1 shares pin nothing") {
  GroupParams p = t11();
  auto oracle = toy_oracle::t11();
  auto [shares, transcript] = fixture_deal(p);
  // Lagrange reconstruction of x = 3 from every 2-subset
  std::vector<std::pair<uint32_t, uint32_t>> subsets{{1, 2}, {1, 3}, {2, 3}};
  for (auto [i, j] : subsets) {
    std::vector<uint32_t> idx{i, j};
    std::vector<Scalar> lambda = lagrange_at_zero(p, idx);
    Scalar x = p.sc_add(p.sc_mul(lambda[0], shares[i - 1].s_i),
                        p.sc_mul(lambda[1], shares[j - 1].s_i));
    CHECK(x == p.sc(3));
  }
  // exhaustively: a single share value is consistent with every candidate
  // secret (for each x' there is exactly one polynomial through it)
  for (uint64_t share_val = 0; share_val < 11; share_val++) {
    for (uint64_t candidate = 0; candidate < 11; candidate++) {
      uint64_t matches = 0;
      for (uint64_t a1 = 0; a1 < 11; a1++)
        if (oracle.poly_eval({candidate, a1}, 1) == share_val) matches++;
      CHECK(matches == 1);
    }
  }
}

TEST_CASE("lagrange coefficients fixture") {
  GroupParams p = t11();
  std::vector<uint32_t> idx{1, 2};
  std::vector<Scalar> lambda = lagrange_at_zero(p, idx);
  CHECK(lambda[0] == p.sc(2));
  CHECK(lambda[1] == p.sc(10));  // -1 mod 11
}

TEST_CASE("partial decryption fixtures") {
  GroupParams p = t11();
  auto [shares, transcript] = fixture_deal(p);
  G1Elem c1{uint64_t{4}};
  ConstRng rng(0x02);
  ProofLabel l = lbl(p);

  PartialDecryption m1 = partial_decrypt(p, shares[0], c1, l, rng);
  CHECK(m1.m_i.toy_log() == 6);  // 4 * 7 mod 11
  CHECK(verify_partial(p, transcript, c1, m1, l));

  PartialDecryption m2 = partial_decrypt(p, shares[1], c1, l, rng);
  CHECK(p.is_identity(m2.m_i));  // share 2 is zero
  CHECK(verify_partial(p, transcript, c1, m2, l));
}

TEST_CASE("combine fixtures: subsets {1,2} and {1,3} agree with c1^x") {
  GroupParams p = t11();
  auto [shares, transcript] = fixture_deal(p);
  G1Elem c1{uint64_t{4}};
  ConstRng rng(0x02);
  ProofLabel l = lbl(p);
  G1Elem direct = p.exp_g1(c1, p.sc(3));
  CHECK(direct.toy_log() == 1);  // 4 * 3 = 12 = 1 mod 11

  auto combine_set = [&](std::vector<uint32_t> idx) {
    std::vector<PartialDecryption> parts;
    for (uint32_t i : idx) parts.push_back(partial_decrypt(p, shares[i - 1], c1, l, rng));
    return combine_partials(p, transcript, c1, l, parts);
  };
  CHECK(combine_set({1, 2}) == direct);
  CHECK(combine_set({1, 3}) == direct);
  CHECK(combine_set({2, 3}) == direct);
  CHECK(combine_set({1, 2, 3}) == direct);

  // t = 1: a single partial is the answer itself
  ConstRng rng4(0x04);
  auto [shares1, transcript1] = deal(p, p.sc(3), 1, 2, rng4);
  std::vector<PartialDecryption> one{partial_decrypt(p, shares1[0], c1, l, rng)};
  CHECK(combine_partials(p, transcript1, c1, l, one) == direct);
}

// Rejection paths run on the real curve; the toy challenge space is too
// small to make a mutated Chaum-Pedersen proof reliably fail.
TEST_CASE("combine rejects bad partials and names the trustee") {
  GroupParams p = GroupParams::setup(Backend::real_curve, "thr-bad");
  Drbg rng("thr-bad");
  Scalar x = p.sc_random_nonzero(rng);
  auto [shares, transcript] = deal(p, x, 2, 3, rng);
  G1Elem c1 = p.exp_g1(p.g1(), p.sc_random(rng));
  ProofLabel l = lbl(p);
  std::vector<PartialDecryption> parts{partial_decrypt(p, shares[0], c1, l, rng),
                                       partial_decrypt(p, shares[2], c1, l, rng)};

  // insufficient
  std::vector<PartialDecryption> few{parts[0]};
  CHECK_THROWS_AS((void)combine_partials(p, transcript, c1, l, few), Error);

  // corrupted share value: must throw naming index 3, never a wrong value
  auto bad = parts;
  bad[1].m_i = p.mul_g1(bad[1].m_i, p.g1());
  try {
    (void)combine_partials(p, transcript, c1, l, bad);
    FAIL("expected InvalidPartial");
  } catch (const InvalidPartial& e) {
    CHECK(e.index == 3);
  }

  // duplicate index
  auto dup = parts;
  dup[1] = parts[0];
  CHECK_THROWS_AS((void)combine_partials(p, transcript, c1, l, dup), InvalidPartial);

  // label mismatch: proofs bound to another tally label fail
  ProofLabel other = make_label(p, "threshold-test").scoped("other", Bytes{});
  CHECK_THROWS_AS((void)combine_partials(p, transcript, c1, other, parts),
                  InvalidPartial);
}

TEST_CASE("threshold flow on the real backend") {
  GroupParams p = GroupParams::setup(Backend::real_curve, "thr");
  Drbg rng("thr");
  Scalar x = p.sc_random_nonzero(rng);
  auto [shares, transcript] = deal(p, x, 3, 5, rng);
  for (const KeyShare& s : shares) CHECK(verify_share(p, s, transcript));
  G1Elem c1 = p.exp_g1(p.g1(), p.sc_random(rng));
  G1Elem direct = p.exp_g1(c1, x);
  ProofLabel l = lbl(p);
  std::vector<PartialDecryption> parts;
  for (uint32_t i : {5u, 2u, 3u})
    parts.push_back(partial_decrypt(p, shares[i - 1], c1, l, rng));
  CHECK(combine_partials(p, transcript, c1, l, parts) == direct);
}
