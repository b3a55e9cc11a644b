#include <doctest.h>

#include <algorithm>
#include <vector>

#include "ppat/commitment.hpp"
#include "ppat/errors.hpp"
#include "toy_oracle.hpp"

using namespace ppat;

TEST_CASE("commit fixtures on T11") {
  GroupParams p = GroupParams::setup(Backend::toy, "T11");
  auto oracle = toy_oracle::t11();
  CHECK(oracle.commit(1, 2) == 7);
  CHECK(commit(p, p.sc(1), p.sc(2)).d.toy_log() == 7);
  CHECK(p.is_identity(commit(p, p.sc(0), p.sc(0)).d));
  CHECK(oracle.commit(0, 1) == 1);
  CHECK(commit(p, p.sc(0), p.sc(1)).d.toy_log() == 1);
}

TEST_CASE("opening fixtures on T11") {
  GroupParams p = GroupParams::setup(Backend::toy, "T11");
  auto oracle = toy_oracle::t11();
  CHECK(opening_for(p, p.sc(2)).a.toy_log() == oracle.opening(2));
  CHECK(p.is_identity(opening_for(p, p.sc(0)).a));
  CHECK(opening_for(p, p.sc(10)).a.toy_log() == 10);
}

TEST_CASE("verify_opening fixtures on T11") {
  GroupParams p = GroupParams::setup(Backend::toy, "T11");
  auto oracle = toy_oracle::t11();
  Commitment d7{G2Elem(uint64_t{7})};
  Opening a2{G1Elem(uint64_t{2})};
  CHECK(oracle.verify_opening(7, 2, 1));
  CHECK(verify_opening(p, d7, a2, p.sc(1)));
  CHECK_FALSE(oracle.verify_opening(7, 2, 0));
  CHECK_FALSE(verify_opening(p, d7, a2, p.sc(0)));
  CHECK(verify_opening(p, Commitment{p.identity_g2()}, Opening{p.identity_g1()}, p.sc(0)));
}

TEST_CASE("perfect hiding: exhaustive multiset equality for q in {11, 101}") {
  for (const char* seed : {"T11", "T101"}) {
    GroupParams p = GroupParams::setup(Backend::toy, seed);
    uint64_t q = p.toy_order();
    std::vector<uint64_t> c0, c1;
    for (uint64_t r = 0; r < q; r++) {
      c0.push_back(commit(p, p.sc(0), p.sc(r)).d.toy_log());
      c1.push_back(commit(p, p.sc(1), p.sc(r)).d.toy_log());
    }
    std::sort(c0.begin(), c0.end());
    std::sort(c1.begin(), c1.end());
    CHECK(c0 == c1);
  }
}

TEST_CASE("completeness: exhaustive on toy, seeded trials, real spot checks") {
  GroupParams p = GroupParams::setup(Backend::toy, "T11");
  for (uint64_t v = 0; v < 11; v++)
    for (uint64_t r = 0; r < 11; r++)
      CHECK(verify_opening(p, commit(p, p.sc(v), p.sc(r)), opening_for(p, p.sc(r)),
                           p.sc(v)));

  Drbg rng("commit-complete");
  for (int i = 0; i < 1000; i++) {
    Scalar v = p.sc_random(rng), r = p.sc_random(rng);
    CHECK(verify_opening(p, commit(p, v, r), opening_for(p, r), v));
  }

  GroupParams rp = GroupParams::setup(Backend::real_curve, "commit");
  for (int i = 0; i < 25; i++) {
    Scalar v = rp.sc_random(rng), r = rp.sc_random(rng);
    CHECK(verify_opening(rp, commit(rp, v, r), opening_for(rp, r), v));
  }
}

TEST_CASE("soundness spot check: wrong value never verifies") {
  GroupParams p = GroupParams::setup(Backend::toy, "T11");
  Drbg rng("commit-sound");
  for (int i = 0; i < 200; i++) {
    Scalar v = p.sc_random(rng), r = p.sc_random(rng);
    Commitment d = commit(p, v, r);
    Opening a = opening_for(p, r);
    Scalar wrong = p.sc_add(v, p.sc(1 + i % 10));
    if (wrong == v) continue;
    CHECK_FALSE(verify_opening(p, d, a, wrong));
  }
  GroupParams rp = GroupParams::setup(Backend::real_curve, "commit");
  Scalar v = rp.sc(1), r = rp.sc_random(rng);
  CHECK_FALSE(verify_opening(rp, commit(rp, v, r), opening_for(rp, r), rp.sc(2)));
}

TEST_CASE("homomorphism") {
  GroupParams p = GroupParams::setup(Backend::toy, "T11");
  Drbg rng("commit-hom");
  for (int i = 0; i < 1000; i++) {
    Scalar v1 = p.sc_random(rng), r1 = p.sc_random(rng);
    Scalar v2 = p.sc_random(rng), r2 = p.sc_random(rng);
    Commitment d{p.mul_g2(commit(p, v1, r1).d, commit(p, v2, r2).d)};
    Opening a{p.mul_g1(opening_for(p, r1).a, opening_for(p, r2).a)};
    CHECK(verify_opening(p, d, a, p.sc_add(v1, v2)));
  }
}

TEST_CASE("combine fixtures") {
  GroupParams p = GroupParams::setup(Backend::toy, "T11");
  std::vector<Commitment> ds{Commitment{G2Elem(uint64_t{7})}, Commitment{G2Elem(uint64_t{1})}};
  Commitment c = combine(p, ds);
  CHECK(c.d.toy_log() == 8);
  // opens to v = 1 with a = log 3 (r = 2 + 1)
  CHECK(verify_opening(p, c, Opening{G1Elem(uint64_t{3})}, p.sc(1)));

  std::vector<Commitment> single{Commitment{G2Elem(uint64_t{4})}};
  CHECK(combine(p, single).d.toy_log() == 4);
  std::vector<Commitment> with_id{Commitment{G2Elem(uint64_t{4})},
                                  Commitment{p.identity_g2()}};
  CHECK(combine(p, with_id).d.toy_log() == 4);
  CHECK_THROWS_AS((void)combine(p, std::span<const Commitment>{}), Error);
  CHECK_THROWS_AS((void)combine_openings(p, std::span<const Opening>{}), Error);
}
