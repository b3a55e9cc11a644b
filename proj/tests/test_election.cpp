#include <doctest.h>

#include <algorithm>
#include <set>

#include "ppat/election.hpp"
#include "ppat/errors.hpp"
#include "ppat/io.hpp"
#include "toy_oracle.hpp"

using namespace ppat;

namespace {

struct ConstRng final : RandomSource {
  uint8_t b;
  explicit ConstRng(uint8_t v) : b(v) {}
  void fill(std::span<uint8_t> out) override {
    for (auto& x : out) x = b;
  }
};

// Toy election on T11 with the fixture key x = 3 shared 2-of-3.
struct ToyElection {
  GroupParams params = GroupParams::setup(Backend::toy, "T11");
  PublicKey pk;
  std::vector<KeyShare> shares;
  SharingTranscript sharing;

  explicit ToyElection() {
    pk = public_key_for(params, params.sc(3));
    ConstRng dealer(0x04);
    auto dealt = deal(params, params.sc(3), 2, 3, dealer);
    shares = dealt.first;
    sharing = dealt.second;
  }

  Transcript transcript(ElectionSpec spec) const {
    return make_transcript(params, std::move(spec), pk, sharing);
  }
};

ElectionSpec single_cell_spec() {
  ElectionSpec spec;
  spec.election_id = "toy-1cell";
  Question q;
  q.id = "Q";
  q.responses = 1;
  q.exactly_one = false;  // a single yes/no cell; abstention allowed
  q.max_selections = 1;
  spec.questions = {q};
  spec.voters = {"alice", "bob"};
  return spec;
}

// Hand-built ballot with pinned encryption coins (proof coins drawn from rng).
Ballot pinned_ballot(const Transcript& t, const std::string& voter, uint64_t v,
                     uint64_t r, uint64_t s, RandomSource& rng) {
  const GroupParams& p = t.params;
  Ballot b;
  b.voter = voter;
  ProofLabel lbl_cc = cell_label(t, "ballot/consistency", voter, 0, 0);
  ProofLabel lbl_01 = cell_label(t, "ballot/binary", voter, 0, 0);
  Ciphertext ct = encrypt_with_coins(p, t.pk, p.sc(v), p.sc(r), p.sc(s), lbl_cc, rng);
  BinaryProof validity = prove_binary(p, ct.d, p.sc(r), (unsigned)v, lbl_01, rng);
  b.cells = {{BallotCell{ct, validity}}};
  return b;
}

}  // namespace

TEST_CASE("build_ballot encodes the selection and proves everything") {
  ToyElection e;
  ElectionSpec spec;
  spec.election_id = "toy-3resp";
  spec.questions = {Question{"Q1", 3, true, 1}};
  spec.voters = {"alice"};
  Transcript t = e.transcript(spec);
  Drbg rng("ballot");
  Ballot b = build_ballot(t, "alice", {{0, 1, 0}}, rng);
  REQUIRE(b.cells.size() == 1);
  REQUIRE(b.cells[0].size() == 3);
  SecretKey sk(e.params.sc(3));
  CHECK(decrypt(e.params, sk, b.cells[0][0].ct, 1) == e.params.sc(0));
  CHECK(decrypt(e.params, sk, b.cells[0][1].ct, 1) == e.params.sc(1));
  CHECK(decrypt(e.params, sk, b.cells[0][2].ct, 1) == e.params.sc(0));
  for (uint32_t r = 0; r < 3; r++) {
    CHECK(verify_ciphertext(e.params, t.pk, b.cells[0][r].ct,
                            cell_label(t, "ballot/consistency", "alice", 0, r)));
    CHECK(verify_binary(e.params, b.cells[0][r].ct.d, b.cells[0][r].validity,
                        cell_label(t, "ballot/binary", "alice", 0, r)));
  }

  CHECK_THROWS_AS((void)build_ballot(t, "alice", {{1, 1, 0}}, rng), Error);
  CHECK_THROWS_AS((void)build_ballot(t, "alice", {{0, 0, 0}}, rng), Error);
  CHECK_THROWS_AS((void)build_ballot(t, "alice", {{0, 1}}, rng), Error);
  CHECK_THROWS_AS((void)build_ballot(t, "alice", {{0, 2, 0}}, rng), Error);
}

TEST_CASE("randomized ballots for the same choices never collide") {
  GroupParams p = GroupParams::setup(Backend::real_curve, "fresh");
  SecureRandom rng;
  auto [pk, sk] = keygen(p, rng);
  ConstRng dealer(0x04);
  auto [shares, sharing] = deal(p, sk.x(), 1, 1, dealer);
  ElectionSpec spec;
  spec.election_id = "fresh";
  spec.questions = {Question{"Q", 2, true, 1}};
  spec.voters = {"v"};
  Transcript t = make_transcript(p, spec, pk, sharing);
  // 100 ballots with identical choices: every ciphertext component unique
  std::set<std::string> c1s, c2s, ds;
  for (int i = 0; i < 100; i++) {
    Ballot b = build_ballot(t, "v", {{1, 0}}, rng);
    for (uint32_t r = 0; r < 2; r++) {
      CHECK(c1s.insert(hex_encode(p.enc_g1(b.cells[0][r].ct.c1))).second);
      CHECK(c2s.insert(hex_encode(p.enc_g1(b.cells[0][r].ct.c2))).second);
      CHECK(ds.insert(hex_encode(p.enc_g2(b.cells[0][r].ct.d.d))).second);
    }
  }
}

TEST_CASE("validate_and_post: accept, strip, reject, replace") {
  ToyElection e;
  Transcript t = e.transcript(single_cell_spec());
  CiphertextStore store;
  Drbg rng("post");

  Ballot good = pinned_ballot(t, "alice", 1, 2, 4, rng);
  const BoardEntry& entry = validate_and_post(t, store, good);
  CHECK(entry.voter == "alice");
  CHECK(entry.cells[0][0].d.d.toy_log() == 7);
  CHECK(store.ballots.count("alice") == 1);

  // a tampered ciphertext must be rejected and leave everything unchanged
  Ballot bad = pinned_ballot(t, "bob", 0, 1, 5, rng);
  bad.cells[0][0].ct.c2 = e.params.mul_g1(bad.cells[0][0].ct.c2, e.params.g1());
  CHECK_THROWS_AS((void)validate_and_post(t, store, bad), BallotRejected);
  CHECK(t.board.size() == 1);
  CHECK(store.ballots.count("bob") == 0);

  // off-roll voter
  Ballot stranger = pinned_ballot(t, "mallory", 0, 1, 5, rng);
  CHECK_THROWS_AS((void)validate_and_post(t, store, stranger), BallotRejected);

  // a fresh commitment to v = 2 with a proof from forced prover coins
  Ballot over = pinned_ballot(t, "bob", 0, 0, 0, rng);
  over.cells[0][0].ct =
      encrypt_with_coins(e.params, t.pk, e.params.sc(2), e.params.sc(0), e.params.sc(0),
                         cell_label(t, "ballot/consistency", "bob", 0, 0), rng);
  over.cells[0][0].validity = prove_binary_with(
      e.params, over.cells[0][0].ct.d, e.params.sc(0), 1,
      BinaryCoins{e.params.sc(3), e.params.sc(2), e.params.sc(4)}, std::nullopt,
      cell_label(t, "ballot/binary", "bob", 0, 0)).proof;
  CHECK_THROWS_AS((void)validate_and_post(t, store, over), BallotRejected);

  // replacement: bob posts twice, the last posting wins, history kept
  Ballot bob1 = pinned_ballot(t, "bob", 0, 1, 5, rng);
  validate_and_post(t, store, bob1);
  Ballot bob2 = pinned_ballot(t, "bob", 1, 3, 2, rng);
  validate_and_post(t, store, bob2);
  CHECK(t.board.size() == 3);
  std::vector<const BoardEntry*> eff = effective_board(t);
  CHECK(eff.size() == 2);
  CHECK(eff[1]->voter == "bob");
  CHECK(eff[1]->seq == 2);
  SecretKey sk(e.params.sc(3));
  CHECK(decrypt(e.params, sk, store.ballots.at("bob")[0][0], 1) == e.params.sc(1));
}

TEST_CASE("tally fixture: two voters, votes 1 and 0") {
  ToyElection e;
  Transcript t = e.transcript(single_cell_spec());
  CiphertextStore store;
  Drbg rng("tally-fixture");
  validate_and_post(t, store, pinned_ballot(t, "alice", 1, 2, 4, rng));
  validate_and_post(t, store, pinned_ballot(t, "bob", 0, 1, 5, rng));

  std::vector<KeyShare> use{e.shares[0], e.shares[1]};
  const TallyRecord& rec = tally(t, store, use, rng);
  REQUIRE(rec.responses.size() == 1);
  const ResponseTally& rt = rec.responses[0][0];
  CHECK(rt.d_agg.d.toy_log() == 8);
  CHECK(rt.result == 1);
  CHECK(rt.opening.a.toy_log() == 3);
  CHECK(rec.counted_ballots == 2);
  CHECK(verify_opening(e.params, rt.d_agg, rt.opening, e.params.sc(1)));

  // full public verification passes
  VerificationReport report = verify_transcript(t);
  for (const CheckResult& c : report.checks) {
    INFO(c.id, ": ", c.detail);
    CHECK(c.pass);
  }
  CHECK_THROWS_AS((void)tally(t, store, use, rng), Error);  // no re-tally
}

TEST_CASE("tally of an empty election") {
  ToyElection e;
  Transcript t = e.transcript(single_cell_spec());
  CiphertextStore store;
  store.election_id = "toy-1cell";
  Drbg rng("empty");
  std::vector<KeyShare> use{e.shares[0], e.shares[2]};
  const TallyRecord& rec = tally(t, store, use, rng);
  CHECK(rec.counted_ballots == 0);
  CHECK(rec.responses[0][0].result == 0);
  CHECK(e.params.is_identity(rec.responses[0][0].d_agg.d));
  CHECK(e.params.is_identity(rec.responses[0][0].opening.a));
  CHECK(verify_transcript(t).all_pass());
}

TEST_CASE("tally enforces shares, store consistency and the row check") {
  ToyElection e;
  ElectionSpec spec;
  spec.election_id = "rowcheck";
  spec.questions = {Question{"Q1", 2, true, 1}};
  spec.voters = {"alice", "bob"};
  Transcript t = e.transcript(spec);
  CiphertextStore store;
  Drbg rng("row");
  validate_and_post(t, store, build_ballot(t, "alice", {{1, 0}}, rng));

  // insufficient shares
  std::vector<KeyShare> one{e.shares[0]};
  CHECK_THROWS_AS((void)tally(t, store, one, rng), Error);

  // corrupt share fails the Feldman check
  std::vector<KeyShare> bad{e.shares[0], e.shares[1]};
  bad[1].s_i = e.params.sc_add(bad[1].s_i, e.params.sc(1));
  CHECK_THROWS_AS((void)tally(t, store, bad, rng), Error);

  // a malicious both-cells-zero ballot sneaks past per-cell proofs but
  // must die on the exactly-one row check
  {
    Ballot zz;
    zz.voter = "bob";
    zz.cells.resize(1);
    for (uint32_t r = 0; r < 2; r++) {
      Ciphertext ct = encrypt(e.params, t.pk, e.params.sc(0),
                              cell_label(t, "ballot/consistency", "bob", 0, r), rng);
      // the binary proof needs this cell's randomness; rebuild with coins
      EncryptionWithCoins enc = encrypt_keep_coins(
          e.params, t.pk, e.params.sc(0),
          cell_label(t, "ballot/consistency", "bob", 0, r), rng);
      BinaryProof pr = prove_binary(e.params, enc.ct.d, enc.r, 0,
                                    cell_label(t, "ballot/binary", "bob", 0, r), rng);
      zz.cells[0].push_back(BallotCell{enc.ct, pr});
      (void)ct;
    }
    validate_and_post(t, store, zz);  // per-cell proofs all pass
    std::vector<KeyShare> use{e.shares[0], e.shares[1]};
    CHECK_THROWS_AS((void)tally(t, store, use, rng), Error);
  }
}

TEST_CASE("board privacy: no ciphertext bytes, identical distributions") {
  ToyElection e;
  Transcript t = e.transcript(single_cell_spec());
  CiphertextStore store;
  Drbg rng("priv");
  validate_and_post(t, store, pinned_ballot(t, "alice", 1, 2, 4, rng));

  // structural whitelist on the serialized board entry: no ElGamal parts,
  // no consistency proofs, only commitments and 0/1 proofs
  std::string json = io::transcript_to_string(t);
  CHECK(json.find("\"c1\"") == std::string::npos);
  CHECK(json.find("\"c2\"") == std::string::npos);
  CHECK(json.find("\"sigma\"") == std::string::npos);
  CHECK(json.find("\"d\"") != std::string::npos);
  CHECK(json.find("\"validity\"") != std::string::npos);

  // exhaustive toy check: the multiset of board commitment pairs over all
  // randomness is the same for votes (1,0) and (0,1)
  uint64_t q = e.params.toy_order();
  std::vector<std::pair<uint64_t, uint64_t>> b10, b01;
  for (uint64_t r1 = 0; r1 < q; r1++) {
    for (uint64_t r2 = 0; r2 < q; r2++) {
      b10.emplace_back(commit(e.params, e.params.sc(1), e.params.sc(r1)).d.toy_log(),
                       commit(e.params, e.params.sc(0), e.params.sc(r2)).d.toy_log());
      b01.emplace_back(commit(e.params, e.params.sc(0), e.params.sc(r1)).d.toy_log(),
                       commit(e.params, e.params.sc(1), e.params.sc(r2)).d.toy_log());
    }
  }
  std::sort(b10.begin(), b10.end());
  std::sort(b01.begin(), b01.end());
  CHECK(b10 == b01);
}

TEST_CASE("tally matches plaintext bookkeeping on random elections") {
  // T101 so that 50 ballots never wrap the toy plaintext space
  GroupParams params = GroupParams::setup(Backend::toy, "T101");
  PublicKey pk = public_key_for(params, params.sc(29));
  ConstRng dealer(0x04);
  auto [shares, sharing] = deal(params, params.sc(29), 2, 3, dealer);
  ElectionSpec spec;
  spec.election_id = "random";
  spec.questions = {Question{"Q1", 2, true, 1}, Question{"Q2", 3, true, 1}};
  for (int i = 0; i < 50; i++) spec.voters.push_back("v" + std::to_string(i));
  Transcript t = make_transcript(params, spec, pk, sharing);
  CiphertextStore store;
  Drbg rng("bookkeeping");
  std::vector<std::vector<uint64_t>> sums{{0, 0}, {0, 0, 0}};
  Bytes pick(2);
  for (int i = 0; i < 50; i++) {
    rng.fill(pick);
    uint32_t a = pick[0] % 2, b = pick[1] % 3;
    std::vector<std::vector<uint8_t>> choices{{0, 0}, {0, 0, 0}};
    choices[0][a] = 1;
    choices[1][b] = 1;
    sums[0][a]++;
    sums[1][b]++;
    validate_and_post(t, store,
                      build_ballot(t, "v" + std::to_string(i), choices, rng));
  }
  std::vector<KeyShare> use{shares[1], shares[2]};
  const TallyRecord& rec = tally(t, store, use, rng);
  for (size_t q = 0; q < sums.size(); q++)
    for (size_t r = 0; r < sums[q].size(); r++)
      CHECK(rec.responses[q][r].result == sums[q][r]);
  CHECK(verify_transcript(t).all_pass());
}

TEST_CASE("verification flags mutations") {
  ToyElection e;
  Transcript t = e.transcript(single_cell_spec());
  CiphertextStore store;
  Drbg rng("mut");
  validate_and_post(t, store, pinned_ballot(t, "alice", 1, 2, 4, rng));
  validate_and_post(t, store, pinned_ballot(t, "bob", 0, 1, 5, rng));
  std::vector<KeyShare> use{e.shares[0], e.shares[1]};
  tally(t, store, use, rng);
  REQUIRE(verify_transcript(t).all_pass());

  auto failing_check = [&](const Transcript& bad) {
    VerificationReport rep = verify_transcript(bad);
    std::string ids;
    for (const CheckResult& c : rep.checks)
      if (!c.pass && c.ran) ids += c.id + ",";
    return ids;
  };

  {
    Transcript bad = t;
    bad.tally->responses[0][0].result += 1;
    std::string ids = failing_check(bad);
    CHECK(ids.find("result") != std::string::npos);
  }
  {
    Transcript bad = t;
    bad.board.erase(bad.board.begin());
    CHECK_FALSE(verify_transcript(bad).all_pass());
  }
  {
    Transcript bad = t;
    bad.board[0].cells[0][0].d.d = e.params.mul_g2(bad.board[0].cells[0][0].d.d,
                                                   e.params.h1());
    CHECK_FALSE(verify_transcript(bad).all_pass());
  }
  {
    Transcript bad = t;
    bad.declared.h2_hex[0] = bad.declared.h2_hex[0] == '0' ? '1' : '0';
    std::string ids = failing_check(bad);
    CHECK(ids.find("params") != std::string::npos);
  }
  {
    Transcript bad = t;
    bad.tally->responses[0][0].partials[0].dleq.f =
        e.params.sc_add(bad.tally->responses[0][0].partials[0].dleq.f, e.params.sc(1));
    std::string ids = failing_check(bad);
    CHECK(ids.find("partials") != std::string::npos);
  }

  // fail-fast mode still names a failing check
  {
    Transcript bad = t;
    bad.tally->responses[0][0].result += 1;
    VerificationReport rep = verify_transcript(bad, VerifyOptions{true, 1});
    CHECK_FALSE(rep.all_pass());
    bool named = false;
    for (const CheckResult& c : rep.checks)
      if (!c.pass && c.ran) named = true;
    CHECK(named);
  }
}

TEST_CASE("transcript serialization round-trips byte-exactly") {
  ToyElection e;
  Transcript t = e.transcript(single_cell_spec());
  CiphertextStore store;
  Drbg rng("io");
  validate_and_post(t, store, pinned_ballot(t, "alice", 1, 2, 4, rng));
  validate_and_post(t, store, pinned_ballot(t, "bob", 0, 1, 5, rng));
  std::vector<KeyShare> use{e.shares[0], e.shares[1]};
  tally(t, store, use, rng);

  std::string s1 = io::transcript_to_string(t);
  Transcript t2 = io::transcript_from_string(s1);
  std::string s2 = io::transcript_to_string(t2);
  CHECK(s1 == s2);
  CHECK(verify_transcript(t2).all_pass());

  std::string st1 = io::ciphertext_store_to_string(e.params, store);
  CiphertextStore store2 = io::ciphertext_store_from_string(e.params, st1);
  CHECK(io::ciphertext_store_to_string(e.params, store2) == st1);

  // truncation is a parse error naming the position
  try {
    (void)io::transcript_from_string(s1.substr(0, s1.size() / 2));
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(std::string(err.what()).find("invalid JSON") != std::string::npos);
  }

  // an off-subgroup element is rejected with its location
  std::string tampered = s1;
  std::string target = hex_encode(e.params.enc_g2(t.board[0].cells[0][0].d.d));
  size_t pos = tampered.find(target);
  REQUIRE(pos != std::string::npos);
  tampered.replace(pos, target.size(), "000000000000000b");  // log 11 >= q
  try {
    (void)io::transcript_from_string(tampered);
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(std::string(err.what()).find("board[0]") != std::string::npos);
  }
}

TEST_CASE("real-backend smoke election end to end") {
  GroupParams p = GroupParams::setup(Backend::real_curve, "smoke");
  Drbg rng("smoke");
  auto [pk, sk] = keygen(p, rng);
  auto [shares, sharing] = deal(p, sk.x(), 2, 3, rng);
  sk.zeroize();
  ElectionSpec spec;
  spec.election_id = "smoke";
  spec.questions = {Question{"Q", 2, true, 1}};
  spec.voters = {"u1", "u2"};
  Transcript t = make_transcript(p, spec, pk, sharing);
  CiphertextStore store;
  validate_and_post(t, store, build_ballot(t, "u1", {{1, 0}}, rng));
  validate_and_post(t, store, build_ballot(t, "u2", {{0, 1}}, rng));
  std::vector<KeyShare> use{shares[0], shares[2]};
  const TallyRecord& rec = tally(t, store, use, rng);
  CHECK(rec.responses[0][0].result == 1);
  CHECK(rec.responses[0][1].result == 1);
  VerificationReport rep = verify_transcript(t);
  for (const CheckResult& c : rep.checks) {
    INFO(c.id, ": ", c.detail);
    CHECK(c.pass);
  }
  // round trip through the envelope format on the real backend too
  Transcript t2 = io::transcript_from_string(io::transcript_to_string(t));
  CHECK(io::transcript_to_string(t2) == io::transcript_to_string(t));
  CHECK(verify_transcript(t2).all_pass());

  // privacy at the byte level: the transcript never contains the encodings
  // of the private ElGamal components (high-entropy on the real curve, so a
  // substring search is meaningful here)
  std::string json = io::transcript_to_string(t);
  for (const auto& [voter, cells] : store.ballots) {
    for (const auto& row : cells) {
      for (const Ciphertext& ct : row) {
        CHECK(json.find(hex_encode(p.enc_g1(ct.c1))) == std::string::npos);
        CHECK(json.find(hex_encode(p.enc_g1(ct.c2))) == std::string::npos);
      }
    }
  }
}
