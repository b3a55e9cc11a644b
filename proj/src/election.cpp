#include "ppat/election.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

#include "ppat/errors.hpp"

namespace ppat {

namespace {

Bytes cell_context(std::string_view voter, uint32_t q, uint32_t r) {
  ByteWriter w;
  w.field(voter);
  w.u32(q);
  w.u32(r);
  return w.take();
}

void check_spec(const ElectionSpec& spec) {
  if (spec.election_id.empty()) throw Error("election id must not be empty");
  if (spec.questions.empty()) throw Error("election needs at least one question");
  for (const Question& q : spec.questions) {
    if (q.responses < 1) throw Error("question '" + q.id + "' needs responses");
    if (!q.exactly_one && q.max_selections < 1)
      throw Error("question '" + q.id + "' has an empty selection rule");
  }
  std::set<std::string> seen;
  for (const std::string& v : spec.voters)
    if (!seen.insert(v).second) throw Error("duplicate voter id '" + v + "' in roll");
}

// Chunked parallel loop; with threads <= 1 runs inline.
void parallel_for(size_t n, unsigned threads, const std::function<void(size_t)>& fn) {
  if (threads <= 1 || n < 2) {
    for (size_t i = 0; i < n; i++) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  unsigned count = std::min<unsigned>(threads, (unsigned)n);
  pool.reserve(count);
  for (unsigned i = 0; i < count; i++) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace

ProofLabel election_label(const Transcript& t) {
  return make_label(t.params, t.pk.g2, t.spec.election_id);
}

ProofLabel cell_label(const Transcript& t, std::string_view purpose,
                      std::string_view voter, uint32_t question, uint32_t response) {
  return election_label(t).scoped(purpose, cell_context(voter, question, response));
}

ProofLabel tally_label(const Transcript& t, uint32_t question, uint32_t response) {
  ByteWriter w;
  w.u32(question);
  w.u32(response);
  return election_label(t).scoped("tally/partial", w.bytes());
}

ProofLabel row_label(const Transcript& t, std::string_view voter, uint32_t question) {
  ByteWriter w;
  w.field(voter);
  w.u32(question);
  return election_label(t).scoped("tally/row", w.bytes());
}

Transcript make_transcript(GroupParams params, ElectionSpec spec, PublicKey pk,
                           SharingTranscript sharing) {
  check_spec(spec);
  if (sharing.threshold < 1 || sharing.threshold > sharing.trustees)
    throw Error("sharing transcript has an invalid threshold");
  if (sharing.coeff_commitments.size() != sharing.threshold)
    throw Error("sharing transcript must carry exactly t coefficient commitments");
  if (!(sharing.coeff_commitments[0] == pk.g2))
    throw Error("sharing transcript does not open the election public key");
  params.register_fixed_base(pk.g2);

  Transcript t(std::move(params));
  t.spec = std::move(spec);
  t.pk = std::move(pk);
  t.sharing = std::move(sharing);
  t.declared.q_hex = t.params.order().to_hex();
  t.declared.g1_hex = hex_encode(t.params.enc_g1(t.params.g1()));
  t.declared.h1_hex = hex_encode(t.params.enc_g2(t.params.h1()));
  t.declared.h2_hex = hex_encode(t.params.enc_g2(t.params.h2()));
  return t;
}

Ballot build_ballot(const Transcript& t, const std::string& voter,
                    const std::vector<std::vector<uint8_t>>& choices,
                    RandomSource& rng) {
  const ElectionSpec& spec = t.spec;
  if (choices.size() != spec.questions.size())
    throw Error("choice vector has the wrong number of questions");
  for (size_t q = 0; q < choices.size(); q++) {
    const Question& qu = spec.questions[q];
    if (choices[q].size() != qu.responses)
      throw Error("question '" + qu.id + "': wrong number of response cells");
    uint32_t sum = 0;
    for (uint8_t v : choices[q]) {
      if (v > 1) throw Error("question '" + qu.id + "': responses must be 0 or 1");
      sum += v;
    }
    if (qu.exactly_one && sum != 1)
      throw Error("question '" + qu.id + "': exactly one response must be selected");
    if (!qu.exactly_one && sum > qu.max_selections)
      throw Error("question '" + qu.id + "': too many responses selected");
  }

  Ballot ballot;
  ballot.voter = voter;
  ballot.cells.resize(choices.size());
  for (uint32_t q = 0; q < choices.size(); q++) {
    for (uint32_t r = 0; r < choices[q].size(); r++) {
      unsigned v = choices[q][r];
      ProofLabel lbl_cc = cell_label(t, "ballot/consistency", voter, q, r);
      ProofLabel lbl_01 = cell_label(t, "ballot/binary", voter, q, r);
      EncryptionWithCoins enc =
          encrypt_keep_coins(t.params, t.pk, t.params.sc(v), lbl_cc, rng);
      BinaryProof validity =
          prove_binary(t.params, enc.ct.d, enc.r, v, lbl_01, rng);
      secure_wipe(enc.r.v.limb.data(), 32);
      secure_wipe(enc.s.v.limb.data(), 32);
      ballot.cells[q].push_back(BallotCell{std::move(enc.ct), validity});
    }
  }
  return ballot;
}

const BoardEntry& validate_and_post(Transcript& t, CiphertextStore& store,
                                    const Ballot& ballot) {
  const ElectionSpec& spec = t.spec;
  if (std::find(spec.voters.begin(), spec.voters.end(), ballot.voter) ==
      spec.voters.end())
    throw BallotRejected("voter '" + ballot.voter + "' is not on the roll");
  if (!store.election_id.empty() && store.election_id != spec.election_id)
    throw Error("ciphertext store belongs to a different election");
  if (ballot.cells.size() != spec.questions.size())
    throw BallotRejected("ballot has the wrong number of questions");
  for (size_t q = 0; q < ballot.cells.size(); q++)
    if (ballot.cells[q].size() != spec.questions[q].responses)
      throw BallotRejected("ballot question " + std::to_string(q) +
                           " has the wrong number of cells");

  for (uint32_t q = 0; q < ballot.cells.size(); q++) {
    for (uint32_t r = 0; r < ballot.cells[q].size(); r++) {
      const BallotCell& cell = ballot.cells[q][r];
      ProofLabel lbl_cc = cell_label(t, "ballot/consistency", ballot.voter, q, r);
      if (!verify_ciphertext(t.params, t.pk, cell.ct, lbl_cc))
        throw BallotRejected("consistency proof failed for voter '" + ballot.voter +
                             "' question " + std::to_string(q) + " response " +
                             std::to_string(r));
      ProofLabel lbl_01 = cell_label(t, "ballot/binary", ballot.voter, q, r);
      if (!verify_binary(t.params, cell.ct.d, cell.validity, lbl_01))
        throw BallotRejected("0/1 validity proof failed for voter '" + ballot.voter +
                             "' question " + std::to_string(q) + " response " +
                             std::to_string(r));
    }
  }

  // All checks passed: publish the hiding part, retain the rest privately.
  BoardEntry entry;
  entry.seq = t.board.size();
  entry.voter = ballot.voter;
  entry.cells.resize(ballot.cells.size());
  std::vector<std::vector<Ciphertext>> private_cells(ballot.cells.size());
  for (size_t q = 0; q < ballot.cells.size(); q++) {
    for (const BallotCell& cell : ballot.cells[q]) {
      entry.cells[q].push_back(BoardCell{cell.ct.d, cell.validity});
      private_cells[q].push_back(cell.ct);
    }
  }
  store.election_id = spec.election_id;
  store.ballots[ballot.voter] = std::move(private_cells);  // last write wins
  t.board.push_back(std::move(entry));
  return t.board.back();
}

std::vector<const BoardEntry*> effective_board(const Transcript& t) {
  std::map<std::string, const BoardEntry*> last;
  for (const BoardEntry& e : t.board) last[e.voter] = &e;
  std::vector<const BoardEntry*> out;
  out.reserve(last.size());
  for (const BoardEntry& e : t.board)
    if (last.at(e.voter) == &e) out.push_back(&e);
  return out;
}

const TallyRecord& tally(Transcript& t, const CiphertextStore& store,
                         std::vector<KeyShare> shares, RandomSource& rng,
                         const TallyOptions& opts) {
  if (t.tally) throw Error("transcript already carries a tally");
  if (store.election_id != t.spec.election_id && !t.board.empty())
    throw Error("ciphertext store belongs to a different election");

  // shares: distinct, verified, at least t of them
  std::set<uint32_t> idx;
  for (KeyShare& s : shares) {
    if (!idx.insert(s.index).second)
      throw Error("duplicate key share for trustee " + std::to_string(s.index));
    if (!verify_share(t.params, s, t.sharing))
      throw Error("key share " + std::to_string(s.index) + " fails the Feldman check");
  }
  if (shares.size() < t.sharing.threshold)
    throw Error("insufficient key shares: need " + std::to_string(t.sharing.threshold));

  std::vector<const BoardEntry*> entries = effective_board(t);

  // 6a: re-verify everything posted, and that the private store matches
  // the published commitments.
  for (const BoardEntry* e : entries) {
    auto it = store.ballots.find(e->voter);
    if (it == store.ballots.end())
      throw Error("private ciphertexts missing for voter '" + e->voter + "'");
    const auto& cells = it->second;
    if (cells.size() != e->cells.size())
      throw Error("store/board shape mismatch for voter '" + e->voter + "'");
    for (uint32_t q = 0; q < cells.size(); q++) {
      if (cells[q].size() != e->cells[q].size())
        throw Error("store/board shape mismatch for voter '" + e->voter + "'");
      for (uint32_t r = 0; r < cells[q].size(); r++) {
        const Ciphertext& ct = cells[q][r];
        if (!(ct.d == e->cells[q][r].d))
          throw Error("stored ciphertext disagrees with the board for voter '" +
                      e->voter + "' question " + std::to_string(q) + " response " +
                      std::to_string(r));
        if (!verify_ciphertext(t.params, t.pk, ct,
                               cell_label(t, "ballot/consistency", e->voter, q, r)))
          throw Error("re-verification failed (consistency) for voter '" + e->voter +
                      "' question " + std::to_string(q) + " response " +
                      std::to_string(r));
        if (!verify_binary(t.params, ct.d, e->cells[q][r].validity,
                           cell_label(t, "ballot/binary", e->voter, q, r)))
          throw Error("re-verification failed (0/1) for voter '" + e->voter +
                      "' question " + std::to_string(q) + " response " +
                      std::to_string(r));
      }
    }
  }

  // Row checks for exactly-one questions: the product of a voter's row
  // must open to 1. Uses the same threshold machinery as the tally so no
  // single party needs x.
  for (const BoardEntry* e : entries) {
    auto& cells = store.ballots.at(e->voter);
    for (uint32_t q = 0; q < cells.size(); q++) {
      if (!t.spec.questions[q].exactly_one) continue;
      Ciphertext row = cells[q][0];
      for (uint32_t r = 1; r < cells[q].size(); r++)
        row = multiply(t.params, row, cells[q][r]);
      ProofLabel lbl = row_label(t, e->voter, q);
      std::vector<PartialDecryption> parts;
      for (const KeyShare& s : shares)
        parts.push_back(partial_decrypt(t.params, s, row.c1, lbl, rng));
      G1Elem c1x = combine_partials(t.params, t.sharing, row.c1, lbl, parts);
      Opening a = opening_from_c1x(t.params, c1x, row);
      if (!verify_opening(t.params, row.d, a, t.params.sc(1)))
        throw Error("row check failed: voter '" + e->voter + "' question " +
                    std::to_string(q) + " does not select exactly one response");
    }
  }

  // 6b-6c: aggregate response by response, decrypt, publish openings.
  TallyRecord record;
  record.counted_ballots = entries.size();
  uint64_t bound = opts.dl_bound.value_or(std::max<uint64_t>(entries.size(), 1));
  record.responses.resize(t.spec.questions.size());
  for (uint32_t q = 0; q < t.spec.questions.size(); q++) {
    for (uint32_t r = 0; r < t.spec.questions[q].responses; r++) {
      Ciphertext agg{t.params.identity_g1(), t.params.identity_g1(),
                     Commitment{t.params.identity_g2()}, std::nullopt};
      Commitment d_board{t.params.identity_g2()};
      for (const BoardEntry* e : entries) {
        agg = multiply(t.params, agg, store.ballots.at(e->voter)[q][r]);
        d_board = Commitment{t.params.mul_g2(d_board.d, e->cells[q][r].d.d)};
      }
      if (!(agg.d == d_board))
        throw Error("aggregate commitment mismatch between store and board");

      ProofLabel lbl = tally_label(t, q, r);
      ResponseTally rt;
      rt.c1_agg = agg.c1;
      rt.c2_agg = agg.c2;
      rt.d_agg = d_board;
      for (const KeyShare& s : shares)
        rt.partials.push_back(partial_decrypt(t.params, s, agg.c1, lbl, rng));
      G1Elem c1x = combine_partials(t.params, t.sharing, agg.c1, lbl, rt.partials);
      rt.opening = opening_from_c1x(t.params, c1x, agg);
      GTElem target = decryption_target(t.params, c1x, agg);
      auto m = dl_extract(t.params, t.params.gt2(), target, bound);
      if (!m)
        throw DlNotFound("tally for question " + std::to_string(q) + " response " +
                         std::to_string(r) + " exceeds the search bound");
      rt.result = *m;
      if (!verify_opening(t.params, rt.d_agg, rt.opening, t.params.sc(rt.result)))
        throw Error("internal: tally opening failed to verify");
      record.responses[q].push_back(std::move(rt));
    }
  }

  // 6d: erase all secret key material handed to us.
  for (KeyShare& s : shares) s.zeroize();
  shares.clear();

  t.tally = std::move(record);
  return *t.tally;
}

// ---- verification ---------------------------------------------------------

namespace {

struct Checker {
  VerificationReport report;
  bool stop = false;
  bool fail_fast = false;

  void add(std::string id, std::string description, bool pass, std::string detail) {
    report.checks.push_back(
        {std::move(id), std::move(description), pass, true, std::move(detail)});
    if (!pass && fail_fast) stop = true;
  }
  void skipped(std::string id, std::string description) {
    report.checks.push_back({std::move(id), std::move(description), false, false,
                             "not run (earlier check failed)"});
  }
};

}  // namespace

VerificationReport verify_transcript(const Transcript& t, const VerifyOptions& opts) {
  Checker ck;
  ck.fail_fast = opts.fail_fast;

  // (a) parameters and their derivation
  {
    std::string detail;
    bool ok = true;
    try {
      GroupParams re = GroupParams::setup(t.params.backend(), t.params.seed());
      auto expect = [&](const std::string& got, const std::string& want,
                        const char* what) {
        if (ok && got != want) {
          ok = false;
          detail = std::string(what) + " does not match its seeded derivation";
        }
      };
      expect(t.declared.q_hex, re.order().to_hex(), "group order");
      expect(t.declared.g1_hex, hex_encode(re.enc_g1(re.g1())), "generator g1");
      expect(t.declared.h1_hex, hex_encode(re.enc_g2(re.h1())), "generator h1");
      expect(t.declared.h2_hex, hex_encode(re.enc_g2(re.h2())), "generator h2");
      if (ok) check_spec(t.spec);
    } catch (const Error& e) {
      ok = false;
      detail = e.what();
    }
    ck.add("params", "election parameters and generator derivation", ok, detail);
  }

  // (b) key transcript
  if (!ck.stop) {
    bool ok = true;
    std::string detail;
    if (t.sharing.threshold < 1 || t.sharing.threshold > t.sharing.trustees) {
      ok = false;
      detail = "invalid threshold";
    } else if (t.sharing.coeff_commitments.size() != t.sharing.threshold) {
      ok = false;
      detail = "coefficient commitment count differs from threshold";
    } else if (!(t.sharing.coeff_commitments[0] == t.pk.g2)) {
      ok = false;
      detail = "A_0 differs from the election public key";
    }
    ck.add("key", "public key consistent with the sharing transcript", ok, detail);
  } else {
    ck.skipped("key", "public key consistent with the sharing transcript");
  }

  std::vector<const BoardEntry*> entries = effective_board(t);

  // (d) commitment products per response (cheap, so ahead of the per-entry
  // proof scan when failing fast)
  auto run_products = [&](Checker& c) {
    if (!t.tally) {
      c.add("aggregation", "commitment products match the tally record", true,
            "no tally recorded yet");
      return;
    }
    bool ok = true;
    std::string detail;
    const TallyRecord& rec = *t.tally;
    if (rec.counted_ballots != entries.size()) {
      ok = false;
      detail = "counted ballot number differs from the effective board";
    }
    if (ok && rec.responses.size() != t.spec.questions.size()) {
      ok = false;
      detail = "tally shape differs from the election spec";
    }
    for (uint32_t q = 0; ok && q < rec.responses.size(); q++) {
      if (rec.responses[q].size() != t.spec.questions[q].responses) {
        ok = false;
        detail = "tally shape differs from the election spec";
        break;
      }
      for (uint32_t r = 0; ok && r < rec.responses[q].size(); r++) {
        G2Elem prod = t.params.identity_g2();
        for (const BoardEntry* e : entries)
          prod = t.params.mul_g2(prod, e->cells[q][r].d.d);
        if (!(prod == rec.responses[q][r].d_agg.d)) {
          ok = false;
          detail = "recomputed commitment product differs at question " +
                   std::to_string(q) + " response " + std::to_string(r);
        }
      }
    }
    c.add("aggregation", "commitment products match the tally record", ok, detail);
  };

  // (e) result openings + row sums
  auto run_results = [&](Checker& c) {
    if (!t.tally) {
      c.add("result", "published results open the aggregated commitments", true,
            "no tally recorded yet");
      return;
    }
    bool ok = true;
    std::string detail;
    const TallyRecord& rec = *t.tally;
    for (uint32_t q = 0; ok && q < rec.responses.size(); q++) {
      uint64_t row_sum = 0;
      for (uint32_t r = 0; ok && r < rec.responses[q].size(); r++) {
        const ResponseTally& rt = rec.responses[q][r];
        if (rt.result > rec.counted_ballots) {
          ok = false;
          detail = "result exceeds the number of counted ballots at question " +
                   std::to_string(q) + " response " + std::to_string(r);
          break;
        }
        row_sum += rt.result;
        if (!verify_opening(t.params, rt.d_agg, rt.opening,
                            t.params.sc(rt.result))) {
          ok = false;
          detail = "opening does not verify at question " + std::to_string(q) +
                   " response " + std::to_string(r);
        }
      }
      if (ok && t.spec.questions[q].exactly_one && row_sum != rec.counted_ballots) {
        ok = false;
        detail = "per-question results do not sum to the ballot count at question " +
                 std::to_string(q);
      }
    }
    c.add("result", "published results open the aggregated commitments", ok, detail);
  };

  // partial-decryption proofs and opening linkage
  auto run_partials = [&](Checker& c) {
    if (!t.tally) {
      c.add("partials", "threshold partial decryptions verify", true,
            "no tally recorded yet");
      return;
    }
    bool ok = true;
    std::string detail;
    const TallyRecord& rec = *t.tally;
    for (uint32_t q = 0; ok && q < rec.responses.size(); q++) {
      for (uint32_t r = 0; ok && r < rec.responses[q].size(); r++) {
        const ResponseTally& rt = rec.responses[q][r];
        ProofLabel lbl = tally_label(t, q, r);
        if (rt.partials.size() < t.sharing.threshold) {
          ok = false;
          detail = "fewer partial decryptions than the threshold at question " +
                   std::to_string(q) + " response " + std::to_string(r);
          break;
        }
        std::set<uint32_t> seen;
        for (const PartialDecryption& p : rt.partials) {
          if (!seen.insert(p.index).second ||
              !verify_partial(t.params, t.sharing, rt.c1_agg, p, lbl)) {
            ok = false;
            detail = "partial decryption of trustee " + std::to_string(p.index) +
                     " fails at question " + std::to_string(q) + " response " +
                     std::to_string(r);
            break;
          }
        }
        if (!ok) break;
        std::vector<uint32_t> indices;
        std::vector<G1Elem> bases;
        for (const PartialDecryption& p : rt.partials) {
          indices.push_back(p.index);
          bases.push_back(p.m_i);
        }
        std::vector<Scalar> lambda = lagrange_at_zero(t.params, indices);
        G1Elem c1x = t.params.multiexp_g1(bases, lambda);
        if (!(t.params.div_g1(rt.c2_agg, c1x) == rt.opening.a)) {
          ok = false;
          detail = "published opening is not c2/c1^x at question " +
                   std::to_string(q) + " response " + std::to_string(r);
        }
      }
    }
    c.add("partials", "threshold partial decryptions verify", ok, detail);
  };

  // (c) every posted 0/1 proof, superseded entries included
  auto run_board = [&](Checker& c) {
    bool ok = true;
    std::string detail;
    std::set<std::string> roll(t.spec.voters.begin(), t.spec.voters.end());
    struct Cell {
      const BoardEntry* e;
      uint32_t q, r;
    };
    std::vector<Cell> cells;
    for (const BoardEntry& e : t.board) {
      if (!roll.count(e.voter)) {
        ok = false;
        detail = "board entry " + std::to_string(e.seq) + " has off-roll voter '" +
                 e.voter + "'";
        break;
      }
      if (e.cells.size() != t.spec.questions.size()) {
        ok = false;
        detail = "board entry " + std::to_string(e.seq) + " has the wrong shape";
        break;
      }
      for (uint32_t q = 0; q < e.cells.size(); q++) {
        if (e.cells[q].size() != t.spec.questions[q].responses) {
          ok = false;
          detail = "board entry " + std::to_string(e.seq) + " has the wrong shape";
          break;
        }
        for (uint32_t r = 0; r < e.cells[q].size(); r++)
          cells.push_back(Cell{&e, q, r});
      }
      if (!ok) break;
    }
    if (ok) {
      std::atomic<bool> all{true};
      std::mutex mu;
      std::string first_failure;
      auto check_cell = [&](size_t i) {
        if (!all.load(std::memory_order_relaxed)) return;
        const Cell& cl = cells[i];
        ProofLabel lbl = cell_label(t, "ballot/binary", cl.e->voter, cl.q, cl.r);
        if (!verify_binary(t.params, cl.e->cells[cl.q][cl.r].d,
                           cl.e->cells[cl.q][cl.r].validity, lbl)) {
          std::lock_guard lk(mu);
          if (all.exchange(false)) {
            first_failure = "0/1 proof fails for voter '" + cl.e->voter +
                            "' question " + std::to_string(cl.q) + " response " +
                            std::to_string(cl.r) + " (entry " +
                            std::to_string(cl.e->seq) + ")";
          }
        }
      };
      parallel_for(cells.size(), opts.threads, check_cell);
      if (!all.load()) {
        ok = false;
        detail = first_failure;
      }
    }
    c.add("board", "all posted 0/1 validity proofs verify", ok, detail);
  };

  if (opts.fail_fast) {
    // cheap global checks first, the per-entry proof scan last
    if (!ck.stop) run_products(ck);
    else ck.skipped("aggregation", "commitment products match the tally record");
    if (!ck.stop) run_results(ck);
    else ck.skipped("result", "published results open the aggregated commitments");
    if (!ck.stop) run_partials(ck);
    else ck.skipped("partials", "threshold partial decryptions verify");
    if (!ck.stop) run_board(ck);
    else ck.skipped("board", "all posted 0/1 validity proofs verify");
    // restore canonical presentation order: params, key, board, aggregation,
    // result, partials
    auto& cks = ck.report.checks;
    std::stable_sort(cks.begin(), cks.end(), [](const CheckResult& a,
                                                const CheckResult& b) {
      auto rank = [](const std::string& id) {
        if (id == "params") return 0;
        if (id == "key") return 1;
        if (id == "board") return 2;
        if (id == "aggregation") return 3;
        if (id == "result") return 4;
        return 5;
      };
      return rank(a.id) < rank(b.id);
    });
  } else {
    run_board(ck);
    run_products(ck);
    run_results(ck);
    run_partials(ck);
  }
  return ck.report;
}

}  // namespace ppat
