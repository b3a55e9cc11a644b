#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ppat/ppats.hpp"
#include "ppat/threshold.hpp"

// End-to-end homomorphic-tally pipeline with a perfectly private audit
// trail. The public transcript (bulletin board) carries only the election
// description, the key material, per-voter commitments with their 0/1
// validity proofs, and the tally record; ElGamal components and consistency
// proofs stay in the trustees' private ciphertext store.
namespace ppat {

struct Question {
  std::string id;
  uint32_t responses = 0;
  bool exactly_one = true;      // otherwise: at most max_selections
  uint32_t max_selections = 1;  // used when exactly_one is false
};

struct ElectionSpec {
  std::string election_id;
  std::vector<Question> questions;
  std::vector<std::string> voters;
};

struct BallotCell {
  Ciphertext ct;  // with sigma_cc
  BinaryProof validity;
};

struct Ballot {
  std::string voter;
  std::vector<std::vector<BallotCell>> cells;  // [question][response]
};

struct BoardCell {
  Commitment d;
  BinaryProof validity;
};

// One posting event. The board is append-only history; a voter's effective
// entry is their last posting, earlier ones stay visible as superseded.
struct BoardEntry {
  uint64_t seq = 0;
  std::string voter;
  std::vector<std::vector<BoardCell>> cells;
};

struct ResponseTally {
  G1Elem c1_agg, c2_agg;  // aggregate ElGamal part, published so the
                          // partial-decryption proofs are checkable
  Commitment d_agg;
  uint64_t result = 0;
  Opening opening;
  std::vector<PartialDecryption> partials;
};

struct TallyRecord {
  uint64_t counted_ballots = 0;
  std::vector<std::vector<ResponseTally>> responses;  // [question][response]
};

// Stored params section as it appeared on disk; verification re-derives
// the group from (backend, seed) and compares.
struct DeclaredParams {
  std::string q_hex, g1_hex, h1_hex, h2_hex;
};

struct Transcript {
  explicit Transcript(GroupParams p) : params(std::move(p)) {}

  GroupParams params;
  DeclaredParams declared;
  ElectionSpec spec;
  PublicKey pk;
  SharingTranscript sharing;
  std::vector<BoardEntry> board;
  std::optional<TallyRecord> tally;
};

// Trustee-side private store, never part of the transcript.
struct CiphertextStore {
  std::string election_id;
  std::map<std::string, std::vector<std::vector<Ciphertext>>> ballots;  // by voter
};

// ---- labels --------------------------------------------------------------

ProofLabel election_label(const Transcript& t);
ProofLabel cell_label(const Transcript& t, std::string_view purpose,
                      std::string_view voter, uint32_t question, uint32_t response);
ProofLabel tally_label(const Transcript& t, uint32_t question, uint32_t response);
ProofLabel row_label(const Transcript& t, std::string_view voter, uint32_t question);

// ---- pipeline ------------------------------------------------------------

Transcript make_transcript(GroupParams params, ElectionSpec spec, PublicKey pk,
                           SharingTranscript sharing);

// choices[q][r] in {0,1}; throws on a choice vector violating the
// question's selection rule.
Ballot build_ballot(const Transcript& t, const std::string& voter,
                    const std::vector<std::vector<uint8_t>>& choices,
                    RandomSource& rng);

// Verifies every sigma_cc and sigma_01, then posts the stripped entry to
// the board and retains the full ciphertexts in the private store. Throws
// BallotRejected (board and store untouched) on any failure. Re-posting by
// the same voter appends a new entry that supersedes the old one.
const BoardEntry& validate_and_post(Transcript& t, CiphertextStore& store,
                                    const Ballot& ballot);

// Effective entries (last per voter) in board order.
std::vector<const BoardEntry*> effective_board(const Transcript& t);

struct TallyOptions {
  std::optional<uint64_t> dl_bound;  // default: number of counted ballots
};

// Steps 6(a)-(d): re-verifies all proofs, runs the exactly-one row checks
// threshold-wise, aggregates response by response, threshold-decrypts and
// publishes result + opening, then wipes the supplied share material.
const TallyRecord& tally(Transcript& t, const CiphertextStore& store,
                         std::vector<KeyShare> shares, RandomSource& rng,
                         const TallyOptions& opts = {});

// ---- public verification --------------------------------------------------

struct CheckResult {
  std::string id;           // stable machine-readable identifier
  std::string description;  // human-readable
  bool pass = false;
  bool ran = true;  // false when fail-fast stopped earlier
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const {
    for (const CheckResult& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct VerifyOptions {
  bool fail_fast = false;
  unsigned threads = 1;
};

// Third-party verification from public data only: parameter re-derivation,
// key transcript, every posted validity proof, commitment products, result
// openings and partial-decryption proofs.
VerificationReport verify_transcript(const Transcript& t, const VerifyOptions& opts = {});

}  // namespace ppat
