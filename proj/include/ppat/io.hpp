#pragma once

#include <filesystem>
#include <string>

#include "ppat/election.hpp"

// JSON envelope files: UTF-8, a "format"/"version" pair in every envelope,
// canonical (sorted) key order and lowercase hex for all element and scalar
// encodings. Fiat-Shamir hashing never touches the JSON text; it operates
// on the canonical binary encodings only. Writes are atomic
// (write-temp-then-rename). Loads reject malformed or off-subgroup
// encodings with an error naming the offending location.
namespace ppat::io {

void atomic_write(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// ---- group parameters ----------------------------------------------------
std::string params_to_string(const GroupParams& params);
GroupParams params_from_string(const std::string& text);
void store_params(const GroupParams& params, const std::filesystem::path& path);
GroupParams load_params(const std::filesystem::path& path);

// ---- key material ----------------------------------------------------------
void store_public_key(const GroupParams& params, const PublicKey& pk,
                      const SharingTranscript& sharing,
                      const std::filesystem::path& path);
std::pair<PublicKey, SharingTranscript> load_public_key(const GroupParams& params,
                                                        const std::filesystem::path& path);
void store_share(const GroupParams& params, const KeyShare& share,
                 const std::filesystem::path& path);
KeyShare load_share(const GroupParams& params, const std::filesystem::path& path);

// ---- election spec (user-authored) ----------------------------------------
ElectionSpec election_spec_from_string(const std::string& text);
ElectionSpec load_election_spec(const std::filesystem::path& path);

// ---- ballots ---------------------------------------------------------------
std::string ballot_to_string(const GroupParams& params, const std::string& election_id,
                             const Ballot& ballot);
Ballot ballot_from_string(const GroupParams& params, const std::string& election_id,
                          const std::string& text);
void store_ballot(const GroupParams& params, const std::string& election_id,
                  const Ballot& ballot, const std::filesystem::path& path);
Ballot load_ballot(const GroupParams& params, const std::string& election_id,
                   const std::filesystem::path& path);

// ---- transcript -------------------------------------------------------------
std::string transcript_to_string(const Transcript& t);
// With board=false only the parameter/election/key sections are decoded,
// for tools that just need the election context.
Transcript transcript_from_string(const std::string& text, bool board = true);
void store_transcript(const Transcript& t, const std::filesystem::path& path);
Transcript load_transcript(const std::filesystem::path& path, bool board = true);

// ---- trustees' private ciphertext store -------------------------------------
std::string ciphertext_store_to_string(const GroupParams& params,
                                       const CiphertextStore& store);
CiphertextStore ciphertext_store_from_string(const GroupParams& params,
                                             const std::string& text);
void store_ciphertext_store(const GroupParams& params, const CiphertextStore& store,
                            const std::filesystem::path& path);
CiphertextStore load_ciphertext_store(const GroupParams& params,
                                      const std::filesystem::path& path);

// ---- verification report -----------------------------------------------------
std::string report_to_string(const VerificationReport& report);

}  // namespace ppat::io
