#include "ppat/io.hpp"

#include <fstream>

#include <json.hpp>  // vendored nlohmann/json

#include "ppat/errors.hpp"

namespace ppat::io {

using json = nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

const json& need(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

std::string need_str(const json& j, const char* key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

uint64_t need_u64(const json& j, const char* key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number_unsigned())
    throw ParseError(where + ": field '" + key + "' must be an unsigned integer");
  return v.get<uint64_t>();
}

void check_envelope(const json& j, const char* format, const std::string& where) {
  if (need_str(j, "format", where) != format)
    throw ParseError(where + ": expected format '" + format + "'");
  if (need_u64(j, "version", where) != 1)
    throw ParseError(where + ": unsupported version");
}

Bytes hex_field(const json& j, const char* key, const std::string& where) {
  try {
    return hex_decode(need_str(j, key, where));
  } catch (const EncodingError& e) {
    throw ParseError(where + "." + key + ": " + e.what());
  }
}

template <typename Fn>
auto decode_at(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const EncodingError& e) {
    throw ParseError(where + ": " + e.what());
  }
}

Scalar dec_scalar_at(const GroupParams& p, const json& j, const char* key,
                     const std::string& where) {
  Bytes b = hex_field(j, key, where);
  return decode_at(where + "." + key, [&] { return p.dec_scalar(b); });
}
G1Elem dec_g1_at(const GroupParams& p, const json& j, const char* key,
                 const std::string& where) {
  Bytes b = hex_field(j, key, where);
  return decode_at(where + "." + key, [&] { return p.dec_g1(b); });
}
G2Elem dec_g2_at(const GroupParams& p, const json& j, const char* key,
                 const std::string& where) {
  Bytes b = hex_field(j, key, where);
  return decode_at(where + "." + key, [&] { return p.dec_g2(b); });
}

std::string hx(const Bytes& b) { return hex_encode(b); }

std::string backend_name(Backend b) {
  return b == Backend::toy ? "toy" : "real_curve";
}
Backend backend_from_name(const std::string& s, const std::string& where) {
  if (s == "toy") return Backend::toy;
  if (s == "real_curve") return Backend::real_curve;
  throw ParseError(where + ": unknown backend '" + s + "'");
}

json params_json(const GroupParams& p) {
  json j;
  j["backend"] = backend_name(p.backend());
  j["seed"] = p.seed();
  j["q"] = p.order().to_hex();
  j["g1"] = hx(p.enc_g1(p.g1()));
  j["h1"] = hx(p.enc_g2(p.h1()));
  j["h2"] = hx(p.enc_g2(p.h2()));
  return j;
}

// Re-derives the group from (backend, seed); the declared encodings are
// returned for the verifier's derivation check.
std::pair<GroupParams, DeclaredParams> params_from_json(const json& j,
                                                        const std::string& where) {
  Backend b = backend_from_name(need_str(j, "backend", where), where);
  std::string seed = need_str(j, "seed", where);
  GroupParams p = [&] {
    try {
      return GroupParams::setup(b, seed);
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    }
  }();
  DeclaredParams d;
  d.q_hex = need_str(j, "q", where);
  d.g1_hex = need_str(j, "g1", where);
  d.h1_hex = need_str(j, "h1", where);
  d.h2_hex = need_str(j, "h2", where);
  return {std::move(p), std::move(d)};
}

json sharing_json(const GroupParams& p, const SharingTranscript& s) {
  json j;
  j["threshold"] = s.threshold;
  j["trustees"] = s.trustees;
  json cs = json::array();
  for (const G1Elem& a : s.coeff_commitments) cs.push_back(hx(p.enc_g1(a)));
  j["commitments"] = cs;
  return j;
}

SharingTranscript sharing_from_json(const GroupParams& p, const json& j,
                                    const std::string& where) {
  SharingTranscript s;
  s.threshold = (uint32_t)need_u64(j, "threshold", where);
  s.trustees = (uint32_t)need_u64(j, "trustees", where);
  const json& cs = need(j, "commitments", where);
  if (!cs.is_array()) throw ParseError(where + ".commitments must be an array");
  size_t i = 0;
  for (const json& c : cs) {
    std::string w = where + ".commitments[" + std::to_string(i++) + "]";
    if (!c.is_string()) throw ParseError(w + " must be a hex string");
    Bytes b = decode_at(w, [&] { return hex_decode(c.get<std::string>()); });
    s.coeff_commitments.push_back(decode_at(w, [&] { return p.dec_g1(b); }));
  }
  return s;
}

json consistency_json(const GroupParams& p, const ConsistencyProof& pr) {
  return json{{"e", hx(p.enc_scalar(pr.e))},
              {"f_r", hx(p.enc_scalar(pr.f_r))},
              {"f_s", hx(p.enc_scalar(pr.f_s))},
              {"f_v", hx(p.enc_scalar(pr.f_v))}};
}
ConsistencyProof consistency_from_json(const GroupParams& p, const json& j,
                                       const std::string& where) {
  return ConsistencyProof{dec_scalar_at(p, j, "e", where),
                          dec_scalar_at(p, j, "f_r", where),
                          dec_scalar_at(p, j, "f_s", where),
                          dec_scalar_at(p, j, "f_v", where)};
}

json binary_json(const GroupParams& p, const BinaryProof& pr) {
  return json{{"e0", hx(p.enc_scalar(pr.e0))},
              {"e1", hx(p.enc_scalar(pr.e1))},
              {"f0", hx(p.enc_scalar(pr.f0))},
              {"f1", hx(p.enc_scalar(pr.f1))}};
}
BinaryProof binary_from_json(const GroupParams& p, const json& j,
                             const std::string& where) {
  return BinaryProof{dec_scalar_at(p, j, "e0", where), dec_scalar_at(p, j, "e1", where),
                     dec_scalar_at(p, j, "f0", where), dec_scalar_at(p, j, "f1", where)};
}

json ciphertext_json(const GroupParams& p, const Ciphertext& ct) {
  json j;
  j["c1"] = hx(p.enc_g1(ct.c1));
  j["c2"] = hx(p.enc_g1(ct.c2));
  j["d"] = hx(p.enc_g2(ct.d.d));
  if (ct.sigma_cc) j["sigma"] = consistency_json(p, *ct.sigma_cc);
  return j;
}
Ciphertext ciphertext_from_json(const GroupParams& p, const json& j,
                                const std::string& where, bool need_sigma) {
  Ciphertext ct;
  ct.c1 = dec_g1_at(p, j, "c1", where);
  ct.c2 = dec_g1_at(p, j, "c2", where);
  ct.d = Commitment{dec_g2_at(p, j, "d", where)};
  if (j.contains("sigma"))
    ct.sigma_cc = consistency_from_json(p, j["sigma"], where + ".sigma");
  else if (need_sigma)
    throw ParseError(where + ": missing consistency proof");
  return ct;
}

json question_json(const Question& q) {
  json j;
  j["id"] = q.id;
  j["responses"] = q.responses;
  j["rule"] = q.exactly_one ? "exactly_one" : "at_most_k";
  if (!q.exactly_one) j["max_selections"] = q.max_selections;
  return j;
}
Question question_from_json(const json& j, const std::string& where) {
  Question q;
  q.id = need_str(j, "id", where);
  q.responses = (uint32_t)need_u64(j, "responses", where);
  std::string rule = need_str(j, "rule", where);
  if (rule == "exactly_one") {
    q.exactly_one = true;
    q.max_selections = 1;
  } else if (rule == "at_most_k") {
    q.exactly_one = false;
    q.max_selections = (uint32_t)need_u64(j, "max_selections", where);
  } else {
    throw ParseError(where + ": unknown selection rule '" + rule + "'");
  }
  return q;
}

json spec_json(const ElectionSpec& s) {
  json j;
  j["id"] = s.election_id;
  json qs = json::array();
  for (const Question& q : s.questions) qs.push_back(question_json(q));
  j["questions"] = qs;
  j["voters"] = s.voters;
  return j;
}
ElectionSpec spec_from_json(const json& j, const std::string& where) {
  ElectionSpec s;
  s.election_id = need_str(j, "id", where);
  const json& qs = need(j, "questions", where);
  if (!qs.is_array()) throw ParseError(where + ".questions must be an array");
  size_t i = 0;
  for (const json& q : qs)
    s.questions.push_back(question_from_json(q, where + ".questions[" + std::to_string(i++) + "]"));
  const json& vs = need(j, "voters", where);
  if (!vs.is_array()) throw ParseError(where + ".voters must be an array");
  for (const json& v : vs) {
    if (!v.is_string()) throw ParseError(where + ".voters must contain strings");
    s.voters.push_back(v.get<std::string>());
  }
  return s;
}

json dump_cells(const GroupParams& p,
                const std::vector<std::vector<BallotCell>>& cells) {
  json qs = json::array();
  for (const auto& row : cells) {
    json rs = json::array();
    for (const BallotCell& c : row) {
      json cj = ciphertext_json(p, c.ct);
      cj["validity"] = binary_json(p, c.validity);
      rs.push_back(cj);
    }
    qs.push_back(rs);
  }
  return qs;
}

}  // namespace

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), (std::streamsize)content.size());
    if (!out) throw Error("short write to '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

std::string params_to_string(const GroupParams& params) {
  json j;
  j["format"] = "ppat/params";
  j["version"] = 1;
  j["params"] = params_json(params);
  return j.dump(1) + "\n";
}

GroupParams params_from_string(const std::string& text) {
  json j = parse(text);
  check_envelope(j, "ppat/params", "params file");
  auto [p, declared] = params_from_json(need(j, "params", "params file"), "params");
  // a standalone params file must be self-consistent
  if (declared.q_hex != p.order().to_hex() ||
      declared.g1_hex != hx(p.enc_g1(p.g1())) ||
      declared.h1_hex != hx(p.enc_g2(p.h1())) ||
      declared.h2_hex != hx(p.enc_g2(p.h2())))
    throw ParseError("params: stored values disagree with their seeded derivation");
  return p;
}

void store_params(const GroupParams& params, const std::filesystem::path& path) {
  atomic_write(path, params_to_string(params));
}
GroupParams load_params(const std::filesystem::path& path) {
  return params_from_string(read_file(path));
}

void store_public_key(const GroupParams& params, const PublicKey& pk,
                      const SharingTranscript& sharing,
                      const std::filesystem::path& path) {
  json j;
  j["format"] = "ppat/public-key";
  j["version"] = 1;
  j["params_digest"] = hx(params.digest());
  j["public_key"] = hx(params.enc_g1(pk.g2));
  j["sharing"] = sharing_json(params, sharing);
  atomic_write(path, j.dump(1) + "\n");
}

std::pair<PublicKey, SharingTranscript> load_public_key(
    const GroupParams& params, const std::filesystem::path& path) {
  json j = parse(read_file(path));
  check_envelope(j, "ppat/public-key", "public key file");
  if (hex_field(j, "params_digest", "public key file") != params.digest())
    throw ParseError("public key file belongs to different parameters");
  PublicKey pk{dec_g1_at(params, j, "public_key", "public key file")};
  SharingTranscript s =
      sharing_from_json(params, need(j, "sharing", "public key file"), "sharing");
  params.register_fixed_base(pk.g2);
  return {pk, s};
}

void store_share(const GroupParams& params, const KeyShare& share,
                 const std::filesystem::path& path) {
  json j;
  j["format"] = "ppat/key-share";
  j["version"] = 1;
  j["params_digest"] = hx(params.digest());
  j["index"] = share.index;
  j["share"] = hx(params.enc_scalar(share.s_i));
  j["pk_i"] = hx(params.enc_g1(share.pk_i));
  atomic_write(path, j.dump(1) + "\n");
}

KeyShare load_share(const GroupParams& params, const std::filesystem::path& path) {
  json j = parse(read_file(path));
  check_envelope(j, "ppat/key-share", "key share file");
  if (hex_field(j, "params_digest", "key share file") != params.digest())
    throw ParseError("key share file belongs to different parameters");
  KeyShare s;
  s.index = (uint32_t)need_u64(j, "index", "key share file");
  s.s_i = dec_scalar_at(params, j, "share", "key share file");
  s.pk_i = dec_g1_at(params, j, "pk_i", "key share file");
  return s;
}

ElectionSpec election_spec_from_string(const std::string& text) {
  json j = parse(text);
  return spec_from_json(j, "election spec");
}
ElectionSpec load_election_spec(const std::filesystem::path& path) {
  return election_spec_from_string(read_file(path));
}

std::string ballot_to_string(const GroupParams& params, const std::string& election_id,
                             const Ballot& ballot) {
  json j;
  j["format"] = "ppat/ballot";
  j["version"] = 1;
  j["election"] = election_id;
  j["voter"] = ballot.voter;
  j["cells"] = dump_cells(params, ballot.cells);
  return j.dump(1) + "\n";
}

Ballot ballot_from_string(const GroupParams& params, const std::string& election_id,
                          const std::string& text) {
  json j = parse(text);
  check_envelope(j, "ppat/ballot", "ballot");
  if (need_str(j, "election", "ballot") != election_id)
    throw ParseError("ballot belongs to a different election");
  Ballot b;
  b.voter = need_str(j, "voter", "ballot");
  const json& cells = need(j, "cells", "ballot");
  if (!cells.is_array()) throw ParseError("ballot.cells must be an array");
  size_t qi = 0;
  for (const json& row : cells) {
    std::string wq = "ballot.cells[" + std::to_string(qi++) + "]";
    if (!row.is_array()) throw ParseError(wq + " must be an array");
    std::vector<BallotCell> out_row;
    size_t ri = 0;
    for (const json& c : row) {
      std::string w = wq + "[" + std::to_string(ri++) + "]";
      BallotCell cell{ciphertext_from_json(params, c, w, /*need_sigma=*/true),
                      binary_from_json(params, need(c, "validity", w), w + ".validity")};
      out_row.push_back(std::move(cell));
    }
    b.cells.push_back(std::move(out_row));
  }
  return b;
}

void store_ballot(const GroupParams& params, const std::string& election_id,
                  const Ballot& ballot, const std::filesystem::path& path) {
  atomic_write(path, ballot_to_string(params, election_id, ballot));
}
Ballot load_ballot(const GroupParams& params, const std::string& election_id,
                   const std::filesystem::path& path) {
  return ballot_from_string(params, election_id, read_file(path));
}

std::string transcript_to_string(const Transcript& t) {
  const GroupParams& p = t.params;
  json j;
  j["format"] = "ppat/transcript";
  j["version"] = 1;
  j["params"] = params_json(p);
  j["election"] = spec_json(t.spec);
  j["public_key"] = hx(p.enc_g1(t.pk.g2));
  j["sharing"] = sharing_json(p, t.sharing);
  json board = json::array();
  for (const BoardEntry& e : t.board) {
    json ej;
    ej["seq"] = e.seq;
    ej["voter"] = e.voter;
    json qs = json::array();
    for (const auto& row : e.cells) {
      json rs = json::array();
      for (const BoardCell& c : row)
        rs.push_back(json{{"d", hx(p.enc_g2(c.d.d))},
                          {"validity", binary_json(p, c.validity)}});
      qs.push_back(rs);
    }
    ej["cells"] = qs;
    board.push_back(ej);
  }
  j["board"] = board;
  if (t.tally) {
    json tj;
    tj["counted"] = t.tally->counted_ballots;
    json qs = json::array();
    for (const auto& row : t.tally->responses) {
      json rs = json::array();
      for (const ResponseTally& rt : row) {
        json rj;
        rj["c1"] = hx(p.enc_g1(rt.c1_agg));
        rj["c2"] = hx(p.enc_g1(rt.c2_agg));
        rj["d"] = hx(p.enc_g2(rt.d_agg.d));
        rj["result"] = rt.result;
        rj["opening"] = hx(p.enc_g1(rt.opening.a));
        json ps = json::array();
        for (const PartialDecryption& pd : rt.partials)
          ps.push_back(json{{"index", pd.index},
                            {"m", hx(p.enc_g1(pd.m_i))},
                            {"e", hx(p.enc_scalar(pd.dleq.e))},
                            {"f", hx(p.enc_scalar(pd.dleq.f))}});
        rj["partials"] = ps;
        rs.push_back(rj);
      }
      qs.push_back(rs);
    }
    tj["responses"] = qs;
    j["tally"] = tj;
  } else {
    j["tally"] = nullptr;
  }
  return j.dump(1) + "\n";
}

Transcript transcript_from_string(const std::string& text, bool board) {
  json j = parse(text);
  check_envelope(j, "ppat/transcript", "transcript");
  auto [p, declared] = params_from_json(need(j, "params", "transcript"), "params");
  Transcript t(p);
  t.declared = declared;
  t.spec = spec_from_json(need(j, "election", "transcript"), "election");
  t.pk = PublicKey{dec_g1_at(p, j, "public_key", "transcript")};
  p.register_fixed_base(t.pk.g2);
  t.sharing = sharing_from_json(p, need(j, "sharing", "transcript"), "sharing");
  if (!board) return t;

  const json& bj = need(j, "board", "transcript");
  if (!bj.is_array()) throw ParseError("transcript.board must be an array");
  size_t bi = 0;
  for (const json& ej : bj) {
    std::string wb = "board[" + std::to_string(bi++) + "]";
    BoardEntry e;
    e.seq = need_u64(ej, "seq", wb);
    e.voter = need_str(ej, "voter", wb);
    const json& qs = need(ej, "cells", wb);
    if (!qs.is_array()) throw ParseError(wb + ".cells must be an array");
    size_t qi = 0;
    for (const json& row : qs) {
      std::string wq = wb + ".cells[" + std::to_string(qi++) + "]";
      if (!row.is_array()) throw ParseError(wq + " must be an array");
      std::vector<BoardCell> out_row;
      size_t ri = 0;
      for (const json& c : row) {
        std::string w = wq + "[" + std::to_string(ri++) + "]";
        out_row.push_back(
            BoardCell{Commitment{dec_g2_at(p, c, "d", w)},
                      binary_from_json(p, need(c, "validity", w), w + ".validity")});
      }
      e.cells.push_back(std::move(out_row));
    }
    t.board.push_back(std::move(e));
  }

  const json& tj = need(j, "tally", "transcript");
  if (!tj.is_null()) {
    TallyRecord rec;
    rec.counted_ballots = need_u64(tj, "counted", "tally");
    const json& qs = need(tj, "responses", "tally");
    if (!qs.is_array()) throw ParseError("tally.responses must be an array");
    size_t qi = 0;
    for (const json& row : qs) {
      std::string wq = "tally.responses[" + std::to_string(qi++) + "]";
      if (!row.is_array()) throw ParseError(wq + " must be an array");
      std::vector<ResponseTally> out_row;
      size_t ri = 0;
      for (const json& c : row) {
        std::string w = wq + "[" + std::to_string(ri++) + "]";
        ResponseTally rt;
        rt.c1_agg = dec_g1_at(p, c, "c1", w);
        rt.c2_agg = dec_g1_at(p, c, "c2", w);
        rt.d_agg = Commitment{dec_g2_at(p, c, "d", w)};
        rt.result = need_u64(c, "result", w);
        rt.opening = Opening{dec_g1_at(p, c, "opening", w)};
        const json& ps = need(c, "partials", w);
        if (!ps.is_array()) throw ParseError(w + ".partials must be an array");
        size_t pi = 0;
        for (const json& pj : ps) {
          std::string wp = w + ".partials[" + std::to_string(pi++) + "]";
          PartialDecryption pd;
          pd.index = (uint32_t)need_u64(pj, "index", wp);
          pd.m_i = dec_g1_at(p, pj, "m", wp);
          pd.dleq = DleqProof{dec_scalar_at(p, pj, "e", wp),
                              dec_scalar_at(p, pj, "f", wp)};
          rt.partials.push_back(std::move(pd));
        }
        out_row.push_back(std::move(rt));
      }
      rec.responses.push_back(std::move(out_row));
    }
    t.tally = std::move(rec);
  }
  return t;
}

void store_transcript(const Transcript& t, const std::filesystem::path& path) {
  atomic_write(path, transcript_to_string(t));
}
Transcript load_transcript(const std::filesystem::path& path, bool board) {
  return transcript_from_string(read_file(path), board);
}

std::string ciphertext_store_to_string(const GroupParams& params,
                                       const CiphertextStore& store) {
  json j;
  j["format"] = "ppat/ciphertexts";
  j["version"] = 1;
  j["election"] = store.election_id;
  json ballots = json::object();
  for (const auto& [voter, cells] : store.ballots) {
    json qs = json::array();
    for (const auto& row : cells) {
      json rs = json::array();
      for (const Ciphertext& ct : row) rs.push_back(ciphertext_json(params, ct));
      qs.push_back(rs);
    }
    ballots[voter] = qs;
  }
  j["ballots"] = ballots;
  return j.dump(1) + "\n";
}

CiphertextStore ciphertext_store_from_string(const GroupParams& params,
                                             const std::string& text) {
  json j = parse(text);
  check_envelope(j, "ppat/ciphertexts", "ciphertext store");
  CiphertextStore store;
  store.election_id = need_str(j, "election", "ciphertext store");
  const json& ballots = need(j, "ballots", "ciphertext store");
  if (!ballots.is_object()) throw ParseError("ciphertext store: ballots must be an object");
  for (auto it = ballots.begin(); it != ballots.end(); ++it) {
    std::string wv = "ballots['" + it.key() + "']";
    const json& qs = it.value();
    if (!qs.is_array()) throw ParseError(wv + " must be an array");
    std::vector<std::vector<Ciphertext>> cells;
    size_t qi = 0;
    for (const json& row : qs) {
      std::string wq = wv + "[" + std::to_string(qi++) + "]";
      if (!row.is_array()) throw ParseError(wq + " must be an array");
      std::vector<Ciphertext> out_row;
      size_t ri = 0;
      for (const json& c : row)
        out_row.push_back(ciphertext_from_json(
            params, c, wq + "[" + std::to_string(ri++) + "]", /*need_sigma=*/true));
      cells.push_back(std::move(out_row));
    }
    store.ballots[it.key()] = std::move(cells);
  }
  return store;
}

void store_ciphertext_store(const GroupParams& params, const CiphertextStore& store,
                            const std::filesystem::path& path) {
  atomic_write(path, ciphertext_store_to_string(params, store));
}
CiphertextStore load_ciphertext_store(const GroupParams& params,
                                      const std::filesystem::path& path) {
  return ciphertext_store_from_string(params, read_file(path));
}

std::string report_to_string(const VerificationReport& report) {
  json j;
  j["all_pass"] = report.all_pass();
  json cs = json::array();
  for (const CheckResult& c : report.checks)
    cs.push_back(json{{"id", c.id},
                      {"description", c.description},
                      {"pass", c.pass},
                      {"ran", c.ran},
                      {"detail", c.detail}});
  j["checks"] = cs;
  return j.dump(1) + "\n";
}

}  // namespace ppat::io
