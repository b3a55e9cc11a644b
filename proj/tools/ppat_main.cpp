// Command-line surface for the PPATS election pipeline. Single binary,
// all state in files; see README for the full workflow.
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "ppat/election.hpp"
#include "ppat/errors.hpp"
#include "ppat/io.hpp"

namespace fs = std::filesystem;
using namespace ppat;

namespace {

// Seeded randomness is for reproducible tests only; hence the flag name.
std::unique_ptr<RandomSource> make_rng(const std::string& insecure_seed,
                                       const std::string& context) {
  if (insecure_seed.empty()) return std::make_unique<SecureRandom>();
  Drbg root{std::string_view(insecure_seed)};
  return std::make_unique<Drbg>(root.fork(context));
}

Backend parse_backend(const std::string& name) {
  if (name == "toy") return Backend::toy;
  if (name == "real_curve" || name == "real") return Backend::real_curve;
  throw Error("unknown backend '" + name + "' (expected real_curve or toy)");
}

// "0:1,1:0,2:3" -> selected response per question; repeated q allowed for
// at-most-k questions.
std::vector<std::vector<uint8_t>> parse_selection(const ElectionSpec& spec,
                                                  const std::string& sel) {
  std::vector<std::vector<uint8_t>> m(spec.questions.size());
  for (size_t q = 0; q < m.size(); q++) m[q].assign(spec.questions[q].responses, 0);
  size_t pos = 0;
  while (pos < sel.size()) {
    size_t comma = sel.find(',', pos);
    std::string tok = sel.substr(pos, comma == std::string::npos ? std::string::npos
                                                                 : comma - pos);
    pos = comma == std::string::npos ? sel.size() : comma + 1;
    size_t colon = tok.find(':');
    if (colon == std::string::npos)
      throw Error("bad selection token '" + tok + "' (expected q:r)");
    unsigned long q = std::stoul(tok.substr(0, colon));
    unsigned long r = std::stoul(tok.substr(colon + 1));
    if (q >= m.size() || r >= m[q].size())
      throw Error("selection '" + tok + "' is out of range for this election");
    m[q][r] = 1;
  }
  return m;
}

double median_ms(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

template <typename F>
double time_op_ms(int samples, F&& f) {
  std::vector<double> times;
  times.reserve((size_t)samples);
  for (int i = 0; i < samples; i++) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return median_ms(times);
}

int cmd_bench(const std::string& params_path, int samples) {
  GroupParams params = io::load_params(params_path);
  bool toy = params.backend() == Backend::toy;
  if (toy)
    std::cout << "note: toy backend timings are not representative of the curve\n";

  SecureRandom rng;
  Scalar k = params.sc_random(rng);
  auto [pk, sk] = keygen(params, rng);
  ProofLabel label = make_label(params, pk.g2, "bench");

  params.set_precomputation(false);
  double g1_naive = time_op_ms(samples, [&] { params.exp_g1(params.g1(), k); });
  double g2_naive = time_op_ms(samples, [&] { params.exp_g2(params.h1(), k); });
  params.set_precomputation(true);
  double g1_pre = time_op_ms(samples, [&] { params.exp_g1(params.g1(), k); });
  double g2_pre = time_op_ms(samples, [&] { params.exp_g2(params.h1(), k); });
  double pair_ms = time_op_ms(std::max(5, samples / 4),
                              [&] { params.pair(params.g1(), params.h1()); });

  double cell_ms = time_op_ms(samples, [&] {
    EncryptionWithCoins enc = encrypt_keep_coins(params, pk, params.sc(1), label, rng);
    prove_binary(params, enc.ct.d, enc.r, 1, label, rng);
  });

  params.reset_counters();
  Drbg count_rng("ppat/bench/counter");  // deterministic coins for the count
  EncryptionWithCoins enc = encrypt_keep_coins(params, pk, params.sc(1), label, count_rng);
  prove_binary(params, enc.ct.d, enc.r, 1, label, count_rng);
  OpCounts c = params.counters();

  std::cout << "exp_g1_naive_ms=" << g1_naive << "\n";
  std::cout << "exp_g1_precomputed_ms=" << g1_pre << "\n";
  std::cout << "exp_g2_naive_ms=" << g2_naive << "\n";
  std::cout << "exp_g2_precomputed_ms=" << g2_pre << "\n";
  std::cout << "pairing_ms=" << pair_ms << "\n";
  std::cout << "precompute_speedup_g1=" << (g1_pre > 0 ? g1_naive / g1_pre : 0) << "\n";
  std::cout << "precompute_speedup_g2=" << (g2_pre > 0 ? g2_naive / g2_pre : 0) << "\n";
  std::cout << "response_ms=" << cell_ms << "\n";
  std::cout << "responses_per_sec=" << (cell_ms > 0 ? 1000.0 / cell_ms : 0) << "\n";
  std::cout << "encrypt_plus_proof_exponentiations: fixed_base g1=" << c.g1_fixed
            << " g2=" << c.g2_fixed << ", variable_base g1=" << c.g1_var
            << " g2=" << c.g2_var << "\n";
  std::cout << "counting convention: one count per base power with exponent outside"
               " {0,1}; multi-exponentiations count each base; fixed-base means the"
               " base is a registered public generator or key\n";
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"PPATS commitment-consistent encryption election toolkit"};
  app.require_subcommand(1);

  std::string insecure_seed;
  app.add_option("--insecure-seed", insecure_seed,
                 "deterministic RNG seed; test use only, never for real elections");
  unsigned threads = 1;
  app.add_option("--threads", threads, "worker threads for verification");

  // setup
  auto* setup_cmd = app.add_subcommand("setup", "create group parameters");
  std::string backend_name = "real_curve", seed, out_path;
  setup_cmd->add_option("--backend", backend_name, "real_curve or toy");
  setup_cmd->add_option("--seed", seed, "public derivation seed (toy: T<q>)");
  setup_cmd->add_option("-o,--out", out_path, "output params file")->required();

  // keygen
  auto* keygen_cmd = app.add_subcommand("keygen", "threshold key generation (dealer)");
  std::string params_path, out_dir;
  uint32_t t_thresh = 0, n_trustees = 0;
  keygen_cmd->add_option("--params", params_path)->required();
  keygen_cmd->add_option("--threshold", t_thresh)->required();
  keygen_cmd->add_option("--trustees", n_trustees)->required();
  keygen_cmd->add_option("--out-dir", out_dir)->required();

  // board
  auto* board_cmd = app.add_subcommand("board", "bulletin board operations");
  board_cmd->require_subcommand(1);
  auto* board_init = board_cmd->add_subcommand("init", "create an empty transcript");
  std::string bi_params, bi_key, bi_spec, bi_out;
  board_init->add_option("--params", bi_params)->required();
  board_init->add_option("--key", bi_key)->required();
  board_init->add_option("--election", bi_spec)->required();
  board_init->add_option("-o,--out", bi_out)->required();
  auto* board_add = board_cmd->add_subcommand("add", "validate ballots and post them");
  std::string ba_transcript, ba_store;
  std::vector<std::string> ba_ballots;
  board_add->add_option("--transcript", ba_transcript)->required();
  board_add->add_option("--store", ba_store)->required();
  board_add->add_option("ballots", ba_ballots, "ballot files")->required();
  auto* board_show = board_cmd->add_subcommand("show", "print a board summary");
  std::string bs_transcript;
  board_show->add_option("--transcript", bs_transcript)->required();

  // cast
  auto* cast_cmd = app.add_subcommand("cast", "build a ballot");
  std::string c_transcript, c_voter, c_select, c_out;
  cast_cmd->add_option("--transcript", c_transcript)->required();
  cast_cmd->add_option("--voter", c_voter)->required();
  cast_cmd->add_option("--select", c_select, "choices, e.g. 0:1,1:0")->required();
  cast_cmd->add_option("-o,--out", c_out)->required();

  // tally
  auto* tally_cmd = app.add_subcommand("tally", "threshold tally");
  std::string t_transcript, t_store;
  std::vector<std::string> t_shares;
  uint64_t t_bound = 0;
  tally_cmd->add_option("--transcript", t_transcript)->required();
  tally_cmd->add_option("--store", t_store)->required();
  tally_cmd->add_option("--share", t_shares, "key share files (>= threshold)")
      ->required();
  tally_cmd->add_option("--dl-bound", t_bound,
                        "override the discrete-log search bound");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "verify a public transcript");
  std::string v_transcript, v_report;
  bool v_fail_fast = false;
  verify_cmd->add_option("--transcript", v_transcript)->required();
  verify_cmd->add_option("--report", v_report, "write the JSON report here");
  verify_cmd->add_flag("--fail-fast", v_fail_fast, "stop at the first failing check");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "micro-benchmarks and counts");
  std::string be_params;
  int be_samples = 30;
  bench_cmd->add_option("--params", be_params)->required();
  bench_cmd->add_option("--samples", be_samples);

  CLI11_PARSE(app, argc, argv);

  if (setup_cmd->parsed()) {
    GroupParams params = GroupParams::setup(parse_backend(backend_name), seed);
    io::store_params(params, out_path);
    std::cout << "params written to " << out_path << "\n";
    return 0;
  }

  if (keygen_cmd->parsed()) {
    GroupParams params = io::load_params(params_path);
    auto rng = make_rng(insecure_seed, "keygen");
    auto [pk, sk] = keygen(params, *rng);
    auto [shares, sharing] = deal(params, sk.x(), t_thresh, n_trustees, *rng);
    sk.zeroize();  // the dealer forgets x; only shares survive
    fs::create_directories(out_dir);
    io::store_public_key(params, pk, sharing, fs::path(out_dir) / "public_key.json");
    for (KeyShare& s : shares) {
      fs::path sp = fs::path(out_dir) / ("share_" + std::to_string(s.index) + ".json");
      io::store_share(params, s, sp);
      fs::permissions(sp, fs::perms::owner_read | fs::perms::owner_write);
      s.zeroize();
    }
    std::cout << "public key and " << n_trustees << " shares written to " << out_dir
              << "\n";
    return 0;
  }

  if (board_init->parsed()) {
    GroupParams params = io::load_params(bi_params);
    auto [pk, sharing] = io::load_public_key(params, bi_key);
    ElectionSpec spec = io::load_election_spec(bi_spec);
    Transcript t = make_transcript(params, spec, pk, sharing);
    io::store_transcript(t, bi_out);
    std::cout << "transcript initialized at " << bi_out << "\n";
    return 0;
  }

  if (cast_cmd->parsed()) {
    Transcript t = io::load_transcript(c_transcript, /*board=*/false);
    auto rng = make_rng(insecure_seed, "cast/" + c_voter);
    Ballot b = build_ballot(t, c_voter, parse_selection(t.spec, c_select), *rng);
    io::store_ballot(t.params, t.spec.election_id, b, c_out);
    std::cout << "ballot for '" << c_voter << "' written to " << c_out << "\n";
    return 0;
  }

  if (board_add->parsed()) {
    Transcript t = io::load_transcript(ba_transcript);
    CiphertextStore store;
    if (fs::exists(ba_store)) store = io::load_ciphertext_store(t.params, ba_store);
    int posted = 0;
    for (const std::string& bp : ba_ballots) {
      Ballot b = io::load_ballot(t.params, t.spec.election_id, bp);
      try {
        const BoardEntry& e = validate_and_post(t, store, b);
        std::cout << "posted entry " << e.seq << " for voter '" << b.voter << "'\n";
        posted++;
      } catch (const BallotRejected& e) {
        std::cout << "rejected " << bp << ": " << e.what() << "\n";
      }
    }
    io::store_transcript(t, ba_transcript);
    io::store_ciphertext_store(t.params, store, ba_store);
    std::cout << posted << "/" << ba_ballots.size() << " ballots posted\n";
    return posted == (int)ba_ballots.size() ? 0 : 1;
  }

  if (board_show->parsed()) {
    Transcript t = io::load_transcript(bs_transcript);
    std::vector<const BoardEntry*> eff = effective_board(t);
    std::cout << "election '" << t.spec.election_id << "': " << t.spec.questions.size()
              << " questions, " << t.spec.voters.size() << " voters on the roll\n";
    std::cout << t.board.size() << " postings, " << eff.size() << " effective\n";
    for (const BoardEntry& e : t.board) {
      bool effective =
          std::find(eff.begin(), eff.end(), &e) != eff.end();
      std::cout << "  entry " << e.seq << " voter '" << e.voter << "'"
                << (effective ? "" : " (superseded)") << "\n";
    }
    if (t.tally) {
      std::cout << "tally over " << t.tally->counted_ballots << " ballots:\n";
      for (size_t q = 0; q < t.tally->responses.size(); q++) {
        std::cout << "  " << t.spec.questions[q].id << ":";
        for (const ResponseTally& rt : t.tally->responses[q])
          std::cout << " " << rt.result;
        std::cout << "\n";
      }
    } else {
      std::cout << "no tally yet\n";
    }
    return 0;
  }

  if (tally_cmd->parsed()) {
    Transcript t = io::load_transcript(t_transcript);
    CiphertextStore store;
    if (fs::exists(t_store)) {
      store = io::load_ciphertext_store(t.params, t_store);
    } else if (!t.board.empty()) {
      throw Error("ciphertext store '" + t_store + "' not found but ballots were posted");
    } else {
      store.election_id = t.spec.election_id;  // empty election
    }
    std::vector<KeyShare> shares;
    for (const std::string& sp : t_shares) shares.push_back(io::load_share(t.params, sp));
    auto rng = make_rng(insecure_seed, "tally");
    TallyOptions opts;
    if (t_bound > 0) opts.dl_bound = t_bound;
    tally(t, store, std::move(shares), *rng, opts);
    io::store_transcript(t, t_transcript);
    std::cout << "tally appended to " << t_transcript << "\n";
    for (size_t q = 0; q < t.tally->responses.size(); q++) {
      std::cout << t.spec.questions[q].id << ":";
      for (const ResponseTally& rt : t.tally->responses[q]) std::cout << " " << rt.result;
      std::cout << "\n";
    }
    return 0;
  }

  if (verify_cmd->parsed()) {
    Transcript t = io::load_transcript(v_transcript);
    VerificationReport report =
        verify_transcript(t, VerifyOptions{v_fail_fast, threads});
    for (const CheckResult& c : report.checks) {
      std::cout << (c.pass ? "PASS" : (c.ran ? "FAIL" : "SKIP")) << " " << c.id << " — "
                << c.description;
      if (!c.detail.empty()) std::cout << " [" << c.detail << "]";
      std::cout << "\n";
    }
    if (!v_report.empty()) io::atomic_write(v_report, io::report_to_string(report));
    std::cout << (report.all_pass() ? "transcript OK" : "transcript INVALID") << "\n";
    return report.all_pass() ? 0 : 1;
  }

  if (bench_cmd->parsed()) return cmd_bench(be_params, be_samples);

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
