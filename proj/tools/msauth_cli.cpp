// msauth: run protocol scenarios and attack demonstrations, and verify
// recorded transcripts.
//
// Exit status: 0 expectations met, 1 expectations violated, 2 usage or
// configuration error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "msauth/simulator.hpp"
#include "msauth/transcript.hpp"
#include "msauth/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kUsage = 2;

struct RunArgs {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string out;
  std::string id = "alice";
  std::string password = "pw123";
  std::string sid = "S_1";
  std::string insider_id = "mallory";
  std::string insider_password = "insider-pw";
  std::string dict;
  std::string dict_ids;
  std::string dict_passwords;
  std::size_t dict_size = 1000;
  std::string mutate_field;
  std::size_t mutate_byte = 0;
  std::string mutate_mask = "01";
  std::string drop;
  std::string tap_scope = "all";
  bool expect_secure = false;
};

msauth::ScenarioConfig build_config(const RunArgs& a) {
  using namespace msauth;
  ScenarioConfig cfg;
  auto kind = scenario_kind_from_string(a.scenario);
  if (!kind) throw ConfigError("unknown scenario `" + a.scenario + "`");
  cfg.kind = *kind;
  cfg.seed = a.seed;
  cfg.victim = {to_bytes(a.id), to_bytes(a.password)};
  cfg.insider = {to_bytes(a.insider_id), to_bytes(a.insider_password)};
  cfg.sid = to_bytes(a.sid);
  cfg.dictionary_size = a.dict_size;

  if (a.tap_scope == "all") {
    cfg.tap_scope = TapScope::AllChannels;
  } else if (a.tap_scope == "user-server") {
    cfg.tap_scope = TapScope::UserServerOnly;
  } else {
    throw ConfigError("--tap-scope must be `all` or `user-server`");
  }

  if (!a.dict.empty() && (!a.dict_ids.empty() || !a.dict_passwords.empty())) {
    throw ConfigError("--dict cannot be combined with --dict-ids/--dict-passwords");
  }
  if (!a.dict.empty()) cfg.dictionary_path = a.dict;
  if (!a.dict_ids.empty() || !a.dict_passwords.empty()) {
    if (a.dict_ids.empty() || a.dict_passwords.empty()) {
      throw ConfigError("--dict-ids and --dict-passwords go together");
    }
    try {
      cfg.dictionary = Dictionary::cross_product(load_word_list(a.dict_ids),
                                                 load_word_list(a.dict_passwords));
    } catch (const DictionaryFormatError& e) {
      throw ConfigError(e.what());
    }
  }

  if (!a.mutate_field.empty()) {
    MutationTarget target = parse_mutation_target(a.mutate_field);
    target.byte = a.mutate_byte;
    Bytes mask;
    try {
      mask = from_hex(a.mutate_mask);
    } catch (const std::invalid_argument&) {
    }
    if (mask.size() != 1 || mask[0] == 0) {
      throw ConfigError("--mutate-mask must be one non-zero hex octet");
    }
    target.mask = mask[0];
    cfg.mutation = target;
  } else if (cfg.kind == ScenarioKind::Mutation) {
    throw ConfigError("mutation scenario needs --mutate-field");
  }
  if (!a.drop.empty()) {
    auto k = message_kind_from_string(a.drop);
    if (!k) throw ConfigError("--drop must name one of M1..M4");
    cfg.drop = *k;
  }
  if (a.expect_secure && (cfg.kind == ScenarioKind::Honest || cfg.kind == ScenarioKind::Mutation)) {
    throw ConfigError("--expect-secure applies to attack scenarios only");
  }
  return cfg;
}

int cmd_run(const RunArgs& args) {
  msauth::Transcript t;
  try {
    t = msauth::run_scenario(build_config(args));
  } catch (const msauth::ConfigError& e) {
    std::cerr << "msauth run: " << e.what() << '\n';
    return kUsage;
  }

  if (!args.out.empty()) {
    std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
    if (!out) {
      std::cerr << "msauth run: cannot write " << args.out << '\n';
      return kUsage;
    }
    out << t.serialize();
  }

  const auto summary = msauth::summarize(t);
  for (const auto& line : summary.lines) std::cout << line << '\n';
  bool met = summary.expectation_met;
  if (args.expect_secure) {
    met = !met;
    std::cout << "expecting a secure protocol: " << (met ? "attack failed" : "attack succeeded")
              << '\n';
  }
  return met ? kOk : kViolated;
}

int cmd_verify(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "msauth verify: cannot read " << path << '\n';
    return kUsage;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  msauth::Transcript t;
  try {
    t = msauth::Transcript::parse(buf.str());
  } catch (const msauth::TranscriptFormatError& e) {
    std::cerr << "msauth verify: malformed transcript: " << e.what() << '\n';
    return kUsage;
  }

  const auto report = msauth::verify_transcript(t);
  for (const auto& p : report.problems) std::cout << "inconsistent: " << p << '\n';
  std::cout << report.sessions_checked << " session(s), " << report.relations_checked
            << " relations checked: " << (report.ok() ? "consistent" : "INCONSISTENT") << '\n';
  return report.ok() ? kOk : kViolated;
}

int cmd_make_dict(const std::string& out_path, std::size_t size, std::uint64_t seed,
                  const std::string& id, const std::string& password, std::size_t index) {
  using namespace msauth;
  if (size == 0 || index >= size) {
    std::cerr << "msauth make-dict: --index must be below --size\n";
    return kUsage;
  }
  BlockRng rng(seed, "make-dict");
  std::vector<Credential> entries;
  for (std::size_t i = 0; i < size; ++i) {
    if (i == index) {
      entries.push_back({to_bytes(id), to_bytes(password)});
      continue;
    }
    const Digest d = rng.next();
    entries.push_back({to_bytes("user-" + to_hex(d.view().first(3))),
                       to_bytes(to_hex(d.view().subspan(3, 5)))});
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "msauth make-dict: cannot write " << out_path << '\n';
    return kUsage;
  }
  Dictionary(std::move(entries)).write(out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-server dynamic-identity authentication: scenarios, attacks, transcripts"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write its transcript");
  run_cmd->add_option("scenario", run.scenario, "honest | replay | masquerade | guess | mutation")
      ->required();
  run_cmd->add_option("--seed", run.seed, "Scenario seed")->required();
  run_cmd->add_option("--out", run.out, "Transcript output path");
  run_cmd->add_option("--id", run.id, "User identity");
  run_cmd->add_option("--password", run.password, "User password");
  run_cmd->add_option("--sid", run.sid, "Service server identity");
  run_cmd->add_option("--insider-id", run.insider_id, "Malicious insider identity (masquerade)");
  run_cmd->add_option("--insider-password", run.insider_password, "Malicious insider password");
  run_cmd->add_option("--dict", run.dict, "Dictionary file, one id<TAB>password per line (guess)");
  run_cmd->add_option("--dict-ids", run.dict_ids, "Identity list, crossed with --dict-passwords");
  run_cmd->add_option("--dict-passwords", run.dict_passwords, "Password list");
  run_cmd->add_option("--dict-size", run.dict_size, "Synthetic dictionary size when no file given");
  run_cmd->add_option("--mutate-field", run.mutate_field, "Field to corrupt in transit, e.g. M2.m_i");
  run_cmd->add_option("--mutate-byte", run.mutate_byte, "Byte index within the field");
  run_cmd->add_option("--mutate-mask", run.mutate_mask, "XOR mask, one hex octet");
  run_cmd->add_option("--drop", run.drop, "Drop the first message of this kind (honest runs)");
  run_cmd->add_option("--tap-scope", run.tap_scope, "all | user-server");
  run_cmd->add_flag("--expect-secure", run.expect_secure, "Exit 0 only if the attack fails");

  std::string verify_path;
  auto* verify_cmd = app.add_subcommand("verify", "Re-derive and check a transcript");
  verify_cmd->add_option("transcript", verify_path, "Transcript path")->required();

  std::string dict_out;
  std::size_t dict_size = 100;
  std::uint64_t dict_seed = 0;
  std::size_t dict_index = 0;
  std::string dict_id = "alice";
  std::string dict_pw = "pw123";
  auto* dict_cmd = app.add_subcommand("make-dict", "Write a sample dictionary file");
  dict_cmd->add_option("--out", dict_out, "Output path")->required();
  dict_cmd->add_option("--size", dict_size, "Number of pairs");
  dict_cmd->add_option("--seed", dict_seed, "Seed for decoy pairs");
  dict_cmd->add_option("--index", dict_index, "Position of the supplied pair");
  dict_cmd->add_option("--id", dict_id, "Identity to plant");
  dict_cmd->add_option("--password", dict_pw, "Password to plant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (run_cmd->parsed()) return cmd_run(run);
  if (verify_cmd->parsed()) return cmd_verify(verify_path);
  if (dict_cmd->parsed()) return cmd_make_dict(dict_out, dict_size, dict_seed, dict_id, dict_pw, dict_index);
  return kUsage;
}
