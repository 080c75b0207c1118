#pragma once

// Deterministic single-run network simulator. It wires users, one service
// server and the control server together in the login order
// U_i -> S_j -> CS -> S_j -> U_i, lets an adversary policy observe, drop or
// modify every message on the tappable channels, and records a Transcript.
//
// All randomness comes from the scenario seed through labeled BlockRng
// streams, one per actor, so draws by one actor never shift another's.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "msauth/adversary.hpp"
#include "msauth/crypto.hpp"
#include "msauth/protocol.hpp"
#include "msauth/transcript.hpp"
#include "msauth/wire.hpp"

namespace msauth {

inline constexpr std::string_view kVictim = "U_1";
inline constexpr std::string_view kInsider = "U_2";
inline constexpr std::string_view kServer = "S_1";
inline constexpr std::string_view kControl = "CS";
inline constexpr std::string_view kAdversary = "ADV";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScenarioKind { Honest, Replay, Masquerade, Guess, Mutation };

std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> scenario_kind_from_string(std::string_view name);

/// Which login-phase channels the adversary controls.
enum class TapScope { AllChannels, UserServerOnly };

struct MutationTarget {
  MessageKind kind = MessageKind::M1;
  std::string field;
  std::size_t byte = 0;      // index within the field, reduced modulo its length
  std::uint8_t mask = 0x01;  // must be non-zero
};

/// Parses "M2.m_i" style selectors. Throws ConfigError.
MutationTarget parse_mutation_target(std::string_view selector);

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Honest;
  std::uint64_t seed = 0;
  Credential victim{to_bytes("alice"), to_bytes("pw123")};
  Credential insider{to_bytes("mallory"), to_bytes("insider-pw")};
  Bytes sid = to_bytes("S_1");
  TapScope tap_scope = TapScope::AllChannels;

  // guess: one of these dictionary sources; with neither, a synthetic
  // dictionary of `dictionary_size` pairs is generated from the seed with
  // the victim pair at a seeded index.
  std::optional<std::filesystem::path> dictionary_path;
  std::optional<Dictionary> dictionary;
  std::size_t dictionary_size = 1000;

  // mutation only
  std::optional<MutationTarget> mutation;

  // honest only: drop the first message of this kind
  std::optional<MessageKind> drop;

  /// Throws ConfigError when a field required by `kind` is missing or bad.
  void validate() const;
};

/// Adversary decision for one message on a tappable channel.
struct TapDecision {
  enum class Kind { Pass, Drop, Modify };
  Kind kind = Kind::Pass;
  Bytes payload;                     // Modify only
  std::optional<Mutation> mutation;  // Modify only

  static TapDecision pass() { return {}; }
  static TapDecision drop() { return {Kind::Drop, {}, std::nullopt}; }
  static TapDecision modify(Bytes payload, Mutation m) {
    return {Kind::Modify, std::move(payload), std::move(m)};
  }
};

class AdversaryPolicy {
 public:
  virtual ~AdversaryPolicy() = default;
  virtual TapDecision decide(const ChannelEvent& event) = 0;
};

class PassivePolicy final : public AdversaryPolicy {
 public:
  TapDecision decide(const ChannelEvent&) override { return TapDecision::pass(); }
};

/// Drops the first message of `kind` it sees.
class DropPolicy final : public AdversaryPolicy {
 public:
  explicit DropPolicy(MessageKind kind) : kind_(kind) {}
  TapDecision decide(const ChannelEvent& event) override;

 private:
  MessageKind kind_;
  bool fired_ = false;
};

/// XORs `mask` into one byte of one field of the first message of `kind`.
class FlipBytePolicy final : public AdversaryPolicy {
 public:
  explicit FlipBytePolicy(MutationTarget target) : target_(std::move(target)) {}
  TapDecision decide(const ChannelEvent& event) override;

 private:
  MutationTarget target_;
  bool fired_ = false;
};

/// Applies `m` to `payload` interpreted as `kind`. The byte index is reduced
/// modulo the field length. Throws std::invalid_argument if the payload does
/// not decode or the field does not exist.
Bytes apply_mutation(MessageKind kind, ByteView payload, Mutation& m);

/// Runs `event` (whose action is still None) through `policy`. Returns the
/// event as it should be recorded: Observed, Dropped, or Modified with
/// `original` and `mutation` filled in.
ChannelEvent adversary_tap(ChannelEvent event, AdversaryPolicy& policy);

/// How a login session's first message is produced.
struct LoginSource {
  enum class Kind { Card, Forged, Injected };
  Kind kind = Kind::Card;
  std::string user;       // Card/Forged: acting user. Injected: addressee of M4.
  Credential credential;  // Card/Forged: what is typed into the card
  std::optional<M1> injected;
};

struct LoginResult {
  std::uint64_t session = 0;
  std::optional<M1> m1_delivered;
  std::optional<CsAcceptance> cs;
  std::optional<ServerAcceptance> server;
  std::optional<SessionKey> card_sk;
  std::optional<CardSession> card_session;
};

class Simulator {
 public:
  Simulator(std::string scenario, std::uint64_t seed, AdversaryPolicy& policy,
            TapScope scope = TapScope::AllChannels);

  const ControlServer& control_server() const { return cs_; }

  /// Registers a user over the secure channel and returns its card.
  const SmartCard& register_user(std::string name, const Credential& cred, bool malicious = false);
  void register_server(std::string name, ByteView sid);

  const SmartCard& card(std::string_view user) const;

  /// Runs one login/authentication session against the registered server.
  LoginResult run_login(const LoginSource& source);

  const AdversaryKnowledge& adversary_knowledge() const { return knowledge_; }

  void set_attack_report(AttackReport report) { transcript_.attack = std::move(report); }
  const Transcript& transcript() const { return transcript_; }
  Transcript take_transcript() { return std::move(transcript_); }

 private:
  BlockRng& stream(const std::string& label);
  /// Records a message and returns the delivered payload, or nullopt if the
  /// adversary dropped it.
  std::optional<Bytes> transmit(std::uint64_t session, Channel channel, std::string from,
                                std::string to, MessageKind kind, Bytes payload);
  void record_outcome(std::uint64_t session, std::string party, std::optional<AbortReason> abort,
                      std::optional<SessionKey> sk);

  std::uint64_t seed_;
  AdversaryPolicy& policy_;
  TapScope scope_;
  ControlServer cs_;
  std::map<std::string, BlockRng> streams_;
  std::map<std::string, SmartCard, std::less<>> cards_;
  std::optional<ServerSecrets> server_;
  std::string server_name_;
  AdversaryKnowledge knowledge_;
  Transcript transcript_;
  std::uint64_t next_step_ = 0;
  std::uint64_t next_session_ = 0;
};

/// Runs a whole scenario. Throws ConfigError for a bad config; protocol
/// aborts are recorded in the transcript.
Transcript run_scenario(const ScenarioConfig& cfg);

/// Abort a single-field mutation must cause, and which party raises it.
struct ExpectedAbort {
  std::string party;
  AbortReason reason;
};
ExpectedAbort expected_abort(MessageKind kind, std::string_view field);

/// Human-readable result lines plus whether the scenario's expectation was
/// met (SK agreement for honest runs, success for attacks, the
/// phase-appropriate abort for mutations).
struct ScenarioSummary {
  bool expectation_met = false;
  std::vector<std::string> lines;
};
ScenarioSummary summarize(const Transcript& t);

}  // namespace msauth
