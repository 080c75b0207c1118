#pragma once

// Scenario transcripts and their JSON-lines serialization.
//
// A transcript is one JSON object per line, in this order:
//
//   {"record":"header", "format":"msauth-transcript", "version", "scenario",
//    "seed", "hash", "digest_len", "tap_scope"}
//   {"record":"secrets", "visibility":"simulator", "cs_x", "cs_y"}
//   {"record":"user", "visibility":"simulator", "name", "id", "password",
//    "b", "malicious"}                                       (one per user)
//   {"record":"server", "name", "sid"}                       (one per server)
//   {"record":"event", "step", "session", "channel", "visible", "from", "to",
//    "kind", "action", "payload" [, "original", "mutation"]}  (one per message)
//   {"record":"outcome", "session", "party", "result" [, "sk"]}
//   {"record":"attack", "attack", "success", "work", "details":{...}}  (optional)
//
// All byte strings are lowercase hex. `result` is "accepted" or an abort
// reason name. Field order within a record is fixed, so a transcript's bytes
// depend only on its content.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "msauth/adversary.hpp"
#include "msauth/crypto.hpp"
#include "msauth/protocol.hpp"
#include "msauth/wire.hpp"

namespace msauth {

inline constexpr std::string_view kTranscriptFormat = "msauth-transcript";
inline constexpr std::string_view kArtifactVersion = MSAUTH_VERSION;

enum class Channel {
  Registration,  // secure, never adversary-visible
  UserServer,    // U_i <-> S_j
  ServerControl  // S_j <-> CS
};

enum class TapAction { None, Observed, Dropped, Injected, Modified };

std::string_view to_string(Channel channel);
std::string_view to_string(TapAction action);

/// One flipped byte: payload[field.offset + byte] ^= mask.
struct Mutation {
  std::string field;
  std::size_t byte = 0;
  std::uint8_t mask = 0x01;

  friend bool operator==(const Mutation&, const Mutation&) = default;
};

struct ChannelEvent {
  std::uint64_t step = 0;
  std::uint64_t session = 0;
  Channel channel = Channel::UserServer;
  bool visible = false;  // the adversary sees and controls this message
  std::string from;
  std::string to;
  MessageKind kind = MessageKind::M1;
  TapAction action = TapAction::None;
  Bytes payload;                   // bytes as delivered (or as dropped)
  std::optional<Bytes> original;   // sender's bytes, Modified only
  std::optional<Mutation> mutation;

  friend bool operator==(const ChannelEvent&, const ChannelEvent&) = default;
};

struct UserRecord {
  std::string name;
  Bytes id;
  Bytes password;
  Digest b;
  bool malicious = false;

  friend bool operator==(const UserRecord&, const UserRecord&) = default;
};

struct ServerRecord {
  std::string name;
  Bytes sid;

  friend bool operator==(const ServerRecord&, const ServerRecord&) = default;
};

struct PartyOutcome {
  std::uint64_t session = 0;
  std::string party;
  std::optional<AbortReason> abort;  // nullopt: accepted
  std::optional<Digest> sk;          // present iff accepted

  bool accepted() const { return !abort.has_value(); }
  friend bool operator==(const PartyOutcome&, const PartyOutcome&) = default;
};

class TranscriptFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Transcript {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string hash_name{kHashName};
  std::size_t digest_len = kDigestLen;
  std::string version{kArtifactVersion};
  std::string tap_scope = "all";

  ControlServer cs;
  std::vector<UserRecord> users;
  std::vector<ServerRecord> servers;
  std::vector<ChannelEvent> events;
  std::vector<PartyOutcome> outcomes;
  std::optional<AttackReport> attack;

  std::string serialize() const;
  /// Throws TranscriptFormatError on anything that is not a structurally
  /// valid transcript.
  static Transcript parse(std::string_view text);

  /// Events the adversary could see: visible channels only, never
  /// registration traffic, never simulator-only records.
  std::vector<ChannelEvent> adversary_view() const;

  const PartyOutcome* outcome(std::uint64_t session, std::string_view party) const;
  const UserRecord* user(std::string_view name) const;
  const ServerRecord* server(std::string_view name) const;
  /// Value of a named attack detail, or nullptr.
  const std::string* attack_detail(std::string_view name) const;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

}  // namespace msauth
