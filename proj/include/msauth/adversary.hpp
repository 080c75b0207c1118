#pragma once

// Attacker capabilities and the three attacks on the scheme: offline
// guessing of (id, password) from extracted card contents, login forgery by
// a registered insider, and replay of an observed login message.
//
// Attacks only ever take values the attacker legitimately holds
// (ExtractedSecrets, its own credentials, captured messages). None of them
// accepts a ControlServer or a victim password.

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "msauth/crypto.hpp"
#include "msauth/protocol.hpp"

namespace msauth {

/// Everything stored on a card, as read out by a side-channel attacker.
struct ExtractedSecrets {
  Digest c_i;
  Digest d_i;
  Digest e_i;
  Digest h_y;
  Digest b;

  friend bool operator==(const ExtractedSecrets&, const ExtractedSecrets&) = default;
};

ExtractedSecrets extract_card(const SmartCard& card);

struct Credential {
  Bytes id;
  Bytes password;

  friend bool operator==(const Credential&, const Credential&) = default;
};

class DictionaryFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered candidate (id, password) pairs.
class Dictionary {
 public:
  Dictionary() = default;
  explicit Dictionary(std::vector<Credential> entries) : entries_(std::move(entries)) {}

  /// One `id<TAB>password` pair per line. Blank lines and a trailing CR are
  /// ignored; anything else without exactly one TAB, or with an empty side,
  /// is a DictionaryFormatError.
  static Dictionary parse(std::istream& in);
  static Dictionary load(const std::filesystem::path& path);

  /// Every id paired with every password, ids outermost.
  static Dictionary cross_product(const std::vector<Bytes>& ids, const std::vector<Bytes>& passwords);

  void write(std::ostream& out) const;

  const std::vector<Credential>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<Credential> entries_;
};

/// Reads one non-empty item per line (used for --dict-ids / --dict-passwords).
std::vector<Bytes> load_word_list(const std::filesystem::path& path);

struct GuessResult {
  std::optional<Credential> found;  // nullopt: dictionary exhausted (NotFound)
  std::size_t work = 0;             // candidate pairs evaluated
};

/// First candidate, in dictionary order, with h(id' || h(y) || h(b || pw')) == C_i.
GuessResult guess_credentials(const ExtractedSecrets& ex, const Dictionary& dict);

/// Insider forgery: a registered user builds a login message from its own
/// card data. The returned session lets the insider finish the key
/// agreement. Unlike card_login there is no local C_i gate.
LoginRequest forge_login(const ExtractedSecrets& own, ByteView own_id, ByteView own_password,
                         ByteView target_sid, BlockRng& rng);

/// Replay is a byte-exact resend of a captured message.
M1 replay_login(const M1& captured);

/// Digests the adversary has seen or derived.
class AdversaryKnowledge {
 public:
  void learn(const Digest& d) { known_.insert(d); }
  /// Learns every contiguous kDigestLen window of `payload`, a superset of
  /// its digest fields whatever the framing.
  void learn_payload(ByteView payload);
  bool knows(const Digest& d) const { return known_.contains(d); }
  std::size_t size() const { return known_.size(); }

 private:
  std::set<Digest> known_;
};

struct AttackReport {
  std::string attack;  // "guess", "masquerade" or "replay"
  bool success = false;
  std::size_t work = 0;
  std::vector<std::pair<std::string, std::string>> details;  // name, value

  friend bool operator==(const AttackReport&, const AttackReport&) = default;
};

}  // namespace msauth
