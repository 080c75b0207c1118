#include "msauth/transcript.hpp"

#include <json.hpp>

#include <sstream>

namespace msauth {

using ojson = nlohmann::ordered_json;

std::string_view to_string(Channel channel) {
  switch (channel) {
    case Channel::Registration:
      return "registration";
    case Channel::UserServer:
      return "user-server";
    case Channel::ServerControl:
      return "server-cs";
  }
  return "unknown";
}

std::string_view to_string(TapAction action) {
  switch (action) {
    case TapAction::None:
      return "none";
    case TapAction::Observed:
      return "observed";
    case TapAction::Dropped:
      return "dropped";
    case TapAction::Injected:
      return "injected";
    case TapAction::Modified:
      return "modified";
  }
  return "unknown";
}

namespace {

Channel channel_from(std::string_view s) {
  for (auto c : {Channel::Registration, Channel::UserServer, Channel::ServerControl}) {
    if (to_string(c) == s) return c;
  }
  throw TranscriptFormatError("unknown channel `" + std::string(s) + "`");
}

TapAction action_from(std::string_view s) {
  for (auto a : {TapAction::None, TapAction::Observed, TapAction::Dropped, TapAction::Injected,
                 TapAction::Modified}) {
    if (to_string(a) == s) return a;
  }
  throw TranscriptFormatError("unknown action `" + std::string(s) + "`");
}

// Typed accessors that turn every json/hex failure into TranscriptFormatError.
class Record {
 public:
  Record(const ojson& j, std::size_t line) : j_(j), line_(line) {}

  const ojson& at(const char* key) const {
    auto it = j_.find(key);
    if (it == j_.end()) fail(std::string("missing field `") + key + "`");
    return *it;
  }
  bool has(const char* key) const { return j_.contains(key); }

  std::string str(const char* key) const {
    const auto& v = at(key);
    if (!v.is_string()) fail(std::string("field `") + key + "` is not a string");
    return v.get<std::string>();
  }
  std::uint64_t u64(const char* key) const {
    const auto& v = at(key);
    if (!v.is_number_unsigned()) fail(std::string("field `") + key + "` is not an unsigned integer");
    return v.get<std::uint64_t>();
  }
  bool boolean(const char* key) const {
    const auto& v = at(key);
    if (!v.is_boolean()) fail(std::string("field `") + key + "` is not a boolean");
    return v.get<bool>();
  }
  Bytes hex(const char* key) const {
    const std::string s = str(key);
    for (char c : s) {
      if (c >= 'A' && c <= 'F') fail(std::string("field `") + key + "` is not lowercase hex");
    }
    try {
      return from_hex(s);
    } catch (const std::invalid_argument& e) {
      fail(std::string("field `") + key + "`: " + e.what());
    }
  }
  Digest digest(const char* key) const {
    Bytes b = hex(key);
    if (b.size() != kDigestLen) fail(std::string("field `") + key + "` is not a digest");
    return Digest::from_bytes(b);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw TranscriptFormatError("line " + std::to_string(line_) + ": " + msg);
  }

 private:
  const ojson& j_;
  std::size_t line_;
};

}  // namespace

std::string Transcript::serialize() const {
  std::ostringstream out;
  auto emit = [&out](const ojson& j) { out << j.dump() << '\n'; };

  emit(ojson{{"record", "header"},
             {"format", kTranscriptFormat},
             {"version", version},
             {"scenario", scenario},
             {"seed", seed},
             {"hash", hash_name},
             {"digest_len", digest_len},
             {"tap_scope", tap_scope}});
  emit(ojson{{"record", "secrets"},
             {"visibility", "simulator"},
             {"cs_x", cs.x.hex()},
             {"cs_y", cs.y.hex()}});
  for (const auto& u : users) {
    emit(ojson{{"record", "user"},
               {"visibility", "simulator"},
               {"name", u.name},
               {"id", to_hex(u.id)},
               {"password", to_hex(u.password)},
               {"b", u.b.hex()},
               {"malicious", u.malicious}});
  }
  for (const auto& s : servers) {
    emit(ojson{{"record", "server"}, {"name", s.name}, {"sid", to_hex(s.sid)}});
  }
  for (const auto& e : events) {
    ojson j{{"record", "event"},
            {"step", e.step},
            {"session", e.session},
            {"channel", to_string(e.channel)},
            {"visible", e.visible},
            {"from", e.from},
            {"to", e.to},
            {"kind", to_string(e.kind)},
            {"action", to_string(e.action)},
            {"payload", to_hex(e.payload)}};
    if (e.original) j["original"] = to_hex(*e.original);
    if (e.mutation) {
      j["mutation"] = ojson{{"field", e.mutation->field},
                            {"byte", e.mutation->byte},
                            {"mask", to_hex(ByteView(&e.mutation->mask, 1))}};
    }
    emit(j);
  }
  for (const auto& o : outcomes) {
    ojson j{{"record", "outcome"},
            {"session", o.session},
            {"party", o.party},
            {"result", o.abort ? std::string(to_string(*o.abort)) : std::string("accepted")}};
    if (o.sk) j["sk"] = o.sk->hex();
    emit(j);
  }
  if (attack) {
    ojson details = ojson::object();
    for (const auto& [k, v] : attack->details) details[k] = v;
    emit(ojson{{"record", "attack"},
               {"attack", attack->attack},
               {"success", attack->success},
               {"work", attack->work},
               {"details", details}});
  }
  return out.str();
}

Transcript Transcript::parse(std::string_view text) {
  Transcript t;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  bool saw_secrets = false;

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    ojson j;
    try {
      j = ojson::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw TranscriptFormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.is_object()) throw TranscriptFormatError("line " + std::to_string(lineno) + ": not an object");
    Record r(j, lineno);
    const std::string kind = r.str("record");

    if (kind != "header" && !saw_header) r.fail("first record must be the header");
    if (kind == "header") {
      if (saw_header) r.fail("duplicate header");
      saw_header = true;
      if (r.str("format") != kTranscriptFormat) r.fail("not an msauth transcript");
      t.version = r.str("version");
      t.scenario = r.str("scenario");
      t.seed = r.u64("seed");
      t.hash_name = r.str("hash");
      t.digest_len = r.u64("digest_len");
      t.tap_scope = r.str("tap_scope");
    } else if (kind == "secrets") {
      if (saw_secrets) r.fail("duplicate secrets record");
      saw_secrets = true;
      t.cs.x = r.digest("cs_x");
      t.cs.y = r.digest("cs_y");
    } else if (kind == "user") {
      t.users.push_back(UserRecord{r.str("name"), r.hex("id"), r.hex("password"), r.digest("b"),
                                   r.boolean("malicious")});
    } else if (kind == "server") {
      t.servers.push_back(ServerRecord{r.str("name"), r.hex("sid")});
    } else if (kind == "event") {
      ChannelEvent e;
      e.step = r.u64("step");
      e.session = r.u64("session");
      e.channel = channel_from(r.str("channel"));
      e.visible = r.boolean("visible");
      e.from = r.str("from");
      e.to = r.str("to");
      auto mk = message_kind_from_string(r.str("kind"));
      if (!mk) r.fail("unknown message kind");
      e.kind = *mk;
      e.action = action_from(r.str("action"));
      e.payload = r.hex("payload");
      if (r.has("original")) e.original = r.hex("original");
      if (r.has("mutation")) {
        const auto& mj = r.at("mutation");
        if (!mj.is_object()) r.fail("mutation is not an object");
        Record m(mj, lineno);
        Bytes mask = m.hex("mask");
        if (mask.size() != 1) r.fail("mutation mask must be one octet");
        e.mutation = Mutation{m.str("field"), static_cast<std::size_t>(m.u64("byte")), mask[0]};
      }
      t.events.push_back(std::move(e));
    } else if (kind == "outcome") {
      PartyOutcome o;
      o.session = r.u64("session");
      o.party = r.str("party");
      const std::string result = r.str("result");
      if (result != "accepted") {
        o.abort = abort_reason_from_string(result);
        if (!o.abort) r.fail("unknown result `" + result + "`");
      }
      if (r.has("sk")) o.sk = r.digest("sk");
      t.outcomes.push_back(std::move(o));
    } else if (kind == "attack") {
      if (t.attack) r.fail("duplicate attack record");
      AttackReport a;
      a.attack = r.str("attack");
      a.success = r.boolean("success");
      a.work = static_cast<std::size_t>(r.u64("work"));
      const auto& dj = r.at("details");
      if (!dj.is_object()) r.fail("details is not an object");
      for (auto it = dj.begin(); it != dj.end(); ++it) {
        if (!it.value().is_string()) r.fail("attack detail values must be strings");
        a.details.emplace_back(it.key(), it.value().get<std::string>());
      }
      t.attack = std::move(a);
    } else {
      r.fail("unknown record type `" + kind + "`");
    }
  }
  if (!saw_header) throw TranscriptFormatError("empty transcript");
  if (!saw_secrets) throw TranscriptFormatError("missing secrets record");
  return t;
}

std::vector<ChannelEvent> Transcript::adversary_view() const {
  std::vector<ChannelEvent> out;
  for (const auto& e : events) {
    if (e.visible && e.channel != Channel::Registration) out.push_back(e);
  }
  return out;
}

const PartyOutcome* Transcript::outcome(std::uint64_t session, std::string_view party) const {
  for (const auto& o : outcomes) {
    if (o.session == session && o.party == party) return &o;
  }
  return nullptr;
}

const UserRecord* Transcript::user(std::string_view name) const {
  for (const auto& u : users) {
    if (u.name == name) return &u;
  }
  return nullptr;
}

const ServerRecord* Transcript::server(std::string_view name) const {
  for (const auto& s : servers) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const std::string* Transcript::attack_detail(std::string_view name) const {
  if (!attack) return nullptr;
  for (const auto& [k, v] : attack->details) {
    if (k == name) return &v;
  }
  return nullptr;
}

}  // namespace msauth
