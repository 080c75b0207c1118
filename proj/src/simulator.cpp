#include "msauth/simulator.hpp"

#include <algorithm>
#include <array>

namespace msauth {

namespace {

constexpr std::array<std::pair<ScenarioKind, std::string_view>, 5> kScenarioNames{{
    {ScenarioKind::Honest, "honest"},
    {ScenarioKind::Replay, "replay"},
    {ScenarioKind::Masquerade, "masquerade"},
    {ScenarioKind::Guess, "guess"},
    {ScenarioKind::Mutation, "mutation"},
}};

bool is_login_kind(MessageKind k) {
  return k == MessageKind::M1 || k == MessageKind::M2 || k == MessageKind::M3 ||
         k == MessageKind::M4;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::uint64_t u64_from(const Digest& d) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | d[i];
  return v;
}

bool three_way_agreement(const Transcript& t, std::uint64_t session, std::string_view card_party) {
  const auto* card = t.outcome(session, card_party);
  const auto* server = t.outcome(session, kServer);
  const auto* cs = t.outcome(session, kControl);
  return card && server && cs && card->accepted() && server->accepted() && cs->accepted() &&
         card->sk == server->sk && server->sk == cs->sk;
}

std::string describe(const PartyOutcome* o) {
  if (!o) return "not involved";
  if (o->abort) return "aborted (" + std::string(to_string(*o->abort)) + ")";
  return "accepted, SK " + o->sk->hex();
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  for (const auto& [k, name] : kScenarioNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<ScenarioKind> scenario_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kScenarioNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

MutationTarget parse_mutation_target(std::string_view selector) {
  const auto dot = selector.find('.');
  if (dot == std::string_view::npos) {
    throw ConfigError("mutation target must look like M2.m_i, got `" + std::string(selector) + "`");
  }
  auto kind = message_kind_from_string(selector.substr(0, dot));
  if (!kind || !is_login_kind(*kind)) {
    throw ConfigError("mutation target must name one of M1..M4");
  }
  MutationTarget t;
  t.kind = *kind;
  t.field = std::string(selector.substr(dot + 1));
  const auto names = field_names(t.kind);
  if (std::find(names.begin(), names.end(), t.field) == names.end()) {
    throw ConfigError("message " + std::string(to_string(t.kind)) + " has no field `" + t.field +
                      "`");
  }
  return t;
}

void ScenarioConfig::validate() const {
  auto require_cred = [](const Credential& c, const char* who) {
    if (c.id.empty()) throw ConfigError(std::string(who) + " id must be non-empty");
    if (c.password.empty()) throw ConfigError(std::string(who) + " password must be non-empty");
  };
  require_cred(victim, "user");
  if (sid.empty()) throw ConfigError("server id must be non-empty");
  if (drop && !is_login_kind(*drop)) throw ConfigError("only M1..M4 can be dropped");

  switch (kind) {
    case ScenarioKind::Honest:
    case ScenarioKind::Replay:
      break;
    case ScenarioKind::Masquerade:
      require_cred(insider, "insider");
      break;
    case ScenarioKind::Guess:
      if (!dictionary && !dictionary_path && dictionary_size == 0) {
        throw ConfigError("guess scenario needs a dictionary");
      }
      break;
    case ScenarioKind::Mutation: {
      if (!mutation) throw ConfigError("mutation scenario needs a mutation target");
      if (!is_login_kind(mutation->kind)) throw ConfigError("only M1..M4 can be mutated");
      const auto names = field_names(mutation->kind);
      if (std::find(names.begin(), names.end(), mutation->field) == names.end()) {
        throw ConfigError("unknown mutation field `" + mutation->field + "`");
      }
      if (mutation->mask == 0) throw ConfigError("mutation mask must be non-zero");
      break;
    }
  }
  if (kind != ScenarioKind::Honest && drop) throw ConfigError("--drop applies to honest runs only");
}

TapDecision DropPolicy::decide(const ChannelEvent& event) {
  if (fired_ || event.kind != kind_) return TapDecision::pass();
  fired_ = true;
  return TapDecision::drop();
}

TapDecision FlipBytePolicy::decide(const ChannelEvent& event) {
  if (fired_ || event.kind != target_.kind) return TapDecision::pass();
  fired_ = true;
  Mutation m{target_.field, target_.byte, target_.mask};
  Bytes out = apply_mutation(event.kind, event.payload, m);
  return TapDecision::modify(std::move(out), std::move(m));
}

Bytes apply_mutation(MessageKind kind, ByteView payload, Mutation& m) {
  const auto layout = field_layout(kind, payload);
  if (!layout) throw std::invalid_argument("payload does not decode as " + std::string(to_string(kind)));
  for (const auto& f : *layout) {
    if (f.name != m.field) continue;
    if (f.length == 0) throw std::invalid_argument("field `" + m.field + "` is empty");
    m.byte %= f.length;
    Bytes out(payload.begin(), payload.end());
    out[f.offset + m.byte] ^= m.mask;
    return out;
  }
  throw std::invalid_argument("message " + std::string(to_string(kind)) + " has no field `" +
                              m.field + "`");
}

ChannelEvent adversary_tap(ChannelEvent event, AdversaryPolicy& policy) {
  TapDecision d = policy.decide(event);
  switch (d.kind) {
    case TapDecision::Kind::Pass:
      event.action = TapAction::Observed;
      break;
    case TapDecision::Kind::Drop:
      event.action = TapAction::Dropped;
      break;
    case TapDecision::Kind::Modify:
      event.action = TapAction::Modified;
      event.original = std::move(event.payload);
      event.payload = std::move(d.payload);
      event.mutation = std::move(d.mutation);
      break;
  }
  return event;
}

Simulator::Simulator(std::string scenario, std::uint64_t seed, AdversaryPolicy& policy,
                     TapScope scope)
    : seed_(seed), policy_(policy), scope_(scope) {
  cs_ = ControlServer::generate(stream("cs"));
  transcript_.scenario = std::move(scenario);
  transcript_.seed = seed;
  transcript_.tap_scope = scope == TapScope::AllChannels ? "all" : "user-server";
  transcript_.cs = cs_;
}

BlockRng& Simulator::stream(const std::string& label) {
  auto it = streams_.find(label);
  if (it == streams_.end()) it = streams_.emplace(label, BlockRng(seed_, label)).first;
  return it->second;
}

const SmartCard& Simulator::register_user(std::string name, const Credential& cred,
                                          bool malicious) {
  // User side: choose b, send ID_i and A_i over the secure channel.
  const Digest b = random_block(stream("user/" + name));
  const Digest a_i = user_credential(b, cred.password);
  transmit(0, Channel::Registration, name, std::string(kControl), MessageKind::RegistrationRequest,
           encode(RegistrationRequest{cred.id, a_i}));

  const IssuedCard issued = issue_card(cs_, cred.id, a_i);
  transmit(0, Channel::Registration, std::string(kControl), name, MessageKind::CardIssue,
           encode(issued));

  transcript_.users.push_back(UserRecord{name, cred.id, cred.password, b, malicious});
  auto [it, inserted] = cards_.insert_or_assign(std::move(name), personalize(issued, b));
  return it->second;
}

void Simulator::register_server(std::string name, ByteView sid) {
  server_ = msauth::register_server(cs_, sid);
  server_name_ = name;
  transcript_.servers.push_back(ServerRecord{std::move(name), Bytes(sid.begin(), sid.end())});
}

const SmartCard& Simulator::card(std::string_view user) const {
  auto it = cards_.find(user);
  if (it == cards_.end()) throw std::out_of_range("no card for user " + std::string(user));
  return it->second;
}

std::optional<Bytes> Simulator::transmit(std::uint64_t session, Channel channel, std::string from,
                                         std::string to, MessageKind kind, Bytes payload) {
  ChannelEvent ev;
  ev.step = next_step_++;
  ev.session = session;
  ev.channel = channel;
  ev.visible = channel == Channel::UserServer ||
               (channel == Channel::ServerControl && scope_ == TapScope::AllChannels);
  ev.from = std::move(from);
  ev.to = std::move(to);
  ev.kind = kind;
  ev.payload = std::move(payload);

  if (ev.visible) {
    ev = adversary_tap(std::move(ev), policy_);
    knowledge_.learn_payload(ev.payload);
    if (ev.original) knowledge_.learn_payload(*ev.original);
  }
  transcript_.events.push_back(ev);
  if (ev.action == TapAction::Dropped) return std::nullopt;
  return std::move(ev.payload);
}

void Simulator::record_outcome(std::uint64_t session, std::string party,
                               std::optional<AbortReason> abort, std::optional<SessionKey> sk) {
  PartyOutcome o;
  o.session = session;
  o.party = std::move(party);
  o.abort = abort;
  if (sk) o.sk = sk->sk;
  transcript_.outcomes.push_back(std::move(o));
}

LoginResult Simulator::run_login(const LoginSource& source) {
  if (!server_) throw std::logic_error("run_login before register_server");
  LoginResult result;
  const std::uint64_t session = next_session_;
  result.session = session;
  ++next_session_;

  const std::string server = server_name_;
  const std::string control{kControl};
  bool card_pending = false;
  bool server_pending = false;
  auto finish = [&]() -> LoginResult {
    if (server_pending) record_outcome(session, server, AbortReason::Timeout, std::nullopt);
    if (card_pending) record_outcome(session, source.user, AbortReason::Timeout, std::nullopt);
    return result;
  };

  // U_i -> S_j
  std::optional<Bytes> delivered;
  switch (source.kind) {
    case LoginSource::Kind::Card: {
      LoginRequest req;
      try {
        req = card_login(card(source.user), source.credential.id, source.credential.password,
                         server_->sid, stream("card/" + source.user));
      } catch (const ProtocolAbort& e) {
        record_outcome(session, source.user, e.reason(), std::nullopt);
        return result;
      }
      result.card_session = req.session;
      card_pending = true;
      delivered = transmit(session, Channel::UserServer, source.user, server, MessageKind::M1,
                           encode(req.m1));
      break;
    }
    case LoginSource::Kind::Forged: {
      const LoginRequest req =
          forge_login(extract_card(card(source.user)), source.credential.id,
                      source.credential.password, server_->sid, stream("adversary/" + source.user));
      result.card_session = req.session;
      card_pending = true;
      delivered = transmit(session, Channel::UserServer, source.user, server, MessageKind::M1,
                           encode(req.m1));
      break;
    }
    case LoginSource::Kind::Injected: {
      if (!source.injected) throw std::logic_error("injected login without a message");
      ChannelEvent ev;
      ev.step = next_step_++;
      ev.session = session;
      ev.channel = Channel::UserServer;
      ev.visible = true;
      ev.from = std::string(kAdversary);
      ev.to = server;
      ev.kind = MessageKind::M1;
      ev.action = TapAction::Injected;
      ev.payload = encode(*source.injected);
      transcript_.events.push_back(ev);
      delivered = ev.payload;
      break;
    }
  }
  if (!delivered) return finish();

  const auto m1 = decode_m1(*delivered);
  if (!m1) {
    record_outcome(session, server, AbortReason::MalformedMessage, std::nullopt);
    return finish();
  }
  result.m1_delivered = *m1;

  // S_j -> CS
  const ForwardedLogin fwd = server_forward(*server_, *m1, stream("server/" + server));
  server_pending = true;
  delivered = transmit(session, Channel::ServerControl, server, control, MessageKind::M2,
                       encode(fwd.m2));
  if (!delivered) return finish();

  const auto m2 = decode_m2(*delivered);
  if (!m2) {
    record_outcome(session, control, AbortReason::MalformedMessage, std::nullopt);
    return finish();
  }
  try {
    result.cs = cs_authenticate(cs_, *m2, stream("cs/nonce"));
  } catch (const ProtocolAbort& e) {
    record_outcome(session, control, e.reason(), std::nullopt);
    return finish();
  }
  record_outcome(session, control, std::nullopt, result.cs->sk);

  // CS -> S_j
  delivered = transmit(session, Channel::ServerControl, control, server, MessageKind::M3,
                       encode(result.cs->m3));
  if (!delivered) return finish();

  server_pending = false;
  const auto m3 = decode_m3(*delivered);
  if (!m3) {
    record_outcome(session, server, AbortReason::MalformedMessage, std::nullopt);
    return finish();
  }
  try {
    result.server = server_verify(*server_, fwd.session, *m3);
  } catch (const ProtocolAbort& e) {
    record_outcome(session, server, e.reason(), std::nullopt);
    return finish();
  }
  record_outcome(session, server, std::nullopt, result.server->sk);

  // S_j -> U_i
  delivered = transmit(session, Channel::UserServer, server, source.user, MessageKind::M4,
                       encode(result.server->m4));
  if (!delivered) return finish();

  if (!card_pending) {
    record_outcome(session, source.user, AbortReason::NoPendingSession, std::nullopt);
    return finish();
  }
  card_pending = false;
  const auto m4 = decode_m4(*delivered);
  if (!m4) {
    record_outcome(session, source.user, AbortReason::MalformedMessage, std::nullopt);
    return finish();
  }
  try {
    result.card_sk = card_verify(*result.card_session, *m4);
  } catch (const ProtocolAbort& e) {
    record_outcome(session, source.user, e.reason(), std::nullopt);
    return finish();
  }
  record_outcome(session, source.user, std::nullopt, result.card_sk);
  return finish();
}

namespace {

Dictionary synthetic_dictionary(const ScenarioConfig& cfg) {
  BlockRng rng(cfg.seed, "dictionary");
  const std::size_t n = cfg.dictionary_size;
  const std::size_t victim_at = static_cast<std::size_t>(u64_from(rng.next()) % n);
  std::vector<Credential> entries;
  entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == victim_at) {
      entries.push_back(cfg.victim);
      continue;
    }
    Credential decoy;
    do {
      const Digest d = rng.next();
      decoy.id = to_bytes("user-" + to_hex(d.view().first(3)));
      decoy.password = to_bytes(to_hex(d.view().subspan(3, 5)));
    } while (decoy == cfg.victim);
    entries.push_back(std::move(decoy));
  }
  return Dictionary(std::move(entries));
}

Transcript run_guess(const ScenarioConfig& cfg, Simulator& sim) {
  Dictionary dict;
  try {
    if (cfg.dictionary) {
      dict = *cfg.dictionary;
    } else if (cfg.dictionary_path) {
      dict = Dictionary::load(*cfg.dictionary_path);
    } else {
      dict = synthetic_dictionary(cfg);
    }
  } catch (const DictionaryFormatError& e) {
    throw ConfigError(e.what());
  }

  const std::string victim{kVictim};
  sim.register_user(victim, cfg.victim);

  // Offline phase: the attacker holds the stolen card and nothing else.
  const ExtractedSecrets ex = extract_card(sim.card(victim));
  const GuessResult guess = guess_credentials(ex, dict);

  AttackReport report;
  report.attack = "guess";
  report.work = guess.work;
  report.details = {
      {"victim", victim},
      {"dictionary_size", std::to_string(dict.size())},
      {"extracted_c_i", ex.c_i.hex()},
      {"extracted_d_i", ex.d_i.hex()},
      {"extracted_e_i", ex.e_i.hex()},
      {"extracted_h_y", ex.h_y.hex()},
      {"extracted_b", ex.b.hex()},
  };
  const auto& entries = dict.entries();
  const auto truth = std::find(entries.begin(), entries.end(), cfg.victim);
  report.details.emplace_back(
      "true_index", truth == entries.end() ? "absent" : std::to_string(truth - entries.begin()));

  if (!guess.found) {
    report.details.emplace_back("result", "NotFound");
    report.success = false;
  } else {
    report.details.emplace_back("result", "found");
    report.details.emplace_back("recovered_id", to_hex(guess.found->id));
    report.details.emplace_back("recovered_password", to_hex(guess.found->password));
    // Online phase: stolen card plus recovered credentials.
    const LoginResult login =
        sim.run_login({LoginSource::Kind::Card, victim, *guess.found, std::nullopt});
    report.details.emplace_back("login_session", std::to_string(login.session));
    const bool login_ok = three_way_agreement(sim.transcript(), login.session, victim);
    report.details.emplace_back("login_completed", yes_no(login_ok));
    report.success = *guess.found == cfg.victim && login_ok;
  }
  sim.set_attack_report(std::move(report));
  return sim.take_transcript();
}

Transcript run_masquerade(const ScenarioConfig& cfg, Simulator& sim) {
  const std::string victim{kVictim};
  const std::string insider{kInsider};
  sim.register_user(victim, cfg.victim);
  sim.register_user(insider, cfg.insider, /*malicious=*/true);

  const LoginResult forged =
      sim.run_login({LoginSource::Kind::Forged, insider, cfg.insider, std::nullopt});
  const Transcript& t = sim.transcript();
  const auto* cs = t.outcome(forged.session, kControl);

  AttackReport report;
  report.attack = "masquerade";
  report.work = 1;
  report.details = {
      {"insider", insider},
      {"victim", victim},
      {"session", std::to_string(forged.session)},
      {"cs_accepted", yes_no(cs && cs->accepted())},
      {"key_agreement", yes_no(three_way_agreement(t, forged.session, insider))},
      // M1 carries no identity field; CS has nothing to attribute the login to.
      {"identity_binding", "none"},
  };
  report.success = cs && cs->accepted() && three_way_agreement(t, forged.session, insider);
  sim.set_attack_report(std::move(report));
  return sim.take_transcript();
}

Transcript run_replay(const ScenarioConfig& cfg, Simulator& sim) {
  const std::string victim{kVictim};
  sim.register_user(victim, cfg.victim);

  const LoginResult honest =
      sim.run_login({LoginSource::Kind::Card, victim, cfg.victim, std::nullopt});

  AttackReport report;
  report.attack = "replay";
  report.work = 1;
  report.details = {{"source_session", std::to_string(honest.session)}};

  // The adversary captures M1 from its own view of the channel.
  std::optional<M1> captured;
  for (const auto& ev : sim.transcript().adversary_view()) {
    if (ev.session == honest.session && ev.kind == MessageKind::M1) captured = decode_m1(ev.payload);
  }
  if (!captured) {
    report.details.emplace_back("result", "no M1 observed");
    sim.set_attack_report(std::move(report));
    return sim.take_transcript();
  }

  const LoginResult replayed =
      sim.run_login({LoginSource::Kind::Injected, victim, {}, replay_login(*captured)});
  const Transcript& t = sim.transcript();
  const auto* cs = t.outcome(replayed.session, kControl);
  const auto* server = t.outcome(replayed.session, kServer);
  const bool cs_ok = cs && cs->accepted();
  const bool server_ok = server && server->accepted();
  const auto& knowledge = sim.adversary_knowledge();
  const bool knows_sk = (cs && cs->sk && knowledge.knows(*cs->sk)) ||
                        (server && server->sk && knowledge.knows(*server->sk));

  report.details.emplace_back("replay_session", std::to_string(replayed.session));
  report.details.emplace_back("cs_accepted", yes_no(cs_ok));
  report.details.emplace_back("server_accepted", yes_no(server_ok));
  report.details.emplace_back("adversary_knows_sk", yes_no(knows_sk));
  report.success = cs_ok && server_ok;
  sim.set_attack_report(std::move(report));
  return sim.take_transcript();
}

}  // namespace

Transcript run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();

  std::unique_ptr<AdversaryPolicy> policy;
  if (cfg.kind == ScenarioKind::Mutation) {
    policy = std::make_unique<FlipBytePolicy>(*cfg.mutation);
  } else if (cfg.drop) {
    policy = std::make_unique<DropPolicy>(*cfg.drop);
  } else {
    policy = std::make_unique<PassivePolicy>();
  }

  Simulator sim(std::string(to_string(cfg.kind)), cfg.seed, *policy, cfg.tap_scope);
  sim.register_server(std::string(kServer), cfg.sid);

  switch (cfg.kind) {
    case ScenarioKind::Honest:
    case ScenarioKind::Mutation: {
      const std::string victim{kVictim};
      sim.register_user(victim, cfg.victim);
      sim.run_login({LoginSource::Kind::Card, victim, cfg.victim, std::nullopt});
      return sim.take_transcript();
    }
    case ScenarioKind::Guess:
      return run_guess(cfg, sim);
    case ScenarioKind::Masquerade:
      return run_masquerade(cfg, sim);
    case ScenarioKind::Replay:
      return run_replay(cfg, sim);
  }
  throw ConfigError("unknown scenario kind");
}

ExpectedAbort expected_abort(MessageKind kind, std::string_view field) {
  switch (kind) {
    case MessageKind::M1:
      return {std::string(kControl), AbortReason::UserAuthFailed};
    case MessageKind::M2:
      if (field == "sid" || field == "k_i" || field == "m_i") {
        return {std::string(kControl), AbortReason::ServerAuthFailed};
      }
      return {std::string(kControl), AbortReason::UserAuthFailed};
    case MessageKind::M3:
      // S_j never checks T_i; a bad T_i surfaces at the card.
      if (field == "t_i") return {std::string(kVictim), AbortReason::CSAuthFailed};
      return {std::string(kServer), AbortReason::CSAuthFailed};
    case MessageKind::M4:
      return {std::string(kVictim), AbortReason::CSAuthFailed};
    default:
      break;
  }
  throw std::invalid_argument("registration messages are not mutable in transit");
}

ScenarioSummary summarize(const Transcript& t) {
  ScenarioSummary s;
  s.lines.push_back("scenario " + t.scenario + ", seed " + std::to_string(t.seed) + ", hash " +
                    t.hash_name);

  std::uint64_t sessions = 0;
  for (const auto& o : t.outcomes) sessions = std::max(sessions, o.session + 1);
  for (std::uint64_t i = 0; i < sessions; ++i) {
    std::vector<std::string> parties;
    for (const auto& o : t.outcomes) {
      if (o.session == i && std::find(parties.begin(), parties.end(), o.party) == parties.end()) {
        parties.push_back(o.party);
      }
    }
    for (const auto& p : parties) {
      s.lines.push_back("session " + std::to_string(i) + " " + p + ": " + describe(t.outcome(i, p)));
    }
  }

  if (t.scenario == "honest") {
    const bool agreed = three_way_agreement(t, 0, kVictim);
    s.lines.push_back("SK agreement: " + yes_no(agreed));
    s.expectation_met = agreed;
  } else if (t.scenario == "mutation") {
    const ChannelEvent* mutated = nullptr;
    for (const auto& e : t.events) {
      if (e.action == TapAction::Modified) mutated = &e;
    }
    if (!mutated || !mutated->mutation) {
      s.lines.push_back("no message was mutated");
      return s;
    }
    const auto expect = expected_abort(mutated->kind, mutated->mutation->field);
    const auto* got = t.outcome(mutated->session, expect.party);
    s.lines.push_back("mutated " + std::string(to_string(mutated->kind)) + "." +
                      mutated->mutation->field + " byte " + std::to_string(mutated->mutation->byte));
    s.lines.push_back("expected " + expect.party + " " + std::string(to_string(expect.reason)) +
                      ", got " + describe(got));
    s.expectation_met = got && got->abort == expect.reason;
  } else if (t.attack) {
    const auto detail = [&t](const char* k) {
      const auto* v = t.attack_detail(k);
      return v ? *v : std::string("-");
    };
    if (t.attack->attack == "guess") {
      s.lines.push_back("dictionary entries evaluated: " + std::to_string(t.attack->work));
      if (detail("result") == "found") {
        s.lines.push_back("recovered id: " + to_text(from_hex(detail("recovered_id"))));
        s.lines.push_back("recovered password: " + to_text(from_hex(detail("recovered_password"))));
        s.lines.push_back("login with recovered credentials: " + detail("login_completed"));
      } else {
        s.lines.push_back("credentials not found in dictionary");
      }
    } else if (t.attack->attack == "masquerade") {
      s.lines.push_back("forged M1 accepted by CS: " + detail("cs_accepted"));
      s.lines.push_back("insider shares SK with S_j and CS: " + detail("key_agreement"));
      s.lines.push_back("identity binding in M1: " + detail("identity_binding"));
    } else if (t.attack->attack == "replay") {
      s.lines.push_back("replayed M1 accepted by CS: " + detail("cs_accepted"));
      s.lines.push_back("replayed M1 accepted by S_j: " + detail("server_accepted"));
      s.lines.push_back("adversary knows new SK: " + detail("adversary_knows_sk"));
    }
    s.lines.push_back(std::string("attack succeeded: ") + yes_no(t.attack->success));
    s.expectation_met = t.attack->success;
  }
  return s;
}

}  // namespace msauth
