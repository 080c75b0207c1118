#include "msauth/verify.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "msauth/wire.hpp"

namespace msauth {

namespace {

Digest h(std::initializer_list<ByteView> parts) { return hash(concat(parts)); }

struct Expected {
  std::optional<AbortReason> abort;
  std::optional<Digest> sk;
};

std::string outcome_text(const std::optional<AbortReason>& abort) {
  return abort ? std::string(to_string(*abort)) : std::string("accepted");
}

class Checker {
 public:
  explicit Checker(const Transcript& t) : t_(t) {}

  VerifyReport run() {
    check_header();
    check_steps();
    check_registration();
    check_sessions();
    check_attack();
    return std::move(report_);
  }

 private:
  bool expect(bool cond, const std::string& what) {
    ++report_.relations_checked;
    if (!cond) report_.problems.push_back(what);
    return cond;
  }

  static std::string at(const ChannelEvent& e) { return "step " + std::to_string(e.step) + ": "; }

  Digest h_y() const { return h({t_.cs.y}); }
  Digest h_xy() const { return h({t_.cs.x, t_.cs.y}); }
  Digest h_yx() const { return h({t_.cs.y, t_.cs.x}); }

  void check_header() {
    expect(t_.hash_name == kHashName, "header: hash is `" + t_.hash_name + "`, expected SHA-256");
    expect(t_.digest_len == kDigestLen, "header: digest_len is not 32");
    expect(t_.tap_scope == "all" || t_.tap_scope == "user-server",
           "header: unknown tap_scope `" + t_.tap_scope + "`");
    expect(t_.servers.size() == 1, "expected exactly one server record");
  }

  void check_steps() {
    for (std::size_t i = 0; i < t_.events.size(); ++i) {
      const auto& e = t_.events[i];
      expect(e.step == i, at(e) + "steps must be 0,1,2,... in order");

      bool want_visible = false;
      switch (e.channel) {
        case Channel::Registration:
          want_visible = false;
          expect(e.kind == MessageKind::RegistrationRequest || e.kind == MessageKind::CardIssue,
                 at(e) + "login message on the registration channel");
          break;
        case Channel::UserServer:
          want_visible = true;
          expect(e.kind == MessageKind::M1 || e.kind == MessageKind::M4,
                 at(e) + "wrong message kind on the user-server channel");
          break;
        case Channel::ServerControl:
          want_visible = t_.tap_scope == "all";
          expect(e.kind == MessageKind::M2 || e.kind == MessageKind::M3,
                 at(e) + "wrong message kind on the server-cs channel");
          break;
      }
      expect(e.visible == want_visible, at(e) + "visibility does not match channel and tap scope");
      if (!e.visible) {
        expect(e.action == TapAction::None, at(e) + "adversary acted on an invisible channel");
      } else {
        expect(e.action != TapAction::None, at(e) + "visible message without adversary action");
      }

      const bool modified = e.action == TapAction::Modified;
      expect(modified == e.original.has_value() && modified == e.mutation.has_value(),
             at(e) + "original/mutation present iff modified");
      if (modified && e.original && e.mutation) {
        const auto layout = field_layout(e.kind, *e.original);
        bool applied = false;
        if (layout) {
          for (const auto& f : *layout) {
            if (f.name != e.mutation->field || e.mutation->byte >= f.length) continue;
            Bytes want = *e.original;
            want[f.offset + e.mutation->byte] ^= e.mutation->mask;
            applied = want == e.payload && e.mutation->mask != 0;
          }
        }
        expect(applied, at(e) + "delivered payload is not the recorded mutation of the original");
      }
    }
  }

  // Per-user registration material re-derived from CS secrets.
  struct UserMaterial {
    Bytes id;
    Digest a_i;
    Digest b_i;
    SmartCard card;
  };

  void check_registration() {
    for (const auto& u : t_.users) {
      const Digest a_i = h({u.b, u.password});
      const Digest b_i = h({u.id, t_.cs.x});
      UserMaterial m{u.id, a_i, b_i, {}};
      m.card.c_i = h({u.id, h_y(), a_i});
      m.card.d_i = b_i ^ h({u.id, a_i});
      m.card.e_i = b_i ^ h_yx();
      m.card.h_y = h_y();
      m.card.b = u.b;

      const ChannelEvent* req = nullptr;
      const ChannelEvent* issue = nullptr;
      for (const auto& e : t_.events) {
        if (e.channel != Channel::Registration) continue;
        if (e.kind == MessageKind::RegistrationRequest && e.from == u.name) req = &e;
        if (e.kind == MessageKind::CardIssue && e.to == u.name) issue = &e;
      }
      if (expect(req != nullptr, "user " + u.name + ": no registration request")) {
        const auto msg = decode_registration_request(req->payload);
        expect(msg && msg->id == u.id && msg->a_i == a_i,
               at(*req) + "registration request is not (ID_i, h(b || P_i)) of " + u.name);
        expect(req->to == kControlName, at(*req) + "registration request not sent to CS");
      }
      if (expect(issue != nullptr, "user " + u.name + ": no card issue")) {
        const auto card = decode_card_issue(issue->payload);
        expect(card && card->c_i == m.card.c_i && card->d_i == m.card.d_i &&
                   card->e_i == m.card.e_i && card->h_y == m.card.h_y,
               at(*issue) + "issued card does not match C_i, D_i, E_i, h(y) for " + u.name);
      }
      users_.emplace(u.name, std::move(m));
    }
  }

  const Bytes& sid() const {
    static const Bytes kEmpty;
    return t_.servers.empty() ? kEmpty : t_.servers.front().sid;
  }
  std::string server_name() const { return t_.servers.empty() ? "" : t_.servers.front().name; }

  void check_sessions() {
    std::set<std::uint64_t> sessions;
    for (const auto& e : t_.events) {
      if (e.channel != Channel::Registration) sessions.insert(e.session);
    }
    for (const auto& o : t_.outcomes) sessions.insert(o.session);
    for (auto s : sessions) check_session(s);
    report_.sessions_checked = sessions.size();
  }

  void check_session(std::uint64_t session) {
    const std::string tag = "session " + std::to_string(session) + ": ";
    std::vector<const ChannelEvent*> evs;
    for (const auto& e : t_.events) {
      if (e.channel != Channel::Registration && e.session == session) evs.push_back(&e);
    }
    std::map<std::string, Expected> expected;
    std::size_t next = 0;
    auto take = [&](MessageKind kind) -> const ChannelEvent* {
      if (next < evs.size() && evs[next]->kind == kind) return evs[next++];
      return nullptr;
    };
    const std::string server = server_name();
    const std::string control{kControlName};

    // A session without messages can only be a card refusing locally.
    if (evs.empty()) {
      for (const auto& o : t_.outcomes) {
        if (o.session != session) continue;
        expect(o.abort == AbortReason::LocalCheckFailed && !o.sk,
               tag + "outcome without any message must be LocalCheckFailed");
      }
      return;
    }

    // ---- M1 ----
    const ChannelEvent* e1 = take(MessageKind::M1);
    if (!expect(e1 != nullptr, tag + "first message is not M1")) return;
    expect(e1->to == server, at(*e1) + "M1 not addressed to the server");

    struct CardState {
      std::string party;
      Digest a_i, b_i, n_i1;
    };
    std::optional<CardState> card;
    if (e1->action == TapAction::Injected) {
      expect(e1->from == kAdversaryName, at(*e1) + "injected M1 must come from the adversary");
      bool is_replay = false;
      for (const auto& prev : t_.events) {
        if (prev.step >= e1->step) break;
        if (prev.visible && prev.kind == MessageKind::M1 && prev.action != TapAction::Injected &&
            prev.payload == e1->payload) {
          is_replay = true;
        }
      }
      expect(is_replay, at(*e1) + "injected M1 is not a byte-exact copy of an observed M1");
    } else {
      const auto it = users_.find(e1->from);
      if (expect(it != users_.end(), at(*e1) + "M1 sender `" + e1->from + "` is not registered")) {
        const Bytes& emitted = e1->original ? *e1->original : e1->payload;
        const auto m1 = decode_m1(emitted);
        if (expect(m1.has_value(), at(*e1) + "emitted M1 does not decode")) {
          const UserMaterial& u = it->second;
          const Digest n_i1 = h_y() ^ m1->f_i;
          expect(m1->p_ij == (u.card.e_i ^ h({h_y(), n_i1, sid()})),
                 at(*e1) + "P_ij != E_i ^ h(h(y) || N_i1 || SID_j)");
          expect(m1->cid_i == (u.a_i ^ h({u.b_i, m1->f_i, n_i1})),
                 at(*e1) + "CID_i != A_i ^ h(B_i || F_i || N_i1)");
          expect(m1->g_i == h({u.b_i, u.a_i, n_i1}), at(*e1) + "G_i != h(B_i || A_i || N_i1)");
          card = CardState{e1->from, u.a_i, u.b_i, n_i1};
        }
      }
    }
    auto finish = [&](bool server_pending, bool card_pending) {
      if (server_pending) expected[server] = {AbortReason::Timeout, std::nullopt};
      if (card_pending && card) expected[card->party] = {AbortReason::Timeout, std::nullopt};
      compare_outcomes(session, expected);
      if (next != evs.size()) {
        report_.problems.push_back(tag + "messages recorded after the session ended");
      }
    };

    if (e1->action == TapAction::Dropped) return finish(false, true);
    const auto m1_in = decode_m1(e1->payload);
    if (!m1_in) {
      expected[server] = {AbortReason::MalformedMessage, std::nullopt};
      return finish(false, true);
    }

    // ---- M2 ----
    const ChannelEvent* e2 = take(MessageKind::M2);
    if (!expect(e2 != nullptr, tag + "server did not forward M1")) return;
    expect(e2->from == server && e2->to == control, at(*e2) + "M2 must go from server to CS");
    const auto m2_out = decode_m2(e2->original ? *e2->original : e2->payload);
    if (!expect(m2_out.has_value(), at(*e2) + "emitted M2 does not decode")) return;
    expect(m2_out->m1 == *m1_in, at(*e2) + "M2 does not carry the delivered M1 unchanged");
    expect(m2_out->sid == sid(), at(*e2) + "M2 SID_j is not the server's");
    const Digest server_n_i2 = h({sid(), t_.cs.y}) ^ m2_out->k_i;
    expect(m2_out->m_i == h({h_xy(), server_n_i2}), at(*e2) + "M_i != h(h(x || y) || N_i2)");

    if (e2->action == TapAction::Dropped) return finish(true, true);
    const auto m2_in = decode_m2(e2->payload);
    if (!m2_in) {
      expected[control] = {AbortReason::MalformedMessage, std::nullopt};
      return finish(true, true);
    }

    // ---- CS ----
    const Digest cs_n_i2 = h({m2_in->sid, t_.cs.y}) ^ m2_in->k_i;
    if (m2_in->m_i != h({h_xy(), cs_n_i2})) {
      expected[control] = {AbortReason::ServerAuthFailed, std::nullopt};
      return finish(true, true);
    }
    const M1& cm1 = m2_in->m1;
    const Digest cs_n_i1 = h_y() ^ cm1.f_i;
    const Digest cs_b_i = cm1.p_ij ^ h({h_y(), cs_n_i1, m2_in->sid}) ^ h_yx();
    const Digest cs_a_i = cm1.cid_i ^ h({cs_b_i, cm1.f_i, cs_n_i1});
    if (cm1.g_i != h({cs_b_i, cs_a_i, cs_n_i1})) {
      expected[control] = {AbortReason::UserAuthFailed, std::nullopt};
      return finish(true, true);
    }

    // ---- M3 ----
    const ChannelEvent* e3 = take(MessageKind::M3);
    if (!expect(e3 != nullptr, tag + "CS accepted but sent no M3")) return;
    expect(e3->from == control && e3->to == server, at(*e3) + "M3 must go from CS to server");
    const auto m3_out = decode_m3(e3->original ? *e3->original : e3->payload);
    if (!expect(m3_out.has_value(), at(*e3) + "emitted M3 does not decode")) return;
    const Digest n_i3 = m3_out->q_i ^ cs_n_i1 ^ h({m2_in->sid, cs_n_i2});
    const Digest cs_nonce = cs_n_i1 ^ cs_n_i2 ^ n_i3;
    const Digest cs_h_ab = h({cs_a_i, cs_b_i});
    const Digest cs_h_nonce = h({cs_nonce});
    expect(m3_out->r_i == (cs_h_ab ^ cs_h_nonce), at(*e3) + "R_i != h(A_i || B_i) ^ h(N1^N2^N3)");
    expect(m3_out->v_i == h({cs_h_ab, cs_h_nonce}), at(*e3) + "V_i != h(h(A_i || B_i) || h(N1^N2^N3))");
    expect(m3_out->t_i == (cs_n_i2 ^ n_i3 ^ h({cs_a_i, cs_b_i, cs_n_i1})),
           at(*e3) + "T_i != N_i2 ^ N_i3 ^ h(A_i || B_i || N_i1)");
    expected[control] = {std::nullopt, h({cs_h_ab, cs_nonce})};

    if (card && m2_in->m1 == *m1_in && !e1->original && !e2->original) {
      // Unmodified path: CS must have recovered exactly the card's values.
      expect(cs_a_i == card->a_i && cs_b_i == card->b_i && cs_n_i1 == card->n_i1,
             tag + "CS recovered (A_i, B_i, N_i1) differ from the card's");
    }

    if (e3->action == TapAction::Dropped) return finish(true, true);
    const auto m3_in = decode_m3(e3->payload);
    if (!m3_in) {
      expected[server] = {AbortReason::MalformedMessage, std::nullopt};
      return finish(false, true);
    }

    // ---- S_j ----
    const Digest sv_nonce = m3_in->q_i ^ h({sid(), server_n_i2}) ^ server_n_i2;
    const Digest sv_h_nonce = h({sv_nonce});
    const Digest sv_h_ab = m3_in->r_i ^ sv_h_nonce;
    if (m3_in->v_i != h({sv_h_ab, sv_h_nonce})) {
      expected[server] = {AbortReason::CSAuthFailed, std::nullopt};
      return finish(false, true);
    }
    expected[server] = {std::nullopt, h({sv_h_ab, sv_nonce})};

    // ---- M4 ----
    const ChannelEvent* e4 = take(MessageKind::M4);
    if (!expect(e4 != nullptr, tag + "server accepted but sent no M4")) return;
    expect(e4->from == server, at(*e4) + "M4 must come from the server");
    const auto m4_out = decode_m4(e4->original ? *e4->original : e4->payload);
    if (!expect(m4_out.has_value(), at(*e4) + "emitted M4 does not decode")) return;
    expect(m4_out->v_i == m3_in->v_i && m4_out->t_i == m3_in->t_i,
           at(*e4) + "M4 is not (V_i, T_i) of the delivered M3");

    if (e4->action == TapAction::Dropped) return finish(false, true);
    if (!card) {
      expected[e4->to] = {AbortReason::NoPendingSession, std::nullopt};
      return finish(false, false);
    }
    expect(e4->to == card->party, at(*e4) + "M4 not addressed to the card that logged in");
    const auto m4_in = decode_m4(e4->payload);
    if (!m4_in) {
      expected[card->party] = {AbortReason::MalformedMessage, std::nullopt};
      return finish(false, false);
    }

    // ---- card ----
    const Digest n23 = m4_in->t_i ^ h({card->a_i, card->b_i, card->n_i1});
    const Digest cd_nonce = card->n_i1 ^ n23;
    const Digest cd_h_ab = h({card->a_i, card->b_i});
    if (m4_in->v_i != h({cd_h_ab, h({cd_nonce})})) {
      expected[card->party] = {AbortReason::CSAuthFailed, std::nullopt};
    } else {
      expected[card->party] = {std::nullopt, h({cd_h_ab, cd_nonce})};
    }
    return finish(false, false);
  }

  void compare_outcomes(std::uint64_t session, const std::map<std::string, Expected>& expected) {
    const std::string tag = "session " + std::to_string(session) + ": ";
    std::map<std::string, const PartyOutcome*> recorded;
    for (const auto& o : t_.outcomes) {
      if (o.session != session) continue;
      if (!expect(!recorded.contains(o.party), tag + "duplicate outcome for " + o.party)) continue;
      recorded[o.party] = &o;
      expect(o.accepted() == o.sk.has_value(), tag + o.party + " sk present iff accepted");
    }
    for (const auto& [party, want] : expected) {
      const auto it = recorded.find(party);
      if (!expect(it != recorded.end(), tag + "missing outcome for " + party)) continue;
      const PartyOutcome& got = *it->second;
      expect(got.abort == want.abort, tag + party + " recorded " + outcome_text(got.abort) +
                                          " but the messages imply " + outcome_text(want.abort));
      if (want.sk) {
        expect(got.sk == want.sk, tag + party + " session key does not match the derivation");
      }
    }
    for (const auto& [party, o] : recorded) {
      expect(expected.contains(party), tag + "unexpected outcome for " + party);
    }
  }

  bool agreed(std::uint64_t session, const std::string& card_party) const {
    const auto* c = t_.outcome(session, card_party);
    const auto* s = t_.outcome(session, server_name());
    const auto* cs = t_.outcome(session, kControlName);
    return c && s && cs && c->sk && s->sk && cs->sk && *c->sk == *s->sk && *s->sk == *cs->sk;
  }

  std::optional<std::string> detail(const char* name) {
    const std::string* v = t_.attack_detail(name);
    if (!expect(v != nullptr, std::string("attack: missing detail `") + name + "`")) return std::nullopt;
    return *v;
  }

  std::optional<std::uint64_t> detail_u64(const char* name) {
    auto v = detail(name);
    if (!v) return std::nullopt;
    try {
      std::size_t used = 0;
      const auto n = std::stoull(*v, &used);
      if (used == v->size()) return n;
    } catch (const std::exception&) {
    }
    expect(false, std::string("attack: detail `") + name + "` is not a number");
    return std::nullopt;
  }

  bool detail_is(const char* name, bool value) {
    auto v = detail(name);
    return v && expect(*v == (value ? "yes" : "no"),
                       std::string("attack: detail `") + name + "` contradicts the transcript");
  }

  void check_attack() {
    if (!t_.attack) {
      expect(t_.scenario == "honest" || t_.scenario == "mutation",
             "scenario " + t_.scenario + " has no attack record");
      return;
    }
    const AttackReport& a = *t_.attack;
    expect(a.attack == t_.scenario, "attack record does not match the scenario");
    if (a.attack == "guess") {
      check_guess(a);
    } else if (a.attack == "masquerade") {
      check_masquerade(a);
    } else if (a.attack == "replay") {
      check_replay(a);
    } else {
      expect(false, "unknown attack `" + a.attack + "`");
    }
  }

  Bytes detail_hex(const char* name) {
    auto v = detail(name);
    if (!v) return {};
    try {
      for (char c : *v) {
        if (c >= 'A' && c <= 'F') throw std::invalid_argument("uppercase");
      }
      return from_hex(*v);
    } catch (const std::invalid_argument&) {
      expect(false, std::string("attack: detail `") + name + "` is not hex");
      return {};
    }
  }

  void check_guess(const AttackReport& a) {
    auto victim = detail("victim");
    if (!victim) return;
    const auto it = users_.find(*victim);
    if (!expect(it != users_.end(), "guess: victim is not registered")) return;
    const SmartCard& card = it->second.card;
    expect(detail_hex("extracted_c_i") == Bytes(card.c_i.view().begin(), card.c_i.view().end()) &&
               detail_hex("extracted_d_i") == Bytes(card.d_i.view().begin(), card.d_i.view().end()) &&
               detail_hex("extracted_e_i") == Bytes(card.e_i.view().begin(), card.e_i.view().end()) &&
               detail_hex("extracted_h_y") == Bytes(card.h_y.view().begin(), card.h_y.view().end()) &&
               detail_hex("extracted_b") == Bytes(card.b.view().begin(), card.b.view().end()),
           "guess: extracted secrets differ from the victim's card");

    const UserRecord* truth = t_.user(*victim);
    const auto size = detail_u64("dictionary_size");
    const auto true_index = detail("true_index");
    const auto result = detail("result");
    if (!result || !size || !true_index) return;

    if (*result == "NotFound") {
      expect(!a.success, "guess: NotFound reported as success");
      expect(a.work == *size, "guess: NotFound must evaluate the whole dictionary");
      expect(*true_index == "absent", "guess: victim pair was in the dictionary but not found");
      return;
    }
    expect(*result == "found", "guess: result must be found or NotFound");
    const Bytes id = detail_hex("recovered_id");
    const Bytes pw = detail_hex("recovered_password");
    const Digest a_guess = h({card.b, pw});
    expect(h({id, card.h_y, a_guess}) == card.c_i, "guess: recovered pair does not satisfy C_i");
    const bool exact = truth && truth->id == id && truth->password == pw;
    if (*true_index != "absent") {
      const auto idx = detail_u64("true_index");
      if (idx) expect(a.work == *idx + 1, "guess: work count is not true_index + 1");
    }
    expect(a.work >= 1 && a.work <= *size, "guess: work count outside the dictionary");
    const auto login = detail_u64("login_session");
    if (!login) return;
    const bool login_ok = agreed(*login, *victim);
    detail_is("login_completed", login_ok);
    expect(a.success == (exact && login_ok), "guess: success flag contradicts the transcript");
  }

  void check_masquerade(const AttackReport& a) {
    expect(a.work == 1, "masquerade: one forged login, work must be 1");
    const auto insider = detail("insider");
    const auto session = detail_u64("session");
    if (!insider || !session) return;
    const UserRecord* u = t_.user(*insider);
    expect(u && u->malicious, "masquerade: insider is not a registered malicious user");
    bool from_insider = false;
    for (const auto& e : t_.events) {
      if (e.session == *session && e.kind == MessageKind::M1 && e.channel == Channel::UserServer) {
        from_insider = e.from == *insider;
      }
    }
    expect(from_insider, "masquerade: forged M1 was not sent by the insider");
    const auto* cs = t_.outcome(*session, kControlName);
    const bool cs_ok = cs && cs->accepted();
    const bool keys = agreed(*session, *insider);
    detail_is("cs_accepted", cs_ok);
    detail_is("key_agreement", keys);
    expect(a.success == (cs_ok && keys), "masquerade: success flag contradicts the transcript");
  }

  void check_replay(const AttackReport& a) {
    expect(a.work == 1, "replay: one injected message, work must be 1");
    const auto source = detail_u64("source_session");
    const auto replay = detail_u64("replay_session");
    if (!source || !replay) return;
    const ChannelEvent* original = nullptr;
    const ChannelEvent* injected = nullptr;
    for (const auto& e : t_.events) {
      if (e.kind != MessageKind::M1 || e.channel != Channel::UserServer) continue;
      if (e.session == *source) original = &e;
      if (e.session == *replay) injected = &e;
    }
    expect(original && injected && injected->action == TapAction::Injected &&
               original->payload == injected->payload,
           "replay: replayed M1 is not a byte-exact copy of the source session's M1");

    const auto* cs = t_.outcome(*replay, kControlName);
    const auto* sv = t_.outcome(*replay, server_name());
    const bool cs_ok = cs && cs->accepted();
    const bool sv_ok = sv && sv->accepted();
    detail_is("cs_accepted", cs_ok);
    detail_is("server_accepted", sv_ok);

    // Everything the adversary saw, as every 32-octet window.
    std::set<Digest> seen;
    auto learn = [&seen](const Bytes& p) {
      for (std::size_t off = 0; off + kDigestLen <= p.size(); ++off) {
        seen.insert(Digest::from_bytes(ByteView(p).subspan(off, kDigestLen)));
      }
    };
    for (const auto& e : t_.adversary_view()) {
      learn(e.payload);
      if (e.original) learn(*e.original);
    }
    const bool knows = (cs && cs->sk && seen.contains(*cs->sk)) || (sv && sv->sk && seen.contains(*sv->sk));
    detail_is("adversary_knows_sk", knows);
    expect(a.success == (cs_ok && sv_ok), "replay: success flag contradicts the transcript");
  }

  static constexpr std::string_view kControlName = "CS";
  static constexpr std::string_view kAdversaryName = "ADV";

  const Transcript& t_;
  VerifyReport report_;
  std::map<std::string, UserMaterial, std::less<>> users_;
};

}  // namespace

VerifyReport verify_transcript(const Transcript& t) { return Checker(t).run(); }

}  // namespace msauth
