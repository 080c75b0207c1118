#include "msauth/protocol.hpp"

#include <array>
#include <string>

namespace msauth {

// Every application of h(.) hashes the concat encoding of its argument list,
// including single-argument uses such as h(y).

namespace {

constexpr std::array<std::pair<AbortReason, std::string_view>, 7> kAbortNames{{
    {AbortReason::LocalCheckFailed, "LocalCheckFailed"},
    {AbortReason::ServerAuthFailed, "ServerAuthFailed"},
    {AbortReason::UserAuthFailed, "UserAuthFailed"},
    {AbortReason::CSAuthFailed, "CSAuthFailed"},
    {AbortReason::MalformedMessage, "MalformedMessage"},
    {AbortReason::Timeout, "Timeout"},
    {AbortReason::NoPendingSession, "NoPendingSession"},
}};

Digest h1(ByteView a) { return hash_concat({a}); }

}  // namespace

std::string_view to_string(AbortReason reason) {
  for (const auto& [r, name] : kAbortNames) {
    if (r == reason) return name;
  }
  return "Unknown";
}

std::optional<AbortReason> abort_reason_from_string(std::string_view name) {
  for (const auto& [r, n] : kAbortNames) {
    if (n == name) return r;
  }
  return std::nullopt;
}

ProtocolAbort::ProtocolAbort(AbortReason reason)
    : std::runtime_error("session aborted: " + std::string(to_string(reason))), reason_(reason) {}

ControlServer ControlServer::generate(BlockRng& rng) {
  ControlServer cs;
  cs.x = rng.next();
  cs.y = rng.next();
  return cs;
}

Digest ControlServer::h_y() const { return h1(y); }

ServerSecrets register_server(const ControlServer& cs, ByteView sid) {
  return ServerSecrets{
      .sid = Bytes(sid.begin(), sid.end()),
      .k_sid_y = hash_concat({sid, cs.y}),
      .k_x_y = hash_concat({cs.x, cs.y}),
  };
}

Digest user_credential(const Digest& b, ByteView password) { return hash_concat({b, password}); }

IssuedCard issue_card(const ControlServer& cs, ByteView id, const Digest& a_i) {
  const Digest h_y = cs.h_y();
  const Digest b_i = hash_concat({id, cs.x});
  return IssuedCard{
      .c_i = hash_concat({id, h_y, a_i}),
      .d_i = b_i ^ hash_concat({id, a_i}),
      .e_i = b_i ^ hash_concat({cs.y, cs.x}),
      .h_y = h_y,
  };
}

SmartCard personalize(const IssuedCard& issued, const Digest& b) {
  return SmartCard{issued.c_i, issued.d_i, issued.e_i, issued.h_y, b};
}

SmartCard register_user(const ControlServer& cs, ByteView id, ByteView password, BlockRng& rng) {
  const Digest b = random_block(rng);
  return personalize(issue_card(cs, id, user_credential(b, password)), b);
}

SessionKey derive_session_key(const Digest& h_ab, const Digest& nonce_xor) {
  return SessionKey{hash_concat({h_ab, nonce_xor})};
}

LoginRequest card_login(const SmartCard& card, ByteView id, ByteView password, ByteView sid,
                        BlockRng& rng) {
  const Digest a_i = user_credential(card.b, password);
  if (hash_concat({id, card.h_y, a_i}) != card.c_i) {
    throw ProtocolAbort(AbortReason::LocalCheckFailed);
  }

  const Digest n_i1 = random_block(rng);
  const Digest b_i = card.d_i ^ hash_concat({id, a_i});
  const Digest f_i = card.h_y ^ n_i1;

  LoginRequest out;
  out.m1.f_i = f_i;
  out.m1.p_ij = card.e_i ^ hash_concat({card.h_y, n_i1, sid});
  out.m1.cid_i = a_i ^ hash_concat({b_i, f_i, n_i1});
  out.m1.g_i = hash_concat({b_i, a_i, n_i1});
  out.session = CardSession{a_i, b_i, n_i1};
  return out;
}

ForwardedLogin server_forward(const ServerSecrets& secrets, const M1& m1, BlockRng& rng) {
  const Digest n_i2 = random_block(rng);
  ForwardedLogin out;
  out.m2.m1 = m1;
  out.m2.sid = secrets.sid;
  out.m2.k_i = secrets.k_sid_y ^ n_i2;
  out.m2.m_i = hash_concat({secrets.k_x_y, n_i2});
  out.session = ServerSession{n_i2, m1};
  return out;
}

CsAcceptance cs_authenticate(const ControlServer& cs, const M2& m2, BlockRng& rng) {
  // S_j is authenticated through M_i.
  const Digest n_i2 = hash_concat({m2.sid, cs.y}) ^ m2.k_i;
  if (m2.m_i != hash_concat({hash_concat({cs.x, cs.y}), n_i2})) {
    throw ProtocolAbort(AbortReason::ServerAuthFailed);
  }

  // The user is authenticated through G_i.
  const M1& m1 = m2.m1;
  const Digest h_y = cs.h_y();
  const Digest n_i1 = h_y ^ m1.f_i;
  const Digest b_i = m1.p_ij ^ hash_concat({h_y, n_i1, m2.sid}) ^ hash_concat({cs.y, cs.x});
  const Digest a_i = m1.cid_i ^ hash_concat({b_i, m1.f_i, n_i1});
  if (m1.g_i != hash_concat({b_i, a_i, n_i1})) {
    throw ProtocolAbort(AbortReason::UserAuthFailed);
  }

  const Digest n_i3 = random_block(rng);
  const Digest h_ab = hash_concat({a_i, b_i});
  const Digest nonce_xor = n_i1 ^ n_i2 ^ n_i3;
  const Digest h_nonce = h1(nonce_xor);

  CsAcceptance out;
  out.m3.q_i = n_i1 ^ n_i3 ^ hash_concat({m2.sid, n_i2});
  out.m3.r_i = h_ab ^ h_nonce;
  out.m3.v_i = hash_concat({h_ab, h_nonce});
  out.m3.t_i = n_i2 ^ n_i3 ^ hash_concat({a_i, b_i, n_i1});
  out.sk = derive_session_key(h_ab, nonce_xor);
  out.recovered = CsRecovered{n_i1, n_i2, n_i3, a_i, b_i};
  return out;
}

ServerAcceptance server_verify(const ServerSecrets& secrets, const ServerSession& session,
                               const M3& m3) {
  // S_j only ever learns N_i1 ^ N_i3, which is all it needs for the key.
  const Digest n13 = m3.q_i ^ hash_concat({secrets.sid, session.n_i2});
  const Digest nonce_xor = n13 ^ session.n_i2;
  const Digest h_nonce = h1(nonce_xor);
  const Digest h_ab = m3.r_i ^ h_nonce;
  if (m3.v_i != hash_concat({h_ab, h_nonce})) {
    throw ProtocolAbort(AbortReason::CSAuthFailed);
  }
  return ServerAcceptance{M4{m3.v_i, m3.t_i}, derive_session_key(h_ab, nonce_xor), h_ab, n13};
}

SessionKey card_verify(const CardSession& session, const M4& m4) {
  const Digest n23 = m4.t_i ^ hash_concat({session.a_i, session.b_i, session.n_i1});
  const Digest nonce_xor = session.n_i1 ^ n23;
  const Digest h_ab = hash_concat({session.a_i, session.b_i});
  if (m4.v_i != hash_concat({h_ab, h1(nonce_xor)})) {
    throw ProtocolAbort(AbortReason::CSAuthFailed);
  }
  return derive_session_key(h_ab, nonce_xor);
}

}  // namespace msauth
