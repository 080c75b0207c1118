#pragma once

// The honest participants of the multi-server scheme: the user's smart card,
// a service server S_j and the control server CS. Every operation takes its
// actor state explicitly and returns the next message plus whatever session
// state the actor must keep until the reply arrives.

#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>

#include "msauth/crypto.hpp"

namespace msauth {

/// Why a party stopped a session. Aborts are per session; actors survive them.
enum class AbortReason {
  LocalCheckFailed,   // card: C_i mismatch, wrong id or password
  ServerAuthFailed,   // CS: M_i does not authenticate S_j
  UserAuthFailed,     // CS: G_i does not authenticate the user
  CSAuthFailed,       // S_j or card: V_i does not authenticate CS
  MalformedMessage,   // payload does not decode as the expected message
  Timeout,            // the awaited reply never arrived
  NoPendingSession,   // a reply arrived with no session waiting for it
};

std::string_view to_string(AbortReason reason);
std::optional<AbortReason> abort_reason_from_string(std::string_view name);

class ProtocolAbort : public std::runtime_error {
 public:
  explicit ProtocolAbort(AbortReason reason);
  AbortReason reason() const { return reason_; }

 private:
  AbortReason reason_;
};

/// CS long-term secrets. Never transmitted.
struct ControlServer {
  Digest x;  // master secret key
  Digest y;  // secret number

  static ControlServer generate(BlockRng& rng);

  Digest h_y() const;

  friend bool operator==(const ControlServer&, const ControlServer&) = default;
};

struct ServerSecrets {
  Bytes sid;
  Digest k_sid_y;  // h(SID_j || y)
  Digest k_x_y;    // h(x || y)
};

/// What CS writes to the card before issuing it.
struct IssuedCard {
  Digest c_i;
  Digest d_i;
  Digest e_i;
  Digest h_y;

  friend bool operator==(const IssuedCard&, const IssuedCard&) = default;
};

struct SmartCard {
  Digest c_i;
  Digest d_i;
  Digest e_i;
  Digest h_y;
  Digest b;  // entered by the user after issuance

  friend bool operator==(const SmartCard&, const SmartCard&) = default;
};

struct M1 {
  Digest f_i;
  Digest g_i;
  Digest p_ij;
  Digest cid_i;

  friend bool operator==(const M1&, const M1&) = default;
};

struct M2 {
  M1 m1;
  Bytes sid;
  Digest k_i;
  Digest m_i;

  friend bool operator==(const M2&, const M2&) = default;
};

struct M3 {
  Digest q_i;
  Digest r_i;
  Digest v_i;
  Digest t_i;

  friend bool operator==(const M3&, const M3&) = default;
};

struct M4 {
  Digest v_i;
  Digest t_i;

  friend bool operator==(const M4&, const M4&) = default;
};

/// Card state between emitting M1 and checking M4.
struct CardSession {
  Digest a_i;
  Digest b_i;
  Digest n_i1;
};

/// Server state between emitting M2 and checking M3.
struct ServerSession {
  Digest n_i2;
  M1 m1;
};

struct SessionKey {
  Digest sk;

  friend bool operator==(const SessionKey&, const SessionKey&) = default;
};

struct LoginRequest {
  M1 m1;
  CardSession session;
};

struct ForwardedLogin {
  M2 m2;
  ServerSession session;
};

/// Everything CS reconstructs while authenticating one login.
struct CsRecovered {
  Digest n_i1;
  Digest n_i2;
  Digest n_i3;
  Digest a_i;
  Digest b_i;
};

struct CsAcceptance {
  M3 m3;
  SessionKey sk;
  CsRecovered recovered;
};

struct ServerAcceptance {
  M4 m4;
  SessionKey sk;
  Digest h_ab;         // recovered h(A_i || B_i)
  Digest n_i1_xor_n3;  // recovered N_i1 ^ N_i3
};

ServerSecrets register_server(const ControlServer& cs, ByteView sid);

/// A_i = h(b || P_i), computed on the user side.
Digest user_credential(const Digest& b, ByteView password);

/// CS side of registration: from ID_i and A_i, produce C_i, D_i, E_i, h(y).
IssuedCard issue_card(const ControlServer& cs, ByteView id, const Digest& a_i);

/// Card with b inserted (registration step 3).
SmartCard personalize(const IssuedCard& issued, const Digest& b);

/// Full registration: draws b from `rng`, computes A_i, has CS issue the
/// card and inserts b.
SmartCard register_user(const ControlServer& cs, ByteView id, ByteView password, BlockRng& rng);

/// SK = h(h(A_i || B_i) || N_i1 ^ N_i2 ^ N_i3), given h(A_i || B_i) and the
/// combined nonce.
SessionKey derive_session_key(const Digest& h_ab, const Digest& nonce_xor);

/// Throws ProtocolAbort(LocalCheckFailed) if (id, password) do not match C_i.
LoginRequest card_login(const SmartCard& card, ByteView id, ByteView password, ByteView sid,
                        BlockRng& rng);

/// S_j performs no check on M1; it attaches SID_j, K_i and M_i.
ForwardedLogin server_forward(const ServerSecrets& secrets, const M1& m1, BlockRng& rng);

/// Throws ProtocolAbort(ServerAuthFailed) on an M_i mismatch and
/// ProtocolAbort(UserAuthFailed) on a G_i mismatch.
CsAcceptance cs_authenticate(const ControlServer& cs, const M2& m2, BlockRng& rng);

/// Throws ProtocolAbort(CSAuthFailed) on a V_i mismatch.
ServerAcceptance server_verify(const ServerSecrets& secrets, const ServerSession& session,
                               const M3& m3);

/// Throws ProtocolAbort(CSAuthFailed) on a V_i mismatch.
SessionKey card_verify(const CardSession& session, const M4& m4);

}  // namespace msauth
