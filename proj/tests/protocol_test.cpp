#include <gtest/gtest.h>

#include <random>
#include <set>

#include "msauth/protocol.hpp"

namespace msauth {
namespace {

Bytes random_text(std::mt19937_64& rng, std::size_t max_len) {
  Bytes out(1 + rng() % max_len);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

void flip(Digest& d, std::size_t byte, std::uint8_t mask = 0x01) { d[byte % kDigestLen] ^= mask; }

// One CS, one server, one registered user; each actor draws from its own stream.
struct World {
  explicit World(std::uint64_t seed, Bytes id_ = to_bytes("alice"), Bytes pw_ = to_bytes("pw123"),
                 Bytes sid_ = to_bytes("S_1"))
      : id(std::move(id_)),
        pw(std::move(pw_)),
        sid(std::move(sid_)),
        cs_rng(seed, "cs"),
        user_rng(seed, "user"),
        card_rng(seed, "card"),
        server_rng(seed, "server"),
        cs_nonce_rng(seed, "cs/nonce"),
        cs(ControlServer::generate(cs_rng)),
        server(register_server(cs, sid)),
        card(register_user(cs, id, pw, user_rng)) {}

  Bytes id, pw, sid;
  BlockRng cs_rng, user_rng, card_rng, server_rng, cs_nonce_rng;
  ControlServer cs;
  ServerSecrets server;
  SmartCard card;
};

TEST(RegisterServer, Deterministic) {
  BlockRng rng(1, "cs");
  const auto cs = ControlServer::generate(rng);
  const auto a = register_server(cs, to_bytes("S_1"));
  const auto b = register_server(cs, to_bytes("S_1"));
  EXPECT_EQ(a.k_sid_y, b.k_sid_y);
  EXPECT_EQ(a.k_x_y, b.k_x_y);
  EXPECT_EQ(a.k_sid_y, hash_concat({to_bytes("S_1"), cs.y}));
  EXPECT_EQ(a.k_x_y, hash_concat({cs.x, cs.y}));
}

TEST(RegisterServer, DistinctSidsGetDistinctKeysSharedMasterKey) {
  BlockRng rng(2, "cs");
  const auto cs = ControlServer::generate(rng);
  std::mt19937_64 gen(2);
  std::set<Bytes> sids;
  std::set<Digest> keys;
  const Digest k_x_y = register_server(cs, to_bytes("S_0")).k_x_y;
  for (int i = 0; i < 300; ++i) {
    const Bytes sid = random_text(gen, 12);
    const auto s = register_server(cs, sid);
    if (sids.insert(sid).second) ASSERT_TRUE(keys.insert(s.k_sid_y).second);
    ASSERT_EQ(s.k_x_y, k_x_y);
  }
}

TEST(RegisterUser, CardSatisfiesInvariants) {
  World w(3);
  const Digest a_i = user_credential(w.card.b, w.pw);
  const Digest b_i = hash_concat({w.id, w.cs.x});
  EXPECT_EQ(w.card.c_i, hash_concat({w.id, w.card.h_y, a_i}));
  EXPECT_EQ(w.card.h_y, hash_concat({w.cs.y}));
  EXPECT_EQ(w.card.d_i ^ hash_concat({w.id, a_i}), b_i);
  EXPECT_EQ(w.card.e_i ^ hash_concat({w.cs.y, w.cs.x}), b_i);
  EXPECT_EQ(w.card.e_i ^ w.card.d_i, hash_concat({w.cs.y, w.cs.x}) ^ hash_concat({w.id, a_i}));
}

TEST(RegisterUser, SameCredentialsDifferentBGiveDifferentCards) {
  BlockRng cs_rng(4, "cs"), user_rng(4, "user");
  const auto cs = ControlServer::generate(cs_rng);
  const auto first = register_user(cs, to_bytes("alice"), to_bytes("pw123"), user_rng);
  const auto second = register_user(cs, to_bytes("alice"), to_bytes("pw123"), user_rng);
  EXPECT_NE(first.b, second.b);
  EXPECT_NE(first.c_i, second.c_i);
  // Duplicate registration is allowed and B_i is the same underneath.
  EXPECT_EQ(first.e_i, second.e_i);
}

TEST(CardLogin, BuildsM1FromFreshNonce) {
  World w(5);
  const auto req = card_login(w.card, w.id, w.pw, w.sid, w.card_rng);
  EXPECT_EQ(req.m1.f_i ^ w.card.h_y, req.session.n_i1);
  EXPECT_EQ(req.m1.g_i, hash_concat({req.session.b_i, req.session.a_i, req.session.n_i1}));
  EXPECT_EQ(req.session.a_i, user_credential(w.card.b, w.pw));
  EXPECT_EQ(req.session.b_i, hash_concat({w.id, w.cs.x}));
  EXPECT_EQ(req.m1.cid_i ^ hash_concat({req.session.b_i, req.m1.f_i, req.session.n_i1}),
            req.session.a_i);

  const auto again = card_login(w.card, w.id, w.pw, w.sid, w.card_rng);
  EXPECT_NE(req.session.n_i1, again.session.n_i1);
  EXPECT_NE(req.m1, again.m1);
}

TEST(CardLogin, WrongPasswordOrIdStopsLocally) {
  World w(6);
  try {
    card_login(w.card, w.id, to_bytes("pw124"), w.sid, w.card_rng);
    FAIL() << "expected LocalCheckFailed";
  } catch (const ProtocolAbort& e) {
    EXPECT_EQ(e.reason(), AbortReason::LocalCheckFailed);
  }
  EXPECT_THROW(card_login(w.card, to_bytes("alicf"), w.pw, w.sid, w.card_rng), ProtocolAbort);
  // No nonce is drawn for a refused login.
  EXPECT_EQ(w.card_rng.draws(), 0u);
}

TEST(ServerForward, AttachesSidAndKeyMaterial) {
  World w(7);
  const auto req = card_login(w.card, w.id, w.pw, w.sid, w.card_rng);
  const auto fwd = server_forward(w.server, req.m1, w.server_rng);
  EXPECT_EQ(fwd.m2.m1, req.m1);
  EXPECT_EQ(fwd.m2.sid, w.sid);
  EXPECT_EQ(fwd.m2.k_i ^ w.server.k_sid_y, fwd.session.n_i2);
  EXPECT_EQ(fwd.m2.m_i, hash_concat({w.server.k_x_y, fwd.session.n_i2}));
}

TEST(CsAuthenticate, HonestLoginRecoversCardState) {
  World w(8);
  const auto req = card_login(w.card, w.id, w.pw, w.sid, w.card_rng);
  const auto fwd = server_forward(w.server, req.m1, w.server_rng);
  const auto acc = cs_authenticate(w.cs, fwd.m2, w.cs_nonce_rng);
  EXPECT_EQ(acc.recovered.a_i, req.session.a_i);
  EXPECT_EQ(acc.recovered.b_i, req.session.b_i);
  EXPECT_EQ(acc.recovered.n_i1, req.session.n_i1);
  EXPECT_EQ(acc.recovered.n_i2, fwd.session.n_i2);
  const Digest nonce = acc.recovered.n_i1 ^ acc.recovered.n_i2 ^ acc.recovered.n_i3;
  EXPECT_EQ(acc.sk.sk, hash_concat({hash_concat({req.session.a_i, req.session.b_i}), nonce}));
  EXPECT_EQ(acc.m3.t_i ^ hash_concat({req.session.a_i, req.session.b_i, req.session.n_i1}),
            acc.recovered.n_i2 ^ acc.recovered.n_i3);
}

TEST(CsAuthenticate, BadMiIsServerAuthFailure) {
  World w(9);
  const auto req = card_login(w.card, w.id, w.pw, w.sid, w.card_rng);
  auto fwd = server_forward(w.server, req.m1, w.server_rng);
  flip(fwd.m2.m_i, 3);
  try {
    cs_authenticate(w.cs, fwd.m2, w.cs_nonce_rng);
    FAIL();
  } catch (const ProtocolAbort& e) {
    EXPECT_EQ(e.reason(), AbortReason::ServerAuthFailed);
  }
}

TEST(CsAuthenticate, BadGiIsUserAuthFailure) {
  World w(10);
  const auto req = card_login(w.card, w.id, w.pw, w.sid, w.card_rng);
  auto fwd = server_forward(w.server, req.m1, w.server_rng);
  flip(fwd.m2.m1.g_i, 0);
  try {
    cs_authenticate(w.cs, fwd.m2, w.cs_nonce_rng);
    FAIL();
  } catch (const ProtocolAbort& e) {
    EXPECT_EQ(e.reason(), AbortReason::UserAuthFailed);
  }
}

TEST(CsAuthenticate, UnregisteredSidIsAcceptedByStatelessCs) {
  // CS keeps no server registry: any SID whose h(SID || y) the sender knows works.
  World w(11);
  const auto other = register_server(w.cs, to_bytes("S_unlisted"));
  const auto req = card_login(w.card, w.id, w.pw, other.sid, w.card_rng);
  const auto fwd = server_forward(other, req.m1, w.server_rng);
  EXPECT_NO_THROW(cs_authenticate(w.cs, fwd.m2, w.cs_nonce_rng));
}

TEST(ServerVerify, AgreesWithCsAndPassesVtThrough) {
  World w(12);
  const auto req = card_login(w.card, w.id, w.pw, w.sid, w.card_rng);
  const auto fwd = server_forward(w.server, req.m1, w.server_rng);
  const auto acc = cs_authenticate(w.cs, fwd.m2, w.cs_nonce_rng);
  const auto sv = server_verify(w.server, fwd.session, acc.m3);
  EXPECT_EQ(sv.sk, acc.sk);
  EXPECT_EQ(sv.m4, (M4{acc.m3.v_i, acc.m3.t_i}));
  EXPECT_EQ(sv.h_ab, hash_concat({req.session.a_i, req.session.b_i}));
  EXPECT_EQ(sv.n_i1_xor_n3, acc.recovered.n_i1 ^ acc.recovered.n_i3);
}

TEST(ServerVerify, BadRiIsCsAuthFailure) {
  World w(13);
  const auto req = card_login(w.card, w.id, w.pw, w.sid, w.card_rng);
  const auto fwd = server_forward(w.server, req.m1, w.server_rng);
  auto acc = cs_authenticate(w.cs, fwd.m2, w.cs_nonce_rng);
  flip(acc.m3.r_i, 17);
  try {
    server_verify(w.server, fwd.session, acc.m3);
    FAIL();
  } catch (const ProtocolAbort& e) {
    EXPECT_EQ(e.reason(), AbortReason::CSAuthFailed);
  }
}

TEST(CardVerify, ThreeWayKeyAgreement) {
  World w(14);
  const auto req = card_login(w.card, w.id, w.pw, w.sid, w.card_rng);
  const auto fwd = server_forward(w.server, req.m1, w.server_rng);
  const auto acc = cs_authenticate(w.cs, fwd.m2, w.cs_nonce_rng);
  const auto sv = server_verify(w.server, fwd.session, acc.m3);
  const auto card_sk = card_verify(req.session, sv.m4);
  EXPECT_EQ(card_sk, sv.sk);
  EXPECT_EQ(card_sk, acc.sk);
}

TEST(CardVerify, BadTiIsCsAuthFailure) {
  World w(15);
  const auto req = card_login(w.card, w.id, w.pw, w.sid, w.card_rng);
  const auto fwd = server_forward(w.server, req.m1, w.server_rng);
  const auto acc = cs_authenticate(w.cs, fwd.m2, w.cs_nonce_rng);
  auto m4 = server_verify(w.server, fwd.session, acc.m3).m4;
  flip(m4.t_i, 31, 0x80);
  EXPECT_THROW(card_verify(req.session, m4), ProtocolAbort);
}

TEST(CardVerify, StaleM4AgainstFreshSessionFails) {
  World w(16);
  const auto old_req = card_login(w.card, w.id, w.pw, w.sid, w.card_rng);
  const auto fwd = server_forward(w.server, old_req.m1, w.server_rng);
  const auto acc = cs_authenticate(w.cs, fwd.m2, w.cs_nonce_rng);
  const auto stale = server_verify(w.server, fwd.session, acc.m3).m4;
  ASSERT_NO_THROW(card_verify(old_req.session, stale));

  const auto fresh = card_login(w.card, w.id, w.pw, w.sid, w.card_rng);
  try {
    card_verify(fresh.session, stale);
    FAIL();
  } catch (const ProtocolAbort& e) {
    EXPECT_EQ(e.reason(), AbortReason::CSAuthFailed);
  }
}

TEST(Properties, KeyAgreementAndRecoveryOverRandomRuns) {
  std::mt19937_64 gen(17);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    World w(seed, random_text(gen, 20), random_text(gen, 20), random_text(gen, 8));
    const auto req = card_login(w.card, w.id, w.pw, w.sid, w.card_rng);
    const auto fwd = server_forward(w.server, req.m1, w.server_rng);
    const auto acc = cs_authenticate(w.cs, fwd.m2, w.cs_nonce_rng);
    const auto sv = server_verify(w.server, fwd.session, acc.m3);
    const auto card_sk = card_verify(req.session, sv.m4);
    ASSERT_EQ(card_sk, sv.sk) << "seed " << seed;
    ASSERT_EQ(sv.sk, acc.sk) << "seed " << seed;

    // XOR recovery identities.
    ASSERT_EQ(req.m1.f_i ^ w.card.h_y, req.session.n_i1);
    ASSERT_EQ(fwd.m2.k_i ^ w.server.k_sid_y, fwd.session.n_i2);
    ASSERT_EQ(acc.m3.t_i ^ hash_concat({req.session.a_i, req.session.b_i, req.session.n_i1}),
              acc.recovered.n_i2 ^ acc.recovered.n_i3);
  }
}

TEST(Properties, AbortsDoNotConsumeActors) {
  World w(18);
  const auto req = card_login(w.card, w.id, w.pw, w.sid, w.card_rng);
  auto fwd = server_forward(w.server, req.m1, w.server_rng);
  auto bad = fwd.m2;
  flip(bad.k_i, 5);
  EXPECT_THROW(cs_authenticate(w.cs, bad, w.cs_nonce_rng), ProtocolAbort);
  // The same CS handles the untouched message afterwards.
  EXPECT_NO_THROW(cs_authenticate(w.cs, fwd.m2, w.cs_nonce_rng));
}

}  // namespace
}  // namespace msauth
