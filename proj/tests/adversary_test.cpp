#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "msauth/adversary.hpp"
#include "msauth/protocol.hpp"

namespace msauth {
namespace {

struct Fixture {
  explicit Fixture(std::uint64_t seed)
      : cs_rng(seed, "cs"),
        user_rng(seed, "user"),
        nonce_rng(seed, "nonces"),
        cs(ControlServer::generate(cs_rng)),
        server(register_server(cs, to_bytes("S_1"))) {}

  BlockRng cs_rng, user_rng, nonce_rng;
  ControlServer cs;
  ServerSecrets server;
};

std::vector<Credential> decoys(std::size_t n, std::uint64_t seed) {
  std::vector<Credential> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({to_bytes("user" + std::to_string(seed) + "-" + std::to_string(i)),
                   to_bytes("guess" + std::to_string(i))});
  }
  return out;
}

TEST(ExtractCard, CopiesAllStoredValues) {
  Fixture s(1);
  const auto card = register_user(s.cs, to_bytes("alice"), to_bytes("pw123"), s.user_rng);
  const SmartCard before = card;
  const auto ex = extract_card(card);
  EXPECT_EQ(ex.c_i, card.c_i);
  EXPECT_EQ(ex.d_i, card.d_i);
  EXPECT_EQ(ex.e_i, card.e_i);
  EXPECT_EQ(ex.h_y, card.h_y);
  EXPECT_EQ(ex.b, card.b);
  EXPECT_EQ(ex.h_y, hash_concat({s.cs.y}));
  EXPECT_EQ(card, before);
}

TEST(GuessCredentials, FindsVictimInHundredPairDictionary) {
  Fixture s(2);
  const auto card = register_user(s.cs, to_bytes("alice"), to_bytes("pw123"), s.user_rng);
  auto entries = decoys(99, 2);
  entries.insert(entries.begin() + 42, Credential{to_bytes("alice"), to_bytes("pw123")});
  const auto result = guess_credentials(extract_card(card), Dictionary(entries));
  ASSERT_TRUE(result.found);
  EXPECT_EQ(to_text(result.found->id), "alice");
  EXPECT_EQ(to_text(result.found->password), "pw123");
  EXPECT_EQ(result.work, 43u);
  // The recovered pair opens the card.
  EXPECT_NO_THROW(card_login(card, result.found->id, result.found->password, s.server.sid, s.nonce_rng));
}

TEST(GuessCredentials, RightPasswordWrongIdIsNotAMatch) {
  Fixture s(3);
  const auto card = register_user(s.cs, to_bytes("alice"), to_bytes("pw123"), s.user_rng);
  const Dictionary dict({{to_bytes("bob"), to_bytes("pw123")}, {to_bytes("alice"), to_bytes("pw12")}});
  const auto result = guess_credentials(extract_card(card), dict);
  EXPECT_FALSE(result.found);
  EXPECT_EQ(result.work, 2u);
}

TEST(GuessCredentials, SoundOverRandomScenarios) {
  std::mt19937_64 gen(4);
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    Fixture s(trial);
    const Credential victim{to_bytes("id-" + std::to_string(gen() % 100000)),
                            to_bytes("pw-" + std::to_string(gen()))};
    const auto card = register_user(s.cs, victim.id, victim.password, s.user_rng);
    const std::size_t n = 10 + gen() % 300;
    auto entries = decoys(n - 1, trial);
    const std::size_t k = gen() % n;
    entries.insert(entries.begin() + static_cast<std::ptrdiff_t>(k), victim);
    const auto result = guess_credentials(extract_card(card), Dictionary(entries));
    ASSERT_TRUE(result.found);
    ASSERT_EQ(*result.found, victim);
    ASSERT_EQ(result.work, k + 1);
  }
}

TEST(Dictionary, ParsesTabSeparatedPairs) {
  std::istringstream in("alice\tpw123\r\n\nbob\tsecret with spaces\n");
  const auto d = Dictionary::parse(in);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(to_text(d.entries()[0].password), "pw123");
  EXPECT_EQ(to_text(d.entries()[1].password), "secret with spaces");

  std::ostringstream out;
  d.write(out);
  std::istringstream again(out.str());
  EXPECT_EQ(Dictionary::parse(again).entries(), d.entries());
}

TEST(Dictionary, RejectsMalformedLines) {
  for (const char* bad : {"no-tab\n", "a\tb\tc\n", "\tpw\n", "id\t\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(Dictionary::parse(in), DictionaryFormatError) << bad;
  }
  EXPECT_THROW(Dictionary::load("/nonexistent/dict.tsv"), DictionaryFormatError);
}

TEST(Dictionary, CrossProductIdsOutermost) {
  const auto d = Dictionary::cross_product({to_bytes("a"), to_bytes("b")},
                                           {to_bytes("1"), to_bytes("2"), to_bytes("3")});
  ASSERT_EQ(d.size(), 6u);
  EXPECT_EQ(to_text(d.entries()[0].id), "a");
  EXPECT_EQ(to_text(d.entries()[2].password), "3");
  EXPECT_EQ(to_text(d.entries()[3].id), "b");
}

TEST(Dictionary, WordListsFromFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "msauth_adversary_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "ids.txt") << "alice\nbob\n\n";
  std::ofstream(dir / "pws.txt") << "x\r\npw123\n";
  const auto d = Dictionary::cross_product(load_word_list(dir / "ids.txt"), load_word_list(dir / "pws.txt"));
  EXPECT_EQ(d.size(), 4u);
  EXPECT_EQ(to_text(d.entries()[1].password), "pw123");
}

TEST(ForgeLogin, InsiderLoginPassesCsAndAgreesOnKey) {
  Fixture s(5);
  const auto victim = register_user(s.cs, to_bytes("alice"), to_bytes("pw123"), s.user_rng);
  const auto own = register_user(s.cs, to_bytes("mallory"), to_bytes("m-pw"), s.user_rng);
  const auto forged =
      forge_login(extract_card(own), to_bytes("mallory"), to_bytes("m-pw"), s.server.sid, s.nonce_rng);

  const auto fwd = server_forward(s.server, forged.m1, s.nonce_rng);
  const auto acc = cs_authenticate(s.cs, fwd.m2, s.nonce_rng);
  const auto sv = server_verify(s.server, fwd.session, acc.m3);
  const auto attacker_sk = card_verify(forged.session, sv.m4);
  EXPECT_EQ(attacker_sk, sv.sk);
  EXPECT_EQ(attacker_sk, acc.sk);

  // CS sees the insider's B_t; nothing in M1 names anyone.
  EXPECT_EQ(acc.recovered.b_i, hash_concat({to_bytes("mallory"), s.cs.x}));
  EXPECT_NE(acc.recovered.b_i, hash_concat({to_bytes("alice"), s.cs.x}));
  (void)victim;
}

TEST(ForgeLogin, MatchesHonestCardConstruction) {
  // Same secrets and same nonce stream: the forgery is bit-identical to what
  // the insider's own card would send.
  Fixture s(6);
  const auto own = register_user(s.cs, to_bytes("mallory"), to_bytes("m-pw"), s.user_rng);
  BlockRng r1(6, "n"), r2(6, "n");
  const auto forged = forge_login(extract_card(own), to_bytes("mallory"), to_bytes("m-pw"), s.server.sid, r1);
  const auto honest = card_login(own, to_bytes("mallory"), to_bytes("m-pw"), s.server.sid, r2);
  EXPECT_EQ(forged.m1, honest.m1);
}

TEST(ReplayLogin, ByteExactReplayPassesCs) {
  Fixture s(7);
  const auto card = register_user(s.cs, to_bytes("alice"), to_bytes("pw123"), s.user_rng);
  const auto req = card_login(card, to_bytes("alice"), to_bytes("pw123"), s.server.sid, s.nonce_rng);
  const auto first = cs_authenticate(s.cs, server_forward(s.server, req.m1, s.nonce_rng).m2, s.nonce_rng);

  const M1 replayed = replay_login(req.m1);
  EXPECT_EQ(replayed, req.m1);
  const auto fwd = server_forward(s.server, replayed, s.nonce_rng);
  const auto second = cs_authenticate(s.cs, fwd.m2, s.nonce_rng);
  const auto sv = server_verify(s.server, fwd.session, second.m3);
  EXPECT_EQ(sv.sk, second.sk);
  EXPECT_NE(second.sk, first.sk);
}

TEST(ReplayLogin, MutatedReplayFailsUserAuth) {
  Fixture s(8);
  const auto card = register_user(s.cs, to_bytes("alice"), to_bytes("pw123"), s.user_rng);
  const auto req = card_login(card, to_bytes("alice"), to_bytes("pw123"), s.server.sid, s.nonce_rng);
  for (Digest M1::*field : {&M1::f_i, &M1::g_i}) {
    M1 bad = replay_login(req.m1);
    (bad.*field)[0] ^= 0x01;
    try {
      cs_authenticate(s.cs, server_forward(s.server, bad, s.nonce_rng).m2, s.nonce_rng);
      FAIL();
    } catch (const ProtocolAbort& e) {
      EXPECT_EQ(e.reason(), AbortReason::UserAuthFailed);
    }
  }
}

TEST(AdversaryKnowledge, LearnsEveryWindow) {
  AdversaryKnowledge k;
  Bytes payload(40);
  for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = static_cast<std::uint8_t>(i);
  k.learn_payload(payload);
  EXPECT_EQ(k.size(), 9u);
  EXPECT_TRUE(k.knows(Digest::from_bytes(ByteView(payload).subspan(8, kDigestLen))));
  EXPECT_FALSE(k.knows(Digest{}));
  k.learn_payload(Bytes(10));
  EXPECT_EQ(k.size(), 9u);
}

}  // namespace
}  // namespace msauth
