#include <gtest/gtest.h>

#include <random>

#include "msauth/wire.hpp"

namespace msauth {
namespace {

Digest rd(std::mt19937_64& rng) {
  Bytes b(kDigestLen);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return Digest::from_bytes(b);
}

TEST(Wire, RandomMessagesRoundTrip) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    const M1 m1{rd(rng), rd(rng), rd(rng), rd(rng)};
    Bytes sid(1 + rng() % 16);
    for (auto& b : sid) b = static_cast<std::uint8_t>(rng());
    const M2 m2{m1, sid, rd(rng), rd(rng)};
    const M3 m3{rd(rng), rd(rng), rd(rng), rd(rng)};
    const M4 m4{rd(rng), rd(rng)};
    ASSERT_EQ(decode_m1(encode(m1)), m1);
    ASSERT_EQ(decode_m2(encode(m2)), m2);
    ASSERT_EQ(decode_m3(encode(m3)), m3);
    ASSERT_EQ(decode_m4(encode(m4)), m4);
    const RegistrationRequest req{sid, rd(rng)};
    ASSERT_EQ(decode_registration_request(encode(req)), req);
  }
}

TEST(Wire, RejectsWrongLengths) {
  EXPECT_FALSE(decode_m1(Bytes(4 * kDigestLen - 1)));
  EXPECT_FALSE(decode_m1(Bytes(4 * kDigestLen + 1)));
  EXPECT_FALSE(decode_m3(Bytes(3 * kDigestLen)));
  EXPECT_FALSE(decode_m4(Bytes(2 * kDigestLen + 1)));
  EXPECT_FALSE(decode_card_issue(Bytes(kDigestLen)));

  const M2 m2{M1{}, to_bytes("S_1"), Digest{}, Digest{}};
  Bytes enc = encode(m2);
  enc.push_back(0);
  EXPECT_FALSE(decode_m2(enc));
  enc.resize(enc.size() - 2);
  EXPECT_FALSE(decode_m2(enc));
  // An empty SID is not a valid server identity.
  EXPECT_FALSE(decode_m2(encode(M2{M1{}, {}, Digest{}, Digest{}})));
}

TEST(Wire, FieldLayoutLocatesEveryField) {
  std::mt19937_64 rng(22);
  const M2 m2{M1{rd(rng), rd(rng), rd(rng), rd(rng)}, to_bytes("server-7"), rd(rng), rd(rng)};
  const Bytes enc = encode(m2);
  const auto layout = field_layout(MessageKind::M2, enc);
  ASSERT_TRUE(layout);
  ASSERT_EQ(layout->size(), field_names(MessageKind::M2).size());
  auto slice = [&](const FieldSpan& f) {
    return Bytes(enc.begin() + static_cast<std::ptrdiff_t>(f.offset),
                 enc.begin() + static_cast<std::ptrdiff_t>(f.offset + f.length));
  };
  auto as_bytes = [](const Digest& d) { return Bytes(d.view().begin(), d.view().end()); };
  EXPECT_EQ(slice((*layout)[1]), as_bytes(m2.m1.g_i));
  EXPECT_EQ(slice((*layout)[4]), m2.sid);
  EXPECT_EQ(slice((*layout)[5]), as_bytes(m2.k_i));
  EXPECT_EQ(slice((*layout)[6]), as_bytes(m2.m_i));
  EXPECT_FALSE(field_layout(MessageKind::M3, enc));
}

TEST(Wire, KindNames) {
  for (auto k : {MessageKind::RegistrationRequest, MessageKind::CardIssue, MessageKind::M1,
                 MessageKind::M2, MessageKind::M3, MessageKind::M4}) {
    EXPECT_EQ(message_kind_from_string(to_string(k)), k);
  }
  EXPECT_FALSE(message_kind_from_string("M5"));
}

}  // namespace
}  // namespace msauth
