#include "msauth/wire.hpp"

#include <array>

namespace msauth {

namespace {

constexpr std::array<std::pair<MessageKind, std::string_view>, 6> kKindNames{{
    {MessageKind::RegistrationRequest, "RegistrationRequest"},
    {MessageKind::CardIssue, "CardIssue"},
    {MessageKind::M1, "M1"},
    {MessageKind::M2, "M2"},
    {MessageKind::M3, "M3"},
    {MessageKind::M4, "M4"},
}};

constexpr std::size_t kM1Len = 4 * kDigestLen;

void append(Bytes& out, ByteView part) { out.insert(out.end(), part.begin(), part.end()); }

void append_prefixed(Bytes& out, ByteView part) {
  const auto n = static_cast<std::uint32_t>(part.size());
  out.push_back(static_cast<std::uint8_t>(n >> 24));
  out.push_back(static_cast<std::uint8_t>(n >> 16));
  out.push_back(static_cast<std::uint8_t>(n >> 8));
  out.push_back(static_cast<std::uint8_t>(n));
  append(out, part);
}

// Sequential reader; every read fails once the cursor would overrun.
class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  std::optional<Digest> digest() {
    if (data_.size() - pos_ < kDigestLen) return std::nullopt;
    auto d = Digest::from_bytes(data_.subspan(pos_, kDigestLen));
    pos_ += kDigestLen;
    return d;
  }

  std::optional<Bytes> prefixed() {
    if (data_.size() - pos_ < 4) return std::nullopt;
    std::size_t n = 0;
    for (int i = 0; i < 4; ++i) n = (n << 8) | data_[pos_ + static_cast<std::size_t>(i)];
    pos_ += 4;
    if (data_.size() - pos_ < n) return std::nullopt;
    Bytes out(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
              data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return out;
  }

  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ == data_.size(); }

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

std::vector<FieldSpan> fixed_layout(std::initializer_list<const char*> names, std::size_t base = 0) {
  std::vector<FieldSpan> out;
  std::size_t off = base;
  for (const char* n : names) {
    out.push_back({n, off, kDigestLen});
    off += kDigestLen;
  }
  return out;
}

}  // namespace

std::string_view to_string(MessageKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

std::optional<MessageKind> message_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

Bytes encode(const RegistrationRequest& msg) {
  Bytes out;
  append_prefixed(out, msg.id);
  append(out, msg.a_i);
  return out;
}

Bytes encode(const IssuedCard& msg) {
  Bytes out;
  for (const Digest* d : {&msg.c_i, &msg.d_i, &msg.e_i, &msg.h_y}) append(out, *d);
  return out;
}

Bytes encode(const M1& msg) {
  Bytes out;
  for (const Digest* d : {&msg.f_i, &msg.g_i, &msg.p_ij, &msg.cid_i}) append(out, *d);
  return out;
}

Bytes encode(const M2& msg) {
  Bytes out = encode(msg.m1);
  append_prefixed(out, msg.sid);
  append(out, msg.k_i);
  append(out, msg.m_i);
  return out;
}

Bytes encode(const M3& msg) {
  Bytes out;
  for (const Digest* d : {&msg.q_i, &msg.r_i, &msg.v_i, &msg.t_i}) append(out, *d);
  return out;
}

Bytes encode(const M4& msg) {
  Bytes out;
  append(out, msg.v_i);
  append(out, msg.t_i);
  return out;
}

std::optional<RegistrationRequest> decode_registration_request(ByteView payload) {
  Reader r(payload);
  auto id = r.prefixed();
  if (!id || id->empty()) return std::nullopt;
  auto a = r.digest();
  if (!a || !r.done()) return std::nullopt;
  return RegistrationRequest{std::move(*id), *a};
}

std::optional<IssuedCard> decode_card_issue(ByteView payload) {
  if (payload.size() != 4 * kDigestLen) return std::nullopt;
  Reader r(payload);
  return IssuedCard{*r.digest(), *r.digest(), *r.digest(), *r.digest()};
}

std::optional<M1> decode_m1(ByteView payload) {
  if (payload.size() != kM1Len) return std::nullopt;
  Reader r(payload);
  M1 m;
  m.f_i = *r.digest();
  m.g_i = *r.digest();
  m.p_ij = *r.digest();
  m.cid_i = *r.digest();
  return m;
}

std::optional<M2> decode_m2(ByteView payload) {
  if (payload.size() < kM1Len) return std::nullopt;
  M2 m;
  m.m1 = *decode_m1(payload.first(kM1Len));
  Reader r(payload.subspan(kM1Len));
  auto sid = r.prefixed();
  if (!sid || sid->empty()) return std::nullopt;
  auto k = r.digest();
  auto mi = r.digest();
  if (!k || !mi || !r.done()) return std::nullopt;
  m.sid = std::move(*sid);
  m.k_i = *k;
  m.m_i = *mi;
  return m;
}

std::optional<M3> decode_m3(ByteView payload) {
  if (payload.size() != 4 * kDigestLen) return std::nullopt;
  Reader r(payload);
  M3 m;
  m.q_i = *r.digest();
  m.r_i = *r.digest();
  m.v_i = *r.digest();
  m.t_i = *r.digest();
  return m;
}

std::optional<M4> decode_m4(ByteView payload) {
  if (payload.size() != 2 * kDigestLen) return std::nullopt;
  Reader r(payload);
  M4 m;
  m.v_i = *r.digest();
  m.t_i = *r.digest();
  return m;
}

std::optional<std::vector<FieldSpan>> field_layout(MessageKind kind, ByteView payload) {
  switch (kind) {
    case MessageKind::RegistrationRequest: {
      auto msg = decode_registration_request(payload);
      if (!msg) return std::nullopt;
      return std::vector<FieldSpan>{{"id", 4, msg->id.size()},
                                    {"a_i", 4 + msg->id.size(), kDigestLen}};
    }
    case MessageKind::CardIssue:
      if (!decode_card_issue(payload)) return std::nullopt;
      return fixed_layout({"c_i", "d_i", "e_i", "h_y"});
    case MessageKind::M1:
      if (!decode_m1(payload)) return std::nullopt;
      return fixed_layout({"f_i", "g_i", "p_ij", "cid_i"});
    case MessageKind::M2: {
      auto msg = decode_m2(payload);
      if (!msg) return std::nullopt;
      auto out = fixed_layout({"f_i", "g_i", "p_ij", "cid_i"});
      const std::size_t sid_off = kM1Len + 4;
      out.push_back({"sid", sid_off, msg->sid.size()});
      out.push_back({"k_i", sid_off + msg->sid.size(), kDigestLen});
      out.push_back({"m_i", sid_off + msg->sid.size() + kDigestLen, kDigestLen});
      return out;
    }
    case MessageKind::M3:
      if (!decode_m3(payload)) return std::nullopt;
      return fixed_layout({"q_i", "r_i", "v_i", "t_i"});
    case MessageKind::M4:
      if (!decode_m4(payload)) return std::nullopt;
      return fixed_layout({"v_i", "t_i"});
  }
  return std::nullopt;
}

std::vector<std::string> field_names(MessageKind kind) {
  switch (kind) {
    case MessageKind::RegistrationRequest:
      return {"id", "a_i"};
    case MessageKind::CardIssue:
      return {"c_i", "d_i", "e_i", "h_y"};
    case MessageKind::M1:
      return {"f_i", "g_i", "p_ij", "cid_i"};
    case MessageKind::M2:
      return {"f_i", "g_i", "p_ij", "cid_i", "sid", "k_i", "m_i"};
    case MessageKind::M3:
      return {"q_i", "r_i", "v_i", "t_i"};
    case MessageKind::M4:
      return {"v_i", "t_i"};
  }
  return {};
}

}  // namespace msauth
