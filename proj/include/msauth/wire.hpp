#pragma once

// Octet encodings of the channel messages. Digest fields are written raw in
// declaration order; the only variable-length field (SID_j in M2) carries a
// 4-octet big-endian length prefix. The message kind is simulator metadata
// and is never part of the payload.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "msauth/crypto.hpp"
#include "msauth/protocol.hpp"

namespace msauth {

enum class MessageKind { RegistrationRequest, CardIssue, M1, M2, M3, M4 };

std::string_view to_string(MessageKind kind);
std::optional<MessageKind> message_kind_from_string(std::string_view name);

/// Registration request sent over the secure channel: ID_i and A_i.
struct RegistrationRequest {
  Bytes id;
  Digest a_i;

  friend bool operator==(const RegistrationRequest&, const RegistrationRequest&) = default;
};

Bytes encode(const RegistrationRequest& msg);
Bytes encode(const IssuedCard& msg);
Bytes encode(const M1& msg);
Bytes encode(const M2& msg);
Bytes encode(const M3& msg);
Bytes encode(const M4& msg);

/// Each decoder returns nullopt unless the payload is exactly one
/// well-formed message of that kind.
std::optional<RegistrationRequest> decode_registration_request(ByteView payload);
std::optional<IssuedCard> decode_card_issue(ByteView payload);
std::optional<M1> decode_m1(ByteView payload);
std::optional<M2> decode_m2(ByteView payload);
std::optional<M3> decode_m3(ByteView payload);
std::optional<M4> decode_m4(ByteView payload);

/// Location of one named field inside an encoded payload.
struct FieldSpan {
  std::string name;
  std::size_t offset;
  std::size_t length;
};

/// Field layout of `payload`, or nullopt if it does not decode as `kind`.
/// Length prefixes are not listed as fields.
std::optional<std::vector<FieldSpan>> field_layout(MessageKind kind, ByteView payload);

/// Field names of a message kind in wire order, e.g. {"f_i","g_i","p_ij","cid_i"}.
std::vector<std::string> field_names(MessageKind kind);

}  // namespace msauth
