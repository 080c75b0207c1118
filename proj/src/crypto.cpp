#include "msauth/crypto.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <stdexcept>

namespace msauth {

namespace {

void put_u32_be(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

Bytes u64_be(std::uint64_t v) {
  Bytes out(8);
  for (int i = 7; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
    v >>= 8;
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Digest Digest::from_bytes(ByteView bytes) {
  if (bytes.size() != kDigestLen) {
    throw std::invalid_argument("digest must be " + std::to_string(kDigestLen) + " octets, got " +
                                std::to_string(bytes.size()));
  }
  Digest d;
  std::copy(bytes.begin(), bytes.end(), d.bytes_.begin());
  return d;
}

Digest Digest::from_hex(std::string_view hex) { return from_bytes(msauth::from_hex(hex)); }

bool Digest::is_zero() const {
  return std::all_of(bytes_.begin(), bytes_.end(), [](std::uint8_t b) { return b == 0; });
}

std::string Digest::hex() const { return to_hex(view()); }

Digest hash(ByteView input) {
  std::array<std::uint8_t, kDigestLen> out{};
  unsigned int len = 0;
  if (EVP_Digest(input.data(), input.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != kDigestLen) {
    throw std::runtime_error("EVP_Digest(SHA-256) failed");
  }
  return Digest(out);
}

Digest xor_digest(const Digest& a, const Digest& b) {
  Digest out;
  for (std::size_t i = 0; i < kDigestLen; ++i) out[i] = a[i] ^ b[i];
  return out;
}

Bytes xor_bytes(ByteView a, ByteView b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("xor operands differ in length: " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
  }
  Bytes out(a.size());
  std::transform(a.begin(), a.end(), b.begin(), out.begin(),
                 [](std::uint8_t x, std::uint8_t y) { return static_cast<std::uint8_t>(x ^ y); });
  return out;
}

Bytes concat(std::span<const ByteView> parts) {
  std::size_t total = 0;
  for (const auto& p : parts) total += 4 + p.size();
  Bytes out;
  out.reserve(total);
  for (const auto& p : parts) {
    if (p.size() > 0xffffffffu) throw std::length_error("concat part exceeds 2^32-1 octets");
    put_u32_be(out, static_cast<std::uint32_t>(p.size()));
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

Bytes concat(std::initializer_list<ByteView> parts) {
  return concat(std::span<const ByteView>(parts.begin(), parts.size()));
}

Bytes to_bytes(std::string_view text) { return Bytes(text.begin(), text.end()); }

std::string to_text(ByteView bytes) { return std::string(bytes.begin(), bytes.end()); }

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex character");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

BlockRng::BlockRng(std::uint64_t seed, std::string label) : seed_(seed), label_(std::move(label)) {}

Digest BlockRng::next() {
  static const Bytes kDomain = to_bytes("msauth-stream");
  const Bytes seed = u64_be(seed_);
  const Bytes index = u64_be(counter_++);
  const Bytes label = to_bytes(label_);
  return hash_concat({kDomain, seed, label, index});
}

}  // namespace msauth
