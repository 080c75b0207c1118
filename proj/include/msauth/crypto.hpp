#pragma once

// Byte-level primitives shared by every participant: the hash h(.), XOR on
// digests, length-prefixed concatenation and the labeled seeded block stream.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace msauth {

/// Output length of h(.); nonces, b and all XOR operands share it.
inline constexpr std::size_t kDigestLen = 32;

/// Identifier written into transcript headers.
inline constexpr std::string_view kHashName = "SHA-256";

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Fixed-length octet string produced by h(.). Also used for every nonce.
class Digest {
 public:
  Digest() : bytes_{} {}
  explicit Digest(const std::array<std::uint8_t, kDigestLen>& bytes) : bytes_(bytes) {}

  /// Throws std::invalid_argument unless `bytes.size() == kDigestLen`.
  static Digest from_bytes(ByteView bytes);
  /// Throws std::invalid_argument on bad hex or wrong length.
  static Digest from_hex(std::string_view hex);

  ByteView view() const { return {bytes_.data(), bytes_.size()}; }
  operator ByteView() const { return view(); }  // NOLINT(google-explicit-constructor)

  const std::uint8_t* data() const { return bytes_.data(); }
  std::uint8_t* data() { return bytes_.data(); }
  static constexpr std::size_t size() { return kDigestLen; }
  std::uint8_t operator[](std::size_t i) const { return bytes_[i]; }
  std::uint8_t& operator[](std::size_t i) { return bytes_[i]; }

  bool is_zero() const;
  std::string hex() const;

  friend bool operator==(const Digest&, const Digest&) = default;
  friend auto operator<=>(const Digest&, const Digest&) = default;

 private:
  std::array<std::uint8_t, kDigestLen> bytes_;
};

/// h(input), SHA-256.
Digest hash(ByteView input);

/// Byte-wise XOR of two digests.
Digest xor_digest(const Digest& a, const Digest& b);
inline Digest operator^(const Digest& a, const Digest& b) { return xor_digest(a, b); }

/// Byte-wise XOR of raw buffers. Throws std::invalid_argument if the
/// lengths differ; there is no truncation.
Bytes xor_bytes(ByteView a, ByteView b);

/// a || b || ... encoded as a sequence of (4-octet big-endian length, octets)
/// records. The encoding is injective over part lists.
Bytes concat(std::initializer_list<ByteView> parts);
Bytes concat(std::span<const ByteView> parts);

/// h(a || b || ...), the shape nearly every protocol formula takes.
inline Digest hash_concat(std::initializer_list<ByteView> parts) { return hash(concat(parts)); }

Bytes to_bytes(std::string_view text);
std::string to_text(ByteView bytes);

std::string to_hex(ByteView bytes);
/// Lowercase or uppercase accepted. Throws std::invalid_argument on odd
/// length or a non-hex character.
Bytes from_hex(std::string_view hex);

/// Deterministic pseudo-random block stream. Block i of stream (seed, label)
/// is SHA-256("msauth-stream" || seed || label || i) in concat encoding, so
/// streams with different labels are independent and the same (seed, label,
/// index) always yields the same block.
class BlockRng {
 public:
  BlockRng(std::uint64_t seed, std::string label);

  Digest next();

  std::uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }
  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::string label_;
  std::uint64_t counter_ = 0;
};

/// One uniformly pseudo-random block.
inline Digest random_block(BlockRng& rng) { return rng.next(); }

}  // namespace msauth
