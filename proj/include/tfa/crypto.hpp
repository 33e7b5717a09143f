//------------------------------------------------------------------------------
//
//   Copyright 2026 tfa-lab contributors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#pragma once

#include <initializer_list>
#include <span>
#include <string_view>
#include <variant>

#include "tfa/bytes.hpp"
#include "tfa/result.hpp"
#include "tfa/rng.hpp"

namespace tfa {

// Algorithm identifiers recorded in store-file headers.
inline constexpr std::string_view kHashAlgorithm = "SHA-256";
inline constexpr std::string_view kCipherAlgorithm = "AES-256-CTR+HMAC-SHA-256";

/// Raw SHA-256 over arbitrary bytes.
Block32 sha256(ByteSpan data);

/// A hash input unit: 32 or 64 bytes. A Block64 contributes as its two
/// 32-byte halves, flattened, so h(a ∥ (b∥c)) = h((a∥b) ∥ c) = h(a ∥ b ∥ c)
/// holds bytewise.
using HashField = std::variant<Block32, Block64>;

/// Digest of the raw concatenation of the flattened 32-byte units.
Block32 hash(std::span<const HashField> fields);
Block32 hash(std::initializer_list<HashField> fields);

/// Collapse arbitrary bytes to one 32-byte unit: digest of the 4-byte
/// big-endian length followed by the bytes. Injective up to hash collision.
Block32 canonical_block(ByteSpan data);

/// Canonical 32-byte form of a human-readable identity or password.
/// Throws std::invalid_argument on an empty string.
Block32 canonical_id(std::string_view identity);

/// Fixed-length symmetric key. Lives only inside actor stores; no envelope
/// field ever carries one.
class SymKey {
public:
    static constexpr std::size_t kSize = 32;

    SymKey() : k_{} {}
    static SymKey from_block(const Block32& b) { return SymKey(b); }
    static SymKey from_bytes(ByteSpan data) { return SymKey(Block32::from_bytes(data)); }
    static SymKey generate(Rng& rng) { return SymKey(rng.next_block()); }

    const Block32& block() const { return k_; }
    ByteSpan span() const { return k_.span(); }

    friend bool operator==(const SymKey& a, const SymKey& b) = default;

private:
    explicit SymKey(const Block32& b) : k_(b) {}
    Block32 k_;
};

/// Authenticated ciphertext: encrypt-then-tag. Any wrong key or modified bit
/// fails the tag check on open.
struct SealedBox {
    Bytes nonce;                       // 16 bytes
    Bytes ciphertext;                  // same length as plaintext
    std::array<std::uint8_t, 32> tag;  // integrity tag over nonce ∥ ciphertext

    /// nonce ∥ ciphertext ∥ tag, each with a 4-byte big-endian length prefix.
    Bytes encode() const;
    static Result<SealedBox> decode(ByteSpan data);

    friend bool operator==(const SealedBox& a, const SealedBox& b) = default;
};

SealedBox seal(ByteSpan plaintext, const SymKey& key, Rng& rng);

/// Original plaintext iff the key matches and the box is untampered;
/// Error::DecryptFailure otherwise.
Result<Bytes> open_box(const SealedBox& box, const SymKey& key);

/// Convenience: open and require a 32- or 64-byte plaintext.
Result<Block32> open_block32(const SealedBox& box, const SymKey& key);
Result<Block64> open_block64(const SealedBox& box, const SymKey& key);

/// Deterministically normalize a biometric key to cipher-key size.
SymKey kdf_biokey(const Block32& bio_key);

}  // namespace tfa
