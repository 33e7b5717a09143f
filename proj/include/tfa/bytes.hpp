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

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tfa {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

/// Bytewise exclusive-or. Throws std::invalid_argument on length mismatch.
Bytes xor_bytes(ByteSpan a, ByteSpan b);

std::string to_hex(ByteSpan data);
Bytes from_hex(std::string_view hex);

void append_u32_be(Bytes& out, std::uint32_t v);
void append_u64_be(Bytes& out, std::uint64_t v);
std::uint32_t read_u32_be(const std::uint8_t* p);
std::uint64_t read_u64_be(const std::uint8_t* p);

/// 32-byte opaque string: the universal unit for digests, random strings,
/// symmetric secrets and canonicalized identities.
class Block32 {
public:
    static constexpr std::size_t kSize = 32;

    Block32() : b_{} {}
    explicit Block32(const std::array<std::uint8_t, kSize>& b) : b_(b) {}

    /// Throws std::invalid_argument unless data is exactly 32 bytes.
    static Block32 from_bytes(ByteSpan data);
    static Block32 from_hex(std::string_view hex);

    const std::array<std::uint8_t, kSize>& bytes() const { return b_; }
    std::array<std::uint8_t, kSize>& bytes() { return b_; }
    ByteSpan span() const { return {b_.data(), b_.size()}; }
    Bytes to_vector() const { return Bytes(b_.begin(), b_.end()); }
    std::string hex() const;

    bool is_zero() const;

    friend Block32 operator^(const Block32& a, const Block32& b);
    friend bool operator==(const Block32& a, const Block32& b) = default;
    friend auto operator<=>(const Block32& a, const Block32& b) = default;

private:
    std::array<std::uint8_t, kSize> b_;
};

/// 64-byte string that splits losslessly into two Block32 halves.
class Block64 {
public:
    static constexpr std::size_t kSize = 64;

    Block64() : b_{} {}

    static Block64 from_bytes(ByteSpan data);
    static Block64 concat(const Block32& left, const Block32& right);

    Block32 left() const;
    Block32 right() const;

    const std::array<std::uint8_t, kSize>& bytes() const { return b_; }
    ByteSpan span() const { return {b_.data(), b_.size()}; }
    Bytes to_vector() const { return Bytes(b_.begin(), b_.end()); }
    std::string hex() const;

    friend Block64 operator^(const Block64& a, const Block64& b);
    friend bool operator==(const Block64& a, const Block64& b) = default;
    friend auto operator<=>(const Block64& a, const Block64& b) = default;

private:
    std::array<std::uint8_t, kSize> b_;
};

/// x repeated twice. Widens a 32-byte value so it can be XOR-combined with a
/// 64-byte one; both halves of the result are x.
Block64 expand(const Block32& x);

}  // namespace tfa
