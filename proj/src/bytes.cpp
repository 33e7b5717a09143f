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

#include "tfa/bytes.hpp"

#include <algorithm>
#include <stdexcept>

namespace tfa {

Bytes xor_bytes(ByteSpan a, ByteSpan b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("xor_bytes: length mismatch");
    }
    Bytes out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

std::string to_hex(ByteSpan data) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t byte : data) {
        out.push_back(digits[byte >> 4]);
        out.push_back(digits[byte & 0x0f]);
    }
    return out;
}

namespace {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("from_hex: odd length");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_nibble(hex[2 * i]);
        int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("from_hex: bad digit");
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

void append_u32_be(Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void append_u64_be(Bytes& out, std::uint64_t v) {
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (i * 8)));
}

std::uint32_t read_u32_be(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) << 24 | static_cast<std::uint32_t>(p[1]) << 16 |
           static_cast<std::uint32_t>(p[2]) << 8 | static_cast<std::uint32_t>(p[3]);
}

std::uint64_t read_u64_be(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | p[i];
    return v;
}

Block32 Block32::from_bytes(ByteSpan data) {
    if (data.size() != kSize) throw std::invalid_argument("Block32: need exactly 32 bytes");
    Block32 b;
    std::copy(data.begin(), data.end(), b.b_.begin());
    return b;
}

Block32 Block32::from_hex(std::string_view hex) { return from_bytes(tfa::from_hex(hex)); }

std::string Block32::hex() const { return to_hex(span()); }

bool Block32::is_zero() const {
    return std::all_of(b_.begin(), b_.end(), [](std::uint8_t x) { return x == 0; });
}

Block32 operator^(const Block32& a, const Block32& b) {
    Block32 out;
    for (std::size_t i = 0; i < Block32::kSize; ++i) out.b_[i] = a.b_[i] ^ b.b_[i];
    return out;
}

Block64 Block64::from_bytes(ByteSpan data) {
    if (data.size() != kSize) throw std::invalid_argument("Block64: need exactly 64 bytes");
    Block64 b;
    std::copy(data.begin(), data.end(), b.b_.begin());
    return b;
}

Block64 Block64::concat(const Block32& left, const Block32& right) {
    Block64 b;
    std::copy(left.bytes().begin(), left.bytes().end(), b.b_.begin());
    std::copy(right.bytes().begin(), right.bytes().end(), b.b_.begin() + Block32::kSize);
    return b;
}

Block32 Block64::left() const { return Block32::from_bytes({b_.data(), Block32::kSize}); }

Block32 Block64::right() const {
    return Block32::from_bytes({b_.data() + Block32::kSize, Block32::kSize});
}

std::string Block64::hex() const { return to_hex(span()); }

Block64 operator^(const Block64& a, const Block64& b) {
    Block64 out;
    for (std::size_t i = 0; i < Block64::kSize; ++i) out.b_[i] = a.b_[i] ^ b.b_[i];
    return out;
}

Block64 expand(const Block32& x) { return Block64::concat(x, x); }

}  // namespace tfa
