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

#include <filesystem>
#include <stdexcept>
#include <string>

#include "tfa/biometric.hpp"
#include "tfa/bytes.hpp"
#include "tfa/crypto.hpp"
#include "tfa/result.hpp"

namespace tfa::store {

/// Store-file kind discriminator, recorded after the versioned header.
enum class Kind : std::uint8_t {
    Server = 1,
    Rc = 2,
    User = 3,
    Card = 4,
    LiCard = 5,
};

struct TruncatedStore : std::runtime_error {
    TruncatedStore() : std::runtime_error("store: truncated or malformed record") {}
};

/// Sequential record writer: every field is length-prefixed, files are
/// byte-stable for equal inputs.
class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u32(std::uint32_t v) { append_u32_be(buf_, v); }
    void u64(std::uint64_t v) { append_u64_be(buf_, v); }
    void bytes(ByteSpan data);
    void str(std::string_view s);
    void block32(const Block32& b) { bytes(b.span()); }
    void block64(const Block64& b) { bytes(b.span()); }
    void box(const SealedBox& b) { bytes(b.encode()); }
    void helper(const bio::HelperData& h);

    const Bytes& out() const { return buf_; }
    Bytes take() { return std::move(buf_); }

private:
    Bytes buf_;
};

/// Sequential reader over one store body; throws TruncatedStore on any
/// malformed record.
class Reader {
public:
    explicit Reader(ByteSpan data) : data_(data) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    Bytes bytes();
    std::string str();
    Block32 block32() { return Block32::from_bytes(checked(bytes(), Block32::kSize)); }
    Block64 block64() { return Block64::from_bytes(checked(bytes(), Block64::kSize)); }
    SealedBox box();
    bio::HelperData helper();

    bool at_end() const { return pos_ == data_.size(); }
    std::size_t pos() const { return pos_; }

private:
    static Bytes checked(Bytes b, std::size_t want) {
        if (b.size() != want) throw TruncatedStore{};
        return b;
    }
    void need(std::size_t n) const {
        if (pos_ + n > data_.size()) throw TruncatedStore{};
    }
    ByteSpan data_;
    std::size_t pos_ = 0;
};

/// Versioned header (format magic, version, hash and cipher identifiers,
/// kind byte) wrapped around a store body.
Bytes frame(Kind kind, ByteSpan body);

/// Validates the header and algorithm identifiers; returns the kind and body.
Result<std::pair<Kind, Bytes>> unframe(ByteSpan file);

Result<Bytes> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, ByteSpan data);

}  // namespace tfa::store
