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

#include "tfa/store_io.hpp"

#include <fstream>

namespace tfa::store {

namespace {

constexpr std::string_view kMagic = "TFASTORE";
constexpr std::uint32_t kVersion = 1;

}  // namespace

void Writer::bytes(ByteSpan data) {
    u32(static_cast<std::uint32_t>(data.size()));
    buf_.insert(buf_.end(), data.begin(), data.end());
}

void Writer::str(std::string_view s) {
    bytes(ByteSpan(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

void Writer::helper(const bio::HelperData& h) {
    u32(static_cast<std::uint32_t>(h.offset.nbits()));
    bytes(h.offset.packed());
    block32(h.check);
}

std::uint8_t Reader::u8() {
    need(1);
    return data_[pos_++];
}

std::uint32_t Reader::u32() {
    need(4);
    std::uint32_t v = read_u32_be(data_.data() + pos_);
    pos_ += 4;
    return v;
}

std::uint64_t Reader::u64() {
    need(8);
    std::uint64_t v = read_u64_be(data_.data() + pos_);
    pos_ += 8;
    return v;
}

Bytes Reader::bytes() {
    std::uint32_t len = u32();
    need(len);
    Bytes out(data_.begin() + pos_, data_.begin() + pos_ + len);
    pos_ += len;
    return out;
}

std::string Reader::str() {
    Bytes raw = bytes();
    return std::string(raw.begin(), raw.end());
}

SealedBox Reader::box() {
    auto parsed = SealedBox::decode(bytes());
    if (!parsed.ok()) throw TruncatedStore{};
    return parsed.value();
}

bio::HelperData Reader::helper() {
    std::uint32_t nbits = u32();
    Bytes packed = bytes();
    bio::HelperData h;
    h.offset = bio::Template::from_packed(std::move(packed), nbits);
    h.check = block32();
    return h;
}

Bytes frame(Kind kind, ByteSpan body) {
    Writer w;
    w.str(kMagic);
    w.u32(kVersion);
    w.str(kHashAlgorithm);
    w.str(kCipherAlgorithm);
    w.u8(static_cast<std::uint8_t>(kind));
    Bytes out = w.take();
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

Result<std::pair<Kind, Bytes>> unframe(ByteSpan file) {
    try {
        Reader r(file);
        if (r.str() != kMagic) return Error::ParseError;
        if (r.u32() != kVersion) return Error::ParseError;
        if (r.str() != kHashAlgorithm) return Error::ParseError;
        if (r.str() != kCipherAlgorithm) return Error::ParseError;
        Kind kind = static_cast<Kind>(r.u8());
        Bytes body(file.begin() + r.pos(), file.end());
        return std::pair{kind, std::move(body)};
    } catch (const TruncatedStore&) {
        return Error::ParseError;
    }
}

Result<Bytes> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return Error::IoError;
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

void write_file(const std::filesystem::path& path, ByteSpan data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("store: cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("store: write failed: " + path.string());
}

}  // namespace tfa::store
