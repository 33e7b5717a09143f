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

#include "tfa/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <cstring>
#include <memory>
#include <stdexcept>

namespace tfa {

const char* error_name(Error e) {
    switch (e) {
        case Error::None: return "None";
        case Error::DecryptFailure: return "DecryptFailure";
        case Error::BiometricMismatch: return "BiometricMismatch";
        case Error::PasswordMismatch: return "PasswordMismatch";
        case Error::AuthFailure: return "AuthFailure";
        case Error::IllegalStat: return "IllegalStat";
        case Error::UnknownPrincipal: return "UnknownPrincipal";
        case Error::VerificationFailure: return "VerificationFailure";
        case Error::NotFound: return "NotFound";
        case Error::ParseError: return "ParseError";
        case Error::IoError: return "IoError";
    }
    return "Unknown";
}

Block32 sha256(ByteSpan data) {
    std::array<std::uint8_t, 32> out;
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size()) {
        throw std::runtime_error("sha256: EVP_Digest failed");
    }
    return Block32(out);
}

Block32 hash(std::span<const HashField> fields) {
    Bytes cat;
    cat.reserve(fields.size() * 64);
    for (const HashField& f : fields) {
        if (const auto* b32 = std::get_if<Block32>(&f)) {
            cat.insert(cat.end(), b32->bytes().begin(), b32->bytes().end());
        } else {
            const auto& b64 = std::get<Block64>(f);
            cat.insert(cat.end(), b64.bytes().begin(), b64.bytes().end());
        }
    }
    return sha256(cat);
}

Block32 hash(std::initializer_list<HashField> fields) {
    return hash(std::span<const HashField>(fields.begin(), fields.size()));
}

Block32 canonical_block(ByteSpan data) {
    Bytes prefixed;
    prefixed.reserve(4 + data.size());
    append_u32_be(prefixed, static_cast<std::uint32_t>(data.size()));
    prefixed.insert(prefixed.end(), data.begin(), data.end());
    return sha256(prefixed);
}

Block32 canonical_id(std::string_view identity) {
    if (identity.empty()) throw std::invalid_argument("canonical_id: empty identity");
    return canonical_block(
        ByteSpan(reinterpret_cast<const std::uint8_t*>(identity.data()), identity.size()));
}

namespace {

constexpr std::size_t kNonceSize = 16;

// Encryption and tag subkeys derived from the box key by domain separation.
SymKey subkey(const SymKey& key, std::uint8_t domain) {
    Bytes input(key.span().begin(), key.span().end());
    input.push_back(domain);
    return SymKey::from_block(sha256(input));
}

std::array<std::uint8_t, 32> hmac_sha256(const SymKey& key, ByteSpan data) {
    std::array<std::uint8_t, 32> out;
    unsigned int len = 0;
    if (HMAC(EVP_sha256(), key.span().data(), static_cast<int>(key.span().size()), data.data(),
             data.size(), out.data(), &len) == nullptr ||
        len != out.size()) {
        throw std::runtime_error("hmac_sha256 failed");
    }
    return out;
}

std::array<std::uint8_t, 32> box_tag(const SymKey& mac_key, ByteSpan nonce, ByteSpan ciphertext) {
    Bytes data;
    data.reserve(nonce.size() + ciphertext.size());
    data.insert(data.end(), nonce.begin(), nonce.end());
    data.insert(data.end(), ciphertext.begin(), ciphertext.end());
    return hmac_sha256(mac_key, data);
}

Bytes aes256_ctr(ByteSpan input, const SymKey& key, ByteSpan nonce) {
    std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)> ctx(EVP_CIPHER_CTX_new(),
                                                                        EVP_CIPHER_CTX_free);
    if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
    if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_ctr(), nullptr, key.span().data(),
                           nonce.data()) != 1) {
        throw std::runtime_error("EVP_EncryptInit_ex failed");
    }
    Bytes out(input.size());
    int len = 0;
    if (!input.empty() &&
        EVP_EncryptUpdate(ctx.get(), out.data(), &len, input.data(),
                          static_cast<int>(input.size())) != 1) {
        throw std::runtime_error("EVP_EncryptUpdate failed");
    }
    int fin = 0;
    if (EVP_EncryptFinal_ex(ctx.get(), out.data() + len, &fin) != 1) {
        throw std::runtime_error("EVP_EncryptFinal_ex failed");
    }
    return out;
}

bool equal_constant_time(ByteSpan a, ByteSpan b) {
    if (a.size() != b.size()) return false;
    std::uint8_t diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diff |= a[i] ^ b[i];
    return diff == 0;
}

}  // namespace

Bytes SealedBox::encode() const {
    Bytes out;
    out.reserve(12 + nonce.size() + ciphertext.size() + tag.size());
    append_u32_be(out, static_cast<std::uint32_t>(nonce.size()));
    out.insert(out.end(), nonce.begin(), nonce.end());
    append_u32_be(out, static_cast<std::uint32_t>(ciphertext.size()));
    out.insert(out.end(), ciphertext.begin(), ciphertext.end());
    append_u32_be(out, static_cast<std::uint32_t>(tag.size()));
    out.insert(out.end(), tag.begin(), tag.end());
    return out;
}

Result<SealedBox> SealedBox::decode(ByteSpan data) {
    std::size_t pos = 0;
    auto read_chunk = [&](Bytes& dst) -> bool {
        if (pos + 4 > data.size()) return false;
        std::uint32_t len = read_u32_be(data.data() + pos);
        pos += 4;
        if (pos + len > data.size()) return false;
        dst.assign(data.begin() + pos, data.begin() + pos + len);
        pos += len;
        return true;
    };
    SealedBox box;
    Bytes tag_bytes;
    if (!read_chunk(box.nonce) || !read_chunk(box.ciphertext) || !read_chunk(tag_bytes)) {
        return Error::ParseError;
    }
    if (tag_bytes.size() != box.tag.size() || pos != data.size()) return Error::ParseError;
    std::memcpy(box.tag.data(), tag_bytes.data(), tag_bytes.size());
    return box;
}

SealedBox seal(ByteSpan plaintext, const SymKey& key, Rng& rng) {
    SealedBox box;
    Block32 nonce_block = rng.next_block();
    box.nonce.assign(nonce_block.bytes().begin(), nonce_block.bytes().begin() + kNonceSize);
    box.ciphertext = aes256_ctr(plaintext, subkey(key, 0x45), box.nonce);
    box.tag = box_tag(subkey(key, 0x4d), box.nonce, box.ciphertext);
    return box;
}

Result<Bytes> open_box(const SealedBox& box, const SymKey& key) {
    if (box.nonce.size() != kNonceSize) return Error::DecryptFailure;
    auto expected = box_tag(subkey(key, 0x4d), box.nonce, box.ciphertext);
    if (!equal_constant_time(expected, box.tag)) return Error::DecryptFailure;
    return aes256_ctr(box.ciphertext, subkey(key, 0x45), box.nonce);
}

Result<Block32> open_block32(const SealedBox& box, const SymKey& key) {
    auto plain = open_box(box, key);
    if (!plain) return plain.error();
    if (plain.value().size() != Block32::kSize) return Error::DecryptFailure;
    return Block32::from_bytes(plain.value());
}

Result<Block64> open_block64(const SealedBox& box, const SymKey& key) {
    auto plain = open_box(box, key);
    if (!plain) return plain.error();
    if (plain.value().size() != Block64::kSize) return Error::DecryptFailure;
    return Block64::from_bytes(plain.value());
}

SymKey kdf_biokey(const Block32& bio_key) {
    Bytes input;
    input.reserve(Block32::kSize + 1);
    input.insert(input.end(), bio_key.bytes().begin(), bio_key.bytes().end());
    input.push_back(0x42);
    return SymKey::from_block(sha256(input));
}

}  // namespace tfa
