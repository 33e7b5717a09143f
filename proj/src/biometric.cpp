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

#include "tfa/biometric.hpp"

#include <bit>
#include <stdexcept>

namespace tfa::bio {

Template::Template(std::size_t nbits) : nbits_(nbits) {
    if (nbits == 0 || nbits % kKeyBits != 0) {
        throw std::invalid_argument("Template: length must be a positive multiple of 256");
    }
    bits_.assign(nbits / 8, 0);
}

Template Template::from_hex(std::string_view hex, std::size_t nbits) {
    return from_packed(tfa::from_hex(hex), nbits);
}

Template Template::from_packed(Bytes packed, std::size_t nbits) {
    Template t(nbits);
    if (packed.size() != t.bits_.size()) throw std::invalid_argument("Template: length mismatch");
    t.bits_ = std::move(packed);
    return t;
}

bool Template::get(std::size_t i) const {
    return (bits_[i / 8] >> (7 - i % 8)) & 1;
}

void Template::set(std::size_t i, bool v) {
    std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - i % 8));
    if (v) {
        bits_[i / 8] |= mask;
    } else {
        bits_[i / 8] &= static_cast<std::uint8_t>(~mask);
    }
}

void Template::flip(std::size_t i) { bits_[i / 8] ^= static_cast<std::uint8_t>(1u << (7 - i % 8)); }

Template operator^(const Template& a, const Template& b) {
    if (a.nbits_ != b.nbits_) throw std::invalid_argument("Template xor: length mismatch");
    Template out(a.nbits_);
    for (std::size_t i = 0; i < a.bits_.size(); ++i) out.bits_[i] = a.bits_[i] ^ b.bits_[i];
    return out;
}

Template random_template(std::size_t nbits, Rng& rng) {
    Bytes packed(nbits / 8);
    for (std::size_t i = 0; i < packed.size(); i += Block32::kSize) {
        Block32 block = rng.next_block();
        std::size_t n = std::min(Block32::kSize, packed.size() - i);
        std::copy(block.bytes().begin(), block.bytes().begin() + n, packed.begin() + i);
    }
    return Template::from_packed(std::move(packed), nbits);
}

std::size_t hamming(const Template& a, const Template& b) {
    Template d = a ^ b;
    std::size_t count = 0;
    for (std::uint8_t byte : d.packed()) count += std::popcount(byte);
    return count;
}

std::size_t noise_tolerance_per_group(std::size_t nbits) {
    return (nbits / kKeyBits - 1) / 2;
}

namespace {

// Repetition-code word of the key: key bit j occupies group j of r bits.
Template encode_key(const Block32& key, std::size_t nbits) {
    std::size_t rep = nbits / kKeyBits;
    Template word(nbits);
    for (std::size_t j = 0; j < kKeyBits; ++j) {
        bool bit = (key.bytes()[j / 8] >> (7 - j % 8)) & 1;
        if (bit) {
            for (std::size_t k = 0; k < rep; ++k) word.set(j * rep + k, true);
        }
    }
    return word;
}

}  // namespace

std::pair<Block32, HelperData> gen(const Template& b, Rng& rng) {
    Block32 key = rng.next_block();
    HelperData helper;
    helper.offset = encode_key(key, b.nbits()) ^ b;
    helper.check = hash({key});
    return {key, helper};
}

Result<Block32> rep(const Template& b2, const HelperData& helper) {
    if (b2.nbits() != helper.offset.nbits()) {
        throw std::invalid_argument("rep: template length mismatch");
    }
    std::size_t nbits = b2.nbits();
    std::size_t rep_factor = nbits / kKeyBits;
    Template word = helper.offset ^ b2;
    Block32 key;
    for (std::size_t j = 0; j < kKeyBits; ++j) {
        std::size_t ones = 0;
        for (std::size_t k = 0; k < rep_factor; ++k) ones += word.get(j * rep_factor + k);
        // majority vote; a tie decodes as 0 and relies on the check digest
        if (ones * 2 > rep_factor) key.bytes()[j / 8] |= static_cast<std::uint8_t>(1u << (7 - j % 8));
    }
    if (hash({key}) != helper.check) return Error::BiometricMismatch;
    return key;
}

Template perturb(const Template& b, std::size_t flips, Rng& rng) {
    if (flips > b.nbits()) throw std::invalid_argument("perturb: more flips than bits");
    Template out = b;
    // partial Fisher-Yates over bit indices
    std::vector<std::uint32_t> idx(b.nbits());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < flips; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(idx.size() - i));
        std::swap(idx[i], idx[j]);
        out.flip(idx[i]);
    }
    return out;
}

}  // namespace tfa::bio
