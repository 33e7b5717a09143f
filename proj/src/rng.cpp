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

#include "tfa/rng.hpp"

#include <stdexcept>

#include "tfa/crypto.hpp"

namespace tfa {

Block32 Rng::next_block() {
    Bytes input;
    input.reserve(16);
    append_u64_be(input, seed_);
    append_u64_be(input, counter_++);
    return sha256(input);
}

std::uint64_t Rng::next_u64() {
    if (buf_pos_ + 8 > buf_.size()) {
        buf_ = next_block().bytes();
        buf_pos_ = 0;
    }
    std::uint64_t v = read_u64_be(buf_.data() + buf_pos_);
    buf_pos_ += 8;
    return v;
}

std::uint64_t Rng::uniform_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be nonzero");
    // rejection sampling over the largest multiple of n below 2^64
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
        std::uint64_t v = next_u64();
        if (v < limit) return v % n;
    }
}

Rng Rng::fork(std::string_view label) const {
    Bytes input;
    append_u64_be(input, seed_);
    append_u32_be(input, static_cast<std::uint32_t>(label.size()));
    input.insert(input.end(), label.begin(), label.end());
    Block32 digest = sha256(input);
    return Rng(read_u64_be(digest.bytes().data()));
}

}  // namespace tfa
