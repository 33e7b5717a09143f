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

#include <cstdint>
#include <string_view>

#include "tfa/bytes.hpp"

namespace tfa {

/// Deterministic counter-mode PRF stream. Identical seeds produce identical
/// byte streams; never reads OS entropy, so every transcript and attack run
/// is reproducible from its seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {}

    /// Next 32 pseudo-random bytes; advances the counter.
    Block32 next_block();

    std::uint64_t next_u64();

    /// Uniform in [0, n) by rejection sampling. n must be nonzero.
    std::uint64_t uniform_below(std::uint64_t n);

    /// Independent child stream derived from (seed, label). Does not
    /// consume parent state; distinct labels give unrelated streams.
    Rng fork(std::string_view label) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    std::array<std::uint8_t, 32> buf_{};
    std::size_t buf_pos_ = 32;  // exhausted
};

/// Spec-facing alias: one fresh 32-byte secret random string.
inline Block32 random_block(Rng& rng) { return rng.next_block(); }

}  // namespace tfa
