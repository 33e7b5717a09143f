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

#include <cstddef>

#include "tfa/bytes.hpp"
#include "tfa/crypto.hpp"
#include "tfa/result.hpp"
#include "tfa/rng.hpp"

namespace tfa::bio {

constexpr std::size_t kKeyBits = 256;
constexpr std::size_t kDefaultTemplateBits = 1024;

/// Simulated biometric template: a fixed-length bit vector. Real feature
/// extraction is out of scope; noise between imprints is modeled by
/// flipping bits.
class Template {
public:
    Template() = default;

    /// All-zero template of the given length. Length must be a positive
    /// multiple of kKeyBits (so each key bit maps to a whole group).
    explicit Template(std::size_t nbits);

    static Template from_hex(std::string_view hex, std::size_t nbits);
    static Template from_packed(Bytes packed, std::size_t nbits);

    std::size_t nbits() const { return nbits_; }
    bool get(std::size_t i) const;
    void set(std::size_t i, bool v);
    void flip(std::size_t i);

    const Bytes& packed() const { return bits_; }
    std::string hex() const { return to_hex(bits_); }

    friend Template operator^(const Template& a, const Template& b);
    friend bool operator==(const Template& a, const Template& b) = default;

private:
    std::size_t nbits_ = 0;
    Bytes bits_;  // packed, MSB-first within each byte
};

Template random_template(std::size_t nbits, Rng& rng);
std::size_t hamming(const Template& a, const Template& b);

/// Public helper string emitted at enrollment. The offset is the key's
/// repetition-code word XORed with the template; the check digest lets the
/// reproducer reject readings beyond tolerance instead of releasing a
/// wrong key.
struct HelperData {
    Template offset;
    Block32 check;

    friend bool operator==(const HelperData& a, const HelperData& b) = default;
};

/// Per-group noise tolerance of the repetition decode: floor((r - 1) / 2)
/// flips per group, where r = nbits / 256.
std::size_t noise_tolerance_per_group(std::size_t nbits);

/// Enrollment half of the extractor: draws a fresh 256-bit key and binds it
/// to the template.
std::pair<Block32, HelperData> gen(const Template& b, Rng& rng);

/// Reproduction half: majority-decodes the offset against a fresh reading,
/// returning the enrolled key for readings within tolerance and
/// Error::BiometricMismatch otherwise.
Result<Block32> rep(const Template& b2, const HelperData& helper);

/// Copy of b with exactly `flips` distinct positions inverted.
Template perturb(const Template& b, std::size_t flips, Rng& rng);

}  // namespace tfa::bio
