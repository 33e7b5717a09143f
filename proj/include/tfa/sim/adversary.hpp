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

// Symbolic (Dolev-Yao style) adversary knowledge: concrete byte strings
// tagged with their derivations, closed under splitting of 64-byte values,
// opening sealed boxes with any derivable key, and XOR unmasking of one
// held value with another. The adversary never attacks the primitives
// themselves, and it only derives terms it can name: every unmasking step
// in either scheme is a single XOR of two held values, so the engine
// checks exactly those combinations instead of the degenerate full GF(2)
// span that thousands of unrelated observations would eventually span.

#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tfa/bytes.hpp"
#include "tfa/crypto.hpp"
#include "tfa/envelope.hpp"

namespace tfa::sim {

class Knowledge {
public:
    struct Item {
        Bytes value;
        std::string tag;  // derivation: observed:<...>, split:<...>, opened:<...>
    };

    void add(ByteSpan value, std::string tag);
    void add_box(const SealedBox& box, std::string tag);
    void observe_envelope(const Envelope& env, std::string_view where);

    /// Saturate with split and open derivations until a fixpoint.
    void close();

    /// Directly held (after closure).
    bool knows_direct(ByteSpan value) const;

    /// Directly held, or one XOR step away from two held values.
    bool knows(ByteSpan value) const;

    const std::vector<Item>& items() const { return items_; }
    const std::vector<std::pair<SealedBox, std::string>>& boxes() const { return boxes_; }
    std::optional<Bytes> find_by_tag(std::string_view tag) const;

    std::size_t size() const { return items_.size(); }

private:
    bool one_xor_away(ByteSpan value) const;

    std::vector<Item> items_;
    std::set<Bytes> index_;
    std::vector<std::pair<SealedBox, std::string>> boxes_;
    std::set<Bytes> opened_;  // box encodings already opened
};

}  // namespace tfa::sim
