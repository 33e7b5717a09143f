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

#include "tfa/sim/adversary.hpp"

#include <algorithm>

namespace tfa::sim {

void Knowledge::add(ByteSpan value, std::string tag) {
    Bytes v(value.begin(), value.end());
    if (index_.count(v)) return;
    index_.insert(v);
    items_.push_back(Item{std::move(v), std::move(tag)});
}

void Knowledge::add_box(const SealedBox& box, std::string tag) {
    boxes_.emplace_back(box, std::move(tag));
}

void Knowledge::observe_envelope(const Envelope& env, std::string_view where) {
    std::string prefix = "observed:";
    prefix += where;
    for (const auto& [id, bytes] : env.fields) {
        add(bytes, prefix + "/" + field_name(id));
    }
}

void Knowledge::close() {
    bool grew = true;
    while (grew) {
        grew = false;

        // decompose pairings: any held 64-byte value yields its halves
        std::size_t n = items_.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (items_[i].value.size() != Block64::kSize) continue;
            Bytes left(items_[i].value.begin(), items_[i].value.begin() + Block32::kSize);
            Bytes right(items_[i].value.begin() + Block32::kSize, items_[i].value.end());
            if (!index_.count(left)) {
                add(left, "split-left:" + items_[i].tag);
                grew = true;
            }
            if (!index_.count(right)) {
                add(right, "split-right:" + items_[i].tag);
                grew = true;
            }
        }

        // try every held 32-byte value as a key (raw and as a biometric
        // key) against every held box
        for (const auto& [box, box_tag] : boxes_) {
            Bytes box_id = box.encode();
            if (opened_.count(box_id)) continue;
            std::size_t m = items_.size();
            for (std::size_t i = 0; i < m && !opened_.count(box_id); ++i) {
                if (items_[i].value.size() != Block32::kSize) continue;
                Block32 candidate = Block32::from_bytes(items_[i].value);
                for (const SymKey& key :
                     {SymKey::from_block(candidate), kdf_biokey(candidate)}) {
                    auto plain = open_box(box, key);
                    if (plain.ok()) {
                        add(plain.value(), "opened:" + box_tag + " with " + items_[i].tag);
                        opened_.insert(box_id);
                        grew = true;
                        break;
                    }
                }
            }
        }
    }
}

bool Knowledge::knows_direct(ByteSpan value) const {
    return index_.count(Bytes(value.begin(), value.end())) > 0;
}

bool Knowledge::one_xor_away(ByteSpan value) const {
    // value = a ⊕ b for held a, b? equivalently: value ⊕ a is held
    for (const auto& item : items_) {
        if (item.value.size() != value.size()) continue;
        Bytes need(value.size());
        for (std::size_t i = 0; i < need.size(); ++i) need[i] = value[i] ^ item.value[i];
        if (index_.count(need)) return true;
    }
    return false;
}

bool Knowledge::knows(ByteSpan value) const {
    return knows_direct(value) || one_xor_away(value);
}

std::optional<Bytes> Knowledge::find_by_tag(std::string_view tag) const {
    for (const auto& item : items_) {
        if (item.tag == tag) return item.value;
    }
    return std::nullopt;
}

}  // namespace tfa::sim
