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
#include <string>
#include <utility>
#include <vector>

#include "tfa/bytes.hpp"
#include "tfa/crypto.hpp"
#include "tfa/result.hpp"

namespace tfa {

/// Status tag carried by every message; actors reject tags that are not
/// legal for their current phase step.
enum class Stat : std::uint8_t {
    Register = 0,
    Accept,
    Ack,
    Complete,
    Reject,
    Deregister,
    Login,
    Auth,
    Passchange,
    Fail,
    Recovery,
    Verify,
    Done,
    RecoveryS,
    VerifyS,
    DoneS,
    AcceptS,
};

enum class Phase : std::uint8_t {
    ServerReg = 1,
    UserReg = 2,
    LoginAuth = 3,
    PassChange = 4,
    PassRecovery = 5,
    CardRecovery = 6,
    LiLogin = 0x10,
};

enum class FieldId : std::uint8_t {
    UserId = 1,
    ServerId = 2,
    M1 = 3,
    M2 = 4,
    M3 = 5,
    M4 = 6,
    M5 = 7,
    M6 = 8,
    M7 = 9,
    Ks = 10,
    Txs = 11,
    Txns = 12,
    Tcs = 13,
    Tcns = 14,
    Tcxs = 15,
    Bp = 16,
    Bpn = 17,
    RecoveryContact = 18,
    RecoveryNonce = 19,
};

const char* stat_name(Stat s);
const char* phase_name(Phase p);
const char* field_name(FieldId f);

/// One wire message: phase tag, status tag, ordered named fields.
/// Wire form: phase byte ∥ stat byte ∥ field count ∥ per-field
/// (1-byte field id, 4-byte big-endian length, bytes).
struct Envelope {
    Phase phase{};
    Stat stat{};
    std::vector<std::pair<FieldId, Bytes>> fields;

    Envelope() = default;
    Envelope(Phase p, Stat s) : phase(p), stat(s) {}

    Envelope& add(FieldId id, Bytes value);
    Envelope& add(FieldId id, const Block32& value);
    Envelope& add(FieldId id, const Block64& value);
    Envelope& add(FieldId id, std::string_view value);

    const Bytes* find(FieldId id) const;
    bool has(FieldId id) const { return find(id) != nullptr; }

    Result<Block32> get32(FieldId id) const;
    Result<Block64> get64(FieldId id) const;
    Result<Bytes> get_bytes(FieldId id) const;
    Result<std::string> get_string(FieldId id) const;

    Bytes encode() const;
    static Result<Envelope> decode(ByteSpan data);

    /// One-line rendering for transcripts: names plus hex payloads.
    std::string describe() const;

    friend bool operator==(const Envelope& a, const Envelope& b) = default;
};

}  // namespace tfa
