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

#include "tfa/envelope.hpp"

namespace tfa {

const char* stat_name(Stat s) {
    switch (s) {
        case Stat::Register: return "Register";
        case Stat::Accept: return "Accept";
        case Stat::Ack: return "Ack";
        case Stat::Complete: return "Complete";
        case Stat::Reject: return "Reject";
        case Stat::Deregister: return "Deregister";
        case Stat::Login: return "Login";
        case Stat::Auth: return "Auth";
        case Stat::Passchange: return "Passchange";
        case Stat::Fail: return "Fail";
        case Stat::Recovery: return "Recovery";
        case Stat::Verify: return "Verify";
        case Stat::Done: return "Done";
        case Stat::RecoveryS: return "RecoveryS";
        case Stat::VerifyS: return "VerifyS";
        case Stat::DoneS: return "DoneS";
        case Stat::AcceptS: return "AcceptS";
    }
    return "?";
}

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::ServerReg: return "server-reg";
        case Phase::UserReg: return "user-reg";
        case Phase::LoginAuth: return "login";
        case Phase::PassChange: return "pass-change";
        case Phase::PassRecovery: return "pass-recovery";
        case Phase::CardRecovery: return "card-recovery";
        case Phase::LiLogin: return "li-login";
    }
    return "?";
}

const char* field_name(FieldId f) {
    switch (f) {
        case FieldId::UserId: return "ID";
        case FieldId::ServerId: return "SID";
        case FieldId::M1: return "M1";
        case FieldId::M2: return "M2";
        case FieldId::M3: return "M3";
        case FieldId::M4: return "M4";
        case FieldId::M5: return "M5";
        case FieldId::M6: return "M6";
        case FieldId::M7: return "M7";
        case FieldId::Ks: return "KS";
        case FieldId::Txs: return "TXS";
        case FieldId::Txns: return "TXNS";
        case FieldId::Tcs: return "TCS";
        case FieldId::Tcns: return "TCNS";
        case FieldId::Tcxs: return "TCXS";
        case FieldId::Bp: return "BP";
        case FieldId::Bpn: return "BPN";
        case FieldId::RecoveryContact: return "RCONT";
        case FieldId::RecoveryNonce: return "RNONCE";
    }
    return "?";
}

Envelope& Envelope::add(FieldId id, Bytes value) {
    fields.emplace_back(id, std::move(value));
    return *this;
}

Envelope& Envelope::add(FieldId id, const Block32& value) { return add(id, value.to_vector()); }

Envelope& Envelope::add(FieldId id, const Block64& value) { return add(id, value.to_vector()); }

Envelope& Envelope::add(FieldId id, std::string_view value) {
    return add(id, Bytes(value.begin(), value.end()));
}

const Bytes* Envelope::find(FieldId id) const {
    for (const auto& [fid, bytes] : fields) {
        if (fid == id) return &bytes;
    }
    return nullptr;
}

Result<Block32> Envelope::get32(FieldId id) const {
    const Bytes* b = find(id);
    if (!b || b->size() != Block32::kSize) return Error::ParseError;
    return Block32::from_bytes(*b);
}

Result<Block64> Envelope::get64(FieldId id) const {
    const Bytes* b = find(id);
    if (!b || b->size() != Block64::kSize) return Error::ParseError;
    return Block64::from_bytes(*b);
}

Result<Bytes> Envelope::get_bytes(FieldId id) const {
    const Bytes* b = find(id);
    if (!b) return Error::ParseError;
    return *b;
}

Result<std::string> Envelope::get_string(FieldId id) const {
    const Bytes* b = find(id);
    if (!b) return Error::ParseError;
    return std::string(b->begin(), b->end());
}

Bytes Envelope::encode() const {
    Bytes out;
    out.push_back(static_cast<std::uint8_t>(phase));
    out.push_back(static_cast<std::uint8_t>(stat));
    out.push_back(static_cast<std::uint8_t>(fields.size()));
    for (const auto& [id, bytes] : fields) {
        out.push_back(static_cast<std::uint8_t>(id));
        append_u32_be(out, static_cast<std::uint32_t>(bytes.size()));
        out.insert(out.end(), bytes.begin(), bytes.end());
    }
    return out;
}

Result<Envelope> Envelope::decode(ByteSpan data) {
    if (data.size() < 3) return Error::ParseError;
    Envelope env;
    env.phase = static_cast<Phase>(data[0]);
    env.stat = static_cast<Stat>(data[1]);
    std::size_t count = data[2];
    std::size_t pos = 3;
    for (std::size_t i = 0; i < count; ++i) {
        if (pos + 5 > data.size()) return Error::ParseError;
        FieldId id = static_cast<FieldId>(data[pos]);
        std::uint32_t len = read_u32_be(data.data() + pos + 1);
        pos += 5;
        if (pos + len > data.size()) return Error::ParseError;
        env.fields.emplace_back(id, Bytes(data.begin() + pos, data.begin() + pos + len));
        pos += len;
    }
    if (pos != data.size()) return Error::ParseError;
    return env;
}

std::string Envelope::describe() const {
    std::string out = phase_name(phase);
    out += '/';
    out += stat_name(stat);
    for (const auto& [id, bytes] : fields) {
        out += ' ';
        out += field_name(id);
        out += '=';
        out += to_hex(bytes);
    }
    return out;
}

}  // namespace tfa
