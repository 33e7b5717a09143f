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

#include "tfa/sim/scenario.hpp"

namespace tfa::sim {

namespace {

Result<Phase> phase_by_name(std::string_view name) {
    for (Phase p : {Phase::ServerReg, Phase::UserReg, Phase::LoginAuth, Phase::PassChange,
                    Phase::PassRecovery, Phase::CardRecovery, Phase::LiLogin}) {
        if (name == phase_name(p)) return p;
    }
    return Error::ParseError;
}

Result<FieldId> field_by_name(std::string_view name) {
    for (int i = 1; i <= 19; ++i) {
        FieldId id = static_cast<FieldId>(i);
        if (name == field_name(id)) return id;
    }
    return Error::ParseError;
}

}  // namespace

Result<FaultSpec> parse_fault(std::string_view text) {
    std::size_t c1 = text.find(':');
    std::size_t c2 = text.rfind(':');
    if (c1 == std::string_view::npos || c2 == c1) return Error::ParseError;
    auto phase = phase_by_name(text.substr(0, c1));
    auto field = field_by_name(text.substr(c2 + 1));
    if (!phase.ok() || !field.ok()) return Error::ParseError;
    std::size_t index = 0;
    try {
        index = std::stoul(std::string(text.substr(c1 + 1, c2 - c1 - 1)));
    } catch (...) {
        return Error::ParseError;
    }
    if (index == 0) return Error::ParseError;
    return FaultSpec{phase.value(), index, field.value()};
}

Result<Scenario> Scenario::parse(const harness::Config& config, std::string default_name) {
    Scenario s;
    s.name = std::move(default_name);

    const auto* main = config.section("scenario");
    if (!main) return Error::ParseError;
    s.name = main->get_or("name", s.name);
    s.kind = main->get_or("kind", "");
    if (s.kind.empty()) return Error::ParseError;
    s.seed = main->get_u64("seed").value_or(s.seed);
    s.trials = main->get_u64("trials").value_or(s.trials);
    s.retries = static_cast<int>(main->get_u64("retries").value_or(s.retries));
    s.noise = main->get_u64("noise").value_or(s.noise);
    s.step_budget = main->get_u64("step_budget").value_or(s.step_budget);

    if (const auto* prov = config.section("provision")) {
        s.user = prov->get_or("user", s.user);
        s.server = prov->get_or("server", s.server);
        s.password = prov->get_or("password", s.password);
        s.recovery = prov->get_or("recovery", s.recovery);
        s.new_password = prov->get_or("new_password", s.new_password);
        s.template_bits = prov->get_u64("template_bits").value_or(s.template_bits);
        s.template_hex = prov->get_or("template_hex", s.template_hex);
        s.curve = prov->get_or("curve", s.curve);
    }

    if (const auto* caps = config.section("capabilities")) {
        s.card_stolen = caps->get_bool("card_stolen").value_or(false);
        s.xs_leaked = caps->get_bool("xs_leaked").value_or(false);
        s.bio_leaked = caps->get_bool("bio_leaked").value_or(false);
        s.dict = caps->get_or("dict", "");
        s.dict_has_password = caps->get_bool("dict_has_password").value_or(true);
    }

    // three factors at once is outside the threat model: refuse to run it
    bool password_reachable = !s.dict.empty() && s.dict_has_password;
    if (s.card_stolen && s.bio_leaked && password_reachable) return Error::ParseError;

    if (const auto* faults = config.section("faults")) {
        for (const auto& [key, value] : faults->entries) {
            if (key == "corrupt") {
                auto f = parse_fault(value);
                if (!f.ok()) return Error::ParseError;
                s.faults.push_back(f.value());
                continue;
            }
            // drop = phase:msg, duplicate = phase:msg, delay = phase:msg:window
            std::size_t c1 = value.find(':');
            if (c1 == std::string::npos) return Error::ParseError;
            auto phase = phase_by_name(value.substr(0, c1));
            if (!phase.ok()) return Error::ParseError;
            FaultSpec f;
            f.phase = phase.value();
            try {
                std::size_t c2 = value.find(':', c1 + 1);
                if (c2 == std::string::npos) {
                    f.msg_index = std::stoul(value.substr(c1 + 1));
                } else {
                    f.msg_index = std::stoul(value.substr(c1 + 1, c2 - c1 - 1));
                    f.window = std::stoul(value.substr(c2 + 1));
                }
            } catch (...) {
                return Error::ParseError;
            }
            if (f.msg_index == 0) return Error::ParseError;
            if (key == "drop") {
                f.kind = FaultKind::Drop;
            } else if (key == "duplicate") {
                f.kind = FaultKind::Duplicate;
            } else if (key == "delay") {
                f.kind = FaultKind::Delay;
            } else {
                return Error::ParseError;
            }
            s.faults.push_back(f);
        }
    }

    if (const auto* expect = config.section("expect")) {
        for (const auto& [key, value] : expect->entries) s.expects[key] = value;
    }
    return s;
}

Result<Scenario> Scenario::from_file(const std::filesystem::path& path) {
    auto config = harness::Config::from_file(path);
    if (!config.ok()) return config.error();
    return parse(config.value(), path.stem().string());
}

WorldConfig Scenario::world_config() const {
    WorldConfig c;
    c.seed = seed;
    c.retries = retries;
    c.faults = faults;
    c.step_budget = step_budget;
    c.profile.id_text = user;
    c.profile.sid_text = server;
    c.profile.password = password;
    c.profile.recovery_contact = recovery;
    c.profile.template_bits = template_bits;
    c.profile.template_hex = template_hex;
    c.profile.login_noise_flips = noise;
    return c;
}

void Verdict::set_count(std::string key, std::uint64_t got, std::uint64_t want) {
    facts[std::move(key)] = std::to_string(got) + "/" + std::to_string(want);
}

std::string Verdict::record(const Block32& transcript_digest) const {
    std::string out = "scenario=" + scenario;
    out += " seed=" + std::to_string(seed);
    out += std::string(" pass=") + (pass ? "1" : "0");
    for (const auto& [k, v] : facts) {
        out += ' ';
        out += k;
        out += '=';
        out += v;
    }
    out += " transcript_sha256=" + transcript_digest.hex();
    return out;
}

}  // namespace tfa::sim
