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

#include "tfa/harness/report.hpp"

#include <sstream>

namespace tfa::harness {

std::string Report::records() const {
    std::string out;
    for (const Entry& e : entries) {
        out += e.verdict.record(e.transcript_digest);
        out += '\n';
    }
    return out;
}

std::string Report::human() const {
    std::ostringstream out;
    out << "scenario results\n";
    out << "----------------\n";
    std::size_t passed = 0;
    double total = 0.0;
    for (const Entry& e : entries) {
        out << (e.verdict.pass ? "PASS" : "FAIL") << "  " << e.verdict.scenario;
        out << "  (seed " << e.verdict.seed << ", " << e.seconds << " s)\n";
        for (const auto& [k, v] : e.verdict.facts) {
            out << "      " << k << " = " << v << "\n";
        }
        passed += e.verdict.pass;
        total += e.seconds;
    }
    out << "----------------\n";
    out << passed << "/" << entries.size() << " scenarios passed, " << total << " s total\n";
    return out.str();
}

bool Report::all_passed() const {
    for (const Entry& e : entries) {
        if (!e.verdict.pass) return false;
    }
    return !entries.empty();
}

Result<std::map<std::string, sim::Verdict>> parse_records(const std::string& text) {
    std::map<std::string, sim::Verdict> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        sim::Verdict v;
        std::istringstream fields(line);
        std::string token;
        while (fields >> token) {
            std::size_t eq = token.find('=');
            if (eq == std::string::npos) return Error::ParseError;
            std::string key = token.substr(0, eq);
            std::string value = token.substr(eq + 1);
            if (key == "scenario") {
                v.scenario = value;
            } else if (key == "seed") {
                v.seed = std::stoull(value);
            } else if (key == "pass") {
                v.pass = value == "1";
            } else if (key == "transcript_sha256") {
                // digest is carried in the record line only
            } else {
                v.facts[key] = value;
            }
        }
        if (v.scenario.empty()) return Error::ParseError;
        out[v.scenario] = std::move(v);
    }
    return out;
}

namespace {

// fact helpers ---------------------------------------------------------------

bool fact_is(const sim::Verdict& v, const std::string& key, std::string_view want) {
    auto it = v.facts.find(key);
    return it != v.facts.end() && it->second == want;
}

// "N/M" counts: full means N == M with M > 0, zero means N == 0
bool fact_full(const sim::Verdict& v, const std::string& key) {
    auto it = v.facts.find(key);
    if (it == v.facts.end()) return false;
    std::size_t slash = it->second.find('/');
    if (slash == std::string::npos) return false;
    std::string got = it->second.substr(0, slash);
    std::string want = it->second.substr(slash + 1);
    return got == want && want != "0";
}

bool fact_zero_count(const sim::Verdict& v, const std::string& key) {
    auto it = v.facts.find(key);
    if (it == v.facts.end()) return false;
    return it->second.rfind("0/", 0) == 0;
}

struct CellBuilder {
    const std::map<std::string, sim::Verdict>& verdicts;
    std::vector<std::string> missing;

    const sim::Verdict* get(const std::string& name) {
        auto it = verdicts.find(name);
        if (it == verdicts.end()) {
            missing.push_back(name);
            return nullptr;
        }
        return &it->second;
    }
};

}  // namespace

Result<FeatureMatrix> FeatureMatrix::build(const std::map<std::string, sim::Verdict>& verdicts) {
    CellBuilder b{verdicts, {}};

    auto yn = [](bool v) { return v ? 'Y' : 'N'; };
    FeatureMatrix m;

    // every lookup below must exist; missing scenarios abort the build
    const auto* p_guess = b.get("prop-guess-stolen-card");
    const auto* p_store = b.get("prop-store-audit");
    const auto* p_imp = b.get("prop-impersonate");
    const auto* p_masq = b.get("prop-masquerade");
    const auto* p_replay = b.get("prop-replay");
    const auto* p_passrec = b.get("prop-pass-recovery");
    const auto* p_cardrec = b.get("prop-card-recovery");
    const auto* p_honest = b.get("prop-honest-login");
    const auto* p_noise = b.get("prop-noise-login");
    const auto* l_guess = b.get("li-guess-stolen-card");
    const auto* l_store = b.get("li-store-audit");
    const auto* l_imp = b.get("li-impersonate");
    const auto* l_masq = b.get("li-masquerade");
    const auto* l_replay = b.get("li-replay");
    const auto* l_probe = b.get("li-recovery-probe");
    const auto* l_honest = b.get("li-honest-login");
    const auto* l_noise = b.get("li-noise-login");
    const auto* l_forge = b.get("li-forgery");
    if (!b.missing.empty()) return Error::NotFound;

    m.rows.push_back(Row{"Prevents Password Guessing Attack",
                         yn(fact_is(*p_guess, "verifier_absent", "true") &&
                            fact_is(*p_guess, "distinguished", "0")),
                         yn(!fact_full(*l_guess, "recovered")),
                         {"prop-guess-stolen-card", "li-guess-stolen-card"}});

    m.rows.push_back(Row{"Prevents Security Key Stealing",
                         yn(fact_is(*p_store, "stores_encrypted", "true") &&
                            fact_is(*p_store, "closure_secrets", "0")),
                         yn(!(fact_is(*l_store, "xs_plaintext", "true") &&
                              fact_is(*l_store, "stolen_key_usable", "true"))),
                         {"prop-store-audit", "li-store-audit"}});

    m.rows.push_back(Row{"Prevents User Impersonation Attack",
                         yn(fact_zero_count(*p_imp, "accepted")),
                         yn(!fact_full(*l_imp, "accepted")),
                         {"prop-impersonate", "li-impersonate"}});

    m.rows.push_back(Row{"Prevents Server Masquerading Attack",
                         yn(fact_zero_count(*p_masq, "accepted")),
                         yn(!fact_full(*l_masq, "user_accepted")),
                         {"prop-masquerade", "li-masquerade"}});

    m.rows.push_back(Row{"Prevents Replay Attack",
                         yn(fact_is(*p_replay, "accepted", "0/0") &&
                            fact_full(*p_replay, "rejected_at_confirm")),
                         yn(fact_is(*l_replay, "prevented", "true")),
                         {"prop-replay", "li-replay"}});

    m.rows.push_back(Row{"Password Recovery",
                         yn(fact_is(*p_passrec, "completed", "true") &&
                            fact_is(*p_passrec, "revert_exercised", "true")),
                         yn(fact_is(*l_probe, "password_recovery_supported", "true")),
                         {"prop-pass-recovery", "li-recovery-probe"}});

    m.rows.push_back(Row{"Smart Card Recovery",
                         yn(fact_is(*p_cardrec, "completed", "true") &&
                            fact_is(*p_cardrec, "revert_exercised", "true")),
                         yn(fact_is(*l_probe, "card_recovery_supported", "true")),
                         {"prop-card-recovery", "li-recovery-probe"}});

    m.rows.push_back(Row{"Provides Mutual Authentication",
                         yn(fact_full(*p_honest, "auth_success") &&
                            fact_zero_count(*p_imp, "accepted") &&
                            fact_zero_count(*p_masq, "accepted")),
                         yn(!fact_full(*l_imp, "accepted") &&
                            !fact_full(*l_masq, "user_accepted")),
                         {"prop-honest-login", "prop-impersonate", "prop-masquerade",
                          "li-impersonate", "li-masquerade"}});

    m.rows.push_back(Row{"Prevents Denial of Service Attack",
                         yn(fact_full(*p_noise, "auth_success")),
                         yn(fact_full(*l_noise, "noisy_success")),
                         {"prop-noise-login", "li-noise-login"}});

    m.rows.push_back(Row{"Prevents Forgery Attack",
                         yn(fact_zero_count(*p_imp, "accepted") &&
                            fact_zero_count(*p_masq, "accepted") &&
                            fact_is(*p_replay, "accepted", "0/0")),
                         yn(fact_zero_count(*l_forge, "accepted") &&
                            fact_is(*l_forge, "binding_derivable", "false")),
                         {"prop-impersonate", "prop-masquerade", "prop-replay", "li-forgery"}});

    m.rows.push_back(Row{"Supports Session Key",
                         yn(fact_full(*p_honest, "keys_equal")),
                         yn(fact_full(*l_honest, "keys_equal")),
                         {"prop-honest-login", "li-honest-login"}});

    return m;
}

std::string FeatureMatrix::render() const {
    std::size_t width = 0;
    for (const Row& r : rows) width = std::max(width, r.property.size());

    std::ostringstream out;
    out << "security features and functionality comparison\n";
    out << "(every cell computed from scenario verdicts; sources on the right)\n\n";
    out << std::string(width, ' ') << "  | S1 | S5 | sources\n";
    out << std::string(width, '-') << "--+----+----+--------\n";
    for (const Row& r : rows) {
        out << r.property << std::string(width - r.property.size(), ' ') << "  |  "
            << r.proposed << " |  " << r.legacy << " | ";
        for (std::size_t i = 0; i < r.sources.size(); ++i) {
            if (i) out << ", ";
            out << r.sources[i];
        }
        out << '\n';
    }
    out << "\nS1 = proposed scheme, S5 = legacy scheme\n";
    return out.str();
}

}  // namespace tfa::harness
