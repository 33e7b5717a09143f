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

// Scenario: one fully seeded, deterministic experiment. A scenario fixes
// the actor roster, adversary capabilities, scripted faults and the
// expected verdict; running it twice gives byte-identical transcripts.

#pragma once

#include <map>
#include <string>

#include "tfa/harness/config.hpp"
#include "tfa/sim/world.hpp"

namespace tfa::sim {

struct Scenario {
    std::string name = "unnamed";
    std::string kind;
    std::uint64_t seed = 1;
    std::uint64_t trials = 1;
    int retries = 0;
    std::size_t step_budget = 100000;

    // roster / provisioning
    std::string user = "alice";
    std::string server = "acme";
    std::string password = "correct horse";
    std::string recovery = "alice@contact";
    std::string new_password = "fresh secret";
    std::size_t template_bits = 1024;
    std::string template_hex;
    std::string curve = "tiny";
    std::size_t noise = 0;

    // adversary capabilities
    bool card_stolen = false;
    bool xs_leaked = false;
    bool bio_leaked = false;
    std::string dict;          // "synthetic:<size>" or "file:<path>"
    bool dict_has_password = true;

    std::vector<FaultSpec> faults;
    std::map<std::string, std::string> expects;

    static Result<Scenario> parse(const harness::Config& config, std::string default_name);
    static Result<Scenario> from_file(const std::filesystem::path& path);

    WorldConfig world_config() const;
};

struct Verdict {
    std::string scenario;
    std::uint64_t seed = 0;
    bool pass = false;
    std::map<std::string, std::string> facts;

    void set(std::string key, std::string value) { facts[std::move(key)] = std::move(value); }
    void set_count(std::string key, std::uint64_t got, std::uint64_t want);
    void set_flag(std::string key, bool v) { facts[std::move(key)] = v ? "true" : "false"; }

    /// One line: scenario, seed, pass, sorted facts, transcript digest.
    std::string record(const Block32& transcript_digest) const;
};

struct RunOutput {
    Verdict verdict;
    std::string transcript;
    Block32 transcript_digest;
};

/// Execute a scenario; deterministic in the scenario alone. Unknown kinds
/// and invalid capability combinations yield an error.
Result<RunOutput> run_scenario(const Scenario& s);

/// Phase/field lookups for the fault syntax "<phase>:<msg#>:<FIELD>".
Result<FaultSpec> parse_fault(std::string_view text);

}  // namespace tfa::sim
