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

// One fully wired deployment of the proposed scheme: the three actors, the
// fabric between them, and white-box consistency checks over all stores.

#pragma once

#include <memory>

#include "tfa/proposed/actors.hpp"
#include "tfa/sim/channel.hpp"

namespace tfa::sim {

struct WorldConfig {
    std::uint64_t seed = 1;
    proposed::UserActor::Profile profile;
    std::string server_sid_text;  // empty: same as the user's reference
    int retries = 0;
    std::vector<FaultSpec> faults;
    std::size_t step_budget = 100000;
};

class World {
public:
    explicit World(const WorldConfig& config);

    World(const World&) = delete;
    World& operator=(const World&) = delete;

    proposed::UserActor& user() { return *user_; }
    proposed::RcActor& rc() { return *rc_; }
    proposed::ServerActor& server() { return *server_; }
    Fabric& fabric() { return fabric_; }
    const Fabric& fabric() const { return fabric_; }

    /// Server registration followed by user registration; true when the
    /// user holds a finalized card at the end.
    bool provision();

    /// Drive one user intent to quiescence.
    bool run_user(StepResult&& first);
    bool pump() { return fabric_.pump(budget_); }

    struct LoginOutcome {
        bool server_confirmed = false;
        bool keys_equal = false;
    };
    LoginOutcome login(std::optional<std::string> typed_pw = std::nullopt);

    bool password_change(const std::string& new_pw);
    bool password_recovery(const std::string& new_pw);
    bool card_recovery(const std::string& new_pw);

    // ---- white-box store invariants -------------------------------------

    /// Server-side secret equals the digest recomputed from center-held
    /// material, stitched across both stores.
    bool cross_store_consistent() const;

    /// The card secret sealed under the biometric key equals the
    /// center-held copy.
    bool card_center_consistent() const;

    /// The two center-held pairings share their middle random string, and
    /// the card secret embeds the same server key.
    bool pairing_shared() const;

    bool all_invariants() const {
        return cross_store_consistent() && card_center_consistent() && pairing_shared();
    }

    /// Ground-truth secret material for transcript scans.
    proposed::SecretBundle secrets() const;

private:
    std::size_t budget_;
    std::unique_ptr<proposed::UserActor> user_;
    std::unique_ptr<proposed::RcActor> rc_;
    std::unique_ptr<proposed::ServerActor> server_;
    Fabric fabric_;
};

}  // namespace tfa::sim
