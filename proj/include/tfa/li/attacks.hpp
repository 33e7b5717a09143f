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

// Mechanized adversary strategies against the legacy scheme: card
// extraction, offline dictionary guessing against the card-resident
// verifier, user impersonation with a recovered password, and server
// masquerading with the stolen master secret.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tfa/li/scheme.hpp"

namespace tfa::li {

/// Full cleartext dump of a stolen card (models power-analysis readout).
struct ExtractedCard {
    LiCard card;

    friend bool operator==(const ExtractedCard& a, const ExtractedCard& b) = default;
};

struct Dictionary {
    std::vector<std::string> words;

    static Result<Dictionary> load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
};

ExtractedCard extract_card(const LiCard& card);

struct GuessOutcome {
    bool found = false;
    std::string password;
    std::size_t evaluations = 0;  // verifier evaluations until hit or exhaustion
};

/// Sequential dictionary walk with early exit: recომputes the verifier
/// digest per candidate with the extracted salt and compares against the
/// card's stored digest. Never reports a candidate whose digest fails.
GuessOutcome guess_password(const ExtractedCard& x, const Block32& id, const Dictionary& dict);

struct ImpersonationOutcome {
    bool server_accepted = false;
    bool mutual_auth_completed = false;
    bool keys_agree = false;
    std::optional<Block32> attacker_key;
    std::optional<Block32> server_key;
};

/// Full login exchange against an honest server driven by the attacker,
/// who only holds extracted card contents and the guessed password.
ImpersonationOutcome impersonate_user(const ExtractedCard& x, const Block32& id,
                                      std::string_view pw_guessed, const LiServer& server,
                                      Rng& rng);

/// Drop-in server strategy for an adversary holding the master secret.
class MasqueradeServer {
public:
    MasqueradeServer(Block32 xs_stolen, ec::CurveParams curve)
        : xs_(std::move(xs_stolen)), curve_(std::move(curve)) {}

    /// Answer an honest login request. When replay_m5 is given, the reply
    /// reuses that captured point instead of a fresh ephemeral (and the
    /// attacker then has no way to derive the session key).
    Result<AuthReply> respond(const LoginRequest& req, Rng& rng,
                              const std::optional<ec::Point>& replay_m5 = std::nullopt);

    /// Session key for the last fresh-ephemeral response, if any.
    const std::optional<Block32>& last_key() const { return last_key_; }

private:
    Block32 xs_;
    ec::CurveParams curve_;
    std::optional<Block32> last_key_;
};

}  // namespace tfa::li
