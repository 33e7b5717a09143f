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

// The three actors of the proposed scheme as message-driven state machines:
// user + card reader, registration center, and server. Every phase of the
// protocol, including the failure/revert paths, lives here.

#pragma once

#include <map>
#include <optional>
#include <string>

#include "tfa/biometric.hpp"
#include "tfa/bytes.hpp"
#include "tfa/crypto.hpp"
#include "tfa/envelope.hpp"
#include "tfa/proposed/kernels.hpp"
#include "tfa/result.hpp"
#include "tfa/rng.hpp"
#include "tfa/sim/types.hpp"

namespace tfa::proposed {

/// The user-held store. Before finalization the card carries the blend and
/// card secret in transit; acceptance replaces them with the sealed secret
/// and wipes the transit fields.
struct ProposedCard {
    Block32 id;
    Block32 sid;
    std::optional<SealedBox> qx;           // card secret sealed under the biometric key
    std::optional<bio::HelperData> helper; // written by the user's device at acceptance
    std::optional<Block32> transit_bp;
    std::optional<Block64> transit_tc;

    bool finalized() const { return qx.has_value() && !transit_bp && !transit_tc; }

    Bytes encode() const;
    static Result<ProposedCard> decode(ByteSpan data);

    friend bool operator==(const ProposedCard& a, const ProposedCard& b) = default;
};

struct RcUserRecord {
    Block32 sid;
    SealedBox ux;    // card secret under the center key
    SealedBox ex;    // pairing half under the center key
    SealedBox rcov;  // recovery contact under the center key

    friend bool operator==(const RcUserRecord& a, const RcUserRecord& b) = default;
};

struct RcStore {
    SymKey rk;
    std::map<Block32, SealedBox> servers;     // SID -> sealed server key
    std::map<Block32, RcUserRecord> users;    // ID -> record

    Bytes encode() const;
    static Result<RcStore> decode(ByteSpan data);
};

struct ServerStore {
    SymKey sk;
    std::optional<SealedBox> ek;           // own server key, sealed
    std::map<Block32, SealedBox> sx;       // ID -> sealed per-user master secret

    Bytes encode() const;
    static Result<ServerStore> decode(ByteSpan data);
};

/// Everything the harness treats as secret when scanning transcripts.
struct SecretBundle {
    std::vector<std::pair<std::string, Bytes>> items;

    void add(std::string label, ByteSpan bytes);
};

// ---------------------------------------------------------------------------

class ServerActor {
public:
    ServerActor(std::string sid_text, Rng rng);

    sim::StepResult begin_registration();
    sim::StepResult step(const Envelope& in);

    const Block32& sid() const { return sid_; }
    const ServerStore& store() const { return store_; }
    ServerStore& store_mut() { return store_; }
    bool registered() const { return store_.ek.has_value(); }

    /// Session key from the last confirmed login, if any.
    const std::optional<Block32>& session_key() const { return session_key_; }
    void collect_secrets(SecretBundle& out) const;

private:
    sim::StepResult on_reg_accept(const Envelope& in);
    sim::StepResult on_user_provision(const Envelope& in);
    sim::StepResult on_login(const Envelope& in);
    sim::StepResult on_confirm(const Envelope& in);
    sim::StepResult on_secret_change(const Envelope& in, Phase phase);
    sim::StepResult on_fail(const Envelope& in);
    sim::StepResult on_deregister(const Envelope& in);

    std::string sid_text_;
    Block32 sid_;
    Rng rng_;
    ServerStore store_;
    bool await_reg_accept_ = false;

    struct LoginSession {
        Block32 xs;
        Block32 rn2;
        Block32 rn3;
    };
    std::map<Block32, LoginSession> sessions_;
    std::map<Block32, std::optional<SealedBox>> sx_snapshots_;  // pre-change values
    std::optional<LoginSession> last_session_;  // kept for the secrecy audit
    std::optional<Block32> session_key_;
};

// ---------------------------------------------------------------------------

class RcActor {
public:
    explicit RcActor(Rng rng);

    sim::StepResult step(const Envelope& in);

    const RcStore& store() const { return store_; }
    RcStore& store_mut() { return store_; }
    void set_retry_budget(int n) { retry_budget_ = n; }
    void collect_secrets(SecretBundle& out) const;

private:
    sim::StepResult on_server_register(const Envelope& in);
    sim::StepResult on_server_ack(const Envelope& in);
    sim::StepResult on_user_register(const Envelope& in);
    sim::StepResult on_server_provisioned(const Envelope& in);
    sim::StepResult on_card_ack(const Envelope& in);
    sim::StepResult on_passchange_request(const Envelope& in);
    sim::StepResult on_recovery_request(const Envelope& in, Phase phase);
    sim::StepResult on_verify_reply(const Envelope& in, Phase phase);
    sim::StepResult on_server_changed(const Envelope& in, Phase phase);
    sim::StepResult on_user_confirmed(const Envelope& in, Phase phase);
    sim::StepResult on_fail(const Envelope& in, Phase phase);
    sim::StepResult on_fail_retry(const Block32& id, Phase phase);

    Rng rng_;
    RcStore store_;
    int retry_budget_ = 3;

    // server registration in flight: SID -> server key
    std::map<Block32, Block32> pending_server_;

    struct RegPending {
        Block32 sid;
        Block32 bp;
        std::string rcont;
        Block32 w;
        Block64 txs;
        std::optional<Block64> tcs;
    };
    std::map<Block32, RegPending> pending_reg_;

    enum class ChangeStage { AwaitVerifyReply, AwaitServer, AwaitUser };
    struct ChangePending {
        Phase phase;
        ChangeStage stage;
        Block32 sid;
        Block32 verify_nonce;   // recovery phases only
        Block32 bpn;
        Block32 rn_new;         // fresh pairing randomness
        Block32 ks;
        Block64 txs_old;
        Block64 txns;
        std::optional<Block64> tcs_old;
        std::optional<Block64> tcns;
        Envelope last_request;  // for the retry path
        int retries_left = 0;
    };
    std::map<Block32, ChangePending> pending_change_;
};

// ---------------------------------------------------------------------------

class UserActor {
public:
    struct Profile {
        std::string id_text = "alice";
        std::string sid_text = "acme";
        std::string password = "correct horse";
        std::string recovery_contact = "alice@contact";
        std::size_t template_bits = bio::kDefaultTemplateBits;
        std::size_t login_noise_flips = 0;  // per-imprint noise during login
        std::string template_hex;           // fixed template; empty = random
    };

    UserActor(Profile profile, Rng rng);

    sim::StepResult begin_registration();
    /// typed_pw / typed_id simulate mistyping; default to the profile values.
    sim::StepResult begin_login(std::optional<std::string> typed_pw = std::nullopt,
                                std::optional<std::string> typed_id = std::nullopt);
    sim::StepResult begin_password_change(std::string new_pw,
                                          std::optional<std::string> typed_pw = std::nullopt);
    sim::StepResult begin_password_recovery(std::string new_pw);
    sim::StepResult begin_card_recovery(std::string new_pw);

    sim::StepResult step(const Envelope& in);

    const Block32& id() const { return id_; }
    const Block32& sid() const { return sid_; }
    const std::string& password() const { return profile_.password; }
    const bio::Template& true_template() const { return template_; }
    const std::optional<ProposedCard>& card() const { return card_; }
    void install_card(ProposedCard card) { card_ = std::move(card); }
    void lose_card() { card_.reset(); }
    const std::optional<Block32>& session_key() const { return session_key_; }
    void set_retry_budget(int n) { retry_budget_ = n; }
    void collect_secrets(SecretBundle& out) const;

    Bytes encode_profile_store() const;

private:
    enum class Wait {
        Idle,
        Card,            // registration: card delivery
        Challenge,       // login: responder challenge
        ChangeOutcome,   // password change: failure or card-update message
        RecoveryNonce,   // recovery: out-of-band nonce
        RecoveryOutcome, // recovery: failure or card-update message
        NewCard,         // card recovery: replacement card delivery
    };

    bio::Template imprint(bool enrollment) ;
    Result<Block32> regenerate_bio_key(std::size_t noise);
    sim::StepResult retry_or_abort(Phase phase, sim::StepResult&& result);

    sim::StepResult on_card_delivery(const Envelope& in);
    sim::StepResult on_challenge(const Envelope& in);
    sim::StepResult on_change_update(const Envelope& in, Phase phase);
    sim::StepResult on_recovery_nonce(const Envelope& in, Phase phase);
    sim::StepResult on_new_card(const Envelope& in);
    sim::StepResult on_fail(const Envelope& in, Phase phase);

    Profile profile_;
    Rng rng_;
    Block32 id_;
    Block32 sid_;
    bio::Template template_;
    std::optional<ProposedCard> card_;

    Wait wait_ = Wait::Idle;
    int retry_budget_ = 3;

    // registration in flight
    struct RegState {
        Block32 bio_key;
        bio::HelperData helper;
    };
    std::optional<RegState> reg_;

    // login in flight
    struct LoginState {
        Block32 xs;
        Block32 rn2;
        std::optional<std::string> typed_pw;
        std::optional<std::string> typed_id;
    };
    std::optional<LoginState> login_;

    // password change / recovery in flight
    struct ChangeState {
        Phase phase;
        std::string new_pw;
        std::optional<std::string> typed_pw;  // password change only
        Block32 bio_key;                      // key used to reseal the card secret
        std::optional<bio::HelperData> new_helper;  // card recovery only
    };
    std::optional<ChangeState> change_;

    // snapshot that outlives the in-flight state: a late revert order may
    // arrive after this actor already finished its part of the phase
    struct CommittedSnapshot {
        Phase phase;
        std::optional<ProposedCard> card;
        std::string password;
    };
    std::optional<CommittedSnapshot> committed_snapshot_;

    std::optional<Block32> session_key_;
};

/// Store-file (de)serialization helpers shared by the CLI and tests.
Bytes encode_card_store(const ProposedCard& card);
Result<ProposedCard> decode_card_store(ByteSpan file);

}  // namespace tfa::proposed
