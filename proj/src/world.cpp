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

#include "tfa/sim/world.hpp"

namespace tfa::sim {

using proposed::ProposedCard;
using proposed::RcActor;
using proposed::SecretBundle;
using proposed::ServerActor;
using proposed::UserActor;

World::World(const WorldConfig& config) : budget_(config.step_budget), fabric_(config.faults) {
    Rng root(config.seed);
    user_ = std::make_unique<UserActor>(config.profile, root.fork("user"));
    rc_ = std::make_unique<RcActor>(root.fork("center"));
    server_ = std::make_unique<ServerActor>(
        config.server_sid_text.empty() ? config.profile.sid_text : config.server_sid_text,
        root.fork("server"));
    user_->set_retry_budget(config.retries);
    rc_->set_retry_budget(config.retries);

    fabric_.register_actor(ActorId::User, [this](const Envelope& e) { return user_->step(e); });
    fabric_.register_actor(ActorId::Rc, [this](const Envelope& e) { return rc_->step(e); });
    fabric_.register_actor(ActorId::Server,
                           [this](const Envelope& e) { return server_->step(e); });
}

bool World::provision() {
    fabric_.post(ActorId::Server, server_->begin_registration());
    if (!pump()) return false;
    if (!server_->registered()) return false;

    fabric_.post(ActorId::User, user_->begin_registration());
    if (!pump()) return false;
    return user_->card() && user_->card()->finalized();
}

bool World::run_user(StepResult&& first) {
    fabric_.post(ActorId::User, std::move(first));
    return pump();
}

World::LoginOutcome World::login(std::optional<std::string> typed_pw) {
    std::size_t mark = fabric_.events().size();
    run_user(user_->begin_login(typed_pw));
    LoginOutcome out;
    out.server_confirmed = fabric_.event_count_since(mark, EventKind::AuthConfirmed) > 0;
    out.keys_equal = user_->session_key() && server_->session_key() &&
                     *user_->session_key() == *server_->session_key();
    return out;
}

bool World::password_change(const std::string& new_pw) {
    std::size_t mark = fabric_.events().size();
    run_user(user_->begin_password_change(new_pw));
    return fabric_.event_count_since(mark, EventKind::PhaseComplete, "pass-change") >= 2;
}

bool World::password_recovery(const std::string& new_pw) {
    std::size_t mark = fabric_.events().size();
    run_user(user_->begin_password_recovery(new_pw));
    return fabric_.event_count_since(mark, EventKind::PhaseComplete, "pass-recovery") >= 2;
}

bool World::card_recovery(const std::string& new_pw) {
    std::size_t mark = fabric_.events().size();
    run_user(user_->begin_card_recovery(new_pw));
    return fabric_.event_count_since(mark, EventKind::PhaseComplete, "card-recovery") >= 2;
}

bool World::cross_store_consistent() const {
    const auto& sstore = server_->store();
    const auto& rstore = rc_->store();
    for (const auto& [id, sx] : sstore.sx) {
        auto xs = open_block32(sx, sstore.sk);
        if (!xs.ok()) return false;
        auto user_rec = rstore.users.find(id);
        if (user_rec == rstore.users.end()) return false;
        auto hk = rstore.servers.find(user_rec->second.sid);
        if (hk == rstore.servers.end()) return false;
        auto ks = open_block32(hk->second, rstore.rk);
        auto txs = open_block64(user_rec->second.ex, rstore.rk);
        if (!ks.ok() || !txs.ok()) return false;
        if (!(hash({ks.value(), txs.value()}) == xs.value())) return false;
    }
    return true;
}

bool World::card_center_consistent() const {
    const auto& card = user_->card();
    if (!card || !card->finalized()) return false;
    auto bio_key = bio::rep(user_->true_template(), *card->helper);
    if (!bio_key.ok()) return false;
    auto card_tcs = open_block64(*card->qx, kdf_biokey(bio_key.value()));
    if (!card_tcs.ok()) return false;

    const auto& rstore = rc_->store();
    auto rec = rstore.users.find(card->id);
    if (rec == rstore.users.end()) return false;
    auto center_tcs = open_block64(rec->second.ux, rstore.rk);
    if (!center_tcs.ok()) return false;
    return card_tcs.value() == center_tcs.value();
}

bool World::pairing_shared() const {
    const auto& rstore = rc_->store();
    for (const auto& [id, rec] : rstore.users) {
        auto tcs = open_block64(rec.ux, rstore.rk);  // server key ∥ w
        auto txs = open_block64(rec.ex, rstore.rk);  // w ∥ blend
        auto hk = rstore.servers.find(rec.sid);
        if (!tcs.ok() || !txs.ok() || hk == rstore.servers.end()) return false;
        auto ks = open_block32(hk->second, rstore.rk);
        if (!ks.ok()) return false;
        if (!(tcs.value().right() == txs.value().left())) return false;
        if (!(tcs.value().left() == ks.value())) return false;
    }
    return true;
}

SecretBundle World::secrets() const {
    SecretBundle bundle;
    user_->collect_secrets(bundle);
    rc_->collect_secrets(bundle);
    server_->collect_secrets(bundle);
    return bundle;
}

}  // namespace tfa::sim
