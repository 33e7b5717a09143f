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

#include "tfa/proposed/actors.hpp"

#include "tfa/store_io.hpp"

namespace tfa::proposed {

using sim::ActorId;
using sim::ChannelClass;
using sim::Event;
using sim::EventKind;
using sim::Outgoing;
using sim::StepResult;

namespace {

Envelope msg(Phase phase, Stat stat) { return Envelope(phase, stat); }

StepResult single_event(EventKind kind, std::string detail) {
    StepResult r;
    r.events.push_back(Event{kind, std::move(detail)});
    return r;
}

}  // namespace

void SecretBundle::add(std::string label, ByteSpan bytes) {
    items.emplace_back(std::move(label), Bytes(bytes.begin(), bytes.end()));
}

// --------------------------------------------------------------------------
// card and store serialization

Bytes ProposedCard::encode() const {
    store::Writer w;
    w.block32(id);
    w.block32(sid);
    w.u8(qx.has_value());
    if (qx) w.box(*qx);
    w.u8(helper.has_value());
    if (helper) w.helper(*helper);
    w.u8(transit_bp.has_value());
    if (transit_bp) w.block32(*transit_bp);
    w.u8(transit_tc.has_value());
    if (transit_tc) w.block64(*transit_tc);
    return w.take();
}

Result<ProposedCard> ProposedCard::decode(ByteSpan data) {
    try {
        store::Reader r(data);
        ProposedCard card;
        card.id = r.block32();
        card.sid = r.block32();
        if (r.u8()) card.qx = r.box();
        if (r.u8()) card.helper = r.helper();
        if (r.u8()) card.transit_bp = r.block32();
        if (r.u8()) card.transit_tc = r.block64();
        if (!r.at_end()) return Error::ParseError;
        return card;
    } catch (const store::TruncatedStore&) {
        return Error::ParseError;
    }
}

Bytes RcStore::encode() const {
    store::Writer w;
    w.block32(rk.block());
    w.u32(static_cast<std::uint32_t>(servers.size()));
    for (const auto& [sid, hk] : servers) {
        w.block32(sid);
        w.box(hk);
    }
    w.u32(static_cast<std::uint32_t>(users.size()));
    for (const auto& [id, rec] : users) {
        w.block32(id);
        w.block32(rec.sid);
        w.box(rec.ux);
        w.box(rec.ex);
        w.box(rec.rcov);
    }
    return w.take();
}

Result<RcStore> RcStore::decode(ByteSpan data) {
    try {
        store::Reader r(data);
        RcStore s;
        s.rk = SymKey::from_block(r.block32());
        std::uint32_t nservers = r.u32();
        for (std::uint32_t i = 0; i < nservers; ++i) {
            Block32 sid = r.block32();
            s.servers.emplace(sid, r.box());
        }
        std::uint32_t nusers = r.u32();
        for (std::uint32_t i = 0; i < nusers; ++i) {
            Block32 id = r.block32();
            RcUserRecord rec;
            rec.sid = r.block32();
            rec.ux = r.box();
            rec.ex = r.box();
            rec.rcov = r.box();
            s.users.emplace(id, std::move(rec));
        }
        if (!r.at_end()) return Error::ParseError;
        return s;
    } catch (const store::TruncatedStore&) {
        return Error::ParseError;
    }
}

Bytes ServerStore::encode() const {
    store::Writer w;
    w.block32(sk.block());
    w.u8(ek.has_value());
    if (ek) w.box(*ek);
    w.u32(static_cast<std::uint32_t>(sx.size()));
    for (const auto& [id, box] : sx) {
        w.block32(id);
        w.box(box);
    }
    return w.take();
}

Result<ServerStore> ServerStore::decode(ByteSpan data) {
    try {
        store::Reader r(data);
        ServerStore s;
        s.sk = SymKey::from_block(r.block32());
        if (r.u8()) s.ek = r.box();
        std::uint32_t n = r.u32();
        for (std::uint32_t i = 0; i < n; ++i) {
            Block32 id = r.block32();
            s.sx.emplace(id, r.box());
        }
        if (!r.at_end()) return Error::ParseError;
        return s;
    } catch (const store::TruncatedStore&) {
        return Error::ParseError;
    }
}

Bytes encode_card_store(const ProposedCard& card) {
    return store::frame(store::Kind::Card, card.encode());
}

Result<ProposedCard> decode_card_store(ByteSpan file) {
    auto framed = store::unframe(file);
    if (!framed.ok()) return framed.error();
    if (framed.value().first != store::Kind::Card) return Error::ParseError;
    return ProposedCard::decode(framed.value().second);
}

// --------------------------------------------------------------------------
// server actor

ServerActor::ServerActor(std::string sid_text, Rng rng)
    : sid_text_(std::move(sid_text)), sid_(canonical_id(sid_text_)), rng_(rng) {
    store_.sk = SymKey::generate(rng_);
}

StepResult ServerActor::begin_registration() {
    await_reg_accept_ = true;
    StepResult r;
    Envelope env = msg(Phase::ServerReg, Stat::Register);
    env.add(FieldId::ServerId, sid_);
    r.out.push_back(Outgoing{std::move(env), ActorId::Rc, ChannelClass::Insecure});
    return r;
}

StepResult ServerActor::step(const Envelope& in) {
    switch (in.phase) {
        case Phase::ServerReg:
            if (in.stat == Stat::Accept) return on_reg_accept(in);
            break;
        case Phase::UserReg:
            if (in.stat == Stat::Register) return on_user_provision(in);
            if (in.stat == Stat::Deregister) return on_deregister(in);
            break;
        case Phase::LoginAuth:
            if (in.stat == Stat::Login) return on_login(in);
            if (in.stat == Stat::Auth) return on_confirm(in);
            break;
        case Phase::PassChange:
            if (in.stat == Stat::Passchange) return on_secret_change(in, Phase::PassChange);
            if (in.stat == Stat::Fail) return on_fail(in);
            break;
        case Phase::PassRecovery:
            if (in.stat == Stat::Recovery) return on_secret_change(in, Phase::PassRecovery);
            if (in.stat == Stat::Fail) return on_fail(in);
            break;
        case Phase::CardRecovery:
            if (in.stat == Stat::RecoveryS) return on_secret_change(in, Phase::CardRecovery);
            if (in.stat == Stat::Fail) return on_fail(in);
            break;
        default:
            break;
    }
    return single_event(EventKind::IllegalStat,
                        std::string(phase_name(in.phase)) + "/" + stat_name(in.stat));
}

StepResult ServerActor::on_reg_accept(const Envelope& in) {
    auto sid = in.get32(FieldId::ServerId);
    if (!sid.ok() || !(sid.value() == sid_)) {
        return single_event(EventKind::UnknownPrincipal, "server-reg/accept");
    }
    if (!await_reg_accept_) return single_event(EventKind::IllegalStat, "server-reg/accept");
    auto ks = in.get32(FieldId::Ks);
    if (!ks.ok()) return single_event(EventKind::CheckFailed, "server-reg-malformed");
    store_.ek = seal(ks.value().span(), store_.sk, rng_);
    await_reg_accept_ = false;

    StepResult r;
    Envelope env = msg(Phase::ServerReg, Stat::Ack);
    env.add(FieldId::ServerId, sid_);
    r.out.push_back(Outgoing{std::move(env), ActorId::Rc, ChannelClass::Insecure});
    r.events.push_back(Event{EventKind::PhaseComplete, "server-reg"});
    return r;
}

StepResult ServerActor::on_user_provision(const Envelope& in) {
    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);
    if (!id.ok() || !sid.ok() || !(sid.value() == sid_)) {
        return single_event(EventKind::UnknownPrincipal, "user-reg/provision");
    }
    auto txs = in.get64(FieldId::Txs);
    if (!txs.ok() || !store_.ek) {
        return single_event(EventKind::CheckFailed, "user-reg-provision-malformed");
    }
    auto ks = open_block32(*store_.ek, store_.sk);
    if (!ks.ok()) return single_event(EventKind::CheckFailed, "server-key-open");
    Block32 xs = derive_xs(ks.value(), txs.value());
    store_.sx[id.value()] = seal(xs.span(), store_.sk, rng_);

    StepResult r;
    Envelope env = msg(Phase::UserReg, Stat::Complete);
    env.add(FieldId::UserId, id.value());
    env.add(FieldId::ServerId, sid_);
    r.out.push_back(Outgoing{std::move(env), ActorId::Rc, ChannelClass::Secure});
    return r;
}

StepResult ServerActor::on_deregister(const Envelope& in) {
    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);
    if (!id.ok() || !sid.ok() || !(sid.value() == sid_) || store_.sx.erase(id.value()) == 0) {
        return single_event(EventKind::UnknownPrincipal, "user-reg/deregister");
    }
    return single_event(EventKind::Deregistered, "user-reg");
}

StepResult ServerActor::on_login(const Envelope& in) {
    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);
    if (!id.ok() || !sid.ok() || !(sid.value() == sid_) || !store_.sx.count(id.value())) {
        return single_event(EventKind::UnknownPrincipal, "login/request");
    }
    auto m1 = in.get32(FieldId::M1);
    auto m2 = in.get32(FieldId::M2);
    if (!m1.ok() || !m2.ok()) return single_event(EventKind::CheckFailed, "login-malformed");

    auto xs = open_block32(store_.sx[id.value()], store_.sk);
    if (!xs.ok()) return single_event(EventKind::CheckFailed, "user-secret-open");
    Block32 rn2 = recover_rn2(id.value(), xs.value(), m2.value());
    Block32 expected = hash({xs.value(), rn2});
    if (expected != m1.value()) {
        // terminates the session: no reply leaves this actor
        return single_event(EventKind::CheckFailed, "login-proof");
    }

    Block32 rn3 = rng_.next_block();
    sessions_[id.value()] = LoginSession{xs.value(), rn2, rn3};
    auto [m4, m5] = make_challenge(id.value(), xs.value(), rn2, rn3);

    StepResult r;
    r.events.push_back(Event{EventKind::LoginAccepted, "login"});
    Envelope env = msg(Phase::LoginAuth, Stat::Auth);
    env.add(FieldId::UserId, id.value());
    env.add(FieldId::ServerId, sid_);
    env.add(FieldId::M4, m4);
    env.add(FieldId::M5, m5);
    r.out.push_back(Outgoing{std::move(env), ActorId::User, ChannelClass::Insecure});
    return r;
}

StepResult ServerActor::on_confirm(const Envelope& in) {
    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);
    if (!id.ok() || !sid.ok() || !(sid.value() == sid_) || !store_.sx.count(id.value())) {
        return single_event(EventKind::UnknownPrincipal, "login/confirm");
    }
    auto it = sessions_.find(id.value());
    if (it == sessions_.end()) return single_event(EventKind::IllegalStat, "login/confirm");
    auto m7 = in.get32(FieldId::M7);
    if (!m7.ok()) return single_event(EventKind::CheckFailed, "confirm-malformed");

    const LoginSession& s = it->second;
    Block32 m8 = make_confirmation(s.xs, s.rn2, s.rn3);
    if (m7.value() != m8) {
        // the confirmation was built against a stale challenge nonce
        sessions_.erase(it);
        return single_event(EventKind::CheckFailed, "confirm-proof");
    }
    session_key_ = derive_session_key(s.rn2, s.rn3);
    last_session_ = s;
    sessions_.erase(it);

    StepResult r;
    r.events.push_back(Event{EventKind::AuthConfirmed, "login"});
    r.events.push_back(Event{EventKind::SessionKeyEstablished, session_key_->hex()});
    return r;
}

StepResult ServerActor::on_secret_change(const Envelope& in, Phase phase) {
    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);
    auto send_fail = [&](const Block32& uid, std::string why) {
        StepResult r = single_event(EventKind::CheckFailed, std::move(why));
        Envelope env = msg(phase, Stat::Fail);
        env.add(FieldId::UserId, uid);
        env.add(FieldId::ServerId, sid_);
        r.out.push_back(Outgoing{std::move(env), ActorId::Rc, ChannelClass::Secure});
        return r;
    };

    if (!id.ok() || !sid.ok() || !(sid.value() == sid_) || !store_.sx.count(id.value())) {
        // cannot bind the request to a user: discard and tell the center
        Block32 uid = id.ok() ? id.value() : Block32{};
        StepResult r = single_event(EventKind::UnknownPrincipal, "secret-change");
        Envelope env = msg(phase, Stat::Fail);
        env.add(FieldId::UserId, uid);
        env.add(FieldId::ServerId, sid_);
        r.out.push_back(Outgoing{std::move(env), ActorId::Rc, ChannelClass::Secure});
        return r;
    }
    auto txs = in.get64(FieldId::Txs);
    auto txns = in.get64(FieldId::Txns);
    if (!txs.ok() || !txns.ok() || !store_.ek) {
        return send_fail(id.value(), "secret-change-malformed");
    }
    auto ks = open_block32(*store_.ek, store_.sk);
    auto xs = open_block32(store_.sx[id.value()], store_.sk);
    if (!ks.ok() || !xs.ok()) return send_fail(id.value(), "store-open");

    Block32 check = derive_xs(ks.value(), txs.value());
    if (check != xs.value()) return send_fail(id.value(), "master-secret");

    sx_snapshots_[id.value()] = store_.sx[id.value()];
    Block32 xns = derive_xs(ks.value(), txns.value());
    store_.sx[id.value()] = seal(xns.span(), store_.sk, rng_);

    Stat reply_stat = phase == Phase::PassChange    ? Stat::Complete
                      : phase == Phase::PassRecovery ? Stat::Done
                                                     : Stat::DoneS;
    StepResult r;
    Envelope env = msg(phase, reply_stat);
    env.add(FieldId::UserId, id.value());
    env.add(FieldId::ServerId, sid_);
    r.out.push_back(Outgoing{std::move(env), ActorId::Rc, ChannelClass::Secure});
    return r;
}

StepResult ServerActor::on_fail(const Envelope& in) {
    auto id = in.get32(FieldId::UserId);
    if (!id.ok()) return single_event(EventKind::UnknownPrincipal, "revert");
    auto snap = sx_snapshots_.find(id.value());
    if (snap == sx_snapshots_.end()) {
        return single_event(EventKind::CheckFailed, "revert-without-snapshot");
    }
    if (snap->second) {
        store_.sx[id.value()] = *snap->second;
    } else {
        store_.sx.erase(id.value());
    }
    sx_snapshots_.erase(snap);
    return single_event(EventKind::StoreReverted, "server");
}

void ServerActor::collect_secrets(SecretBundle& out) const {
    out.add("server-key-cipher", store_.sk.span());
    if (store_.ek) {
        auto ks = open_block32(*store_.ek, store_.sk);
        if (ks.ok()) out.add("server-key", ks.value().span());
    }
    for (const auto& [id, box] : store_.sx) {
        auto xs = open_block32(box, store_.sk);
        if (xs.ok()) out.add("master-secret:" + id.hex().substr(0, 8), xs.value().span());
    }
    if (last_session_) {
        out.add("login-nonce", last_session_->rn2.span());
        out.add("challenge-nonce", last_session_->rn3.span());
    }
    if (session_key_) out.add("session-key", session_key_->span());
}

// --------------------------------------------------------------------------
// registration center actor

RcActor::RcActor(Rng rng) : rng_(rng) { store_.rk = SymKey::generate(rng_); }

StepResult RcActor::step(const Envelope& in) {
    switch (in.phase) {
        case Phase::ServerReg:
            if (in.stat == Stat::Register) return on_server_register(in);
            if (in.stat == Stat::Ack) return on_server_ack(in);
            break;
        case Phase::UserReg:
            if (in.stat == Stat::Register) return on_user_register(in);
            if (in.stat == Stat::Complete) return on_server_provisioned(in);
            if (in.stat == Stat::Accept || in.stat == Stat::Reject) return on_card_ack(in);
            break;
        case Phase::PassChange:
            if (in.stat == Stat::Passchange) return on_passchange_request(in);
            if (in.stat == Stat::Complete) {
                // the same tag closes both the server leg and the user leg;
                // the in-flight stage decides which handler owns it
                bool any_await_user = false;
                auto id = in.get32(FieldId::UserId);
                if (id.ok()) {
                    auto it = pending_change_.find(id.value());
                    if (it != pending_change_.end()) {
                        any_await_user = it->second.stage == ChangeStage::AwaitUser;
                    }
                }
                if (!any_await_user) {
                    for (const auto& [uid, pending] : pending_change_) {
                        if (pending.phase == Phase::PassChange &&
                            pending.stage == ChangeStage::AwaitUser) {
                            any_await_user = true;
                        }
                    }
                }
                if (any_await_user) return on_user_confirmed(in, Phase::PassChange);
                return on_server_changed(in, Phase::PassChange);
            }
            if (in.stat == Stat::Fail) return on_fail(in, Phase::PassChange);
            break;
        case Phase::PassRecovery:
            if (in.stat == Stat::Recovery) return on_recovery_request(in, Phase::PassRecovery);
            if (in.stat == Stat::Verify) return on_verify_reply(in, Phase::PassRecovery);
            if (in.stat == Stat::Done) return on_server_changed(in, Phase::PassRecovery);
            if (in.stat == Stat::Complete) return on_user_confirmed(in, Phase::PassRecovery);
            if (in.stat == Stat::Fail) return on_fail(in, Phase::PassRecovery);
            break;
        case Phase::CardRecovery:
            if (in.stat == Stat::RecoveryS) return on_recovery_request(in, Phase::CardRecovery);
            if (in.stat == Stat::VerifyS) return on_verify_reply(in, Phase::CardRecovery);
            if (in.stat == Stat::DoneS) return on_server_changed(in, Phase::CardRecovery);
            if (in.stat == Stat::AcceptS) return on_user_confirmed(in, Phase::CardRecovery);
            if (in.stat == Stat::Fail) return on_fail(in, Phase::CardRecovery);
            break;
        default:
            break;
    }
    return single_event(EventKind::IllegalStat,
                        std::string(phase_name(in.phase)) + "/" + stat_name(in.stat));
}

StepResult RcActor::on_server_register(const Envelope& in) {
    auto sid = in.get32(FieldId::ServerId);
    if (!sid.ok()) return single_event(EventKind::CheckFailed, "server-reg-malformed");
    if (store_.servers.count(sid.value())) {
        return single_event(EventKind::CheckFailed, "server-already-registered");
    }
    Block32 rn1 = rng_.next_block();
    Block32 ks = derive_ks(sid.value(), rn1);
    pending_server_[sid.value()] = ks;

    StepResult r;
    Envelope env = msg(Phase::ServerReg, Stat::Accept);
    env.add(FieldId::ServerId, sid.value());
    env.add(FieldId::Ks, ks);
    r.out.push_back(Outgoing{std::move(env), ActorId::Server, ChannelClass::Secure});
    return r;
}

StepResult RcActor::on_server_ack(const Envelope& in) {
    auto sid = in.get32(FieldId::ServerId);
    if (!sid.ok() || !pending_server_.count(sid.value())) {
        return single_event(EventKind::UnknownPrincipal, "server-reg/ack");
    }
    Block32 ks = pending_server_[sid.value()];
    pending_server_.erase(sid.value());
    store_.servers[sid.value()] = seal(ks.span(), store_.rk, rng_);
    return single_event(EventKind::PhaseComplete, "server-reg");
}

StepResult RcActor::on_user_register(const Envelope& in) {
    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);
    auto bp = in.get32(FieldId::Bp);
    auto rcont = in.get_string(FieldId::RecoveryContact);
    if (!id.ok() || !sid.ok() || !bp.ok() || !rcont.ok()) {
        return single_event(EventKind::CheckFailed, "user-reg-malformed");
    }
    if (!store_.servers.count(sid.value())) {
        return single_event(EventKind::UnknownPrincipal, "user-reg/unknown-server");
    }
    if (store_.users.count(id.value())) {
        return single_event(EventKind::CheckFailed, "user-already-registered");
    }
    RegPending pending;
    pending.sid = sid.value();
    pending.bp = bp.value();
    pending.rcont = rcont.value();
    pending.w = rng_.next_block();
    pending.txs = make_tx(pending.w, pending.bp);
    pending_reg_[id.value()] = pending;

    StepResult r;
    Envelope env = msg(Phase::UserReg, Stat::Register);
    env.add(FieldId::UserId, id.value());
    env.add(FieldId::ServerId, sid.value());
    env.add(FieldId::Txs, pending.txs);
    r.out.push_back(Outgoing{std::move(env), ActorId::Server, ChannelClass::Secure});
    return r;
}

StepResult RcActor::on_server_provisioned(const Envelope& in) {
    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);
    if (!id.ok() || !sid.ok()) return single_event(EventKind::CheckFailed, "user-reg-malformed");
    auto it = pending_reg_.find(id.value());
    if (it == pending_reg_.end() || !(it->second.sid == sid.value())) {
        return single_event(EventKind::UnknownPrincipal, "user-reg/provisioned");
    }
    auto hk = store_.servers.find(sid.value());
    if (hk == store_.servers.end()) {
        return single_event(EventKind::UnknownPrincipal, "user-reg/unknown-server");
    }
    auto ks = open_block32(hk->second, store_.rk);
    if (!ks.ok()) return single_event(EventKind::CheckFailed, "server-key-open");
    it->second.tcs = make_tc(ks.value(), it->second.w);

    StepResult r;
    Envelope env = msg(Phase::UserReg, Stat::Complete);
    env.add(FieldId::UserId, id.value());
    env.add(FieldId::ServerId, sid.value());
    env.add(FieldId::Bp, it->second.bp);
    env.add(FieldId::Tcs, *it->second.tcs);
    r.out.push_back(Outgoing{std::move(env), ActorId::User, ChannelClass::Secure});
    return r;
}

StepResult RcActor::on_card_ack(const Envelope& in) {
    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);
    bool verified = id.ok() && sid.ok();
    RegPending pending;
    if (verified) {
        auto it = pending_reg_.find(id.value());
        if (it == pending_reg_.end() || !(it->second.sid == sid.value()) || !it->second.tcs) {
            verified = false;
        } else {
            pending = it->second;
        }
    }

    if (verified && in.stat == Stat::Accept) {
        RcUserRecord rec;
        rec.sid = pending.sid;
        rec.rcov = seal(ByteSpan(reinterpret_cast<const std::uint8_t*>(pending.rcont.data()),
                                 pending.rcont.size()),
                        store_.rk, rng_);
        rec.ex = seal(pending.txs.span(), store_.rk, rng_);
        rec.ux = seal(pending.tcs->span(), store_.rk, rng_);
        store_.users[id.value()] = std::move(rec);
        pending_reg_.erase(id.value());
        return single_event(EventKind::PhaseComplete, "user-reg");
    }

    // rejection or failed verification: deregister the server-side entry
    StepResult r = single_event(EventKind::PhaseAborted, "user-reg");
    if (id.ok()) pending_reg_.erase(id.value());
    Envelope env = msg(Phase::UserReg, Stat::Deregister);
    env.add(FieldId::UserId, id.ok() ? id.value() : Block32{});
    env.add(FieldId::ServerId, sid.ok() ? sid.value() : Block32{});
    r.out.push_back(Outgoing{std::move(env), ActorId::Server, ChannelClass::Secure});
    return r;
}

StepResult RcActor::on_passchange_request(const Envelope& in) {
    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);
    auto tcx = in.get64(FieldId::Tcxs);
    auto bpn = in.get32(FieldId::Bpn);

    auto fail_user = [&](std::string why) {
        StepResult r = single_event(EventKind::CheckFailed, std::move(why));
        Envelope env = msg(Phase::PassChange, Stat::Fail);
        env.add(FieldId::UserId, id.ok() ? id.value() : Block32{});
        r.out.push_back(Outgoing{std::move(env), ActorId::User, ChannelClass::Secure});
        return r;
    };

    if (!id.ok() || !sid.ok() || !tcx.ok() || !bpn.ok()) return fail_user("pass-change-malformed");
    auto user = store_.users.find(id.value());
    if (user == store_.users.end() || !(user->second.sid == sid.value())) {
        return fail_user("pass-change-principal");
    }
    auto hk = store_.servers.find(sid.value());
    if (hk == store_.servers.end()) return fail_user("pass-change-unknown-server");

    auto tcs = open_block64(user->second.ux, store_.rk);
    auto ks = open_block32(hk->second, store_.rk);
    auto txs = open_block64(user->second.ex, store_.rk);
    if (!tcs.ok() || !ks.ok() || !txs.ok()) return fail_user("store-open");

    auto xs = recover_xs_from_tcx(tcx.value(), tcs.value());
    Block32 expected = derive_xs(ks.value(), txs.value());
    if (!xs.ok() || !(xs.value() == expected)) return fail_user("master-secret");

    ChangePending pending;
    pending.phase = Phase::PassChange;
    pending.stage = ChangeStage::AwaitServer;
    pending.sid = sid.value();
    pending.bpn = bpn.value();
    pending.rn_new = rng_.next_block();
    pending.ks = ks.value();
    pending.txs_old = txs.value();
    pending.txns = make_tx(pending.rn_new, pending.bpn);
    pending.tcs_old = tcs.value();
    pending.retries_left = retry_budget_;

    Envelope req = msg(Phase::PassChange, Stat::Passchange);
    req.add(FieldId::UserId, id.value());
    req.add(FieldId::ServerId, sid.value());
    req.add(FieldId::Txs, pending.txs_old);
    req.add(FieldId::Txns, pending.txns);
    pending.last_request = req;
    pending_change_[id.value()] = pending;

    StepResult r;
    r.out.push_back(Outgoing{std::move(req), ActorId::Server, ChannelClass::Secure});
    return r;
}

StepResult RcActor::on_recovery_request(const Envelope& in, Phase phase) {
    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);
    if (!id.ok() || !sid.ok()) return single_event(EventKind::CheckFailed, "recovery-malformed");
    auto user = store_.users.find(id.value());
    if (user == store_.users.end() || !(user->second.sid == sid.value())) {
        return single_event(EventKind::UnknownPrincipal, "recovery/request");
    }
    // the contact address is recovered for delivery; the message itself
    // carries only identities and the one-shot nonce
    auto rcont = open_box(user->second.rcov, store_.rk);
    if (!rcont.ok()) return single_event(EventKind::CheckFailed, "contact-open");

    ChangePending pending;
    pending.phase = phase;
    pending.stage = ChangeStage::AwaitVerifyReply;
    pending.sid = sid.value();
    pending.verify_nonce = rng_.next_block();
    pending.retries_left = retry_budget_;
    pending_change_[id.value()] = pending;

    StepResult r;
    Envelope env = msg(phase, phase == Phase::PassRecovery ? Stat::Verify : Stat::VerifyS);
    env.add(FieldId::UserId, id.value());
    env.add(FieldId::ServerId, sid.value());
    env.add(FieldId::RecoveryNonce, pending_change_[id.value()].verify_nonce);
    r.out.push_back(Outgoing{std::move(env), ActorId::User, ChannelClass::OutOfBand});
    return r;
}

StepResult RcActor::on_verify_reply(const Envelope& in, Phase phase) {
    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);
    auto nonce = in.get32(FieldId::RecoveryNonce);
    auto bpn = in.get32(FieldId::Bpn);
    if (!id.ok() || !sid.ok() || !nonce.ok() || !bpn.ok()) {
        return single_event(EventKind::CheckFailed, "verify-reply-malformed");
    }
    auto it = pending_change_.find(id.value());
    if (it == pending_change_.end() || it->second.phase != phase ||
        it->second.stage != ChangeStage::AwaitVerifyReply || !(it->second.sid == sid.value())) {
        return single_event(EventKind::IllegalStat, "recovery/verify-reply");
    }
    if (!(nonce.value() == it->second.verify_nonce)) {
        return single_event(EventKind::CheckFailed, "recovery-nonce");
    }
    auto user = store_.users.find(id.value());
    auto hk = store_.servers.find(sid.value());
    if (user == store_.users.end() || hk == store_.servers.end()) {
        return single_event(EventKind::UnknownPrincipal, "recovery/verify-reply");
    }
    auto txs = open_block64(user->second.ex, store_.rk);
    auto ks = open_block32(hk->second, store_.rk);
    auto tcs = open_block64(user->second.ux, store_.rk);
    if (!txs.ok() || !ks.ok() || !tcs.ok()) {
        return single_event(EventKind::CheckFailed, "store-open");
    }

    ChangePending& pending = it->second;
    pending.verify_nonce = Block32{};  // single use
    pending.stage = ChangeStage::AwaitServer;
    pending.bpn = bpn.value();
    pending.rn_new = rng_.next_block();
    pending.ks = ks.value();
    pending.txs_old = txs.value();
    pending.txns = make_tx(pending.rn_new, pending.bpn);
    pending.tcs_old = tcs.value();

    Envelope req = msg(phase, phase == Phase::PassRecovery ? Stat::Recovery : Stat::RecoveryS);
    req.add(FieldId::UserId, id.value());
    req.add(FieldId::ServerId, sid.value());
    req.add(FieldId::Txs, pending.txs_old);
    req.add(FieldId::Txns, pending.txns);
    pending.last_request = req;

    StepResult r;
    r.out.push_back(Outgoing{std::move(req), ActorId::Server, ChannelClass::Secure});
    return r;
}

StepResult RcActor::on_server_changed(const Envelope& in, Phase phase) {
    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);

    // bind to the pending transaction; a mismatching reply fails verification
    Block32 key;
    bool verified = false;
    if (id.ok() && sid.ok()) {
        auto it = pending_change_.find(id.value());
        if (it != pending_change_.end() && it->second.phase == phase &&
            it->second.stage == ChangeStage::AwaitServer && it->second.sid == sid.value()) {
            key = id.value();
            verified = true;
        }
    }
    if (!verified) {
        // fall back to the unique in-flight transaction of this phase
        Block32 fallback;
        int matches = 0;
        for (const auto& [uid, pending] : pending_change_) {
            if (pending.phase == phase && pending.stage == ChangeStage::AwaitServer) {
                fallback = uid;
                ++matches;
            }
        }
        if (matches != 1) return single_event(EventKind::UnknownPrincipal, "secret-change/reply");
        // the reply failed identity verification: order a revert, then retry
        StepResult r = single_event(EventKind::CheckFailed, "secret-change-reply-identity");
        Envelope env = msg(phase, Stat::Fail);
        env.add(FieldId::UserId, fallback);
        env.add(FieldId::ServerId, pending_change_[fallback].sid);
        r.out.push_back(Outgoing{std::move(env), ActorId::Server, ChannelClass::Secure});
        r.merge(on_fail_retry(fallback, phase));
        return r;
    }

    ChangePending& pending = pending_change_[key];
    pending.tcns = make_tc(pending.ks, pending.rn_new);
    pending.stage = ChangeStage::AwaitUser;

    StepResult r;
    if (phase == Phase::CardRecovery) {
        // replacement card: identities, the new blend, the new card secret
        Envelope env = msg(phase, Stat::DoneS);
        env.add(FieldId::UserId, key);
        env.add(FieldId::ServerId, pending.sid);
        env.add(FieldId::Bpn, pending.bpn);
        env.add(FieldId::Tcns, *pending.tcns);
        r.out.push_back(Outgoing{std::move(env), ActorId::User, ChannelClass::Secure});
    } else {
        Envelope env = msg(phase, phase == Phase::PassChange ? Stat::Complete : Stat::Done);
        env.add(FieldId::UserId, key);
        env.add(FieldId::ServerId, pending.sid);
        env.add(FieldId::Tcns, *pending.tcns);
        env.add(FieldId::Tcs, *pending.tcs_old);
        r.out.push_back(Outgoing{std::move(env), ActorId::User, ChannelClass::Secure});
    }
    return r;
}

StepResult RcActor::on_user_confirmed(const Envelope& in, Phase phase) {
    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);

    Block32 key;
    bool verified = false;
    if (id.ok() && sid.ok()) {
        auto it = pending_change_.find(id.value());
        if (it != pending_change_.end() && it->second.phase == phase &&
            it->second.stage == ChangeStage::AwaitUser && it->second.sid == sid.value()) {
            key = id.value();
            verified = true;
        }
    }
    if (!verified) {
        Block32 fallback;
        int matches = 0;
        for (const auto& [uid, pending] : pending_change_) {
            if (pending.phase == phase && pending.stage == ChangeStage::AwaitUser) {
                fallback = uid;
                ++matches;
            }
        }
        if (matches != 1) return single_event(EventKind::UnknownPrincipal, "secret-change/ack");
        // identity verification failed on the final ack: revert everyone
        StepResult r = single_event(EventKind::CheckFailed, "secret-change-ack-identity");
        const ChangePending& pending = pending_change_[fallback];
        Envelope to_server = msg(phase, Stat::Fail);
        to_server.add(FieldId::UserId, fallback);
        to_server.add(FieldId::ServerId, pending.sid);
        r.out.push_back(Outgoing{std::move(to_server), ActorId::Server, ChannelClass::Secure});
        Envelope to_user = msg(phase, Stat::Fail);
        to_user.add(FieldId::UserId, fallback);
        to_user.add(FieldId::ServerId, pending.sid);
        r.out.push_back(Outgoing{std::move(to_user), ActorId::User, ChannelClass::Secure});
        pending_change_.erase(fallback);
        r.events.push_back(Event{EventKind::PhaseAborted, phase_name(phase)});
        return r;
    }

    ChangePending& pending = pending_change_[key];
    RcUserRecord& rec = store_.users[key];
    rec.ux = seal(pending.tcns->span(), store_.rk, rng_);
    rec.ex = seal(pending.txns.span(), store_.rk, rng_);
    pending_change_.erase(key);
    return single_event(EventKind::PhaseComplete, phase_name(phase));
}

StepResult RcActor::on_fail_retry(const Block32& id, Phase phase) {
    ChangePending& pending = pending_change_[id];
    if (pending.retries_left > 0) {
        --pending.retries_left;
        pending.stage = ChangeStage::AwaitServer;
        StepResult r = single_event(EventKind::RetryStarted, "secret-change");
        r.out.push_back(Outgoing{pending.last_request, ActorId::Server, ChannelClass::Secure});
        return r;
    }
    // give up: drop the transaction and let the user know
    StepResult r = single_event(EventKind::PhaseAborted, phase_name(phase));
    Envelope env = msg(phase, Stat::Fail);
    env.add(FieldId::UserId, id);
    r.out.push_back(Outgoing{std::move(env), ActorId::User, ChannelClass::Secure});
    pending_change_.erase(id);
    return r;
}

StepResult RcActor::on_fail(const Envelope& in, Phase phase) {
    auto id = in.get32(FieldId::UserId);
    if (!id.ok()) return single_event(EventKind::UnknownPrincipal, "fail");
    auto it = pending_change_.find(id.value());
    if (it == pending_change_.end() || it->second.phase != phase) {
        return single_event(EventKind::IllegalStat, "fail/no-transaction");
    }
    if (it->second.stage == ChangeStage::AwaitServer) {
        // the server rejected the secret change
        return on_fail_retry(id.value(), phase);
    }
    if (it->second.stage == ChangeStage::AwaitUser) {
        // the user rejected the card update: revert the server-side change
        StepResult r = single_event(EventKind::PhaseAborted, phase_name(phase));
        Envelope env = msg(phase, Stat::Fail);
        env.add(FieldId::UserId, id.value());
        env.add(FieldId::ServerId, it->second.sid);
        r.out.push_back(Outgoing{std::move(env), ActorId::Server, ChannelClass::Secure});
        pending_change_.erase(it);
        return r;
    }
    return single_event(EventKind::IllegalStat, "fail/verify-stage");
}

void RcActor::collect_secrets(SecretBundle& out) const {
    out.add("center-key-cipher", store_.rk.span());
    for (const auto& [sid, hk] : store_.servers) {
        auto ks = open_block32(hk, store_.rk);
        if (ks.ok()) out.add("server-key:" + sid.hex().substr(0, 8), ks.value().span());
    }
    for (const auto& [id, rec] : store_.users) {
        auto tcs = open_block64(rec.ux, store_.rk);
        if (tcs.ok()) out.add("card-secret:" + id.hex().substr(0, 8), tcs.value().span());
        auto txs = open_block64(rec.ex, store_.rk);
        if (txs.ok()) out.add("pairing:" + id.hex().substr(0, 8), txs.value().span());
    }
}

// --------------------------------------------------------------------------
// user actor

UserActor::UserActor(Profile profile, Rng rng)
    : profile_(std::move(profile)),
      rng_(rng),
      id_(canonical_id(profile_.id_text)),
      sid_(canonical_id(profile_.sid_text)) {
    if (profile_.template_hex.empty()) {
        template_ = bio::random_template(profile_.template_bits, rng_);
    } else {
        template_ = bio::Template::from_hex(profile_.template_hex, profile_.template_bits);
    }
}

bio::Template UserActor::imprint(bool enrollment) {
    std::size_t noise = enrollment ? 0 : profile_.login_noise_flips;
    if (noise == 0) return template_;
    // re-imprint noise spreads round-robin over the repetition groups: up
    // to one flip per group it stays within decode tolerance, beyond that
    // groups take multiple hits and the reading gets rejected
    std::size_t rep_factor = template_.nbits() / bio::kKeyBits;
    noise = std::min(noise, template_.nbits());
    std::size_t base = noise / bio::kKeyBits;
    std::size_t extra = noise % bio::kKeyBits;
    bio::Template reading = template_;
    std::vector<std::size_t> offsets(rep_factor);
    for (std::size_t g = 0; g < bio::kKeyBits; ++g) {
        std::size_t flips = std::min(base + (g < extra ? 1 : 0), rep_factor);
        if (flips == 0) continue;
        for (std::size_t i = 0; i < rep_factor; ++i) offsets[i] = i;
        for (std::size_t i = 0; i < flips; ++i) {
            std::size_t j = i + rng_.uniform_below(rep_factor - i);
            std::swap(offsets[i], offsets[j]);
            reading.flip(g * rep_factor + offsets[i]);
        }
    }
    return reading;
}

StepResult UserActor::begin_registration() {
    bio::Template reading = imprint(true);
    auto [bio_key, helper] = bio::gen(reading, rng_);
    reg_ = RegState{bio_key, helper};
    Block32 bp = derive_bp(profile_.password, bio_key);

    StepResult r;
    Envelope env = msg(Phase::UserReg, Stat::Register);
    env.add(FieldId::UserId, id_);
    env.add(FieldId::Bp, bp);
    env.add(FieldId::ServerId, sid_);
    env.add(FieldId::RecoveryContact, profile_.recovery_contact);
    r.out.push_back(Outgoing{std::move(env), ActorId::Rc, ChannelClass::Secure});
    wait_ = Wait::Card;
    return r;
}

StepResult UserActor::begin_login(std::optional<std::string> typed_pw,
                                  std::optional<std::string> typed_id) {
    if (!card_ || !card_->finalized()) {
        return single_event(EventKind::CheckFailed, "login-no-card");
    }
    const std::string& id_text = typed_id ? *typed_id : profile_.id_text;
    if (!(canonical_id(id_text) == card_->id)) {
        return single_event(EventKind::CheckFailed, "typed-id");
    }
    auto bio_key = bio::rep(imprint(false), *card_->helper);
    if (!bio_key.ok()) return single_event(EventKind::BiometricRejected, "login");
    auto tcs = open_block64(*card_->qx, kdf_biokey(bio_key.value()));
    if (!tcs.ok()) return single_event(EventKind::CheckFailed, "card-secret");

    const std::string& pw = typed_pw ? *typed_pw : profile_.password;
    Block32 bp = derive_bp(pw, bio_key.value());
    Block32 xs = hash({tcs.value(), bp});
    Block32 rn2 = rng_.next_block();
    auto [m1, m2] = make_login_pair(card_->id, xs, rn2);
    login_ = LoginState{xs, rn2, typed_pw, typed_id};

    StepResult r;
    Envelope env = msg(Phase::LoginAuth, Stat::Login);
    env.add(FieldId::UserId, card_->id);
    env.add(FieldId::ServerId, card_->sid);
    env.add(FieldId::M1, m1);
    env.add(FieldId::M2, m2);
    r.out.push_back(Outgoing{std::move(env), ActorId::Server, ChannelClass::Insecure});
    wait_ = Wait::Challenge;
    return r;
}

StepResult UserActor::begin_password_change(std::string new_pw,
                                            std::optional<std::string> typed_pw) {
    if (!card_ || !card_->finalized()) {
        return single_event(EventKind::CheckFailed, "pass-change-no-card");
    }
    auto bio_key = bio::rep(imprint(false), *card_->helper);
    if (!bio_key.ok()) return single_event(EventKind::BiometricRejected, "pass-change");
    auto tcs = open_block64(*card_->qx, kdf_biokey(bio_key.value()));
    if (!tcs.ok()) return single_event(EventKind::CheckFailed, "card-secret");

    const std::string& pw = typed_pw ? *typed_pw : profile_.password;
    Block32 bp = derive_bp(pw, bio_key.value());
    Block32 xs = hash({tcs.value(), bp});
    Block64 tcx = make_tcx(tcs.value(), xs);
    Block32 bpn = derive_bp(new_pw, bio_key.value());

    change_ = ChangeState{Phase::PassChange, std::move(new_pw), typed_pw, bio_key.value(),
                          std::nullopt};

    StepResult r;
    Envelope env = msg(Phase::PassChange, Stat::Passchange);
    env.add(FieldId::UserId, card_->id);
    env.add(FieldId::Tcxs, tcx);
    env.add(FieldId::Bpn, bpn);
    env.add(FieldId::ServerId, card_->sid);
    r.out.push_back(Outgoing{std::move(env), ActorId::Rc, ChannelClass::Secure});
    wait_ = Wait::ChangeOutcome;
    return r;
}

StepResult UserActor::begin_password_recovery(std::string new_pw) {
    if (!card_ || !card_->finalized()) {
        return single_event(EventKind::CheckFailed, "recovery-no-card");
    }
    change_ = ChangeState{Phase::PassRecovery, std::move(new_pw), std::nullopt, Block32{},
                          std::nullopt};
    StepResult r;
    Envelope env = msg(Phase::PassRecovery, Stat::Recovery);
    env.add(FieldId::UserId, id_);
    env.add(FieldId::ServerId, sid_);
    r.out.push_back(Outgoing{std::move(env), ActorId::Rc, ChannelClass::Secure});
    wait_ = Wait::RecoveryNonce;
    return r;
}

StepResult UserActor::begin_card_recovery(std::string new_pw) {
    change_ = ChangeState{Phase::CardRecovery, std::move(new_pw), std::nullopt, Block32{},
                          std::nullopt};
    StepResult r;
    Envelope env = msg(Phase::CardRecovery, Stat::RecoveryS);
    env.add(FieldId::UserId, id_);
    env.add(FieldId::ServerId, sid_);
    r.out.push_back(Outgoing{std::move(env), ActorId::Rc, ChannelClass::Secure});
    wait_ = Wait::RecoveryNonce;
    return r;
}

StepResult UserActor::step(const Envelope& in) {
    switch (in.phase) {
        case Phase::UserReg:
            if (in.stat == Stat::Complete) return on_card_delivery(in);
            break;
        case Phase::LoginAuth:
            if (in.stat == Stat::Auth) return on_challenge(in);
            break;
        case Phase::PassChange:
            if (in.stat == Stat::Complete) return on_change_update(in, Phase::PassChange);
            if (in.stat == Stat::Fail) return on_fail(in, Phase::PassChange);
            break;
        case Phase::PassRecovery:
            if (in.stat == Stat::Verify) return on_recovery_nonce(in, Phase::PassRecovery);
            if (in.stat == Stat::Done) return on_change_update(in, Phase::PassRecovery);
            if (in.stat == Stat::Fail) return on_fail(in, Phase::PassRecovery);
            break;
        case Phase::CardRecovery:
            if (in.stat == Stat::VerifyS) return on_recovery_nonce(in, Phase::CardRecovery);
            if (in.stat == Stat::DoneS) return on_new_card(in);
            if (in.stat == Stat::Fail) return on_fail(in, Phase::CardRecovery);
            break;
        default:
            break;
    }
    return single_event(EventKind::IllegalStat,
                        std::string(phase_name(in.phase)) + "/" + stat_name(in.stat));
}

StepResult UserActor::retry_or_abort(Phase phase, StepResult&& result) {
    if (retry_budget_ <= 0) {
        wait_ = Wait::Idle;
        login_.reset();
        reg_.reset();
        change_.reset();
        result.events.push_back(Event{EventKind::PhaseAborted, phase_name(phase)});
        return std::move(result);
    }
    --retry_budget_;
    result.events.push_back(Event{EventKind::RetryStarted, phase_name(phase)});

    std::optional<LoginState> login = std::move(login_);
    std::optional<ChangeState> change = std::move(change_);
    login_.reset();
    change_.reset();
    wait_ = Wait::Idle;

    StepResult again;
    switch (phase) {
        case Phase::LoginAuth:
            again = begin_login(login ? login->typed_pw : std::nullopt,
                                login ? login->typed_id : std::nullopt);
            break;
        case Phase::PassChange:
            again = begin_password_change(change->new_pw, change->typed_pw);
            break;
        case Phase::PassRecovery:
            again = begin_password_recovery(change->new_pw);
            break;
        case Phase::CardRecovery:
            again = begin_card_recovery(change->new_pw);
            break;
        default:
            break;
    }
    result.merge(std::move(again));
    return std::move(result);
}

StepResult UserActor::on_card_delivery(const Envelope& in) {
    if (wait_ != Wait::Card || !reg_) return single_event(EventKind::IllegalStat, "card-delivery");

    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);
    auto bp = in.get32(FieldId::Bp);
    auto tcs = in.get64(FieldId::Tcs);

    bool ok = id.ok() && sid.ok() && bp.ok() && tcs.ok() && id.value() == id_ &&
              sid.value() == sid_;
    Block32 bio_key;
    if (ok) {
        auto reproduced = bio::rep(imprint(true), reg_->helper);
        if (reproduced.ok()) {
            bio_key = reproduced.value();
            ok = derive_bp(profile_.password, bio_key) == bp.value();
        } else {
            ok = false;
        }
    }

    StepResult r;
    if (!ok) {
        r.events.push_back(Event{EventKind::CardRejected, "user-reg"});
        Envelope env = msg(Phase::UserReg, Stat::Reject);
        env.add(FieldId::UserId, id_);
        env.add(FieldId::ServerId, sid_);
        r.out.push_back(Outgoing{std::move(env), ActorId::Rc, ChannelClass::Secure});
        reg_.reset();
        wait_ = Wait::Idle;
        return r;
    }

    // seal the card secret first, acknowledge after: a lost ack cannot
    // strand an unfinalized card
    ProposedCard card;
    card.id = id_;
    card.sid = sid_;
    card.qx = seal(tcs.value().span(), kdf_biokey(bio_key), rng_);
    card.helper = reg_->helper;
    card_ = std::move(card);
    reg_.reset();
    wait_ = Wait::Idle;

    r.events.push_back(Event{EventKind::CardAccepted, "user-reg"});
    r.events.push_back(Event{EventKind::PhaseComplete, "user-reg"});
    Envelope env = msg(Phase::UserReg, Stat::Accept);
    env.add(FieldId::UserId, id_);
    env.add(FieldId::ServerId, sid_);
    r.out.push_back(Outgoing{std::move(env), ActorId::Rc, ChannelClass::Secure});
    return r;
}

StepResult UserActor::on_challenge(const Envelope& in) {
    if (wait_ != Wait::Challenge || !login_) {
        return single_event(EventKind::IllegalStat, "challenge");
    }
    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);
    auto m4 = in.get32(FieldId::M4);
    auto m5 = in.get32(FieldId::M5);
    if (!id.ok() || !sid.ok() || !(id.value() == id_) || !(sid.value() == sid_)) {
        return single_event(EventKind::UnknownPrincipal, "challenge");
    }
    if (!m4.ok() || !m5.ok()) {
        return retry_or_abort(Phase::LoginAuth,
                              single_event(EventKind::CheckFailed, "challenge-malformed"));
    }

    Block32 rn3 = recover_rn3(id_, login_->xs, login_->rn2, m5.value());
    Block32 m6 = hash({login_->xs, rn3});
    if (!(m4.value() == m6)) {
        return retry_or_abort(Phase::LoginAuth,
                              single_event(EventKind::CheckFailed, "challenge-proof"));
    }

    Block32 m7 = make_confirmation(login_->xs, login_->rn2, rn3);
    session_key_ = derive_session_key(login_->rn2, rn3);

    StepResult r;
    Envelope env = msg(Phase::LoginAuth, Stat::Auth);
    env.add(FieldId::UserId, id_);
    env.add(FieldId::ServerId, sid_);
    env.add(FieldId::M7, m7);
    r.out.push_back(Outgoing{std::move(env), ActorId::Server, ChannelClass::Insecure});
    r.events.push_back(Event{EventKind::SessionKeyEstablished, session_key_->hex()});
    r.events.push_back(Event{EventKind::PhaseComplete, "login"});
    login_.reset();
    wait_ = Wait::Idle;
    return r;
}

StepResult UserActor::on_recovery_nonce(const Envelope& in, Phase phase) {
    if (wait_ != Wait::RecoveryNonce || !change_ || change_->phase != phase) {
        return single_event(EventKind::IllegalStat, "recovery-nonce");
    }
    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);
    auto nonce = in.get32(FieldId::RecoveryNonce);
    if (!id.ok() || !sid.ok() || !nonce.ok() || !(id.value() == id_) || !(sid.value() == sid_)) {
        // discard and ask again
        return retry_or_abort(phase, single_event(EventKind::CheckFailed, "recovery-nonce-check"));
    }

    StepResult r;
    Block32 bpn;
    if (phase == Phase::PassRecovery) {
        auto bio_key = bio::rep(imprint(true), *card_->helper);
        if (!bio_key.ok()) {
            return retry_or_abort(phase, single_event(EventKind::BiometricRejected, "recovery"));
        }
        change_->bio_key = bio_key.value();
        bpn = derive_bp(change_->new_pw, bio_key.value());
    } else {
        // the old card (and its helper data) is gone: enroll a fresh
        // biometric key and carry the helper until the new card arrives
        auto [bio_key, helper] = bio::gen(imprint(true), rng_);
        change_->bio_key = bio_key;
        change_->new_helper = helper;
        bpn = derive_bp(change_->new_pw, bio_key);
    }

    Envelope env = msg(phase, phase == Phase::PassRecovery ? Stat::Verify : Stat::VerifyS);
    env.add(FieldId::UserId, id_);
    env.add(FieldId::ServerId, sid_);
    env.add(FieldId::RecoveryNonce, nonce.value());
    env.add(FieldId::Bpn, bpn);
    r.out.push_back(Outgoing{std::move(env), ActorId::Rc, ChannelClass::Secure});
    wait_ = phase == Phase::PassRecovery ? Wait::RecoveryOutcome : Wait::NewCard;
    return r;
}

StepResult UserActor::on_change_update(const Envelope& in, Phase phase) {
    bool expected = (phase == Phase::PassChange && wait_ == Wait::ChangeOutcome) ||
                    (phase == Phase::PassRecovery && wait_ == Wait::RecoveryOutcome);
    if (!expected || !change_ || change_->phase != phase) {
        return single_event(EventKind::IllegalStat, "change-update");
    }
    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);
    auto tcns = in.get64(FieldId::Tcns);
    auto tcs = in.get64(FieldId::Tcs);

    auto reject = [&](std::string why) {
        StepResult r = single_event(EventKind::CheckFailed, std::move(why));
        Envelope env = msg(phase, Stat::Fail);
        env.add(FieldId::UserId, id_);
        env.add(FieldId::ServerId, sid_);
        r.out.push_back(Outgoing{std::move(env), ActorId::Rc, ChannelClass::Secure});
        return retry_or_abort(phase, std::move(r));
    };

    if (!id.ok() || !sid.ok() || !(id.value() == id_) || !(sid.value() == sid_)) {
        return reject("change-update-identity");
    }
    if (!tcns.ok() || !tcs.ok()) return reject("change-update-malformed");

    auto current = open_block64(*card_->qx, kdf_biokey(change_->bio_key));
    if (!current.ok() || !(current.value() == tcs.value())) {
        return reject("card-secret-echo");
    }

    // reseal first, acknowledge after; keep a snapshot for a late revert
    committed_snapshot_ = CommittedSnapshot{phase, card_, profile_.password};
    card_->qx = seal(tcns.value().span(), kdf_biokey(change_->bio_key), rng_);
    profile_.password = change_->new_pw;

    StepResult r;
    Envelope env = msg(phase, Stat::Complete);
    env.add(FieldId::UserId, id_);
    env.add(FieldId::ServerId, sid_);
    r.out.push_back(Outgoing{std::move(env), ActorId::Rc, ChannelClass::Secure});
    r.events.push_back(Event{EventKind::PhaseComplete, phase_name(phase)});
    change_.reset();
    wait_ = Wait::Idle;
    return r;
}

StepResult UserActor::on_new_card(const Envelope& in) {
    if (wait_ != Wait::NewCard || !change_ || change_->phase != Phase::CardRecovery) {
        return single_event(EventKind::IllegalStat, "new-card");
    }
    auto id = in.get32(FieldId::UserId);
    auto sid = in.get32(FieldId::ServerId);
    auto bpn = in.get32(FieldId::Bpn);
    auto tcns = in.get64(FieldId::Tcns);

    auto reject = [&](std::string why) {
        StepResult r = single_event(EventKind::CheckFailed, std::move(why));
        Envelope env = msg(Phase::CardRecovery, Stat::Fail);
        env.add(FieldId::UserId, id_);
        env.add(FieldId::ServerId, sid_);
        r.out.push_back(Outgoing{std::move(env), ActorId::Rc, ChannelClass::Secure});
        return retry_or_abort(Phase::CardRecovery, std::move(r));
    };

    if (!id.ok() || !sid.ok() || !(id.value() == id_) || !(sid.value() == sid_)) {
        return reject("new-card-identity");
    }
    if (!bpn.ok() || !tcns.ok() || !change_->new_helper) return reject("new-card-malformed");

    auto bio_key = bio::rep(imprint(true), *change_->new_helper);
    if (!bio_key.ok()) return reject("new-card-biometric");
    if (!(derive_bp(change_->new_pw, bio_key.value()) == bpn.value())) {
        return reject("new-card-blend");
    }

    committed_snapshot_ = CommittedSnapshot{Phase::CardRecovery, card_, profile_.password};
    ProposedCard card;
    card.id = id_;
    card.sid = sid_;
    card.qx = seal(tcns.value().span(), kdf_biokey(bio_key.value()), rng_);
    card.helper = change_->new_helper;
    card_ = std::move(card);
    profile_.password = change_->new_pw;

    StepResult r;
    r.events.push_back(Event{EventKind::CardAccepted, "card-recovery"});
    r.events.push_back(Event{EventKind::PhaseComplete, "card-recovery"});
    Envelope env = msg(Phase::CardRecovery, Stat::AcceptS);
    env.add(FieldId::UserId, id_);
    env.add(FieldId::ServerId, sid_);
    r.out.push_back(Outgoing{std::move(env), ActorId::Rc, ChannelClass::Secure});
    change_.reset();
    wait_ = Wait::Idle;
    return r;
}

StepResult UserActor::on_fail(const Envelope& in, Phase phase) {
    (void)in;
    // a failure order for an in-flight phase means abort-or-retry; one for
    // an already-finished phase means revert the card to its snapshot
    if (change_ && change_->phase == phase && wait_ != Wait::Idle) {
        return retry_or_abort(phase, single_event(EventKind::CheckFailed, "center-fail"));
    }
    if (committed_snapshot_ && committed_snapshot_->phase == phase) {
        card_ = committed_snapshot_->card;
        profile_.password = committed_snapshot_->password;
        committed_snapshot_.reset();
        return single_event(EventKind::StoreReverted, "card");
    }
    return single_event(EventKind::IllegalStat, "fail/no-context");
}

void UserActor::collect_secrets(SecretBundle& out) const {
    out.add("password", canonical_id(profile_.password).span());
    out.add("password-text",
            ByteSpan(reinterpret_cast<const std::uint8_t*>(profile_.password.data()),
                     profile_.password.size()));
    if (card_ && card_->finalized()) {
        auto bio_key = bio::rep(template_, *card_->helper);
        if (bio_key.ok()) {
            out.add("bio-key", bio_key.value().span());
            out.add("blend", derive_bp(profile_.password, bio_key.value()).span());
            auto tcs = open_block64(*card_->qx, kdf_biokey(bio_key.value()));
            if (tcs.ok()) out.add("card-secret", tcs.value().span());
        }
    }
    if (login_) {
        out.add("login-master-secret", login_->xs.span());
        out.add("login-nonce", login_->rn2.span());
    }
    if (session_key_) out.add("session-key", session_key_->span());
}

Bytes UserActor::encode_profile_store() const {
    store::Writer w;
    w.str(profile_.id_text);
    w.str(profile_.sid_text);
    w.str(profile_.password);
    w.str(profile_.recovery_contact);
    w.u32(static_cast<std::uint32_t>(profile_.template_bits));
    w.bytes(template_.packed());
    return w.take();
}

}  // namespace tfa::proposed
