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

// One runner per scenario kind. Everything here is deterministic in the
// scenario: all randomness flows from forks of the scenario seed, and all
// messaging goes through the fabric so transcripts are byte-stable.

#include <functional>

#include "tfa/li/attacks.hpp"
#include "tfa/li/scheme.hpp"
#include "tfa/sim/scenario.hpp"
#include "tfa/sim/world.hpp"

namespace tfa::sim {

namespace {

using li::Dictionary;
using li::ExtractedCard;
using proposed::SecretBundle;

// ---------------------------------------------------------------------------
// shared helpers

Dictionary build_dictionary(const Scenario& s, const std::string& true_password, Rng& rng,
                            std::size_t* plant_index) {
    std::string spec = s.dict.empty() ? "synthetic:1000" : s.dict;
    Dictionary dict;
    if (spec.rfind("file:", 0) == 0) {
        auto loaded = Dictionary::load(spec.substr(5));
        if (loaded.ok()) dict = loaded.value();
    } else {
        std::size_t size = 1000;
        if (spec.rfind("synthetic:", 0) == 0) size = std::stoul(spec.substr(10));
        dict.words.reserve(size);
        for (std::size_t i = 0; i < size; ++i) {
            dict.words.push_back("candidate-" + std::to_string(i));
        }
    }
    if (plant_index) *plant_index = dict.words.size();
    if (s.dict_has_password && !dict.words.empty()) {
        std::size_t at = rng.uniform_below(dict.words.size());
        dict.words[at] = true_password;
        if (plant_index) *plant_index = at;
    }
    return dict;
}

/// Count how many ground-truth secrets leak in clear on insecure lines.
std::size_t secrecy_hits(const Transcript& transcript, const SecretBundle& secrets) {
    std::size_t hits = 0;
    for (const auto& [label, bytes] : secrets.items) {
        hits += transcript.scan_insecure(bytes);
    }
    return hits;
}

/// Count how many ground-truth secrets the adversary can derive.
std::size_t closure_hits(Knowledge& knowledge, const SecretBundle& secrets) {
    knowledge.close();
    std::size_t hits = 0;
    for (const auto& [label, bytes] : secrets.items) {
        if (knowledge.knows(bytes)) ++hits;
    }
    return hits;
}

void finish(RunOutput& out, const Scenario& s, const Transcript& transcript) {
    out.transcript = transcript.render();
    out.transcript_digest = transcript.digest();
    out.verdict.scenario = s.name;
    out.verdict.seed = s.seed;
    bool pass = true;
    for (const auto& [key, want] : s.expects) {
        auto got = out.verdict.facts.find(key);
        if (got == out.verdict.facts.end() || got->second != want) pass = false;
    }
    out.verdict.pass = pass;
}

// ---------------------------------------------------------------------------
// legacy-scheme fixtures

struct LiFixture {
    ec::CurveParams curve;
    Block32 id;
    std::string pw;
    bio::Template tpl;
    li::LiServer server;
    li::LiCard card;
    Rng user_rng;
    Rng server_rng;

    LiFixture(const Scenario& s, Rng rng)
        : curve(ec::curve_by_name(s.curve).ok() ? ec::curve_by_name(s.curve).value()
                                                : ec::tiny_curve()),
          id(canonical_id(s.user)),
          pw(s.password),
          user_rng(rng.fork("li-user")),
          server_rng(rng.fork("li-server")) {
        Rng setup = rng.fork("li-setup");
        tpl = bio::random_template(s.template_bits, setup);
        server.xs = setup.next_block();
        server.curve = curve;
        server.known_ids.insert(id);
        card = li::li_register(id, pw, tpl, server.xs, setup);
    }
};

Envelope li_login_envelope(const li::LoginRequest& req, const ec::CurveParams& curve) {
    Envelope env(Phase::LiLogin, Stat::Login);
    env.add(FieldId::UserId, req.id);
    env.add(FieldId::M2, ec::encode_point(req.m2, curve));
    env.add(FieldId::M3, req.m3);
    return env;
}

Envelope li_reply_envelope(const li::AuthReply& reply, const ec::CurveParams& curve) {
    Envelope env(Phase::LiLogin, Stat::Auth);
    env.add(FieldId::M5, ec::encode_point(reply.m5, curve));
    env.add(FieldId::M6, reply.m6);
    return env;
}

struct LiLoginRun {
    bool server_accepted = false;
    bool user_accepted = false;
    std::optional<Block32> user_key;
    std::optional<Block32> server_key;
};

/// Hosts one legacy user and one legacy server on a fabric. The host must
/// outlive the fabric pumping; handlers hold only the host.
struct LiHost {
    LiFixture* fx = nullptr;
    std::optional<li::UserSession> user_session;
    std::optional<li::ServerSession> server_session;
    std::optional<Block32> user_key;

    void install(Fabric& fabric) {
        fabric.register_actor(ActorId::Server,
                              [this](const Envelope& env) { return server_step(env); });
        fabric.register_actor(ActorId::User,
                              [this](const Envelope& env) { return user_step(env); });
    }

    StepResult server_step(const Envelope& env) {
        StepResult r;
        if (env.stat != Stat::Login) return r;
        auto id = env.get32(FieldId::UserId);
        auto m2 = env.get_bytes(FieldId::M2);
        auto m3 = env.get32(FieldId::M3);
        if (!id.ok() || !m2.ok() || !m3.ok()) return r;
        auto point = ec::decode_point(m2.value(), fx->curve);
        if (!point.ok()) return r;
        auto verdict = li::li_server_verify(li::LoginRequest{id.value(), point.value(),
                                                             m3.value()},
                                            fx->server, fx->server_rng);
        if (!verdict.ok()) {
            r.events.push_back(Event{EventKind::CheckFailed, "legacy-login-proof"});
            return r;
        }
        server_session = verdict.value().second;
        r.events.push_back(Event{EventKind::LoginAccepted, "legacy"});
        r.out.push_back(Outgoing{li_reply_envelope(verdict.value().first, fx->curve),
                                 ActorId::User, ChannelClass::Insecure});
        return r;
    }

    StepResult user_step(const Envelope& env) {
        StepResult r;
        if (env.stat != Stat::Auth || !user_session) return r;
        auto m5 = env.get_bytes(FieldId::M5);
        auto m6 = env.get32(FieldId::M6);
        if (!m5.ok() || !m6.ok()) return r;
        auto point = ec::decode_point(m5.value(), fx->curve);
        if (!point.ok()) return r;
        auto key =
            li::li_user_finish(li::AuthReply{point.value(), m6.value()}, *user_session,
                               fx->curve);
        user_session.reset();
        if (!key.ok()) {
            r.events.push_back(Event{EventKind::CheckFailed, "legacy-reply-proof"});
            return r;
        }
        user_key = key.value();
        r.events.push_back(Event{EventKind::SessionKeyEstablished, key.value().hex()});
        return r;
    }

    LiLoginRun login(Fabric& fabric) {
        LiLoginRun run;
        user_key.reset();
        server_session.reset();
        auto attempt = li::li_login(fx->card, fx->id, fx->pw, fx->tpl, fx->curve, fx->user_rng);
        if (!attempt.ok()) return run;
        user_session = attempt.value().second;

        StepResult first;
        first.out.push_back(Outgoing{li_login_envelope(attempt.value().first, fx->curve),
                                     ActorId::Server, ChannelClass::Insecure});
        fabric.post(ActorId::User, std::move(first));
        fabric.pump();

        run.server_accepted = server_session.has_value();
        run.user_accepted = user_key.has_value();
        run.user_key = user_key;
        if (server_session) run.server_key = server_session->session_key;
        return run;
    }
};

LiLoginRun li_login_over_fabric(LiFixture& fx, Fabric& fabric, LiHost& host) {
    host.fx = &fx;
    host.install(fabric);
    return host.login(fabric);
}

// ---------------------------------------------------------------------------
// legacy-scheme scenario kinds

RunOutput run_li_honest(const Scenario& s) {
    RunOutput out;
    Fabric fabric;
    Rng root(s.seed);
    std::uint64_t ok_auth = 0, ok_keys = 0;
    LiHost host;
    for (std::uint64_t t = 0; t < s.trials; ++t) {
        LiFixture fx(s, root.fork("trial/" + std::to_string(t)));
        LiLoginRun run = li_login_over_fabric(fx, fabric, host);
        if (run.server_accepted && run.user_accepted) ++ok_auth;
        if (run.user_key && run.server_key && *run.user_key == *run.server_key) ++ok_keys;
    }
    out.verdict.set_count("auth_success", ok_auth, s.trials);
    out.verdict.set_count("keys_equal", ok_keys, s.trials);
    out.verdict.set_flag("ok", ok_auth == s.trials && ok_keys == s.trials);
    finish(out, s, fabric.transcript());
    return out;
}

RunOutput run_li_noise(const Scenario& s) {
    RunOutput out;
    Fabric fabric;
    Rng root(s.seed);
    std::uint64_t ok = 0;
    for (std::uint64_t t = 0; t < s.trials; ++t) {
        LiFixture fx(s, root.fork("trial/" + std::to_string(t)));
        // one flip per repetition group: worst case inside tolerance
        std::size_t rep_factor = s.template_bits / bio::kKeyBits;
        bio::Template noisy = fx.tpl;
        for (std::size_t g = 0; g < bio::kKeyBits; ++g) {
            noisy.flip(g * rep_factor + fx.user_rng.uniform_below(rep_factor));
        }
        fx.tpl = noisy;
        LiHost host;
        LiLoginRun run = li_login_over_fabric(fx, fabric, host);
        if (run.user_key && run.server_key && *run.user_key == *run.server_key) ++ok;
    }
    out.verdict.set_count("noisy_success", ok, s.trials);
    out.verdict.set_flag("ok", ok == s.trials);
    finish(out, s, fabric.transcript());
    return out;
}

RunOutput run_li_guess(const Scenario& s) {
    RunOutput out;
    Fabric fabric;
    Rng root(s.seed);
    std::uint64_t recovered = 0, eval_exact = 0;
    for (std::uint64_t t = 0; t < s.trials; ++t) {
        Rng trial = root.fork("victim/" + std::to_string(t));
        Scenario victim_cfg = s;
        victim_cfg.password = "secret-" + std::to_string(trial.next_u64() % 1000000);
        LiFixture fx(victim_cfg, trial);
        std::size_t plant = 0;
        Dictionary dict = build_dictionary(s, victim_cfg.password, trial, &plant);

        ExtractedCard stolen = li::extract_card(fx.card);
        li::GuessOutcome guess = li::guess_password(stolen, fx.id, dict);
        if (guess.found && guess.password == victim_cfg.password) {
            ++recovered;
            if (guess.evaluations == plant + 1) ++eval_exact;
        }
        fabric.post(ActorId::Adversary,
                    StepResult{{},
                               {Event{EventKind::CheckFailed,
                                      "guess victim=" + std::to_string(t) +
                                          " evals=" + std::to_string(guess.evaluations)}}});
    }
    out.verdict.set_count("recovered", recovered, s.trials);
    out.verdict.set_count("eval_exact", eval_exact, s.trials);
    out.verdict.set_flag("ok", recovered == s.trials && eval_exact == s.trials);
    finish(out, s, fabric.transcript());
    return out;
}

RunOutput run_li_impersonate(const Scenario& s) {
    RunOutput out;
    Fabric fabric;
    Rng root(s.seed);
    std::uint64_t accepted = 0, keys_agree = 0;
    for (std::uint64_t t = 0; t < s.trials; ++t) {
        Rng trial = root.fork("victim/" + std::to_string(t));
        Scenario victim_cfg = s;
        victim_cfg.password = "secret-" + std::to_string(trial.next_u64() % 1000000);
        LiFixture fx(victim_cfg, trial);

        // attack preamble: recover the password offline from the stolen card
        std::size_t plant = 0;
        Dictionary dict = build_dictionary(s, victim_cfg.password, trial, &plant);
        ExtractedCard stolen = li::extract_card(fx.card);
        li::GuessOutcome guess = li::guess_password(stolen, fx.id, dict);
        if (!guess.found) continue;

        Rng attacker = trial.fork("attacker");
        auto outcome = li::impersonate_user(stolen, fx.id, guess.password, fx.server, attacker);
        if (outcome.server_accepted && outcome.mutual_auth_completed) ++accepted;
        if (outcome.keys_agree) ++keys_agree;
    }
    out.verdict.set_count("accepted", accepted, s.trials);
    out.verdict.set_count("keys_agree", keys_agree, s.trials);
    out.verdict.set_flag("ok", accepted == s.trials && keys_agree == s.trials);
    finish(out, s, fabric.transcript());
    return out;
}

RunOutput run_li_masquerade(const Scenario& s) {
    RunOutput out;
    Fabric fabric;
    Rng root(s.seed);
    std::uint64_t user_accepted = 0, fresh_arm = 0, replay_arm = 0;
    std::optional<ec::Point> captured_m5;
    for (std::uint64_t t = 0; t < s.trials; ++t) {
        Rng trial = root.fork("victim/" + std::to_string(t));
        LiFixture fx(s, trial);
        Rng attacker_rng = trial.fork("attacker");
        li::MasqueradeServer attacker(fx.server.xs, fx.curve);

        auto attempt = li::li_login(fx.card, fx.id, fx.pw, fx.tpl, fx.curve, fx.user_rng);
        if (!attempt.ok()) continue;
        bool replay = t % 2 == 1 && captured_m5.has_value();
        auto reply = attacker.respond(attempt.value().first, attacker_rng,
                                      replay ? captured_m5 : std::nullopt);
        if (!reply.ok()) continue;
        if (!replay) captured_m5 = reply.value().m5;
        auto key = li::li_user_finish(reply.value(), attempt.value().second, fx.curve);
        if (key.ok()) {
            ++user_accepted;
            ++(replay ? replay_arm : fresh_arm);
        }
    }
    out.verdict.set_count("user_accepted", user_accepted, s.trials);
    out.verdict.set("fresh_arm", std::to_string(fresh_arm));
    out.verdict.set("replay_arm", std::to_string(replay_arm));
    out.verdict.set_flag("ok", user_accepted == s.trials && replay_arm > 0);
    finish(out, s, fabric.transcript());
    return out;
}

RunOutput run_li_replay(const Scenario& s) {
    RunOutput out;
    Fabric fabric;
    Rng root(s.seed);
    LiFixture fx(s, root.fork("fixture"));
    LiHost host;

    // capture one honest login on the wire
    LiLoginRun honest = li_login_over_fabric(fx, fabric, host);
    Bytes replay_wire;
    for (const auto& line : fabric.transcript().lines()) {
        if (!line.is_event && line.channel == ChannelClass::Insecure) {
            auto env = Envelope::decode(line.envelope);
            if (env.ok() && env.value().stat == Stat::Login) replay_wire = line.envelope;
        }
    }

    // replay it verbatim: the legacy server will accept the request again
    std::uint64_t accepted_replays = 0;
    std::optional<Block32> fresh_server_key;
    for (std::uint64_t t = 0; t < s.trials; ++t) {
        auto env = Envelope::decode(replay_wire);
        if (!env.ok()) break;
        std::size_t mark = fabric.events().size();
        fabric.inject(env.value(), ActorId::Server, "replayed legacy login");
        fabric.pump();
        if (fabric.event_count_since(mark, EventKind::LoginAccepted, "legacy") == 1) {
            ++accepted_replays;
        }
    }

    // ...but the replayer holds neither ephemeral, so the session key is
    // out of reach: it is not derivable from everything seen on the wire
    Knowledge& know = fabric.adversary();
    know.close();
    bool key_derivable = honest.server_key && know.knows(honest.server_key->span());

    out.verdict.set_count("server_accepted_replay", accepted_replays, s.trials);
    out.verdict.set_flag("attacker_key_derivable", key_derivable);
    out.verdict.set_flag("prevented", !key_derivable);
    out.verdict.set_flag("ok", accepted_replays == s.trials && !key_derivable);
    finish(out, s, fabric.transcript());
    return out;
}

RunOutput run_li_store_audit(const Scenario& s) {
    RunOutput out;
    Fabric fabric;
    Rng root(s.seed);
    LiFixture fx(s, root.fork("fixture"));

    // the legacy deployment keeps the master secret in the clear: reading
    // the server state immediately yields a value that masquerades a server
    Knowledge& know = fabric.adversary();
    know.add(fx.server.xs.span(), "read:server-database/master-secret");
    know.close();
    bool xs_plaintext = know.knows_direct(fx.server.xs.span());

    Rng attacker_rng = root.fork("attacker");
    li::MasqueradeServer attacker(fx.server.xs, fx.curve);
    auto attempt = li::li_login(fx.card, fx.id, fx.pw, fx.tpl, fx.curve, fx.user_rng);
    bool masquerade_works = false;
    if (attempt.ok()) {
        auto reply = attacker.respond(attempt.value().first, attacker_rng);
        masquerade_works =
            reply.ok() &&
            li::li_user_finish(reply.value(), attempt.value().second, fx.curve).ok();
    }

    out.verdict.set_flag("xs_plaintext", xs_plaintext);
    out.verdict.set_flag("stolen_key_usable", masquerade_works);
    out.verdict.set_flag("ok", xs_plaintext && masquerade_works);
    finish(out, s, fabric.transcript());
    return out;
}

RunOutput run_li_forgery(const Scenario& s) {
    RunOutput out;
    Fabric fabric;
    Rng root(s.seed);
    LiFixture fx(s, root.fork("fixture"));
    LiHost host;

    // eavesdrop an honest session first
    li_login_over_fabric(fx, fabric, host);

    Bytes observed_m2;
    Block32 observed_m3;
    for (const auto& line : fabric.transcript().lines()) {
        if (line.is_event) continue;
        auto env = Envelope::decode(line.envelope);
        if (env.ok() && env.value().stat == Stat::Login) {
            observed_m2 = env.value().get_bytes(FieldId::M2).value();
            observed_m3 = env.value().get32(FieldId::M3).value();
        }
    }

    Rng attacker = root.fork("attacker");
    std::uint64_t accepted = 0;
    for (std::uint64_t t = 0; t < s.trials; ++t) {
        Envelope forged(Phase::LiLogin, Stat::Login);
        forged.add(FieldId::UserId, fx.id);
        switch (t % 3) {
            case 0: {  // fresh point, random proof
                ec::Int a = ec::random_scalar(attacker, fx.curve);
                forged.add(FieldId::M2,
                           ec::encode_point(ec::scalar_mul(a, fx.curve.base, fx.curve), fx.curve));
                forged.add(FieldId::M3, attacker.next_block());
                break;
            }
            case 1: {  // stale point, random proof
                forged.add(FieldId::M2, observed_m2);
                forged.add(FieldId::M3, attacker.next_block());
                break;
            }
            default: {  // stale proof, fresh point
                // a forgery must differ from the captured message; on the
                // desk curve a random point can collide with the observed
                // one, which would be a replay, not a forgery
                Bytes fresh;
                do {
                    ec::Int a = ec::random_scalar(attacker, fx.curve);
                    fresh = ec::encode_point(ec::scalar_mul(a, fx.curve.base, fx.curve),
                                             fx.curve);
                } while (fresh == observed_m2);
                forged.add(FieldId::M2, fresh);
                forged.add(FieldId::M3, observed_m3);
                break;
            }
        }
        std::size_t mark = fabric.events().size();
        fabric.inject(forged, ActorId::Server, "forged legacy login");
        fabric.pump();
        if (fabric.event_count_since(mark, EventKind::LoginAccepted, "legacy") > 0) ++accepted;
    }

    // structural arm: the masked binding never crosses the wire
    Knowledge& know = fabric.adversary();
    know.close();
    Block32 binding = hash({fx.id, fx.server.xs});
    bool binding_derivable = know.knows(binding.span());

    out.verdict.set_count("accepted", accepted, s.trials);
    out.verdict.set_flag("binding_derivable", binding_derivable);
    out.verdict.set_flag("ok", accepted == 0 && !binding_derivable);
    finish(out, s, fabric.transcript());
    return out;
}

RunOutput run_li_recovery_probe(const Scenario& s) {
    RunOutput out;
    Fabric fabric;
    // the legacy scheme defines four phases only; there is no recovery
    // operation to invoke, which is exactly what this verdict records
    out.verdict.set_flag("password_recovery_supported", false);
    out.verdict.set_flag("card_recovery_supported", false);
    out.verdict.set_flag("ok", true);
    finish(out, s, fabric.transcript());
    return out;
}

// ---------------------------------------------------------------------------
// proposed-scheme scenario kinds

RunOutput run_prop_honest(const Scenario& s) {
    RunOutput out;
    World w(s.world_config());
    bool provisioned = w.provision();
    std::uint64_t ok_auth = 0, ok_keys = 0;
    for (std::uint64_t t = 0; provisioned && t < s.trials; ++t) {
        auto login = w.login();
        if (login.server_confirmed) ++ok_auth;
        if (login.keys_equal) ++ok_keys;
    }
    SecretBundle secrets = w.secrets();
    std::size_t leak = secrecy_hits(w.fabric().transcript(), secrets);
    std::size_t derived = closure_hits(w.fabric().adversary(), secrets);

    out.verdict.set_flag("provisioned", provisioned);
    out.verdict.set_count("auth_success", ok_auth, s.trials);
    out.verdict.set_count("keys_equal", ok_keys, s.trials);
    out.verdict.set("secrecy_hits", std::to_string(leak));
    out.verdict.set("closure_secrets", std::to_string(derived));
    out.verdict.set("channel_violations",
                    std::to_string(w.fabric().transcript().adversary_reads_off_limits()));
    out.verdict.set_flag("ok", provisioned && ok_auth == s.trials && ok_keys == s.trials &&
                                   leak == 0 && derived == 0);
    finish(out, s, w.fabric().transcript());
    return out;
}

RunOutput run_prop_guess(const Scenario& s) {
    RunOutput out;
    World w(s.world_config());
    bool provisioned = w.provision();
    if (provisioned) w.login();  // give the adversary a full login transcript

    Knowledge& know = w.fabric().adversary();
    const auto& card = w.user().card();
    if (s.card_stolen && card) {
        know.add(card->id.span(), "extracted:card/ID");
        know.add(card->sid.span(), "extracted:card/SID");
        if (card->qx) know.add_box(*card->qx, "extracted:card/QX");
        if (card->helper) {
            know.add(card->helper->offset.packed(), "extracted:card/helper-offset");
            know.add(card->helper->check.span(), "extracted:card/helper-check");
        }
    }
    Rng dict_rng = Rng(s.seed).fork("dictionary");
    std::size_t plant = 0;
    Dictionary dict = build_dictionary(s, w.user().password(), dict_rng, &plant);

    know.close();

    // verifier templates the adversary would need for an offline test; each
    // is blocked by a missing input that the closure could not produce
    bool box_opened = false;
    for (const auto& item : know.items()) {
        if (item.tag.rfind("opened:", 0) == 0) box_opened = true;
    }
    bool blend_observed = false;
    for (const auto& item : know.items()) {
        if (item.tag.find("/BP") != std::string::npos) blend_observed = true;
    }
    SecretBundle secrets = w.secrets();
    std::size_t derived = 0;
    for (const auto& [label, bytes] : secrets.items) {
        if (know.knows(bytes)) ++derived;
    }
    bool verifier_absent = !box_opened && !blend_observed && derived == 0;

    // with no computable verifier no candidate can be distinguished; the
    // walk below records that nothing separates the planted password
    std::uint64_t distinguished = 0;
    out.verdict.set("template_unseal",
                    box_opened ? "computable" : "uncomputable:box-unopened");
    out.verdict.set("template_blend",
                    blend_observed ? "computable" : "uncomputable:no-blend-observed");
    out.verdict.set("template_login_proof", derived ? "computable"
                                                    : "uncomputable:no-master-secret");
    out.verdict.set("distinguished", std::to_string(distinguished));
    out.verdict.set("dict_size", std::to_string(dict.words.size()));
    out.verdict.set_flag("verifier_absent", verifier_absent);

    // out-of-model sanity arm: granting the biometric key must make the
    // same dictionary attack succeed, showing the model (not a bug)
    // provides the protection
    bool sanity_recovered = false;
    std::size_t sanity_evals = 0;
    if (provisioned && card && card->helper) {
        auto bio_key = bio::rep(w.user().true_template(), *card->helper);
        if (bio_key.ok()) {
            Knowledge oracle = know;
            oracle.add(bio_key.value().span(), "granted:biometric-key");
            oracle.close();
            auto tc = oracle.find_by_tag("opened:extracted:card/QX with granted:biometric-key");
            auto m1 = oracle.find_by_tag("observed:login/M1");
            auto m2 = oracle.find_by_tag("observed:login/M2");
            if (tc && m1 && m2 && tc->size() == Block64::kSize) {
                Block64 tcs = Block64::from_bytes(*tc);
                for (const std::string& candidate : dict.words) {
                    ++sanity_evals;
                    Block32 bp = proposed::derive_bp(candidate, bio_key.value());
                    Block32 xs = hash({tcs, bp});
                    Block32 rn2 = proposed::recover_rn2(card->id, xs,
                                                        Block32::from_bytes(*m2));
                    if (hash({xs, rn2}) == Block32::from_bytes(*m1)) {
                        sanity_recovered = candidate == w.user().password();
                        break;
                    }
                }
            }
        }
    }
    out.verdict.set_flag("sanity_recovered", sanity_recovered);
    out.verdict.set("sanity_evals", std::to_string(sanity_evals));
    out.verdict.set_flag("sanity_eval_exact", sanity_evals == plant + 1);
    out.verdict.set_flag("ok", provisioned && verifier_absent && distinguished == 0 &&
                                   sanity_recovered);
    finish(out, s, w.fabric().transcript());
    return out;
}

RunOutput run_prop_impersonate(const Scenario& s) {
    RunOutput out;
    World w(s.world_config());
    bool provisioned = w.provision();
    if (provisioned) w.login();  // observable honest traffic for mask reuse

    Knowledge& know = w.fabric().adversary();
    auto m1 = know.find_by_tag("observed:login/M1");
    auto m2 = know.find_by_tag("observed:login/M2");

    Rng attacker = Rng(s.seed).fork("attacker");
    std::size_t mark = w.fabric().events().size();
    std::uint64_t accepted = 0;
    for (std::uint64_t t = 0; provisioned && t < s.trials; ++t) {
        Envelope forged(Phase::LoginAuth, Stat::Login);
        forged.add(FieldId::UserId, w.user().id());
        forged.add(FieldId::ServerId, w.user().sid());
        switch (t % 3) {
            case 0:  // random pair
                forged.add(FieldId::M1, attacker.next_block());
                forged.add(FieldId::M2, attacker.next_block());
                break;
            case 1:  // reuse the observed mask with a fresh proof
                forged.add(FieldId::M1, attacker.next_block());
                forged.add(FieldId::M2, m2 ? *m2 : attacker.next_block().to_vector());
                break;
            default: {  // algebraic recombination of observed fields
                Block32 delta = attacker.next_block();
                Block32 mask = m2 ? Block32::from_bytes(*m2) : attacker.next_block();
                forged.add(FieldId::M1, m1 ? Block32::from_bytes(*m1) : attacker.next_block());
                forged.add(FieldId::M2, mask ^ delta);
                break;
            }
        }
        std::size_t trial_mark = w.fabric().events().size();
        w.fabric().inject(forged, ActorId::Server, "forged login");
        w.pump();
        if (w.fabric().event_count_since(trial_mark, EventKind::LoginAccepted) > 0) ++accepted;
    }
    std::uint64_t confirmed = w.fabric().event_count_since(mark, EventKind::AuthConfirmed);

    out.verdict.set_flag("provisioned", provisioned);
    out.verdict.set_count("accepted", accepted, s.trials);
    out.verdict.set("confirmed", std::to_string(confirmed));
    out.verdict.set_flag("ok", provisioned && accepted == 0 && confirmed == 0);
    finish(out, s, w.fabric().transcript());
    return out;
}

RunOutput run_prop_masquerade(const Scenario& s) {
    RunOutput out;
    World w(s.world_config());
    bool provisioned = w.provision();
    if (provisioned) w.login();  // observable honest traffic

    Knowledge& know = w.fabric().adversary();
    auto m4 = know.find_by_tag("observed:login/M4");
    auto m5 = know.find_by_tag("observed:login/M5");

    Rng attacker = Rng(s.seed).fork("attacker");
    std::uint64_t accepted = 0, rejected_at_challenge = 0;
    for (std::uint64_t t = 0; provisioned && t < s.trials; ++t) {
        std::uint64_t strategy = t % 3;
        // intercept the login request and answer in the server's place
        w.fabric().set_interceptor([&](const Envelope& env, ActorId, ActorId to) {
            if (to != ActorId::Server || env.phase != Phase::LoginAuth ||
                env.stat != Stat::Login) {
                return false;
            }
            Envelope forged(Phase::LoginAuth, Stat::Auth);
            forged.add(FieldId::UserId, w.user().id());
            forged.add(FieldId::ServerId, w.user().sid());
            switch (strategy) {
                case 0:
                    forged.add(FieldId::M4, attacker.next_block());
                    forged.add(FieldId::M5, attacker.next_block());
                    break;
                case 1:
                    forged.add(FieldId::M4, m4 ? *m4 : attacker.next_block().to_vector());
                    forged.add(FieldId::M5, m5 ? *m5 : attacker.next_block().to_vector());
                    break;
                default: {
                    Block32 delta = attacker.next_block();
                    Block32 mask = m5 ? Block32::from_bytes(*m5) : attacker.next_block();
                    forged.add(FieldId::M4, m4 ? Block32::from_bytes(*m4)
                                               : attacker.next_block());
                    forged.add(FieldId::M5, mask ^ delta);
                    break;
                }
            }
            w.fabric().inject(forged, ActorId::User, "forged challenge");
            return true;  // drop the honest delivery
        });

        std::size_t trial_mark = w.fabric().events().size();
        w.run_user(w.user().begin_login());
        w.fabric().set_interceptor({});
        if (w.fabric().event_count_since(trial_mark, EventKind::SessionKeyEstablished) > 0) {
            ++accepted;
        }
        if (w.fabric().event_count_since(trial_mark, EventKind::CheckFailed,
                                         "challenge-proof") > 0) {
            ++rejected_at_challenge;
        }
    }

    out.verdict.set_flag("provisioned", provisioned);
    out.verdict.set_count("accepted", accepted, s.trials);
    out.verdict.set_count("rejected_at_challenge", rejected_at_challenge, s.trials);
    out.verdict.set_flag("ok", provisioned && accepted == 0 &&
                                   rejected_at_challenge == s.trials);
    finish(out, s, w.fabric().transcript());
    return out;
}

RunOutput run_prop_replay(const Scenario& s) {
    RunOutput out;
    World w(s.world_config());
    bool provisioned = w.provision();
    if (provisioned) w.login();  // the session to replay

    // pick the captured login pair and confirmation off the wire
    Bytes old_login_wire, old_confirm_wire;
    for (const auto& line : w.fabric().transcript().lines()) {
        if (line.is_event || line.channel != ChannelClass::Insecure) continue;
        auto env = Envelope::decode(line.envelope);
        if (!env.ok() || env.value().phase != Phase::LoginAuth) continue;
        if (env.value().stat == Stat::Login) old_login_wire = line.envelope;
        if (env.value().stat == Stat::Auth && env.value().has(FieldId::M7)) {
            old_confirm_wire = line.envelope;
        }
    }

    std::uint64_t accepted = 0, rejected_at_confirm = 0, other_rejections = 0;
    for (std::uint64_t t = 0; provisioned && t < s.trials; ++t) {
        std::size_t trial_mark = w.fabric().events().size();
        if (t % 2 == 0) {
            // full replay: old login pair, then the old confirmation
            // against the fresh challenge
            auto login_env = Envelope::decode(old_login_wire);
            auto confirm_env = Envelope::decode(old_confirm_wire);
            if (!login_env.ok() || !confirm_env.ok()) break;
            w.fabric().inject(login_env.value(), ActorId::Server, "replayed login");
            w.pump();
            w.fabric().inject(confirm_env.value(), ActorId::Server, "replayed confirmation");
            w.pump();
        } else {
            // live session hijack: swap the honest confirmation for the
            // stale one
            w.fabric().set_interceptor([&](const Envelope& env, ActorId from, ActorId to) {
                if (from == ActorId::Adversary || to != ActorId::Server ||
                    env.phase != Phase::LoginAuth || env.stat != Stat::Auth ||
                    !env.has(FieldId::M7)) {
                    return false;
                }
                auto confirm_env = Envelope::decode(old_confirm_wire);
                if (confirm_env.ok()) {
                    w.fabric().inject(confirm_env.value(), ActorId::Server,
                                      "replayed confirmation");
                }
                return true;
            });
            w.run_user(w.user().begin_login());
            w.fabric().set_interceptor({});
        }
        accepted += w.fabric().event_count_since(trial_mark, EventKind::AuthConfirmed);
        std::uint64_t confirm_fails =
            w.fabric().event_count_since(trial_mark, EventKind::CheckFailed, "confirm-proof");
        if (confirm_fails > 0) ++rejected_at_confirm;
        other_rejections +=
            w.fabric().event_count_since(trial_mark, EventKind::CheckFailed, "login-proof");
    }

    out.verdict.set_flag("provisioned", provisioned);
    out.verdict.set_count("accepted", accepted, 0);
    out.verdict.set_count("rejected_at_confirm", rejected_at_confirm, s.trials);
    out.verdict.set("other_rejections", std::to_string(other_rejections));
    out.verdict.set_flag("ok", provisioned && accepted == 0 &&
                                   rejected_at_confirm == s.trials && other_rejections == 0);
    finish(out, s, w.fabric().transcript());
    return out;
}

RunOutput run_prop_store_audit(const Scenario& s) {
    RunOutput out;
    World w(s.world_config());
    bool provisioned = w.provision();
    if (provisioned) w.login();

    // gather every sealed record as an attacker reading the databases
    // (but not the cipher keys, which the model keeps secret) would
    Knowledge& know = w.fabric().adversary();
    const auto& rstore = w.rc().store();
    Bytes record_bytes;
    auto note_box = [&](const SealedBox& box, std::string tag) {
        Bytes enc = box.encode();
        record_bytes.insert(record_bytes.end(), enc.begin(), enc.end());
        know.add_box(box, std::move(tag));
    };
    for (const auto& [sid, hk] : rstore.servers) note_box(hk, "read:center-db/server-key-box");
    for (const auto& [id, rec] : rstore.users) {
        note_box(rec.ux, "read:center-db/card-secret-box");
        note_box(rec.ex, "read:center-db/pairing-box");
        note_box(rec.rcov, "read:center-db/contact-box");
    }
    const auto& sstore = w.server().store();
    if (sstore.ek) note_box(*sstore.ek, "read:server-db/server-key-box");
    for (const auto& [id, sx] : sstore.sx) note_box(sx, "read:server-db/master-secret-box");
    if (w.user().card() && w.user().card()->qx) {
        note_box(*w.user().card()->qx, "extracted:card/QX");
    }

    SecretBundle secrets = w.secrets();
    std::size_t plain_hits = 0;
    for (const auto& [label, bytes] : secrets.items) {
        if (bytes.empty()) continue;
        auto it = std::search(record_bytes.begin(), record_bytes.end(), bytes.begin(),
                              bytes.end());
        if (it != record_bytes.end()) ++plain_hits;
    }
    std::size_t derived = closure_hits(know, secrets);

    out.verdict.set_flag("provisioned", provisioned);
    out.verdict.set_flag("stores_encrypted", plain_hits == 0);
    out.verdict.set("closure_secrets", std::to_string(derived));
    out.verdict.set_flag("ok", provisioned && plain_hits == 0 && derived == 0);
    finish(out, s, w.fabric().transcript());
    return out;
}

RunOutput run_prop_passchange(const Scenario& s) {
    RunOutput out;
    World w(s.world_config());
    bool provisioned = w.provision();
    std::string old_pw = w.user().password();
    bool completed = provisioned && w.password_change(s.new_password);
    bool invariants = w.all_invariants();
    bool old_rejected = false, new_works = false;
    if (completed) {
        old_rejected = !w.login(old_pw).server_confirmed;
        new_works = w.login().keys_equal;
    }
    out.verdict.set_flag("provisioned", provisioned);
    out.verdict.set_flag("completed", completed);
    out.verdict.set_flag("invariants", invariants);
    out.verdict.set_flag("old_password_rejected", old_rejected);
    out.verdict.set_flag("new_password_works", new_works);
    out.verdict.set_flag("ok",
                         provisioned && completed && invariants && old_rejected && new_works);
    finish(out, s, w.fabric().transcript());
    return out;
}

RunOutput run_prop_recovery(const Scenario& s, bool card_kind) {
    RunOutput out;
    World w(s.world_config());
    bool provisioned = w.provision();
    if (card_kind) w.user().lose_card();
    bool completed = provisioned && (card_kind ? w.card_recovery(s.new_password)
                                               : w.password_recovery(s.new_password));
    bool invariants = w.all_invariants();
    std::uint64_t reverts = w.fabric().event_count(EventKind::StoreReverted);
    std::uint64_t retries = w.fabric().event_count(EventKind::RetryStarted);
    bool revert_exercised = s.faults.empty() || (reverts > 0 && retries > 0);
    bool new_works = completed && w.login().keys_equal;

    out.verdict.set_flag("provisioned", provisioned);
    out.verdict.set_flag("completed", completed);
    out.verdict.set_flag("invariants", invariants);
    out.verdict.set("reverts", std::to_string(reverts));
    out.verdict.set("retries", std::to_string(retries));
    out.verdict.set_flag("revert_exercised", revert_exercised);
    out.verdict.set_flag("new_password_works", new_works);
    out.verdict.set_flag("ok", provisioned && completed && invariants && revert_exercised &&
                                   new_works);
    finish(out, s, w.fabric().transcript());
    return out;
}

struct FaultPoint {
    const char* phase;
    std::size_t msg;
    FieldId field;
};

constexpr FaultPoint kFaultMatrix[] = {
    // password change: every documented failure branch
    {"pass-change", 1, FieldId::Tcxs},   // center's master-secret check
    {"pass-change", 2, FieldId::Txs},    // server's master-secret check
    {"pass-change", 3, FieldId::UserId}, // center's verification of the reply
    {"pass-change", 4, FieldId::Tcs},    // card-side echo check
    {"pass-change", 5, FieldId::UserId}, // center's verification of the ack
    // password recovery
    {"pass-recovery", 1, FieldId::UserId},
    {"pass-recovery", 2, FieldId::ServerId},
    {"pass-recovery", 3, FieldId::RecoveryNonce},
    {"pass-recovery", 4, FieldId::Txs},
    {"pass-recovery", 5, FieldId::UserId},
    {"pass-recovery", 6, FieldId::Tcs},
    {"pass-recovery", 7, FieldId::UserId},
    // card recovery
    {"card-recovery", 1, FieldId::UserId},
    {"card-recovery", 2, FieldId::ServerId},
    {"card-recovery", 3, FieldId::RecoveryNonce},
    {"card-recovery", 4, FieldId::Txs},
    {"card-recovery", 5, FieldId::UserId},
    {"card-recovery", 6, FieldId::Bpn},
    {"card-recovery", 7, FieldId::UserId},
};

RunOutput run_fault_matrix(const Scenario& s) {
    RunOutput out;
    Transcript combined;
    std::uint64_t points = 0, violations = 0;
    for (const FaultPoint& point : kFaultMatrix) {
        ++points;
        Scenario variant = s;
        variant.seed = Rng(s.seed).fork(std::string(point.phase) + "/" +
                                        std::to_string(point.msg))
                           .seed();
        variant.retries = 0;
        WorldConfig config = variant.world_config();
        auto phase = [&] {
            if (std::string_view(point.phase) == "pass-change") return Phase::PassChange;
            if (std::string_view(point.phase) == "pass-recovery") return Phase::PassRecovery;
            return Phase::CardRecovery;
        }();
        config.faults.push_back(FaultSpec{phase, point.msg, point.field});

        World w(config);
        bool bad = false;
        if (!w.provision()) {
            bad = true;
        } else {
            std::string old_pw = w.user().password();
            bool completed = false;
            if (phase == Phase::PassChange) {
                completed = w.password_change(s.new_password);
            } else if (phase == Phase::PassRecovery) {
                completed = w.password_recovery(s.new_password);
            } else {
                // the card stays in hand: recovery is driven by choice, and
                // the injected fault must still abort it cleanly
                completed = w.card_recovery(s.new_password);
            }
            // with no retry budget the faulted phase must abort...
            if (completed) bad = true;
            // ...leaving every store consistent and the old credentials alive
            if (!w.all_invariants()) bad = true;
            if (!w.login(old_pw).keys_equal) bad = true;
        }
        if (bad) ++violations;
        combined.add_event(ActorId::Adversary,
                           Event{EventKind::CheckFailed,
                                 std::string("fault-point ") + point.phase + ":" +
                                     std::to_string(point.msg) + ":" +
                                     field_name(point.field) + (bad ? " VIOLATION" : " ok")});
    }
    out.verdict.set("points", std::to_string(points));
    out.verdict.set("violations", std::to_string(violations));
    out.verdict.set_flag("ok", violations == 0);
    finish(out, s, combined);
    return out;
}

}  // namespace

Result<RunOutput> run_scenario(const Scenario& s) {
    static const std::map<std::string, std::function<RunOutput(const Scenario&)>> kRunners = {
        {"li-honest-login", run_li_honest},
        {"li-noise-login", run_li_noise},
        {"li-guess-stolen-card", run_li_guess},
        {"li-impersonate", run_li_impersonate},
        {"li-masquerade", run_li_masquerade},
        {"li-replay", run_li_replay},
        {"li-store-audit", run_li_store_audit},
        {"li-forgery", run_li_forgery},
        {"li-recovery-probe", run_li_recovery_probe},
        {"honest-login", run_prop_honest},
        {"noise-login", run_prop_honest},
        {"guess-proposed", run_prop_guess},
        {"impersonate-proposed", run_prop_impersonate},
        {"masquerade-proposed", run_prop_masquerade},
        {"replay-proposed", run_prop_replay},
        {"store-audit-proposed", run_prop_store_audit},
        {"pass-change", run_prop_passchange},
        {"pass-recovery", [](const Scenario& sc) { return run_prop_recovery(sc, false); }},
        {"card-recovery", [](const Scenario& sc) { return run_prop_recovery(sc, true); }},
        {"fault-matrix", run_fault_matrix},
    };
    auto runner = kRunners.find(s.kind);
    if (runner == kRunners.end()) return Error::NotFound;
    return runner->second(s);
}

}  // namespace tfa::sim
