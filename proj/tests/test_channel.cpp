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

#include <doctest.h>

#include "tfa/sim/scenario.hpp"

using namespace tfa;
using namespace tfa::sim;

namespace {

Scenario make(const std::string& kind, std::uint64_t seed = 7, std::uint64_t trials = 3) {
    Scenario s;
    s.name = "test-" + kind;
    s.kind = kind;
    s.seed = seed;
    s.trials = trials;
    return s;
}

}  // namespace

TEST_CASE("adversary knowledge: splitting, opening, xor span") {
    Rng rng(1);
    Knowledge know;

    Block32 a = rng.next_block(), b = rng.next_block();
    Block64 pair = Block64::concat(a, b);
    know.add(pair.span(), "observed:pair");
    know.close();
    CHECK(know.knows_direct(a.span()));
    CHECK(know.knows_direct(b.span()));

    // xor span: knowing x and x^y gives y without holding it directly
    Block32 x = rng.next_block(), y = rng.next_block();
    know.add(x.span(), "observed:x");
    know.add((x ^ y).span(), "observed:mask");
    CHECK(!know.knows_direct(y.span()));
    CHECK(know.knows(y.span()));

    // a fresh random value is not derivable
    CHECK(!know.knows(rng.next_block().span()));

    // boxes open only once a usable key enters the knowledge set
    Block32 key_seed = rng.next_block();
    Block64 secret = Block64::concat(rng.next_block(), rng.next_block());
    SealedBox box = seal(secret.span(), kdf_biokey(key_seed), rng);
    know.add_box(box, "extracted:box");
    know.close();
    CHECK(!know.knows(secret.span()));
    know.add(key_seed.span(), "granted:key");
    know.close();
    CHECK(know.knows_direct(secret.span()));
}

TEST_CASE("fault spec parsing") {
    auto f = parse_fault("pass-change:2:TXS");
    REQUIRE(f.ok());
    CHECK(f.value().phase == Phase::PassChange);
    CHECK(f.value().msg_index == 2);
    CHECK(f.value().field == FieldId::Txs);
    CHECK(!parse_fault("nope").ok());
    CHECK(!parse_fault("login:0:M1").ok());
    CHECK(!parse_fault("login:1:NOPE").ok());
}

TEST_CASE("scenario files parse and reject three-factor capability sets") {
    auto config = harness::Config::parse(
        "[scenario]\n"
        "name = demo\n"
        "kind = honest-login\n"
        "seed = 3\n"
        "trials = 5\n"
        "[provision]\n"
        "user = bob\n"
        "password = pw with spaces\n"
        "[capabilities]\n"
        "card_stolen = true\n"
        "[faults]\n"
        "corrupt = pass-change:2:TXS\n"
        "[expect]\n"
        "ok = true\n");
    REQUIRE(config.ok());
    auto s = Scenario::parse(config.value(), "fallback");
    REQUIRE(s.ok());
    CHECK(s.value().name == "demo");
    CHECK(s.value().user == "bob");
    CHECK(s.value().password == "pw with spaces");
    CHECK(s.value().card_stolen);
    CHECK(s.value().faults.size() == 1);
    CHECK(s.value().expects.at("ok") == "true");

    auto bad = harness::Config::parse(
        "[scenario]\nkind = guess-proposed\n"
        "[capabilities]\ncard_stolen = true\nbio_leaked = true\ndict = synthetic:10\n");
    REQUIRE(bad.ok());
    CHECK(!Scenario::parse(bad.value(), "three-factors").ok());
}

TEST_CASE("honest login scenario runs green") {
    auto out = run_scenario(make("honest-login", 11, 5));
    REQUIRE(out.ok());
    CHECK(out.value().verdict.facts.at("ok") == "true");
    CHECK(out.value().verdict.facts.at("auth_success") == "5/5");
    CHECK(out.value().verdict.facts.at("secrecy_hits") == "0");
    CHECK(out.value().verdict.facts.at("closure_secrets") == "0");
}

TEST_CASE("scenario reruns are byte-identical") {
    for (const char* kind : {"honest-login", "replay-proposed", "li-honest-login",
                             "guess-proposed", "fault-matrix"}) {
        Scenario s = make(kind, 21, 2);
        if (std::string(kind) == "guess-proposed") {
            s.card_stolen = true;
            s.dict = "synthetic:20";
        }
        auto a = run_scenario(s);
        auto b = run_scenario(s);
        REQUIRE(a.ok());
        REQUIRE(b.ok());
        CHECK(a.value().transcript == b.value().transcript);
        CHECK(a.value().verdict.record(a.value().transcript_digest) ==
              b.value().verdict.record(b.value().transcript_digest));
    }
}

TEST_CASE("replay scenario rejects every attempt at the confirmation check") {
    auto out = run_scenario(make("replay-proposed", 13, 6));
    REQUIRE(out.ok());
    CHECK(out.value().verdict.facts.at("accepted") == "0/0");
    CHECK(out.value().verdict.facts.at("rejected_at_confirm") == "6/6");
    CHECK(out.value().verdict.facts.at("ok") == "true");
}

TEST_CASE("impersonation and masquerade scenarios reject all forgeries") {
    auto imp = run_scenario(make("impersonate-proposed", 17, 9));
    REQUIRE(imp.ok());
    CHECK(imp.value().verdict.facts.at("accepted") == "0/9");
    CHECK(imp.value().verdict.facts.at("ok") == "true");

    auto masq = run_scenario(make("masquerade-proposed", 19, 9));
    REQUIRE(masq.ok());
    CHECK(masq.value().verdict.facts.at("accepted") == "0/9");
    CHECK(masq.value().verdict.facts.at("rejected_at_challenge") == "9/9");
    CHECK(masq.value().verdict.facts.at("ok") == "true");
}

TEST_CASE("guess scenario: no verifier for the proposed card, sanity arm recovers") {
    Scenario s = make("guess-proposed", 23, 1);
    s.card_stolen = true;
    s.dict = "synthetic:50";
    auto out = run_scenario(s);
    REQUIRE(out.ok());
    const auto& facts = out.value().verdict.facts;
    CHECK(facts.at("verifier_absent") == "true");
    CHECK(facts.at("distinguished") == "0");
    CHECK(facts.at("sanity_recovered") == "true");
    CHECK(facts.at("sanity_eval_exact") == "true");
    CHECK(facts.at("ok") == "true");
}

TEST_CASE("li attack scenarios reproduce the published breaks") {
    auto guess = run_scenario([&] {
        Scenario s = make("li-guess-stolen-card", 29, 3);
        s.dict = "synthetic:100";
        return s;
    }());
    REQUIRE(guess.ok());
    CHECK(guess.value().verdict.facts.at("recovered") == "3/3");
    CHECK(guess.value().verdict.facts.at("eval_exact") == "3/3");

    auto imp = run_scenario([&] {
        Scenario s = make("li-impersonate", 31, 3);
        s.dict = "synthetic:50";
        return s;
    }());
    REQUIRE(imp.ok());
    CHECK(imp.value().verdict.facts.at("accepted") == "3/3");

    auto masq = run_scenario(make("li-masquerade", 37, 4));
    REQUIRE(masq.ok());
    CHECK(masq.value().verdict.facts.at("user_accepted") == "4/4");

    auto replay = run_scenario(make("li-replay", 41, 3));
    REQUIRE(replay.ok());
    CHECK(replay.value().verdict.facts.at("server_accepted_replay") == "3/3");
    CHECK(replay.value().verdict.facts.at("attacker_key_derivable") == "false");
}

TEST_CASE("fault matrix covers 19 points with zero violations") {
    auto out = run_scenario(make("fault-matrix", 43, 1));
    REQUIRE(out.ok());
    CHECK(out.value().verdict.facts.at("points") == "19");
    CHECK(out.value().verdict.facts.at("violations") == "0");
}

TEST_CASE("recovery scenarios complete with fault-injected reverts") {
    Scenario s = make("pass-recovery", 47, 1);
    s.retries = 2;
    s.faults.push_back(FaultSpec{Phase::PassRecovery, 5, FieldId::UserId});
    auto out = run_scenario(s);
    REQUIRE(out.ok());
    CHECK(out.value().verdict.facts.at("completed") == "true");
    CHECK(out.value().verdict.facts.at("revert_exercised") == "true");
    CHECK(out.value().verdict.facts.at("ok") == "true");

    Scenario c = make("card-recovery", 53, 1);
    c.retries = 2;
    c.faults.push_back(FaultSpec{Phase::CardRecovery, 5, FieldId::UserId});
    auto cout_ = run_scenario(c);
    REQUIRE(cout_.ok());
    CHECK(cout_.value().verdict.facts.at("completed") == "true");
    CHECK(cout_.value().verdict.facts.at("revert_exercised") == "true");
    CHECK(cout_.value().verdict.facts.at("ok") == "true");
}

TEST_CASE("unknown scenario kinds are refused") {
    CHECK(!run_scenario(make("no-such-kind")).ok());
}

TEST_CASE("store audit finds no secrets in any sealed record") {
    auto out = run_scenario(make("store-audit-proposed", 59, 1));
    REQUIRE(out.ok());
    CHECK(out.value().verdict.facts.at("stores_encrypted") == "true");
    CHECK(out.value().verdict.facts.at("closure_secrets") == "0");
    CHECK(out.value().verdict.facts.at("ok") == "true");
}

TEST_CASE("adversary fault grammar: drop, duplicate, delay on the insecure channel") {
    // drop the challenge: the login cannot finish, nothing crashes
    {
        WorldConfig c;
        c.seed = 61;
        c.faults.push_back(FaultSpec{Phase::LoginAuth, 2, FieldId::M4, FaultKind::Drop});
        World w(c);
        REQUIRE(w.provision());
        auto login = w.login();
        CHECK(!login.server_confirmed);
    }
    // duplicate the confirmation: the first completes auth, the copy is stale
    {
        WorldConfig c;
        c.seed = 62;
        c.faults.push_back(FaultSpec{Phase::LoginAuth, 3, FieldId::M7, FaultKind::Duplicate});
        World w(c);
        REQUIRE(w.provision());
        auto login = w.login();
        CHECK(login.keys_equal);
        CHECK(w.fabric().event_count(EventKind::IllegalStat, "login/confirm") == 1);
    }
    // delay the login request behind nothing: still delivers and completes
    {
        WorldConfig c;
        c.seed = 63;
        c.faults.push_back(
            FaultSpec{Phase::LoginAuth, 1, FieldId::M1, FaultKind::Delay, 3});
        World w(c);
        REQUIRE(w.provision());
        CHECK(w.login().keys_equal);
    }
    // adversary grammar does not touch secure channels: a drop aimed at a
    // secure registration message has no effect
    {
        WorldConfig c;
        c.seed = 64;
        c.faults.push_back(FaultSpec{Phase::UserReg, 1, FieldId::Bp, FaultKind::Drop});
        World w(c);
        CHECK(w.provision());
    }
}

TEST_CASE("fault entries parse for every kind") {
    auto config = harness::Config::parse(
        "[scenario]\nkind = honest-login\n"
        "[faults]\n"
        "corrupt = login:1:M1\n"
        "drop = login:2\n"
        "duplicate = login:3\n"
        "delay = login:1:5\n");
    REQUIRE(config.ok());
    auto s = Scenario::parse(config.value(), "kinds");
    REQUIRE(s.ok());
    REQUIRE(s.value().faults.size() == 4);
    CHECK(s.value().faults[0].kind == FaultKind::Corrupt);
    CHECK(s.value().faults[1].kind == FaultKind::Drop);
    CHECK(s.value().faults[2].kind == FaultKind::Duplicate);
    CHECK(s.value().faults[3].kind == FaultKind::Delay);
    CHECK(s.value().faults[3].window == 5);
}

TEST_CASE("a tiny step budget surfaces as a failed run, not a hang") {
    Scenario s;
    s.name = "budget";
    s.kind = "honest-login";
    s.seed = 65;
    s.trials = 1;
    s.step_budget = 3;
    auto out = run_scenario(s);
    REQUIRE(out.ok());
    CHECK(out.value().verdict.facts.at("ok") == "false");
}

TEST_CASE("empty dictionaries walk zero candidates") {
    Scenario s;
    s.name = "empty-dict";
    s.kind = "guess-proposed";
    s.seed = 66;
    s.card_stolen = true;
    s.dict = "synthetic:0";
    auto out = run_scenario(s);
    REQUIRE(out.ok());
    CHECK(out.value().verdict.facts.at("dict_size") == "0");
    CHECK(out.value().verdict.facts.at("distinguished") == "0");
    CHECK(out.value().verdict.facts.at("sanity_evals") == "0");
}
