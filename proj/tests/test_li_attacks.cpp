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

#include "tfa/li/attacks.hpp"

using namespace tfa;
using namespace tfa::li;

namespace {

struct Victim {
    Rng rng;
    Block32 id;
    std::string pw;
    bio::Template tpl;
    LiServer server;
    LiCard card;

    explicit Victim(std::uint64_t seed, std::string password = "hunter2")
        : rng(seed), id(canonical_id("victim-" + std::to_string(seed))), pw(std::move(password)) {
        tpl = bio::random_template(bio::kDefaultTemplateBits, rng);
        server.xs = rng.next_block();
        server.curve = ec::tiny_curve();
        server.known_ids.insert(id);
        card = li_register(id, pw, tpl, server.xs, rng);
    }
};

Dictionary small_dict_with(const std::string& pw, std::size_t size, std::size_t index) {
    Dictionary d;
    for (std::size_t i = 0; i < size; ++i) {
        d.words.push_back(i == index ? pw : "candidate-" + std::to_string(i));
    }
    return d;
}

}  // namespace

TEST_CASE("extraction is a faithful, idempotent copy") {
    Victim v(1);
    ExtractedCard x = extract_card(v.card);
    CHECK(x.card == v.card);
    CHECK(extract_card(x.card) == x);
    // extracted salt reproduces the verifier for a known password
    CHECK(hash({v.id, derive_rpw(v.pw, x.card.k)}) == x.card.r);
}

TEST_CASE("dictionary walk finds the password at exactly index+1 evaluations") {
    Victim v(2);
    ExtractedCard x = extract_card(v.card);
    for (std::size_t index : {std::size_t{0}, std::size_t{3}, std::size_t{99}}) {
        Dictionary dict = small_dict_with(v.pw, 100, index);
        GuessOutcome out = guess_password(x, v.id, dict);
        CHECK(out.found);
        CHECK(out.password == v.pw);
        CHECK(out.evaluations == index + 1);
    }
}

TEST_CASE("a dictionary missing the password exhausts without a hit") {
    Victim v(3);
    ExtractedCard x = extract_card(v.card);
    Dictionary dict = small_dict_with("absent", 50, 7);
    dict.words[7] = "still-absent";
    GuessOutcome out = guess_password(x, v.id, dict);
    CHECK(!out.found);
    CHECK(out.evaluations == 50);
}

TEST_CASE("guessing is deterministic") {
    Victim v(4);
    ExtractedCard x = extract_card(v.card);
    Dictionary dict = small_dict_with(v.pw, 200, 123);
    GuessOutcome a = guess_password(x, v.id, dict);
    GuessOutcome b = guess_password(x, v.id, dict);
    CHECK(a.found == b.found);
    CHECK(a.evaluations == b.evaluations);
    CHECK(a.password == b.password);
}

TEST_CASE("impersonation with the correct guess completes mutual auth") {
    Victim v(5);
    ExtractedCard x = extract_card(v.card);
    Rng attacker(999);
    ImpersonationOutcome out = impersonate_user(x, v.id, v.pw, v.server, attacker);
    CHECK(out.server_accepted);
    CHECK(out.mutual_auth_completed);
    CHECK(out.keys_agree);
}

TEST_CASE("impersonation with a wrong guess is rejected at the request check") {
    Victim v(6);
    ExtractedCard x = extract_card(v.card);
    Rng attacker(999);
    ImpersonationOutcome out = impersonate_user(x, v.id, "wrong", v.server, attacker);
    CHECK(!out.server_accepted);
}

TEST_CASE("impersonation transcript is deterministic under one seed") {
    Victim v1(7), v2(7);
    Rng a1(11), a2(11);
    ImpersonationOutcome o1 = impersonate_user(extract_card(v1.card), v1.id, v1.pw, v1.server, a1);
    ImpersonationOutcome o2 = impersonate_user(extract_card(v2.card), v2.id, v2.pw, v2.server, a2);
    REQUIRE(o1.keys_agree);
    REQUIRE(o2.keys_agree);
    CHECK(*o1.attacker_key == *o2.attacker_key);
}

TEST_CASE("masquerading server with the stolen secret deceives the honest user") {
    Victim v(8);
    MasqueradeServer attacker(v.server.xs, v.server.curve);

    // arm one: fresh ephemeral; keys agree with the attacker
    auto login = li_login(v.card, v.id, v.pw, v.tpl, v.server.curve, v.rng);
    REQUIRE(login.ok());
    Rng arng(1000);
    auto reply = attacker.respond(login.value().first, arng);
    REQUIRE(reply.ok());
    auto sk = li_user_finish(reply.value(), login.value().second, v.server.curve);
    REQUIRE(sk.ok());  // the user accepted a fake server
    REQUIRE(attacker.last_key().has_value());
    CHECK(sk.value() == *attacker.last_key());

    // arm two: replayed ephemeral from an old transcript; the user still
    // accepts, even though the attacker cannot derive the key
    auto login2 = li_login(v.card, v.id, v.pw, v.tpl, v.server.curve, v.rng);
    REQUIRE(login2.ok());
    ec::Point captured = reply.value().m5;
    auto reply2 = attacker.respond(login2.value().first, arng, captured);
    REQUIRE(reply2.ok());
    CHECK(!attacker.last_key().has_value());
    CHECK(li_user_finish(reply2.value(), login2.value().second, v.server.curve).ok());
}

TEST_CASE("masquerader without the secret is rejected by the user") {
    Victim v(9);
    Rng arng(1001);
    MasqueradeServer attacker(arng.next_block(), v.server.curve);  // random guess
    auto login = li_login(v.card, v.id, v.pw, v.tpl, v.server.curve, v.rng);
    REQUIRE(login.ok());
    auto reply = attacker.respond(login.value().first, arng);
    // the fake either rejects the request (its own digest check fails) or,
    // if it answered anyway, the user must reject the reply
    if (reply.ok()) {
        CHECK(!li_user_finish(reply.value(), login.value().second, v.server.curve).ok());
    } else {
        CHECK(reply.error() == Error::AuthFailure);
    }
}

TEST_CASE("dictionary files hold one candidate per line") {
    namespace fs = std::filesystem;
    fs::path file = fs::temp_directory_path() / "tfa-dict-test.txt";
    Dictionary dict;
    dict.words = {"first", "second word", "third"};
    dict.save(file);
    auto back = Dictionary::load(file);
    REQUIRE(back.ok());
    CHECK(back.value().words == dict.words);
    fs::remove(file);

    CHECK(!Dictionary::load(fs::temp_directory_path() / "absent-dict.txt").ok());
}

TEST_CASE("guessing against an empty dictionary reports nothing found") {
    Victim v(77);
    GuessOutcome out = guess_password(extract_card(v.card), v.id, Dictionary{});
    CHECK(!out.found);
    CHECK(out.evaluations == 0);
}
