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

#include <set>

#include "tfa/li/scheme.hpp"

using namespace tfa;
using namespace tfa::li;

namespace {

struct Fixture {
    Rng rng{42};
    Block32 id = canonical_id("alice");
    std::string pw = "correct horse";
    bio::Template tpl;
    LiServer server;
    LiCard card;

    Fixture() {
        tpl = bio::random_template(bio::kDefaultTemplateBits, rng);
        server.xs = rng.next_block();
        server.curve = ec::tiny_curve();
        server.known_ids.insert(id);
        card = li_register(id, pw, tpl, server.xs, rng);
    }
};

}  // namespace

TEST_CASE("registered card satisfies its defining identities") {
    Fixture fx;
    Block32 rpw = derive_rpw(fx.pw, fx.card.k);
    CHECK((fx.card.e ^ hash({fx.card.f, rpw})) == hash({fx.id, fx.server.xs}));
    CHECK(fx.card.r == hash({fx.id, rpw}));
}

TEST_CASE("full register/login/auth run agrees on the session key") {
    Fixture fx;
    auto login = li_login(fx.card, fx.id, fx.pw, fx.tpl, fx.server.curve, fx.rng);
    REQUIRE(login.ok());
    const auto& [req, user_session] = login.value();

    auto verify = li_server_verify(req, fx.server, fx.rng);
    REQUIRE(verify.ok());
    const auto& [reply, server_session] = verify.value();

    auto sk = li_user_finish(reply, user_session, fx.server.curve);
    REQUIRE(sk.ok());
    CHECK(sk.value() == server_session.session_key);

    // the card-side masked value equals the server-side binding
    CHECK(user_session.m1 == server_session.m4);
}

TEST_CASE("wrong password is rejected before any message is sent") {
    Fixture fx;
    auto r = li_login(fx.card, fx.id, "wrong password", fx.tpl, fx.server.curve, fx.rng);
    REQUIRE(!r.ok());
    CHECK(r.error() == Error::PasswordMismatch);
}

TEST_CASE("noisy but close biometric still logs in") {
    Fixture fx;
    for (int i = 0; i < 100; ++i) {
        // one flip in every repetition group: worst case within tolerance
        bio::Template noisy = fx.tpl;
        std::size_t rep_factor = bio::kDefaultTemplateBits / bio::kKeyBits;
        for (std::size_t g = 0; g < bio::kKeyBits; ++g) {
            noisy.flip(g * rep_factor + fx.rng.uniform_below(rep_factor));
        }
        auto r = li_login(fx.card, fx.id, fx.pw, noisy, fx.server.curve, fx.rng);
        CHECK(r.ok());
    }
}

TEST_CASE("unrelated biometric is rejected") {
    Fixture fx;
    bio::Template other = bio::random_template(bio::kDefaultTemplateBits, fx.rng);
    auto r = li_login(fx.card, fx.id, fx.pw, other, fx.server.curve, fx.rng);
    REQUIRE(!r.ok());
    CHECK(r.error() == Error::BiometricMismatch);
}

TEST_CASE("server rejects a tampered request digest (every bit)") {
    Fixture fx;
    auto login = li_login(fx.card, fx.id, fx.pw, fx.tpl, fx.server.curve, fx.rng);
    REQUIRE(login.ok());
    LoginRequest req = login.value().first;
    for (std::size_t bit = 0; bit < 256; ++bit) {
        LoginRequest bad = req;
        bad.m3.bytes()[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        auto r = li_server_verify(bad, fx.server, fx.rng);
        REQUIRE(!r.ok());
        CHECK(r.error() == Error::AuthFailure);
    }
}

TEST_CASE("server rejects a foreign identity") {
    Fixture fx;
    auto login = li_login(fx.card, fx.id, fx.pw, fx.tpl, fx.server.curve, fx.rng);
    REQUIRE(login.ok());
    LoginRequest req = login.value().first;
    req.id = canonical_id("mallory");
    auto r = li_server_verify(req, fx.server, fx.rng);
    REQUIRE(!r.ok());
    CHECK(r.error() == Error::UnknownPrincipal);
}

TEST_CASE("user rejects a tampered reply") {
    Fixture fx;
    auto login = li_login(fx.card, fx.id, fx.pw, fx.tpl, fx.server.curve, fx.rng);
    REQUIRE(login.ok());
    auto verify = li_server_verify(login.value().first, fx.server, fx.rng);
    REQUIRE(verify.ok());
    AuthReply reply = verify.value().first;
    reply.m5 = ec::scalar_mul(7, fx.server.curve.base, fx.server.curve);
    auto sk = li_user_finish(reply, login.value().second, fx.server.curve);
    REQUIRE(!sk.ok());
    CHECK(sk.error() == Error::AuthFailure);
}

TEST_CASE("identity-point ephemeral collapses both key computations") {
    // degenerate case forced by the group law: k * identity = identity,
    // so both sides would hash the identity encoding
    const auto& curve = ec::tiny_curve();
    Block32 from_user = hash({ec::point_digest(
        ec::scalar_mul(5, ec::Point::identity(), curve), curve)});
    Block32 from_server = hash({ec::point_digest(
        ec::scalar_mul(9, ec::Point::identity(), curve), curve)});
    CHECK(from_user == from_server);
    CHECK(from_user == hash({ec::point_digest(ec::Point::identity(), curve)}));
}

TEST_CASE("session keys differ across sessions on the 256-bit profile") {
    // the desk curve has only 222 possible shared secrets, so distinctness
    // is only meaningful at full size
    Rng rng(4242);
    Block32 id = canonical_id("alice");
    bio::Template tpl = bio::random_template(bio::kDefaultTemplateBits, rng);
    LiServer server{rng.next_block(), ec::std256_curve(), {id}};
    LiCard card = li_register(id, "pw", tpl, server.xs, rng);

    std::set<Block32> keys;
    for (int i = 0; i < 100; ++i) {
        auto login = li_login(card, id, "pw", tpl, server.curve, rng);
        REQUIRE(login.ok());
        auto verify = li_server_verify(login.value().first, server, rng);
        REQUIRE(verify.ok());
        auto sk = li_user_finish(verify.value().first, login.value().second, server.curve);
        REQUIRE(sk.ok());
        CHECK(sk.value() == verify.value().second.session_key);
        keys.insert(sk.value());
    }
    CHECK(keys.size() == 100);
}

TEST_CASE("password change preserves the hidden binding and swaps verifiers") {
    Fixture fx;
    auto changed = li_change_password(fx.card, fx.id, fx.pw, "new secret", fx.tpl);
    REQUIRE(changed.ok());
    const LiCard& next = changed.value();

    Block32 rpw_old = derive_rpw(fx.pw, fx.card.k);
    Block32 rpw_new = derive_rpw("new secret", next.k);
    CHECK((next.e ^ hash({next.f, rpw_new})) == (fx.card.e ^ hash({fx.card.f, rpw_old})));

    // new password logs in, old one fails
    CHECK(li_login(next, fx.id, "new secret", fx.tpl, fx.server.curve, fx.rng).ok());
    auto old_login = li_login(next, fx.id, fx.pw, fx.tpl, fx.server.curve, fx.rng);
    REQUIRE(!old_login.ok());
    CHECK(old_login.error() == Error::PasswordMismatch);

    // change back restores the original verifier digest
    auto back = li_change_password(next, fx.id, "new secret", fx.pw, fx.tpl);
    REQUIRE(back.ok());
    CHECK(back.value().r == fx.card.r);
    CHECK(back.value().e == fx.card.e);
}

TEST_CASE("wrong old password blocks a change") {
    Fixture fx;
    auto r = li_change_password(fx.card, fx.id, "nope", "new secret", fx.tpl);
    REQUIRE(!r.ok());
    CHECK(r.error() == Error::PasswordMismatch);
}

TEST_CASE("card serialization roundtrip") {
    Fixture fx;
    Bytes wire = fx.card.encode();
    auto back = LiCard::decode(wire);
    REQUIRE(back.ok());
    CHECK(back.value() == fx.card);
    Bytes truncated(wire.begin(), wire.end() - 5);
    CHECK(!LiCard::decode(truncated).ok());
}

TEST_CASE("completeness across seeds") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        Block32 id = canonical_id("user-" + std::to_string(seed));
        bio::Template tpl = bio::random_template(bio::kDefaultTemplateBits, rng);
        LiServer server{rng.next_block(), ec::tiny_curve(), {id}};
        LiCard card = li_register(id, "pw", tpl, server.xs, rng);
        auto login = li_login(card, id, "pw", tpl, server.curve, rng);
        REQUIRE(login.ok());
        auto verify = li_server_verify(login.value().first, server, rng);
        REQUIRE(verify.ok());
        auto sk = li_user_finish(verify.value().first, login.value().second, server.curve);
        REQUIRE(sk.ok());
        CHECK(sk.value() == verify.value().second.session_key);
    }
}
