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

#include "tfa/envelope.hpp"
#include "tfa/rng.hpp"
#include "tfa/store_io.hpp"

using namespace tfa;

TEST_CASE("envelope wire roundtrip over randomized field sets") {
    Rng rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        Envelope env(static_cast<Phase>(1 + rng.uniform_below(6)),
                     static_cast<Stat>(rng.uniform_below(17)));
        std::size_t nfields = rng.uniform_below(5);
        for (std::size_t i = 0; i < nfields; ++i) {
            FieldId id = static_cast<FieldId>(1 + rng.uniform_below(19));
            Bytes payload;
            std::size_t len = rng.uniform_below(70);
            for (std::size_t b = 0; b < len; ++b) {
                payload.push_back(static_cast<std::uint8_t>(rng.uniform_below(256)));
            }
            env.add(id, payload);
        }
        auto back = Envelope::decode(env.encode());
        REQUIRE(back.ok());
        CHECK(back.value() == env);
    }
}

TEST_CASE("envelope header layout is exactly phase, stat, count") {
    Envelope env(Phase::LoginAuth, Stat::Login);
    env.add(FieldId::UserId, Block32{});
    Bytes wire = env.encode();
    REQUIRE(wire.size() == 3 + 1 + 4 + 32);
    CHECK(wire[0] == static_cast<std::uint8_t>(Phase::LoginAuth));
    CHECK(wire[1] == static_cast<std::uint8_t>(Stat::Login));
    CHECK(wire[2] == 1);
    CHECK(wire[3] == static_cast<std::uint8_t>(FieldId::UserId));
    CHECK(wire[4] == 0);
    CHECK(wire[7] == 32);  // big-endian length
}

TEST_CASE("malformed envelopes are rejected") {
    Envelope env(Phase::LoginAuth, Stat::Login);
    env.add(FieldId::M1, Block32{});
    Bytes wire = env.encode();

    CHECK(!Envelope::decode(Bytes{}).ok());
    CHECK(!Envelope::decode(Bytes{1, 2}).ok());
    Bytes truncated(wire.begin(), wire.end() - 1);
    CHECK(!Envelope::decode(truncated).ok());
    Bytes padded = wire;
    padded.push_back(0);
    CHECK(!Envelope::decode(padded).ok());
    Bytes overcount = wire;
    overcount[2] = 2;  // claims one more field than present
    CHECK(!Envelope::decode(overcount).ok());
}

TEST_CASE("typed getters enforce field widths") {
    Envelope env(Phase::LoginAuth, Stat::Login);
    env.add(FieldId::M1, Bytes(16, 0xab));
    CHECK(!env.get32(FieldId::M1).ok());
    CHECK(!env.get64(FieldId::M1).ok());
    CHECK(env.get_bytes(FieldId::M1).ok());
    CHECK(!env.get32(FieldId::M2).ok());  // absent
}

TEST_CASE("store framing validates magic and algorithm identifiers") {
    Bytes body{1, 2, 3};
    Bytes file = store::frame(store::Kind::Card, body);
    auto back = store::unframe(file);
    REQUIRE(back.ok());
    CHECK(back.value().first == store::Kind::Card);
    CHECK(back.value().second == body);

    Bytes corrupted = file;
    corrupted[4] ^= 0xff;  // inside the magic string
    CHECK(!store::unframe(corrupted).ok());
    CHECK(!store::unframe(Bytes{}).ok());
}

TEST_CASE("describe names the phase, stat and fields") {
    Envelope env(Phase::LoginAuth, Stat::Login);
    env.add(FieldId::UserId, Block32{});
    std::string text = env.describe();
    CHECK(text.find("login/Login") != std::string::npos);
    CHECK(text.find("ID=") != std::string::npos);
}
