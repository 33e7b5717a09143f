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

#include "support/ref_sha256.hpp"
#include "tfa/proposed/kernels.hpp"
#include "tfa/rng.hpp"

using namespace tfa;
using namespace tfa::proposed;

TEST_CASE("password/biometric blend is deterministic and avalanche-sensitive") {
    Rng rng(1);
    Block32 b = rng.next_block();
    CHECK(derive_bp("pw", b) == derive_bp("pw", b));
    CHECK(derive_bp("pw", b) != derive_bp("pW", b));
    CHECK(derive_bp("pw", b) != derive_bp("pw", rng.next_block()));
}

TEST_CASE("the two master-secret derivations agree (flattening)") {
    Rng rng(2);
    for (int i = 0; i < 100; ++i) {
        Block32 ks = rng.next_block(), w = rng.next_block(), bp = rng.next_block();
        // center side: h(ks ∥ (w ∥ bp)); card side: h((ks ∥ w) ∥ bp)
        Block32 via_tx = derive_xs(ks, make_tx(w, bp));
        Block32 via_tc = hash({make_tc(ks, w), bp});
        CHECK(via_tx == via_tc);
    }
}

TEST_CASE("all-zero master-secret derivation matches the reference digest") {
    Bytes zeros(96, 0);
    CHECK(derive_xs(Block32{}, Block64{}) ==
          Block32::from_bytes(testsupport::ref_sha256(zeros.data(), zeros.size())));
    // and it moves when the middle third moves
    Rng rng(3);
    Block32 w = rng.next_block();
    CHECK(derive_xs(Block32{}, make_tx(w, Block32{})) != derive_xs(Block32{}, Block64{}));
}

TEST_CASE("login pair masks and unmasks the nonce") {
    Rng rng(4);
    for (int i = 0; i < 100; ++i) {
        Block32 id = rng.next_block(), xs = rng.next_block(), rn2 = rng.next_block();
        auto [m1, m2] = make_login_pair(id, xs, rn2);
        CHECK(recover_rn2(id, xs, m2) == rn2);
        // the verifier recomputes the same proof from the recovered nonce
        CHECK(hash({xs, recover_rn2(id, xs, m2)}) == m1);
    }
    // zero nonce degenerates to the bare binding digest
    Block32 id = rng.next_block(), xs = rng.next_block();
    auto [m1, m2] = make_login_pair(id, xs, Block32{});
    CHECK(m2 == hash({id, xs}));
    CHECK(m1 == hash({xs, Block32{}}));
}

TEST_CASE("challenge pair masks and unmasks the fresh nonce") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        Block32 id = rng.next_block(), xs = rng.next_block();
        Block32 rn2 = rng.next_block(), rn3 = rng.next_block();
        auto [m4, m5] = make_challenge(id, xs, rn2, rn3);
        CHECK(recover_rn3(id, xs, rn2, m5) == rn3);
        CHECK(hash({xs, rn3}) == m4);
    }
    Block32 id = rng.next_block(), xs = rng.next_block(), rn2 = rng.next_block();
    auto [m4, m5] = make_challenge(id, xs, rn2, Block32{});
    CHECK(m5 == hash({id, xs, rn2}));
}

TEST_CASE("confirmation digest is order-sensitive") {
    Rng rng(6);
    Block32 xs = rng.next_block(), rn2 = rng.next_block(), rn3 = rng.next_block();
    CHECK(make_confirmation(xs, rn2, rn3) == make_confirmation(xs, rn2, rn3));
    CHECK(make_confirmation(xs, rn2, rn3) != make_confirmation(xs, rn3, rn2));
}

TEST_CASE("session keys differ across nonce pairs") {
    Rng rng(7);
    std::set<Block32> keys;
    for (int i = 0; i < 100; ++i) {
        keys.insert(derive_session_key(rng.next_block(), rng.next_block()));
    }
    CHECK(keys.size() == 100);
    Bytes zeros(64, 0);
    CHECK(derive_session_key(Block32{}, Block32{}) ==
          Block32::from_bytes(testsupport::ref_sha256(zeros.data(), zeros.size())));
}

TEST_CASE("masked card secret roundtrips and rejects tampering") {
    Rng rng(8);
    Block64 tcs = Block64::concat(rng.next_block(), rng.next_block());
    Block32 xs = rng.next_block();
    Block64 tcx = make_tcx(tcs, xs);

    auto back = recover_xs_from_tcx(tcx, tcs);
    REQUIRE(back.ok());
    CHECK(back.value() == xs);

    // zero master secret leaves the card secret unmasked
    CHECK(make_tcx(tcs, Block32{}) == tcs);

    // flipping any single bit of the masked value breaks the half-equality
    for (std::size_t bit = 0; bit < Block64::kSize * 8; ++bit) {
        Bytes raw = tcx.to_vector();
        raw[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        auto r = recover_xs_from_tcx(Block64::from_bytes(raw), tcs);
        REQUIRE(!r.ok());
        CHECK(r.error() == Error::VerificationFailure);
    }
}
