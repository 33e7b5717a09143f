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

#include "tfa/biometric.hpp"

using namespace tfa;
using namespace tfa::bio;

TEST_CASE("gen/rep reproduces the key with an identical template") {
    Rng rng(1);
    Template t = random_template(kDefaultTemplateBits, rng);
    auto [key, helper] = gen(t, rng);
    CHECK(helper.check == hash({key}));
    auto r = rep(t, helper);
    REQUIRE(r.ok());
    CHECK(r.value() == key);
}

TEST_CASE("different rng states give different keys for the same template") {
    Rng rng(2);
    Template t = random_template(kDefaultTemplateBits, rng);
    int distinct = 0;
    Block32 prev;
    for (int i = 0; i < 100; ++i) {
        auto [key, helper] = gen(t, rng);
        if (i > 0 && key != prev) ++distinct;
        prev = key;
    }
    CHECK(distinct == 99);
}

TEST_CASE("one flip per repetition group is always corrected") {
    Rng rng(3);
    Template t = random_template(kDefaultTemplateBits, rng);
    auto [key, helper] = gen(t, rng);
    std::size_t rep_factor = kDefaultTemplateBits / kKeyBits;
    REQUIRE(rep_factor == 4);
    CHECK(noise_tolerance_per_group(kDefaultTemplateBits) == 1);

    // exhaustive over the position inside every group
    for (std::size_t pos = 0; pos < rep_factor; ++pos) {
        Template noisy = t;
        for (std::size_t group = 0; group < kKeyBits; ++group) {
            noisy.flip(group * rep_factor + pos);
        }
        CHECK(hamming(t, noisy) == kKeyBits);
        auto r = rep(noisy, helper);
        REQUIRE(r.ok());
        CHECK(r.value() == key);
    }

    // randomized position per group
    for (int trial = 0; trial < 100; ++trial) {
        Template noisy = t;
        for (std::size_t group = 0; group < kKeyBits; ++group) {
            noisy.flip(group * rep_factor + rng.uniform_below(rep_factor));
        }
        auto r = rep(noisy, helper);
        REQUIRE(r.ok());
        CHECK(r.value() == key);
    }
}

TEST_CASE("unrelated templates are rejected, never decoded to a wrong key") {
    Rng rng(4);
    Template t = random_template(kDefaultTemplateBits, rng);
    auto [key, helper] = gen(t, rng);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        Template other = random_template(kDefaultTemplateBits, rng);
        auto r = rep(other, helper);
        if (!r.ok()) {
            CHECK(r.error() == Error::BiometricMismatch);
            ++mismatches;
        } else {
            // acceptance is only valid if it reproduced the true key
            CHECK(r.value() == key);
        }
    }
    CHECK(mismatches >= 999);
}

TEST_CASE("perturb flips exactly the requested number of distinct bits") {
    Rng rng(5);
    Template t = random_template(kDefaultTemplateBits, rng);
    CHECK(perturb(t, 0, rng) == t);
    for (std::size_t k : {std::size_t{1}, std::size_t{17}, std::size_t{256}}) {
        Rng r1(99), r2(99);
        Template p1 = perturb(t, k, r1);
        Template p2 = perturb(t, k, r2);
        CHECK(hamming(t, p1) == k);
        CHECK(p1 == p2);  // seed-deterministic
    }
}

TEST_CASE("template hex roundtrip and length checks") {
    Rng rng(6);
    Template t = random_template(512, rng);
    CHECK(Template::from_hex(t.hex(), 512) == t);
    CHECK_THROWS(Template(100));  // not a multiple of 256
    CHECK_THROWS(Template(0));
}
