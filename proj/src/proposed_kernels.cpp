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

#include "tfa/proposed/kernels.hpp"

namespace tfa::proposed {

Block32 derive_bp(std::string_view pw, const Block32& bio_key) {
    return hash({canonical_id(pw), bio_key});
}

Block32 derive_ks(const Block32& sid, const Block32& rn1) { return hash({sid, rn1}); }

Block64 make_tx(const Block32& w, const Block32& bp) { return Block64::concat(w, bp); }

Block64 make_tc(const Block32& ks, const Block32& w) { return Block64::concat(ks, w); }

Block32 derive_xs(const Block32& ks, const Block64& txs) { return hash({ks, txs}); }

std::pair<Block32, Block32> make_login_pair(const Block32& id, const Block32& xs,
                                            const Block32& rn2) {
    Block32 m1 = hash({xs, rn2});
    Block32 m2 = hash({id, xs}) ^ rn2;
    return {m1, m2};
}

Block32 recover_rn2(const Block32& id, const Block32& xs, const Block32& m2) {
    return m2 ^ hash({id, xs});
}

std::pair<Block32, Block32> make_challenge(const Block32& id, const Block32& xs,
                                           const Block32& rn2, const Block32& rn3) {
    Block32 m4 = hash({xs, rn3});
    Block32 m5 = hash({id, xs, rn2}) ^ rn3;
    return {m4, m5};
}

Block32 recover_rn3(const Block32& id, const Block32& xs, const Block32& rn2, const Block32& m5) {
    return m5 ^ hash({id, xs, rn2});
}

Block32 make_confirmation(const Block32& xs, const Block32& rn2, const Block32& rn3) {
    return hash({xs, rn2, rn3});
}

Block32 derive_session_key(const Block32& rn2, const Block32& rn3) { return hash({rn2, rn3}); }

Block64 make_tcx(const Block64& tcs, const Block32& xs) { return tcs ^ expand(xs); }

Result<Block32> recover_xs_from_tcx(const Block64& tcx, const Block64& tcs) {
    Block64 widened = tcx ^ tcs;
    if (widened.left() != widened.right()) return Error::VerificationFailure;
    return widened.left();
}

}  // namespace tfa::proposed
