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

// Pure per-equation kernels of the proposed scheme. Actors compose these;
// attack strategies reuse them to try (and fail) to forge messages.

#pragma once

#include <string_view>
#include <utility>

#include "tfa/bytes.hpp"
#include "tfa/crypto.hpp"
#include "tfa/result.hpp"

namespace tfa::proposed {

/// Blend of password and biometric key; the only form in which the
/// password ever leaves the user's device.
Block32 derive_bp(std::string_view pw, const Block32& bio_key);

/// Server-key digest bound to a server identity and a fresh random string.
Block32 derive_ks(const Block32& sid, const Block32& rn1);

/// Pairing half kept by the registration center: w ∥ bp.
Block64 make_tx(const Block32& w, const Block32& bp);

/// Pairing half kept on the card: ks ∥ w.
Block64 make_tc(const Block32& ks, const Block32& w);

/// Per-user master secret. Flattening makes the two derivations agree:
/// h(ks ∥ (w ∥ bp)) = h((ks ∥ w) ∥ bp).
Block32 derive_xs(const Block32& ks, const Block64& txs);

/// Login request pair: the proof digest and the masked nonce.
std::pair<Block32, Block32> make_login_pair(const Block32& id, const Block32& xs,
                                            const Block32& rn2);

/// Unmask the login nonce from the second request field.
Block32 recover_rn2(const Block32& id, const Block32& xs, const Block32& m2);

/// Challenge pair: proof digest over the fresh nonce, and the nonce masked
/// under a binding that only the two honest parties can form.
std::pair<Block32, Block32> make_challenge(const Block32& id, const Block32& xs,
                                           const Block32& rn2, const Block32& rn3);

/// Unmask the challenge nonce.
Block32 recover_rn3(const Block32& id, const Block32& xs, const Block32& rn2, const Block32& m5);

/// Final confirmation digest over both nonces.
Block32 make_confirmation(const Block32& xs, const Block32& rn2, const Block32& rn3);

/// Session key from the two nonces.
Block32 derive_session_key(const Block32& rn2, const Block32& rn3);

/// Card secret masked under the widened master secret.
Block64 make_tcx(const Block64& tcs, const Block32& xs);

/// Recover the master secret from the masked card secret; both halves of
/// the unmasked value must agree, otherwise the input was tampered.
Result<Block32> recover_xs_from_tcx(const Block64& tcx, const Block64& tcs);

}  // namespace tfa::proposed
