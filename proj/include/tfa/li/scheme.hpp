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

// The legacy challenge-response scheme, implemented faithfully with its
// known weaknesses intact: a stolen card plus the stored salt gives an
// offline password verifier, and the server-side master secret is held in
// the clear.

#pragma once

#include <set>
#include <string_view>

#include "tfa/biometric.hpp"
#include "tfa/bytes.hpp"
#include "tfa/crypto.hpp"
#include "tfa/ec.hpp"
#include "tfa/result.hpp"
#include "tfa/rng.hpp"

namespace tfa::li {

/// Card contents written at registration. The verifier digest, masked
/// server binding, extractor helper data and hashing salt all sit on the
/// card in the clear (this is the scheme's weakness, modeled as-is).
struct LiCard {
    Block32 e;               // masked server binding
    Block32 f;               // biometric verifier digest
    Block32 r;               // password verifier digest
    bio::HelperData helper;  // extractor helper data
    Block32 k;               // hashing salt entered at issuance

    Bytes encode() const;
    static Result<LiCard> decode(ByteSpan data);

    friend bool operator==(const LiCard& a, const LiCard& b) = default;
};

/// Trusted party state: the registration center and the server collapse
/// into one holder of the master secret.
struct LiServer {
    Block32 xs;  // master secret, stored in the clear
    ec::CurveParams curve;
    std::set<Block32> known_ids;

    bool knows(const Block32& id) const { return known_ids.count(id) > 0; }
};

struct LoginRequest {
    Block32 id;
    ec::Point m2;  // user's ephemeral point
    Block32 m3;    // binding digest over the masked secret and the point
};

struct AuthReply {
    ec::Point m5;  // server's ephemeral point
    Block32 m6;    // server's binding digest
};

/// User-side ephemeral state between request and reply.
struct UserSession {
    ec::Int a;
    Block32 m1;
    ec::Point m2;
};

/// Server-side state; the session key is fixed as soon as the reply is
/// formed, since the protocol has no third message.
struct ServerSession {
    ec::Int b;
    ec::Point m2;
    ec::Point m5;
    Block32 m4;
    Block32 session_key;
};

Block32 derive_rpw(std::string_view pw, const Block32& k);

/// Enrollment: draws the salt and extractor key, assembles the card.
LiCard li_register(const Block32& id, std::string_view pw, const bio::Template& b,
                   const Block32& xs, Rng& rng);

/// Card-side login: biometric check, password check, then the request.
/// Errors: BiometricMismatch, PasswordMismatch.
Result<std::pair<LoginRequest, UserSession>> li_login(const LiCard& card, const Block32& id,
                                                      std::string_view pw,
                                                      const bio::Template& b2,
                                                      const ec::CurveParams& curve, Rng& rng);

/// Server-side verification and challenge. Errors: UnknownPrincipal for a
/// foreign identity, AuthFailure when the request digest fails.
Result<std::pair<AuthReply, ServerSession>> li_server_verify(const LoginRequest& req,
                                                             const LiServer& server, Rng& rng);

/// User-side completion: verifies the reply and derives the session key.
Result<Block32> li_user_finish(const AuthReply& reply, const UserSession& session,
                               const ec::CurveParams& curve);

/// Card-side password change; biometric and old password are checked as in
/// login. Error cases report which factor failed.
Result<LiCard> li_change_password(const LiCard& card, const Block32& id, std::string_view pw_old,
                                  std::string_view pw_new, const bio::Template& b2);

}  // namespace tfa::li
