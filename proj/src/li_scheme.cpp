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

#include "tfa/li/scheme.hpp"

#include "tfa/store_io.hpp"

namespace tfa::li {

Bytes LiCard::encode() const {
    store::Writer w;
    w.block32(e);
    w.block32(f);
    w.block32(r);
    w.helper(helper);
    w.block32(k);
    return w.take();
}

Result<LiCard> LiCard::decode(ByteSpan data) {
    try {
        store::Reader reader(data);
        LiCard card;
        card.e = reader.block32();
        card.f = reader.block32();
        card.r = reader.block32();
        card.helper = reader.helper();
        card.k = reader.block32();
        if (!reader.at_end()) return Error::ParseError;
        return card;
    } catch (const store::TruncatedStore&) {
        return Error::ParseError;
    }
}

Block32 derive_rpw(std::string_view pw, const Block32& k) {
    return hash({canonical_id(pw), k});
}

LiCard li_register(const Block32& id, std::string_view pw, const bio::Template& b,
                   const Block32& xs, Rng& rng) {
    LiCard card;
    card.k = rng.next_block();
    Block32 rpw = derive_rpw(pw, card.k);
    auto [bio_key, helper] = bio::gen(b, rng);
    card.helper = helper;
    card.f = hash({id, bio_key});
    card.e = hash({id, xs}) ^ hash({card.f, rpw});
    card.r = hash({id, rpw});
    return card;
}

Result<std::pair<LoginRequest, UserSession>> li_login(const LiCard& card, const Block32& id,
                                                      std::string_view pw,
                                                      const bio::Template& b2,
                                                      const ec::CurveParams& curve, Rng& rng) {
    auto bio_key = bio::rep(b2, card.helper);
    if (!bio_key.ok()) return Error::BiometricMismatch;
    if (hash({id, bio_key.value()}) != card.f) return Error::BiometricMismatch;

    Block32 rpw = derive_rpw(pw, card.k);
    if (hash({id, rpw}) != card.r) return Error::PasswordMismatch;

    UserSession session;
    session.m1 = card.e ^ hash({card.f, rpw});
    session.a = ec::random_scalar(rng, curve);
    session.m2 = ec::scalar_mul(session.a, curve.base, curve);

    LoginRequest req;
    req.id = id;
    req.m2 = session.m2;
    req.m3 = hash({session.m1, ec::point_digest(req.m2, curve)});
    return std::pair{req, session};
}

Result<std::pair<AuthReply, ServerSession>> li_server_verify(const LoginRequest& req,
                                                             const LiServer& server, Rng& rng) {
    if (!server.knows(req.id)) return Error::UnknownPrincipal;

    Block32 m4 = hash({req.id, server.xs});
    Block32 expected = hash({m4, ec::point_digest(req.m2, server.curve)});
    if (expected != req.m3) return Error::AuthFailure;

    ServerSession session;
    session.b = ec::random_scalar(rng, server.curve);
    session.m2 = req.m2;
    session.m4 = m4;
    session.m5 = ec::scalar_mul(session.b, server.curve.base, server.curve);
    session.session_key = hash(
        {ec::point_digest(ec::scalar_mul(session.b, req.m2, server.curve), server.curve)});

    AuthReply reply;
    reply.m5 = session.m5;
    reply.m6 = hash({m4, ec::point_digest(req.m2, server.curve),
                     ec::point_digest(session.m5, server.curve)});
    return std::pair{reply, session};
}

Result<Block32> li_user_finish(const AuthReply& reply, const UserSession& session,
                               const ec::CurveParams& curve) {
    Block32 expected = hash({session.m1, ec::point_digest(session.m2, curve),
                             ec::point_digest(reply.m5, curve)});
    if (expected != reply.m6) return Error::AuthFailure;
    return hash({ec::point_digest(ec::scalar_mul(session.a, reply.m5, curve), curve)});
}

Result<LiCard> li_change_password(const LiCard& card, const Block32& id, std::string_view pw_old,
                                  std::string_view pw_new, const bio::Template& b2) {
    auto bio_key = bio::rep(b2, card.helper);
    if (!bio_key.ok()) return Error::BiometricMismatch;
    if (hash({id, bio_key.value()}) != card.f) return Error::BiometricMismatch;

    Block32 rpw_old = derive_rpw(pw_old, card.k);
    if (hash({id, rpw_old}) != card.r) return Error::PasswordMismatch;

    Block32 rpw_new = derive_rpw(pw_new, card.k);
    LiCard updated = card;
    updated.e = card.e ^ hash({card.f, rpw_old}) ^ hash({card.f, rpw_new});
    updated.r = hash({id, rpw_new});
    return updated;
}

}  // namespace tfa::li
