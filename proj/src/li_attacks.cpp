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

#include "tfa/li/attacks.hpp"

#include <fstream>

namespace tfa::li {

Result<Dictionary> Dictionary::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) return Error::IoError;
    Dictionary dict;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) dict.words.push_back(line);
    }
    return dict;
}

void Dictionary::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("dictionary: cannot write " + path.string());
    for (const auto& w : words) out << w << '\n';
}

ExtractedCard extract_card(const LiCard& card) { return ExtractedCard{card}; }

GuessOutcome guess_password(const ExtractedCard& x, const Block32& id, const Dictionary& dict) {
    GuessOutcome out;
    for (const std::string& candidate : dict.words) {
        ++out.evaluations;
        Block32 rpw = derive_rpw(candidate, x.card.k);
        if (hash({id, rpw}) == x.card.r) {
            out.found = true;
            out.password = candidate;
            return out;
        }
    }
    return out;
}

ImpersonationOutcome impersonate_user(const ExtractedCard& x, const Block32& id,
                                      std::string_view pw_guessed, const LiServer& server,
                                      Rng& rng) {
    ImpersonationOutcome out;

    // forge the request from extracted values alone; no biometric needed
    Block32 rpw = derive_rpw(pw_guessed, x.card.k);
    Block32 m1 = x.card.e ^ hash({x.card.f, rpw});
    ec::Int a = ec::random_scalar(rng, server.curve);

    LoginRequest req;
    req.id = id;
    req.m2 = ec::scalar_mul(a, server.curve.base, server.curve);
    req.m3 = hash({m1, ec::point_digest(req.m2, server.curve)});

    auto reply = li_server_verify(req, server, rng);
    if (!reply.ok()) return out;
    out.server_accepted = true;

    const auto& [auth, server_session] = reply.value();
    Block32 expected = hash({m1, ec::point_digest(req.m2, server.curve),
                             ec::point_digest(auth.m5, server.curve)});
    if (expected != auth.m6) return out;
    out.mutual_auth_completed = true;

    out.attacker_key = hash(
        {ec::point_digest(ec::scalar_mul(a, auth.m5, server.curve), server.curve)});
    out.server_key = server_session.session_key;
    out.keys_agree = *out.attacker_key == *out.server_key;
    return out;
}

Result<AuthReply> MasqueradeServer::respond(const LoginRequest& req, Rng& rng,
                                            const std::optional<ec::Point>& replay_m5) {
    last_key_.reset();
    Block32 m4 = hash({req.id, xs_});
    Block32 expected = hash({m4, ec::point_digest(req.m2, curve_)});
    if (expected != req.m3) return Error::AuthFailure;

    AuthReply reply;
    if (replay_m5) {
        reply.m5 = *replay_m5;
    } else {
        ec::Int b = ec::random_scalar(rng, curve_);
        reply.m5 = ec::scalar_mul(b, curve_.base, curve_);
        last_key_ = hash({ec::point_digest(ec::scalar_mul(b, req.m2, curve_), curve_)});
    }
    reply.m6 = hash({m4, ec::point_digest(req.m2, curve_), ec::point_digest(reply.m5, curve_)});
    return reply;
}

}  // namespace tfa::li
