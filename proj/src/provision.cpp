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

#include "tfa/harness/provision.hpp"

#include "tfa/store_io.hpp"

namespace tfa::harness {

using proposed::ProposedCard;
using proposed::RcStore;
using proposed::ServerStore;

Result<ProvisionSettings> ProvisionSettings::from_config(const Config& config) {
    const auto* section = config.section("provision");
    if (!section) return Error::ParseError;
    ProvisionSettings s;
    s.seed = section->get_u64("seed").value_or(1);
    s.profile.id_text = section->get_or("user", "alice");
    s.server_sid_text = section->get_or("server", "acme");
    // the identity the user cites at registration; normally the server's own
    s.profile.sid_text = section->get_or("user_server", s.server_sid_text);
    s.profile.password = section->get_or("password", "correct horse");
    s.profile.recovery_contact = section->get_or("recovery", "alice@contact");
    s.profile.template_bits = section->get_u64("template_bits").value_or(1024);
    s.profile.template_hex = section->get_or("template_hex", "");
    if (s.profile.template_bits == 0 || s.profile.template_bits % bio::kKeyBits != 0) {
        return Error::ParseError;
    }
    return s;
}

StoreFiles StoreFiles::in_dir(const std::filesystem::path& dir) {
    return StoreFiles{dir / "server.store", dir / "rc.store", dir / "user.store",
                      dir / "card.store"};
}

namespace {

Bytes encode_server_file(std::string_view sid_text, const ServerStore& store) {
    store::Writer w;
    w.str(sid_text);
    Bytes body = store.encode();
    Bytes out = w.take();
    out.insert(out.end(), body.begin(), body.end());
    return store::frame(store::Kind::Server, out);
}

Bytes encode_user_file(const proposed::UserActor& user, std::size_t template_bits) {
    (void)template_bits;
    return store::frame(store::Kind::User, user.encode_profile_store());
}

}  // namespace

Result<bool> provision_to_files(const ProvisionSettings& settings, const StoreFiles& files) {
    sim::WorldConfig config;
    config.seed = settings.seed;
    config.profile = settings.profile;
    config.server_sid_text = settings.server_sid_text;
    sim::World world(config);
    if (!world.provision()) return Error::VerificationFailure;

    std::filesystem::create_directories(files.server.parent_path());
    store::write_file(files.server,
                      encode_server_file(settings.profile.sid_text, world.server().store()));
    store::write_file(files.rc, store::frame(store::Kind::Rc, world.rc().store().encode()));
    store::write_file(files.user, encode_user_file(world.user(), settings.profile.template_bits));
    store::write_file(files.card, proposed::encode_card_store(*world.user().card()));
    return true;
}

Result<bool> validate_stores(const StoreFiles& files, std::string* detail) {
    auto fail = [&](std::string why) -> Result<bool> {
        if (detail) *detail = std::move(why);
        return Error::DecryptFailure;
    };

    auto server_raw = store::read_file(files.server);
    auto rc_raw = store::read_file(files.rc);
    auto user_raw = store::read_file(files.user);
    auto card_raw = store::read_file(files.card);
    if (!server_raw.ok() || !rc_raw.ok() || !user_raw.ok() || !card_raw.ok()) {
        if (detail) *detail = "missing store file";
        return Error::IoError;
    }

    auto server_framed = store::unframe(server_raw.value());
    auto rc_framed = store::unframe(rc_raw.value());
    auto user_framed = store::unframe(user_raw.value());
    if (!server_framed.ok() || server_framed.value().first != store::Kind::Server ||
        !rc_framed.ok() || rc_framed.value().first != store::Kind::Rc || !user_framed.ok() ||
        user_framed.value().first != store::Kind::User) {
        return fail("bad store header");
    }

    // server store: sid text then the sealed records
    ServerStore sstore;
    try {
        store::Reader r(server_framed.value().second);
        r.str();
        Bytes rest(server_framed.value().second.begin() + r.pos(),
                   server_framed.value().second.end());
        auto decoded = ServerStore::decode(rest);
        if (!decoded.ok()) return fail("server store malformed");
        sstore = decoded.value();
    } catch (const store::TruncatedStore&) {
        return fail("server store truncated");
    }
    if (!sstore.ek) return fail("server not registered");
    auto ks = open_block32(*sstore.ek, sstore.sk);
    if (!ks.ok()) return fail("server key record: tag mismatch");

    auto rstore = RcStore::decode(rc_framed.value().second);
    if (!rstore.ok()) return fail("center store malformed");
    for (const auto& [sid, hk] : rstore.value().servers) {
        if (!open_block32(hk, rstore.value().rk).ok()) {
            return fail("center server-key record: tag mismatch");
        }
    }
    for (const auto& [id, rec] : rstore.value().users) {
        if (!open_block64(rec.ux, rstore.value().rk).ok() ||
            !open_block64(rec.ex, rstore.value().rk).ok() ||
            !open_box(rec.rcov, rstore.value().rk).ok()) {
            return fail("center user record: tag mismatch");
        }
    }

    auto card = proposed::decode_card_store(card_raw.value());
    if (!card.ok() || !card.value().finalized()) return fail("card store malformed");

    // user store: profile plus template; the template regenerates the
    // biometric key, which must open the sealed card secret
    bio::Template tpl;
    try {
        store::Reader r(user_framed.value().second);
        r.str();  // id
        r.str();  // sid
        r.str();  // password
        r.str();  // recovery contact
        std::uint32_t bits = r.u32();
        tpl = bio::Template::from_packed(r.bytes(), bits);
    } catch (...) {
        return fail("user store malformed");
    }
    if (!card.value().helper) return fail("card has no extractor helper");
    auto bio_key = bio::rep(tpl, *card.value().helper);
    if (!bio_key.ok()) return fail("biometric key does not reproduce");
    auto card_tcs = open_block64(*card.value().qx, kdf_biokey(bio_key.value()));
    if (!card_tcs.ok()) return fail("card secret: tag mismatch");

    // cross-store identities
    for (const auto& [id, sx] : sstore.sx) {
        auto xs = open_block32(sx, sstore.sk);
        if (!xs.ok()) return fail("server user record: tag mismatch");
        auto rec = rstore.value().users.find(id);
        if (rec == rstore.value().users.end()) return fail("center record missing");
        auto hk = rstore.value().servers.find(rec->second.sid);
        if (hk == rstore.value().servers.end()) return fail("center server record missing");
        auto center_ks = open_block32(hk->second, rstore.value().rk);
        auto txs = open_block64(rec->second.ex, rstore.value().rk);
        auto ux = open_block64(rec->second.ux, rstore.value().rk);
        if (!center_ks.ok() || !txs.ok() || !ux.ok()) return fail("center record: tag mismatch");
        if (!(hash({center_ks.value(), txs.value()}) == xs.value())) {
            return fail("cross-store identity broken");
        }
        if (!(ux.value() == card_tcs.value())) return fail("card/center secret mismatch");
    }

    if (detail) *detail = "ok";
    return true;
}

}  // namespace tfa::harness
