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

// Store-file provisioning for the CLI: run both registration phases end to
// end and persist the three actor stores plus the card, byte-stable for a
// given seed.

#pragma once

#include <filesystem>

#include "tfa/harness/config.hpp"
#include "tfa/sim/world.hpp"

namespace tfa::harness {

struct ProvisionSettings {
    std::uint64_t seed = 1;
    proposed::UserActor::Profile profile;  // sid_text is what the user cites
    std::string server_sid_text;           // the actual server identity

    static Result<ProvisionSettings> from_config(const Config& config);
};

struct StoreFiles {
    std::filesystem::path server;
    std::filesystem::path rc;
    std::filesystem::path user;
    std::filesystem::path card;

    static StoreFiles in_dir(const std::filesystem::path& dir);
};

/// Runs provisioning and writes all four files. Error::VerificationFailure
/// when a phase does not complete.
Result<bool> provision_to_files(const ProvisionSettings& settings, const StoreFiles& files);

/// Loads all four files, checks headers and every seal (a corrupted file
/// surfaces as a tag mismatch), and re-verifies the cross-store identities.
Result<bool> validate_stores(const StoreFiles& files, std::string* detail = nullptr);

}  // namespace tfa::harness
