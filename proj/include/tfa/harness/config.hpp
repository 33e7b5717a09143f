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

// Structured-text configuration: [section] headers, key = value lines,
// '#' comments. Used for provisioning configs and scenario files.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tfa/result.hpp"

namespace tfa::harness {

struct ConfigSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(std::string_view key) const;
    std::string get_or(std::string_view key, std::string_view fallback) const;
    std::optional<std::uint64_t> get_u64(std::string_view key) const;
    std::optional<bool> get_bool(std::string_view key) const;
};

struct Config {
    std::vector<ConfigSection> sections;

    static Result<Config> parse(std::string_view text);
    static Result<Config> from_file(const std::filesystem::path& path);

    const ConfigSection* section(std::string_view name) const;
};

}  // namespace tfa::harness
