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

#include "tfa/harness/config.hpp"

#include <fstream>
#include <sstream>

namespace tfa::harness {

namespace {

std::string trim(std::string_view s) {
    std::size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return {};
    std::size_t end = s.find_last_not_of(" \t\r");
    return std::string(s.substr(begin, end - begin + 1));
}

}  // namespace

const std::string* ConfigSection::find(std::string_view key) const {
    for (const auto& [k, v] : entries) {
        if (k == key) return &v;
    }
    return nullptr;
}

std::string ConfigSection::get_or(std::string_view key, std::string_view fallback) const {
    const std::string* v = find(key);
    return v ? *v : std::string(fallback);
}

std::optional<std::uint64_t> ConfigSection::get_u64(std::string_view key) const {
    const std::string* v = find(key);
    if (!v) return std::nullopt;
    try {
        return std::stoull(*v);
    } catch (...) {
        return std::nullopt;
    }
}

std::optional<bool> ConfigSection::get_bool(std::string_view key) const {
    const std::string* v = find(key);
    if (!v) return std::nullopt;
    if (*v == "true" || *v == "yes" || *v == "1") return true;
    if (*v == "false" || *v == "no" || *v == "0") return false;
    return std::nullopt;
}

Result<Config> Config::parse(std::string_view text) {
    Config config;
    ConfigSection* current = nullptr;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string line =
            trim(text.substr(pos, eol == std::string_view::npos ? eol : eol - pos));
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) return Error::ParseError;
            config.sections.push_back(ConfigSection{line.substr(1, line.size() - 2), {}});
            current = &config.sections.back();
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos || !current) return Error::ParseError;
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) return Error::ParseError;
        current->entries.emplace_back(std::move(key), std::move(value));
    }
    return config;
}

Result<Config> Config::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) return Error::IoError;
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

const ConfigSection* Config::section(std::string_view name) const {
    for (const auto& s : sections) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

}  // namespace tfa::harness
