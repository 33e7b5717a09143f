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

#pragma once

#include <map>
#include <string>
#include <vector>

#include "tfa/sim/scenario.hpp"

namespace tfa::harness {

/// Per-suite results: verdicts in suite order plus wall-clock stats that
/// stay out of the machine records.
struct Report {
    struct Entry {
        sim::Verdict verdict;
        Block32 transcript_digest;
        double seconds = 0.0;
    };
    std::vector<Entry> entries;

    /// Line-delimited machine records; byte-stable for equal seeds.
    std::string records() const;

    /// Human-readable table with timings.
    std::string human() const;

    bool all_passed() const;
};

/// Parse records back (the matrix command consumes a saved run).
Result<std::map<std::string, sim::Verdict>> parse_records(const std::string& text);

/// The feature/functionality comparison for the two implemented columns.
/// Every cell is computed from scenario verdicts, never hard-coded; the
/// sources list names the scenarios that back the cell.
struct FeatureMatrix {
    struct Row {
        std::string property;
        char proposed;  // 'Y' or 'N'
        char legacy;
        std::vector<std::string> sources;
    };
    std::vector<Row> rows;

    static Result<FeatureMatrix> build(const std::map<std::string, sim::Verdict>& verdicts);
    std::string render() const;
};

}  // namespace tfa::harness
