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

// Batch front end: provision stores, run scenario suites, regenerate the
// feature matrix. Exit codes: 0 all expectations met, 1 property violation,
// 2 configuration or I/O error.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "tfa/harness/provision.hpp"
#include "tfa/harness/report.hpp"
#include "tfa/sim/scenario.hpp"

namespace fs = std::filesystem;
using namespace tfa;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

int cmd_provision(const std::string& config_path, const std::string& store_dir,
                  std::optional<std::uint64_t> seed_override) {
    auto config = harness::Config::from_file(config_path);
    if (!config.ok()) {
        std::cerr << "error: cannot parse config " << config_path << "\n";
        return kExitConfig;
    }
    auto settings = harness::ProvisionSettings::from_config(config.value());
    if (!settings.ok()) {
        std::cerr << "error: config is missing a valid [provision] section\n";
        return kExitConfig;
    }
    if (seed_override) settings.value().seed = *seed_override;

    auto files = harness::StoreFiles::in_dir(store_dir);
    auto done = harness::provision_to_files(settings.value(), files);
    if (!done.ok()) {
        std::cerr << "error: provisioning aborted (" << error_name(done.error()) << ")\n";
        return kExitViolation;
    }
    std::string detail;
    auto valid = harness::validate_stores(files, &detail);
    if (!valid.ok()) {
        std::cerr << "error: store validation failed: " << detail << "\n";
        return kExitViolation;
    }
    std::cout << "provisioned " << files.server << ", " << files.rc << ", " << files.user
              << ", " << files.card << "\n";
    return kExitOk;
}

std::vector<fs::path> collect_scenarios(const std::vector<std::string>& inputs,
                                        const std::string& suite_dir) {
    std::vector<fs::path> paths;
    auto add_dir = [&](const fs::path& dir) {
        std::vector<fs::path> found;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.path().extension() == ".scn") found.push_back(entry.path());
        }
        std::sort(found.begin(), found.end());
        paths.insert(paths.end(), found.begin(), found.end());
    };
    for (const auto& input : inputs) {
        fs::path p(input);
        if (fs::is_directory(p)) {
            add_dir(p);
        } else {
            paths.push_back(p);
        }
    }
    if (!suite_dir.empty() && fs::is_directory(suite_dir)) add_dir(suite_dir);
    return paths;
}

int cmd_run(const std::vector<std::string>& inputs, const std::string& suite_dir,
            const std::string& out_dir, const std::string& store_dir,
            std::optional<std::uint64_t> seed_override, const std::string& dict_override,
            const std::string& curve_override, unsigned jobs) {
    if (!store_dir.empty()) {
        std::string detail;
        auto valid = harness::validate_stores(harness::StoreFiles::in_dir(store_dir), &detail);
        if (!valid.ok()) {
            std::cerr << "error: store integrity check failed: " << detail << "\n";
            return kExitConfig;
        }
        std::cout << "stores in " << store_dir << " verified\n";
    }

    std::vector<fs::path> files = collect_scenarios(inputs, suite_dir);
    std::vector<sim::Scenario> scenarios;
    for (const fs::path& file : files) {
        auto s = sim::Scenario::from_file(file);
        if (!s.ok()) {
            std::cerr << "error: cannot parse scenario " << file << "\n";
            return kExitConfig;
        }
        if (seed_override) s.value().seed = *seed_override;
        if (!dict_override.empty()) s.value().dict = "file:" + dict_override;
        if (!curve_override.empty()) s.value().curve = curve_override;
        scenarios.push_back(std::move(s.value()));
    }

    harness::Report report;
    report.entries.resize(scenarios.size());
    std::vector<std::string> transcripts(scenarios.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> hard_error{false};

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= scenarios.size()) return;
            auto begin = std::chrono::steady_clock::now();
            auto out = sim::run_scenario(scenarios[i]);
            auto end = std::chrono::steady_clock::now();
            if (!out.ok()) {
                hard_error = true;
                continue;
            }
            report.entries[i].verdict = out.value().verdict;
            report.entries[i].transcript_digest = out.value().transcript_digest;
            report.entries[i].seconds = std::chrono::duration<double>(end - begin).count();
            transcripts[i] = std::move(out.value().transcript);
        }
    };

    if (scenarios.empty()) {
        std::cout << "no scenarios given; empty report\n";
    }
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < std::max(1u, jobs); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    if (hard_error) {
        std::cerr << "error: a scenario failed to run (unknown kind or bad capabilities)\n";
        return kExitConfig;
    }

    fs::create_directories(fs::path(out_dir) / "transcripts");
    std::ofstream records(fs::path(out_dir) / "records.txt", std::ios::trunc);
    records << report.records();
    std::ofstream human(fs::path(out_dir) / "report.txt", std::ios::trunc);
    human << report.human();
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        std::ofstream t(fs::path(out_dir) / "transcripts" / (scenarios[i].name + ".log"),
                        std::ios::trunc);
        t << transcripts[i];
    }

    std::cout << report.human();
    if (scenarios.empty()) return kExitOk;
    return report.all_passed() ? kExitOk : kExitViolation;
}

int cmd_matrix(const std::string& out_dir) {
    std::ifstream in(fs::path(out_dir) / "records.txt");
    if (!in) {
        std::cerr << "error: no records at " << out_dir
                  << "; run the paper-attacks suite first\n";
        return kExitConfig;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    auto verdicts = harness::parse_records(buffer.str());
    if (!verdicts.ok()) {
        std::cerr << "error: records file is malformed\n";
        return kExitConfig;
    }
    auto matrix = harness::FeatureMatrix::build(verdicts.value());
    if (!matrix.ok()) {
        std::cerr << "error: suite results incomplete; matrix needs every source scenario\n";
        return kExitConfig;
    }
    std::string text = matrix.value().render();
    std::ofstream out(fs::path(out_dir) / "matrix.txt", std::ios::trunc);
    out << text;
    std::cout << text;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"three-factor authentication protocol laboratory"};
    app.require_subcommand(1);

    std::string config_path = "configs/default.cfg";
    std::string store_dir = "stores";
    std::string out_dir = "out";
    std::string suite_dir;
    std::string dict_path;
    std::string curve;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
    std::vector<std::string> run_inputs;

    auto* provision = app.add_subcommand("provision", "run both registrations, write stores");
    provision->add_option("--config", config_path, "provisioning config")->envname("TFA_CONFIG");
    provision->add_option("--store", store_dir, "store directory")->envname("TFA_STORE");
    provision->add_option("--seed", seed, "seed override")->envname("TFA_SEED");

    auto* run = app.add_subcommand("run", "run scenario files or a suite directory");
    run->add_option("paths", run_inputs, "scenario files or directories");
    run->add_option("--suite", suite_dir, "suite directory")->envname("TFA_SUITE");
    run->add_option("--out", out_dir, "report directory")->envname("TFA_OUT");
    run->add_option("--store", store_dir, "validate stores in this directory before running")
        ->default_val("")
        ->envname("TFA_STORE");
    run->add_option("--seed", seed, "seed override for every scenario")->envname("TFA_SEED");
    run->add_option("--dict", dict_path, "dictionary file override")->envname("TFA_DICT");
    run->add_option("--curve", curve, "curve profile override (tiny|std256)")
        ->envname("TFA_CURVE");
    run->add_option("--jobs", jobs, "scenario-level parallelism")->envname("TFA_JOBS");

    auto* matrix = app.add_subcommand("matrix", "regenerate the feature matrix from a run");
    matrix->add_option("--out", out_dir, "report directory with records.txt")
        ->envname("TFA_OUT");

    CLI11_PARSE(app, argc, argv);

    if (provision->parsed()) return cmd_provision(config_path, store_dir, seed);
    if (run->parsed()) {
        return cmd_run(run_inputs, suite_dir, out_dir, store_dir, seed, dict_path, curve, jobs);
    }
    return cmd_matrix(out_dir);
}
