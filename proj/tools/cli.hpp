#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "linger/config.hpp"
#include "linger/experiment.hpp"

namespace linger::cli {

inline constexpr const char* kVersion = "0.1.0";

struct Common {
    std::string config_path;
    std::filesystem::path out = ".";
    std::string data;
    long long seed = -1;
    double budget = 0.0;
};

// Loads the config (if any) and applies the command-line overrides.
Config load_config(const Common& c);
void check_keys(const Config& cfg);

void write_csv_file(const std::filesystem::path& path, const std::vector<RunRecord>& records,
                    bool record_wall);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

nlohmann::json run_entry(const std::string& csv, const RunResult& r, std::uint64_t seed,
                         const std::string& config_hash);
nlohmann::json reference_entry(const Experiment& ex, const std::string& source);

int cmd_run(const Common& c);
int cmd_tune(const Common& c);
int cmd_profile(const Common& c);
int cmd_suite(const Common& c, const std::string& name);

}  // namespace linger::cli
