#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "vperc/estimators.hpp"

namespace vperc {

inline constexpr const char* kVersion = "vperc 0.1.0";

/// Schema violation; `field` is the JSON path of the offending entry.
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& field_, const std::string& msg)
        : std::runtime_error(field_ + ": " + msg), field(field_) {}
    std::string field;
};

struct ExperimentConfig {
    std::string experiment;
    std::uint64_t master_seed = 0;
    double intensity = 1.0;
    std::vector<double> p_values{0.5};
    long long replicates = 0;
    long long environments = 0;  // K
    long long colorings = 0;     // M
    int workers = 1;
    nlohmann::json geometry;
    nlohmann::json raw;
};

/// Names accepted in config["experiment"].
const std::vector<std::string>& experiment_registry();

ExperimentConfig parse_config(const nlohmann::json& config);

struct ResultRecord {
    std::string config_hash;
    std::string experiment;
    struct Item {
        std::string name;
        Estimate estimate;
    };
    std::vector<Item> estimates;
    long long discarded = 0;
    double wall_time_s = 0;
    std::string version = kVersion;

    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;

    nlohmann::json to_json() const;
    std::string to_csv() const;
};

ResultRecord run_experiment(const ExperimentConfig& config);

/// Geometry debug dump (nuclei, adjacency, polygons, boundary flags) for a
/// config with {"window": [xmin,ymin,xmax,ymax], "intensity", "master_seed"}.
nlohmann::json dump_complex_json(const nlohmann::json& config);

/// Locale-independent shortest-round-trip formatting used in CSV output.
std::string format_double(double v);

/// EventSpec from config JSON (kinds: cross, arms, circuit, cell-black).
EventSpec parse_event(const nlohmann::json& j, const std::string& field);

std::string hash_hex(const nlohmann::json& canonical);

/// VPERC_WORKERS overrides the configured worker count when set.
int worker_count_with_env(int from_config);

}  // namespace vperc
