#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aeids/experiment.hpp"

namespace aeids::cli {

/// Flat key=value run configuration with dotted keys (ae.epochs=50).
struct RunConfig {
    std::filesystem::path train_path;   // data.train
    std::filesystem::path test_path;    // data.test
    std::filesystem::path schema_path;  // data.schema, empty = built-in NSL-KDD
    std::vector<std::string> drop_columns{"service"};  // data.drop
    std::filesystem::path out_dir = "out";  // out_dir
    std::string run_name;                   // run.name, empty = derived from config hash
    std::optional<std::uint64_t> seed;      // seed (mandatory for run)
    std::string balance = "undersample";    // balance
    bool save_models = true;                // save_models
    ExperimentConfig experiment;

    friend bool operator==(const RunConfig&, const RunConfig&);
};

/// Every recognised key, in serialization order.
const std::vector<std::string>& config_keys();

/// Applies one key=value assignment. Throws InputError on unknown keys or
/// bad values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Splits "key=value" and applies it.
void apply_assignment(RunConfig& config, std::string_view assignment);

/// Parses config text on top of the defaults. `#` starts a comment line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Overrides from AEIDS_<KEY> variables (dots become underscores, upper case),
/// e.g. AEIDS_AE_EPOCHS=5.
void apply_environment(RunConfig& config);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// 16 hex digits of FNV-1a over the result-relevant part of the config.
std::string config_digest(const RunConfig& config);

/// run.name if set, otherwise "cfg-<digest>".
std::string run_directory_name(const RunConfig& config);

/// ExperimentConfig with the mandatory seed applied. Throws if seed is unset.
ExperimentConfig effective_experiment(const RunConfig& config);

}  // namespace aeids::cli
