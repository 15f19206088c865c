#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "aeids/dataset.hpp"
#include "aeids/features.hpp"
#include "run_config.hpp"

namespace aeids::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;

inline constexpr const char* kPreparedFormat = "aeids-prepared v1";

struct PreparedManifest {
    std::filesystem::path dir;
    std::size_t train_records = 0;
    std::size_t test_records = 0;
    std::size_t total_records = 0;
    std::size_t normal = 0;
    std::size_t anomalous = 0;
    std::size_t encoded_dimension = 0;
    std::vector<std::string> dropped;
};

/// <out_dir>/prepared
std::filesystem::path prepared_dir(const RunConfig& config);

/// <out_dir>/runs/<run name>
std::filesystem::path run_dir(const RunConfig& config);

/// Parses and concatenates the train and test files, drops the configured
/// columns, fits the union vocabularies and writes manifest.txt, schema.txt,
/// records.csv and vocabulary.txt under prepared_dir().
PreparedManifest cmd_prepare(const RunConfig& config, std::ostream& log);

PreparedManifest read_manifest(const std::filesystem::path& dir);

/// The prepared record store, vocabularies rebuilt in stored order.
Dataset load_prepared(const std::filesystem::path& dir);

/// Runs the cross-validated experiment on the prepared store and writes
/// effective.cfg, summary.csv, folds.txt, report.txt and models/ under
/// run_dir(). Returns that directory.
std::filesystem::path cmd_run(const RunConfig& config, std::ostream& log);

void cmd_report(const std::filesystem::path& summary_path, std::ostream& out);

void cmd_inspect_model(const std::filesystem::path& model_path, std::ostream& out);

/// Scores a raw record file with a saved model and writes its feature dump.
void cmd_dump_features(const std::filesystem::path& model_path, const std::filesystem::path& records_path,
                       FeatureMode mode, const std::filesystem::path& output_path);

/// Entire command-line front end; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace aeids::cli
