#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace aeids::support {

/// Generator for files in the NSL-KDD line format (41 features, label,
/// difficulty). Normal and attack records come from overlapping but
/// distinguishable distributions, so the whole pipeline has something to learn.
struct SyntheticOptions {
    std::size_t records = 1000;
    double normal_fraction = 0.53;
    std::uint64_t seed = 1;
};

std::vector<std::string> synthetic_lines(const SyntheticOptions& options);

void write_synthetic_file(const std::filesystem::path& path, const SyntheticOptions& options);

struct SyntheticPair {
    std::filesystem::path train;
    std::filesystem::path test;
};

/// Writes KDDTrain+.txt and KDDTest+.txt style files into `dir`.
SyntheticPair write_synthetic_pair(const std::filesystem::path& dir, std::size_t train_records,
                                   std::size_t test_records, std::uint64_t seed);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace aeids::support
