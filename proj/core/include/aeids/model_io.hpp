#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "aeids/autoencoder.hpp"
#include "aeids/classifiers.hpp"
#include "aeids/preprocess.hpp"

namespace aeids {

inline constexpr std::uint32_t kModelFormatVersion = 1;

/// Everything needed to score new records: preprocessing, the trained
/// autoencoder and the fitted decision mechanisms.
struct ModelBundle {
    std::uint64_t fold = 0;
    PreprocessParams preprocess;
    Autoencoder autoencoder;
    TrainConfig train;
    std::vector<double> loss_history;
    std::vector<ClassifierModel> classifiers;
};

/// Binary layout: 8-byte magic "AEIDSMDL", u32 format version, then
/// length-prefixed sections. Integers are little-endian u64, reals are
/// little-endian IEEE-754 binary64, strings are u64 length + bytes.
void save_model(std::ostream& out, const ModelBundle& bundle);
void save_model(const std::filesystem::path& path, const ModelBundle& bundle);

/// Throws VersionMismatch when the stored version differs from
/// kModelFormatVersion and InputError on truncated or corrupt files.
ModelBundle load_model(std::istream& in);
ModelBundle load_model(const std::filesystem::path& path);

}  // namespace aeids
