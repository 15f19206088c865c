#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "aeids/dataset.hpp"
#include "aeids/matrix.hpp"

namespace aeids {

using EncodedVector = std::vector<double>;

/// Expands categorical columns into indicator blocks using the schema's
/// vocabularies; numeric columns are copied in place.
class OneHotEncoder {
public:
    explicit OneHotEncoder(FeatureSchema schema);

    /// N = numeric column count + sum of vocabulary sizes.
    std::size_t dimension() const noexcept { return dimension_; }
    const FeatureSchema& schema() const noexcept { return schema_; }

    EncodedVector encode(const RawRecord& record) const;
    Matrix encode_all(std::span<const RawRecord> records) const;

    /// "protocol_type=tcp" style names for the expanded dimensions.
    std::vector<std::string> feature_names() const;

private:
    FeatureSchema schema_;
    std::vector<std::size_t> offsets_;
    std::vector<std::unordered_map<std::string, std::size_t>> lookup_;
    std::size_t dimension_ = 0;
};

/// Per-dimension MinMax factors.
struct MinMaxScaler {
    std::vector<double> min;
    std::vector<double> max;

    std::size_t dimension() const noexcept { return min.size(); }
    friend bool operator==(const MinMaxScaler&, const MinMaxScaler&) = default;
};

/// Fitted preprocessing state: vocabularies (inside the schema) plus MinMax.
struct PreprocessParams {
    FeatureSchema schema;
    MinMaxScaler scaler;
};

MinMaxScaler fit_minmax(const Matrix& vectors);

/// (v - min) / (max - min); 0 where max == min. No clipping.
EncodedVector apply_minmax(std::span<const double> v, const MinMaxScaler& scaler);
void apply_minmax_inplace(Matrix& m, const MinMaxScaler& scaler);

struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Stratified k-fold over binary labels. Each class is shuffled with `seed`,
/// the classes are laid end to end and dealt round-robin into k test parts, so
/// fold sizes and per-class counts each differ by at most one. Both lists of a
/// fold are sorted ascending.
std::vector<Fold> stratified_kfold(std::span<const BinaryLabel> labels, std::size_t k, std::uint64_t seed);

/// Three-way per-fold split, all as indices into the full dataset.
struct FoldSplit {
    std::vector<std::size_t> ae_train;   // normal only
    std::vector<std::size_t> thr_train;  // balanced normal/anomalous, shuffled
    std::vector<std::size_t> test;
    std::size_t thr_normal = 0;
    std::size_t thr_anomalous = 0;
    /// Anomalous training samples left unused for this fold.
    std::size_t discarded_anomalous = 0;

    /// thr_anomalous / thr_normal; 1.0 when fully balanced.
    double balance_ratio() const {
        return thr_normal == 0 ? 0.0 : static_cast<double>(thr_anomalous) / static_cast<double>(thr_normal);
    }
};

/// Shuffles the fold's normal training samples and halves them: the larger
/// half (ceil) trains the autoencoder, the other half joins thr_train along
/// with an equal number of anomalous samples drawn without replacement (all of
/// them if fewer exist).
FoldSplit make_fold_split(const Fold& fold, std::span<const BinaryLabel> labels, std::uint64_t seed);

}  // namespace aeids
