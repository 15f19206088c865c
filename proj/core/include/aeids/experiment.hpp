#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "aeids/autoencoder.hpp"
#include "aeids/classifiers.hpp"
#include "aeids/dataset.hpp"
#include "aeids/evaluation.hpp"
#include "aeids/features.hpp"
#include "aeids/preprocess.hpp"

namespace aeids {

/// Which reconstruction errors feed the reference threshold statistics.
enum class ReferenceStats : std::uint8_t {
    threshold_set,  // every sample of thr_train, both classes
    normal_only,    // only the normal half of thr_train
};

std::string_view to_string(ReferenceStats stats) noexcept;
ReferenceStats parse_reference_stats(std::string_view text);

struct ExperimentConfig {
    std::size_t folds = 10;
    std::uint64_t seed = 0;
    /// The per-fold autoencoder seed is derived from `seed`; train.seed is ignored.
    TrainConfig train;
    std::size_t knn_k = 11;
    KMeansConfig kmeans;  // kmeans.seed is mixed with the fold seed
    SvmConfig svm;
    double z_ac = 0.0;
    ReferenceStats reference_stats = ReferenceStats::threshold_set;
    std::vector<FeatureMode> modes{std::begin(kAllFeatureModes), std::end(kAllFeatureModes)};
    std::vector<ClassifierKind> classifiers{std::begin(kAllClassifiers), std::end(kAllClassifiers)};
    /// Keep at most this many records (seeded random subset, file order kept). 0 = all.
    std::size_t subsample = 0;
    /// Folds processed concurrently.
    std::size_t jobs = 1;
};

/// Everything fitted on one fold.
struct FoldArtifacts {
    std::size_t fold = 0;
    FoldSplit split;
    PreprocessParams preprocess;
    Autoencoder autoencoder;
    TrainConfig train;
    std::vector<double> loss_history;
    std::vector<ClassifierModel> classifiers;
};

struct ExperimentHooks {
    /// Progress lines ("fold 3/10: training autoencoder").
    std::function<void(std::string_view)> on_progress;
    /// Called once per fold after evaluation. May run on a worker thread when
    /// jobs > 1, but never concurrently with itself.
    std::function<void(const FoldArtifacts&)> on_fold;
};

/// The (mode, classifier) pairs evaluated, in report order. The reference
/// threshold is only defined on the scalar reconstruction error.
std::vector<std::pair<FeatureMode, ClassifierKind>> experiment_grid(const ExperimentConfig& config);

/// Seeded subset of record indices, ascending. Identity when cap is 0 or >= n.
std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t cap, std::uint64_t seed);

/// Full cross-validated evaluation. `data.schema` must carry vocabularies
/// (build_vocabularies) covering every record.
ExperimentSummary run_experiment(const Dataset& data, const ExperimentConfig& config,
                                 const ExperimentHooks& hooks = {});

}  // namespace aeids
