#include "aeids/experiment.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <string>

#include "aeids/error.hpp"
#include "aeids/parallel.hpp"
#include "aeids/rng.hpp"

namespace aeids {
namespace {

// Stream tags for derive_seed.
enum : std::uint64_t {
    kSubsampleStream = 0x5b,
    kFoldStream = 0xf0,
    kSplitStream = 1,
    kInitStream = 2,
    kShuffleStream = 3,
    kKMeansStream = 4,
};

Matrix select_columns(const Matrix& m, std::size_t first, std::size_t count) {
    Matrix out(m.rows(), count);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto src = m.row(i).subspan(first, count);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

/// Slice of the [RE, SIL...] matrix a mode consumes.
Matrix mode_view(const Matrix& full, FeatureMode mode) {
    switch (mode) {
        case FeatureMode::re_only: return select_columns(full, 0, 1);
        case FeatureMode::sil_only: return select_columns(full, 1, full.cols() - 1);
        case FeatureMode::re_and_sil: return full;
    }
    return full;
}

std::vector<BinaryLabel> gather(std::span<const BinaryLabel> labels, std::span<const std::size_t> idx) {
    std::vector<BinaryLabel> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(labels[i]);
    return out;
}

struct FoldResult {
    std::vector<FoldOutcome> outcomes;
    FoldInfo info;
};

FoldResult run_fold(std::size_t f, const Fold& fold, const Matrix& encoded, std::span<const BinaryLabel> labels,
                    const FeatureSchema& schema, const ExperimentConfig& config, const ExperimentHooks& hooks,
                    std::size_t inner_jobs, std::mutex& hook_mutex) {
    auto progress = [&](const std::string& msg) {
        if (!hooks.on_progress) return;
        std::lock_guard lock(hook_mutex);
        hooks.on_progress("fold " + std::to_string(f + 1) + "/" + std::to_string(config.folds) + ": " + msg);
    };
    const std::uint64_t fold_seed = derive_seed(config.seed, kFoldStream, f);

    FoldArtifacts art;
    art.fold = f;
    art.split = make_fold_split(fold, labels, derive_seed(fold_seed, kSplitStream));
    const auto& split = art.split;

    Matrix thr_x = encoded.select_rows(split.thr_train);
    Matrix ae_x = encoded.select_rows(split.ae_train);
    Matrix test_x = encoded.select_rows(split.test);
    art.preprocess.schema = schema;
    art.preprocess.scaler = fit_minmax(thr_x);
    apply_minmax_inplace(thr_x, art.preprocess.scaler);
    apply_minmax_inplace(ae_x, art.preprocess.scaler);
    apply_minmax_inplace(test_x, art.preprocess.scaler);
    const auto thr_y = gather(labels, split.thr_train);
    const auto test_y = gather(labels, split.test);

    progress("training autoencoder on " + std::to_string(ae_x.rows()) + " normal samples");
    art.train = config.train;
    art.train.seed = derive_seed(fold_seed, kShuffleStream);
    art.autoencoder = init_model(encoded.cols(), derive_seed(fold_seed, kInitStream));
    art.loss_history = train(art.autoencoder, ae_x, art.train);

    const Matrix thr_all = extract_all(art.autoencoder, thr_x, FeatureMode::re_and_sil, inner_jobs);
    const Matrix test_all = extract_all(art.autoencoder, test_x, FeatureMode::re_and_sil, inner_jobs);

    FoldResult result;
    result.info = {f,
                   split.ae_train.size(),
                   split.thr_normal,
                   split.thr_anomalous,
                   split.test.size(),
                   split.discarded_anomalous,
                   art.loss_history.empty() ? 0.0 : art.loss_history.back()};

    for (const auto& [mode, kind] : experiment_grid(config)) {
        progress("fitting " + std::string(to_string(kind)) + " on " + std::string(to_string(mode)));
        const Matrix thr_f = mode_view(thr_all, mode);
        const Matrix test_f = mode_view(test_all, mode);
        ClassifierModel clf;
        clf.mode = mode;
        switch (kind) {
            case ClassifierKind::reference: {
                std::vector<double> res;
                for (std::size_t i = 0; i < thr_f.rows(); ++i) {
                    if (config.reference_stats == ReferenceStats::normal_only && thr_y[i] != BinaryLabel::normal) continue;
                    res.push_back(thr_f(i, 0));
                }
                clf.model = fit_reference(res, config.z_ac);
                break;
            }
            case ClassifierKind::knn:
                clf.model = fit_knn(thr_f, thr_y, config.knn_k);
                break;
            case ClassifierKind::kmeans: {
                auto kcfg = config.kmeans;
                kcfg.seed = derive_seed(derive_seed(fold_seed, kKMeansStream), config.kmeans.seed,
                                        static_cast<std::uint64_t>(mode));
                clf.model = fit_kmeans(thr_f, thr_y, kcfg);
                break;
            }
            case ClassifierKind::svm:
                clf.model = fit_svm(thr_f, thr_y, config.svm);
                break;
        }
        const auto predictions = clf.predict_all(test_f, inner_jobs);
        FoldOutcome outcome;
        outcome.fold = f;
        outcome.mode = mode;
        outcome.classifier = kind;
        outcome.cm = confusion(predictions, test_y);
        outcome.metrics = metrics(outcome.cm);
        result.outcomes.push_back(outcome);
        art.classifiers.push_back(std::move(clf));
    }

    if (hooks.on_fold) {
        std::lock_guard lock(hook_mutex);
        hooks.on_fold(art);
    }
    return result;
}

}  // namespace

std::string_view to_string(ReferenceStats stats) noexcept {
    return stats == ReferenceStats::normal_only ? "normal_only" : "threshold_set";
}

ReferenceStats parse_reference_stats(std::string_view text) {
    if (text == "threshold_set") return ReferenceStats::threshold_set;
    if (text == "normal_only") return ReferenceStats::normal_only;
    throw InputError("unknown reference statistics source '" + std::string(text) +
                     "' (expected threshold_set or normal_only)");
}

std::vector<std::pair<FeatureMode, ClassifierKind>> experiment_grid(const ExperimentConfig& config) {
    std::vector<std::pair<FeatureMode, ClassifierKind>> grid;
    for (auto mode : config.modes) {
        for (auto kind : kAllClassifiers) {
            if (std::find(config.classifiers.begin(), config.classifiers.end(), kind) == config.classifiers.end()) continue;
            if (kind == ClassifierKind::reference && mode != FeatureMode::re_only) continue;
            grid.emplace_back(mode, kind);
        }
    }
    return grid;
}

std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t cap, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (cap == 0 || cap >= n) return idx;
    Rng rng(seed);
    rng.shuffle(std::span(idx));
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());
    return idx;
}

ExperimentSummary run_experiment(const Dataset& data, const ExperimentConfig& config, const ExperimentHooks& hooks) {
    if (config.modes.empty()) throw InputError("no feature modes selected");
    if (config.classifiers.empty()) throw InputError("no classifiers selected");
    config.train.validate();

    const auto keep = subsample_indices(data.records.size(), config.subsample,
                                        derive_seed(config.seed, kSubsampleStream));
    std::vector<RawRecord> records;
    records.reserve(keep.size());
    for (auto i : keep) records.push_back(data.records[i]);

    const OneHotEncoder encoder(data.schema);
    const Matrix encoded = encoder.encode_all(records);
    std::vector<BinaryLabel> labels;
    labels.reserve(records.size());
    for (const auto& r : records) labels.push_back(r.binary_label());

    const auto folds = stratified_kfold(labels, config.folds, derive_seed(config.seed, kFoldStream));
    const auto grid = experiment_grid(config);
    if (grid.empty()) throw InputError("the selected modes and classifiers form an empty grid");

    std::vector<FoldResult> results(folds.size());
    std::mutex hook_mutex;
    const std::size_t fold_jobs = std::min(std::max<std::size_t>(1, config.jobs), folds.size());
    const std::size_t inner_jobs = fold_jobs > 1 ? 1 : std::max<std::size_t>(1, config.jobs);
    parallel_for(folds.size(), fold_jobs, [&](std::size_t f) {
        try {
            results[f] = run_fold(f, folds[f], encoded, labels, encoder.schema(), config, hooks, inner_jobs, hook_mutex);
        } catch (const InputError& e) {
            throw InputError("fold " + std::to_string(f + 1) + ": " + e.what());
        } catch (const std::exception& e) {
            throw Error("fold " + std::to_string(f + 1) + ": " + e.what());
        }
    });

    ExperimentSummary summary;
    summary.folds = folds.size();
    for (auto& r : results) {
        summary.fold_info.push_back(r.info);
        summary.outcomes.insert(summary.outcomes.end(), r.outcomes.begin(), r.outcomes.end());
    }
    for (const auto& [mode, kind] : grid) {
        std::vector<FoldOutcome> cell;
        for (const auto& o : summary.outcomes) {
            if (o.mode == mode && o.classifier == kind) cell.push_back(o);
        }
        summary.rows.push_back(aggregate(cell));
    }
    return summary;
}

}  // namespace aeids
