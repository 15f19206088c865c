#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "aeids/classifiers.hpp"
#include "aeids/error.hpp"
#include "aeids/dataset.hpp"
#include "aeids/features.hpp"

namespace aeids {

/// Binary confusion counts, anomalous being the positive class. Real-valued
/// cells appear when matrices are averaged over folds.
template <typename T>
struct BasicConfusion {
    T tn{};
    T fp{};
    T fn{};
    T tp{};

    T total() const noexcept { return tn + fp + fn + tp; }
    friend bool operator==(const BasicConfusion&, const BasicConfusion&) = default;
};

using ConfusionMatrix = BasicConfusion<std::uint64_t>;
using MeanConfusion = BasicConfusion<double>;

ConfusionMatrix confusion(std::span<const BinaryLabel> predictions, std::span<const BinaryLabel> truth);

struct MetricsRecord {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    /// Set when the matching denominator was zero and the value defaulted to 0.
    bool precision_undefined = false;
    bool recall_undefined = false;
    bool f1_undefined = false;
};

template <typename T>
MetricsRecord metrics(const BasicConfusion<T>& cm) {
    const double tn = static_cast<double>(cm.tn);
    const double fp = static_cast<double>(cm.fp);
    const double fn = static_cast<double>(cm.fn);
    const double tp = static_cast<double>(cm.tp);
    const double total = tn + fp + fn + tp;
    if (!(total > 0.0)) throw InputError("metrics: empty confusion matrix");
    MetricsRecord m;
    m.accuracy = (tp + tn) / total;
    if (tp + fp > 0.0) m.precision = tp / (tp + fp);
    else m.precision_undefined = true;
    if (tp + fn > 0.0) m.recall = tp / (tp + fn);
    else m.recall_undefined = true;
    if (m.precision + m.recall > 0.0) m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    else m.f1_undefined = true;
    return m;
}

struct Stat {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation (n - 1); 0 for a single fold
};

Stat mean_and_std(std::span<const double> values);

/// One (mode, classifier) evaluation on one fold.
struct FoldOutcome {
    std::size_t fold = 0;
    FeatureMode mode = FeatureMode::re_only;
    ClassifierKind classifier = ClassifierKind::knn;
    ConfusionMatrix cm;
    MetricsRecord metrics;
};

struct SummaryRow {
    FeatureMode mode = FeatureMode::re_only;
    ClassifierKind classifier = ClassifierKind::knn;
    std::size_t folds = 0;
    Stat accuracy, precision, recall, f1;
    MeanConfusion mean_cm;
    MeanConfusion std_cm;
};

/// Per-fold metrics averaged across folds (never recomputed from the mean
/// matrix). All outcomes must share mode and classifier.
SummaryRow aggregate(std::span<const FoldOutcome> outcomes);

/// Per-fold bookkeeping that is not a metric.
struct FoldInfo {
    std::size_t fold = 0;
    std::size_t ae_train = 0;
    std::size_t thr_normal = 0;
    std::size_t thr_anomalous = 0;
    std::size_t test = 0;
    std::size_t discarded_anomalous = 0;
    double final_ae_loss = 0.0;
};

struct ExperimentSummary {
    std::size_t folds = 0;
    std::vector<SummaryRow> rows;
    std::vector<FoldOutcome> outcomes;  // empty when read back from a summary file
    std::vector<FoldInfo> fold_info;

    const SummaryRow* find(FeatureMode mode, ClassifierKind classifier) const;
};

}  // namespace aeids
