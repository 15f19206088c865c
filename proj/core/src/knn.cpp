#include <algorithm>
#include <string>
#include <utility>

#include "aeids/classifiers.hpp"
#include "aeids/error.hpp"
#include "aeids/log.hpp"

namespace aeids {

KnnModel fit_knn(Matrix train, std::vector<BinaryLabel> labels, std::size_t k) {
    if (train.rows() != labels.size()) throw Error("fit_knn: feature/label count mismatch");
    if (k == 0) throw InputError("knn.k must be >= 1");
    if (k > train.rows()) {
        throw InputError("knn.k=" + std::to_string(k) + " exceeds training size " + std::to_string(train.rows()));
    }
    if (k % 2 == 0) warn("knn.k=" + std::to_string(k) + " is even; vote ties resolve to anomalous");
    return KnnModel{std::move(train), std::move(labels), k};
}

BinaryLabel predict_knn(const KnnModel& model, std::span<const double> x) {
    if (x.size() != model.points.cols()) {
        throw Error("predict_knn: query dimension " + std::to_string(x.size()) + ", model " +
                    std::to_string(model.points.cols()));
    }
    // (squared distance, training index); lexicographic order gives the
    // lower-index tie-break for free.
    thread_local std::vector<std::pair<double, std::size_t>> dist;
    const std::size_t n = model.points.rows();
    dist.resize(n);
    for (std::size_t i = 0; i < n; ++i) dist[i] = {squared_distance(model.points.row(i), x), i};
    const auto kth = dist.begin() + static_cast<std::ptrdiff_t>(model.k);
    if (model.k < n) std::nth_element(dist.begin(), kth - 1, dist.end());
    std::size_t anomalous = 0;
    for (auto it = dist.begin(); it != kth; ++it) {
        if (model.labels[it->second] == BinaryLabel::anomalous) ++anomalous;
    }
    return 2 * anomalous >= model.k ? BinaryLabel::anomalous : BinaryLabel::normal;
}

}  // namespace aeids
