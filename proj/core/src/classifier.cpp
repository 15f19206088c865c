#include <string>

#include "aeids/classifiers.hpp"
#include "aeids/error.hpp"
#include "aeids/parallel.hpp"

namespace aeids {

std::string_view to_string(ClassifierKind kind) noexcept {
    switch (kind) {
        case ClassifierKind::reference: return "reference";
        case ClassifierKind::knn: return "knn";
        case ClassifierKind::kmeans: return "kmeans";
        case ClassifierKind::svm: return "svm";
    }
    return "?";
}

ClassifierKind parse_classifier_kind(std::string_view text) {
    for (auto kind : kAllClassifiers) {
        if (to_string(kind) == text) return kind;
    }
    throw InputError("unknown classifier '" + std::string(text) + "'");
}

ClassifierKind ClassifierModel::kind() const noexcept {
    return static_cast<ClassifierKind>(model.index());
}

std::size_t ClassifierModel::input_dim() const noexcept {
    struct Visitor {
        std::size_t operator()(const ReferenceThreshold&) const { return 1; }
        std::size_t operator()(const KnnModel& m) const { return m.points.cols(); }
        std::size_t operator()(const KMeansModel& m) const { return m.centroids.cols(); }
        std::size_t operator()(const SvmModel& m) const { return m.support_vectors.cols(); }
    };
    return std::visit(Visitor{}, model);
}

BinaryLabel ClassifierModel::predict(std::span<const double> features) const {
    if (features.size() != input_dim()) {
        throw Error(std::string(to_string(kind())) + ": feature dimension " + std::to_string(features.size()) +
                    " does not match trained dimension " + std::to_string(input_dim()));
    }
    struct Visitor {
        std::span<const double> x;
        BinaryLabel operator()(const ReferenceThreshold& m) const { return classify_reference(m, x[0]); }
        BinaryLabel operator()(const KnnModel& m) const { return predict_knn(m, x); }
        BinaryLabel operator()(const KMeansModel& m) const { return predict_kmeans(m, x); }
        BinaryLabel operator()(const SvmModel& m) const { return predict_svm(m, x); }
    };
    return std::visit(Visitor{features}, model);
}

std::vector<BinaryLabel> ClassifierModel::predict_all(const Matrix& features, std::size_t jobs) const {
    std::vector<BinaryLabel> out(features.rows());
    parallel_for(features.rows(), jobs, [&](std::size_t i) { out[i] = predict(features.row(i)); });
    return out;
}

}  // namespace aeids
