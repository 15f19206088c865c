#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aeids/classifiers.hpp"
#include "aeids/error.hpp"
#include "aeids/log.hpp"
#include "aeids/rng.hpp"

namespace aeids {
namespace {

Matrix kmeans_plus_plus(const Matrix& x, std::size_t k, Rng& rng) {
    const std::size_t n = x.rows();
    Matrix centroids(k, x.cols());
    auto first = x.row(static_cast<std::size_t>(rng.below(n)));
    std::copy(first.begin(), first.end(), centroids.row(0).begin());

    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(x.row(i), centroids.row(0));
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (double d : d2) total += d;
        if (!(total > 0.0)) throw InputError("k-means: fewer distinct points than clusters");
        const double target = rng.uniform() * total;
        double acc = 0.0;
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (d2[i] <= 0.0) continue;
            acc += d2[i];
            pick = i;
            if (acc > target) break;
        }
        auto chosen = x.row(pick);
        std::copy(chosen.begin(), chosen.end(), centroids.row(c).begin());
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(x.row(i), centroids.row(c)));
    }
    return centroids;
}

}  // namespace

std::size_t nearest_centroid(const Matrix& centroids, std::span<const double> x) {
    if (x.size() != centroids.cols()) throw Error("k-means: dimension mismatch");
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        const double d = squared_distance(centroids.row(c), x);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

std::vector<std::size_t> assign_clusters(const Matrix& centroids, const Matrix& points, double* inertia) {
    std::vector<std::size_t> out(points.rows());
    double total = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        out[i] = nearest_centroid(centroids, points.row(i));
        total += squared_distance(centroids.row(out[i]), points.row(i));
    }
    if (inertia) *inertia = total;
    return out;
}

KMeansModel fit_kmeans(const Matrix& train, std::span<const BinaryLabel> labels, const KMeansConfig& config) {
    if (train.rows() != labels.size()) throw Error("fit_kmeans: feature/label count mismatch");
    if (config.clusters < 1) throw InputError("k-means: need at least one cluster");
    if (config.max_iter < 1) throw InputError("kmeans.max_iter must be >= 1");
    if (train.rows() < 2) throw InputError("k-means: need at least two points");
    bool distinct = false;
    for (std::size_t i = 1; i < train.rows() && !distinct; ++i) distinct = squared_distance(train.row(0), train.row(i)) > 0.0;
    if (!distinct) throw InputError("k-means: all training points are identical");

    Rng rng(config.seed);
    KMeansModel model;
    model.centroids = kmeans_plus_plus(train, config.clusters, rng);

    const std::size_t k = config.clusters;
    const std::size_t d = train.cols();
    std::vector<std::size_t> assignment;
    for (std::size_t iter = 0; iter < config.max_iter; ++iter) {
        double inertia = 0.0;
        auto next_assignment = assign_clusters(model.centroids, train, &inertia);
        model.inertia_history.push_back(inertia);
        const bool unchanged = next_assignment == assignment;
        assignment = std::move(next_assignment);
        ++model.iterations;

        Matrix sums(k, d);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < train.rows(); ++i) {
            auto s = sums.row(assignment[i]);
            const auto r = train.row(i);
            for (std::size_t j = 0; j < d; ++j) s[j] += r[j];
            ++counts[assignment[i]];
        }
        double max_shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;  // empty cluster keeps its centroid
            auto s = sums.row(c);
            for (auto& v : s) v /= static_cast<double>(counts[c]);
            max_shift = std::max(max_shift, std::sqrt(squared_distance(s, model.centroids.row(c))));
            std::copy(s.begin(), s.end(), model.centroids.row(c).begin());
        }
        if (unchanged || max_shift < config.tol || max_shift == 0.0) {
            model.converged = true;
            break;
        }
    }
    if (!model.converged) {
        warn("k-means did not converge in " + std::to_string(config.max_iter) + " iterations");
    }

    assignment = assign_clusters(model.centroids, train, &model.inertia);
    model.inertia_history.push_back(model.inertia);

    std::vector<std::size_t> normal(k, 0), anomalous(k, 0);
    for (std::size_t i = 0; i < train.rows(); ++i) {
        (labels[i] == BinaryLabel::normal ? normal : anomalous)[assignment[i]]++;
    }
    model.cluster_labels.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
        model.cluster_labels[c] = normal[c] > anomalous[c] ? BinaryLabel::normal : BinaryLabel::anomalous;
    }
    return model;
}

BinaryLabel predict_kmeans(const KMeansModel& model, std::span<const double> x) {
    return model.cluster_labels[nearest_centroid(model.centroids, x)];
}

}  // namespace aeids
