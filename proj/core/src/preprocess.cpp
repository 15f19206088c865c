#include "aeids/preprocess.hpp"

#include <algorithm>
#include <charconv>

#include "aeids/error.hpp"
#include "aeids/rng.hpp"

namespace aeids {

OneHotEncoder::OneHotEncoder(FeatureSchema schema) : schema_(std::move(schema)) {
    schema_.vocabularies.resize(schema_.columns.size());
    offsets_.resize(schema_.columns.size());
    lookup_.resize(schema_.columns.size());
    for (std::size_t c = 0; c < schema_.columns.size(); ++c) {
        offsets_[c] = dimension_;
        if (schema_.columns[c].kind == ColumnKind::numeric) {
            ++dimension_;
            continue;
        }
        const auto& vocab = schema_.vocabularies[c];
        if (vocab.empty()) throw InputError("empty vocabulary for categorical column " + schema_.columns[c].name);
        for (std::size_t v = 0; v < vocab.size(); ++v) {
            if (!lookup_[c].emplace(vocab[v], v).second) {
                throw InputError("duplicate category '" + vocab[v] + "' in column " + schema_.columns[c].name);
            }
        }
        dimension_ += vocab.size();
    }
}

EncodedVector OneHotEncoder::encode(const RawRecord& record) const {
    if (record.values.size() != schema_.columns.size()) {
        throw InputError("record has " + std::to_string(record.values.size()) + " values, schema has " +
                         std::to_string(schema_.columns.size()));
    }
    EncodedVector out(dimension_, 0.0);
    for (std::size_t c = 0; c < schema_.columns.size(); ++c) {
        const auto& value = record.values[c];
        if (schema_.columns[c].kind == ColumnKind::numeric) {
            double x = 0.0;
            const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
            if (ec != std::errc{} || ptr != value.data() + value.size()) {
                throw InputError("non-numeric value '" + value + "' in column " + schema_.columns[c].name);
            }
            out[offsets_[c]] = x;
            continue;
        }
        const auto it = lookup_[c].find(value);
        if (it == lookup_[c].end()) {
            throw InputError("unseen category '" + value + "' in column " + schema_.columns[c].name);
        }
        out[offsets_[c] + it->second] = 1.0;
    }
    return out;
}

Matrix OneHotEncoder::encode_all(std::span<const RawRecord> records) const {
    Matrix m(records.size(), dimension_);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto v = encode(records[i]);
        std::copy(v.begin(), v.end(), m.row(i).begin());
    }
    return m;
}

std::vector<std::string> OneHotEncoder::feature_names() const {
    std::vector<std::string> names;
    names.reserve(dimension_);
    for (std::size_t c = 0; c < schema_.columns.size(); ++c) {
        if (schema_.columns[c].kind == ColumnKind::numeric) {
            names.push_back(schema_.columns[c].name);
        } else {
            for (const auto& v : schema_.vocabularies[c]) names.push_back(schema_.columns[c].name + "=" + v);
        }
    }
    return names;
}

MinMaxScaler fit_minmax(const Matrix& vectors) {
    if (vectors.empty()) throw InputError("fit_minmax: empty input");
    MinMaxScaler s;
    const auto first = vectors.row(0);
    s.min.assign(first.begin(), first.end());
    s.max.assign(first.begin(), first.end());
    for (std::size_t i = 1; i < vectors.rows(); ++i) {
        const auto r = vectors.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            s.min[j] = std::min(s.min[j], r[j]);
            s.max[j] = std::max(s.max[j], r[j]);
        }
    }
    return s;
}

EncodedVector apply_minmax(std::span<const double> v, const MinMaxScaler& scaler) {
    if (v.size() != scaler.dimension()) {
        throw Error("apply_minmax: dimension mismatch (" + std::to_string(v.size()) + " vs " +
                    std::to_string(scaler.dimension()) + ")");
    }
    EncodedVector out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double range = scaler.max[j] - scaler.min[j];
        out[j] = range > 0.0 ? (v[j] - scaler.min[j]) / range : 0.0;
    }
    return out;
}

void apply_minmax_inplace(Matrix& m, const MinMaxScaler& scaler) {
    if (m.cols() != scaler.dimension()) throw Error("apply_minmax: dimension mismatch");
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            const double range = scaler.max[j] - scaler.min[j];
            r[j] = range > 0.0 ? (r[j] - scaler.min[j]) / range : 0.0;
        }
    }
}

std::vector<Fold> stratified_kfold(std::span<const BinaryLabel> labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw InputError("k-fold: k must be at least 2");
    std::vector<std::size_t> normal, anomalous;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        (labels[i] == BinaryLabel::normal ? normal : anomalous).push_back(i);
    }
    if (normal.empty() || anomalous.empty()) throw InputError("k-fold: both classes must be present");
    if (k > std::min(normal.size(), anomalous.size())) {
        throw InputError("k-fold: k=" + std::to_string(k) + " exceeds the smaller class count " +
                         std::to_string(std::min(normal.size(), anomalous.size())));
    }
    Rng rng(seed);
    rng.shuffle(std::span(normal));
    rng.shuffle(std::span(anomalous));

    std::vector<std::size_t> fold_of(labels.size());
    std::size_t position = 0;
    for (const auto* cls : {&normal, &anomalous}) {
        for (auto idx : *cls) fold_of[idx] = position++ % k;
    }
    std::vector<Fold> folds(k);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t f = 0; f < k; ++f) (f == fold_of[i] ? folds[f].test : folds[f].train).push_back(i);
    }
    return folds;
}

FoldSplit make_fold_split(const Fold& fold, std::span<const BinaryLabel> labels, std::uint64_t seed) {
    std::vector<std::size_t> normal, anomalous;
    for (auto idx : fold.train) {
        if (idx >= labels.size()) throw Error("make_fold_split: index out of range");
        (labels[idx] == BinaryLabel::normal ? normal : anomalous).push_back(idx);
    }
    if (normal.size() < 2) throw InputError("fold split: need at least two normal samples in training partition");
    if (anomalous.empty()) throw InputError("fold split: no anomalous samples in training partition");

    Rng rng(seed);
    rng.shuffle(std::span(normal));
    rng.shuffle(std::span(anomalous));

    FoldSplit split;
    const std::size_t ae_count = normal.size() - normal.size() / 2;
    split.ae_train.assign(normal.begin(), normal.begin() + static_cast<std::ptrdiff_t>(ae_count));
    split.thr_normal = normal.size() - ae_count;
    split.thr_anomalous = std::min(split.thr_normal, anomalous.size());
    split.discarded_anomalous = anomalous.size() - split.thr_anomalous;

    split.thr_train.assign(normal.begin() + static_cast<std::ptrdiff_t>(ae_count), normal.end());
    split.thr_train.insert(split.thr_train.end(), anomalous.begin(),
                           anomalous.begin() + static_cast<std::ptrdiff_t>(split.thr_anomalous));
    rng.shuffle(std::span(split.thr_train));
    split.test = fold.test;
    return split;
}

}  // namespace aeids
