#include "aeids/features.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>

#include "aeids/error.hpp"
#include "aeids/parallel.hpp"

namespace aeids {
namespace {

void fill_features(const ForwardTrace& trace, FeatureMode mode, std::span<double> out) {
    const auto sil = trace.bottleneck();
    std::size_t pos = 0;
    if (mode != FeatureMode::sil_only) out[pos++] = mse_loss(trace.act.front(), trace.reconstruction());
    if (mode != FeatureMode::re_only) {
        for (double v : sil) out[pos++] = v;
    }
}

}  // namespace

std::string_view to_string(FeatureMode mode) noexcept {
    switch (mode) {
        case FeatureMode::re_only: return "re_only";
        case FeatureMode::sil_only: return "sil_only";
        case FeatureMode::re_and_sil: return "re_and_sil";
    }
    return "?";
}

FeatureMode parse_feature_mode(std::string_view text) {
    for (auto mode : kAllFeatureModes) {
        if (to_string(mode) == text) return mode;
    }
    throw InputError("unknown feature mode '" + std::string(text) + "' (expected re_only, sil_only or re_and_sil)");
}

std::size_t feature_dimension(FeatureMode mode, std::size_t bottleneck_dim) noexcept {
    switch (mode) {
        case FeatureMode::re_only: return 1;
        case FeatureMode::sil_only: return bottleneck_dim;
        case FeatureMode::re_and_sil: return bottleneck_dim + 1;
    }
    return 0;
}

double reconstruction_error(const Autoencoder& model, std::span<const double> x) {
    const auto trace = forward(model, x);
    return mse_loss(x, trace.reconstruction());
}

std::vector<double> bottleneck_output(const Autoencoder& model, std::span<const double> x) {
    const auto trace = forward(model, x);
    const auto sil = trace.bottleneck();
    return {sil.begin(), sil.end()};
}

FeatureVector extract(const Autoencoder& model, std::span<const double> x, FeatureMode mode,
                      std::size_t source_index) {
    const auto trace = forward(model, x);
    FeatureVector fv;
    fv.values.resize(feature_dimension(mode, model.bottleneck_dim()));
    fv.source_index = source_index;
    fill_features(trace, mode, fv.values);
    return fv;
}

Matrix extract_all(const Autoencoder& model, const Matrix& inputs, FeatureMode mode, std::size_t jobs) {
    Matrix out(inputs.rows(), feature_dimension(mode, model.bottleneck_dim()));
    if (inputs.rows() > 0 && inputs.cols() != model.input_dim()) {
        throw Error("extract: input dimension " + std::to_string(inputs.cols()) + " does not match model " +
                    std::to_string(model.input_dim()));
    }
    const std::size_t chunks = std::max<std::size_t>(1, jobs);
    const std::size_t per_chunk = (inputs.rows() + chunks - 1) / chunks;
    parallel_for(chunks, jobs, [&](std::size_t c) {
        ForwardTrace trace;
        const std::size_t end = std::min(inputs.rows(), (c + 1) * per_chunk);
        for (std::size_t i = c * per_chunk; i < end; ++i) {
            model.forward_into(inputs.row(i), trace);
            fill_features(trace, mode, out.row(i));
        }
    });
    return out;
}

void write_feature_dump(std::ostream& out, const Matrix& features, FeatureMode mode) {
    out << "# mode=" << to_string(mode) << ",dimension=" << features.cols() << '\n';
    char buf[32];
    for (std::size_t i = 0; i < features.rows(); ++i) {
        const auto r = features.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", r[j]);
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace aeids
