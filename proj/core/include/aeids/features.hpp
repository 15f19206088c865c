#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "aeids/autoencoder.hpp"
#include "aeids/matrix.hpp"

namespace aeids {

/// Which autoencoder-derived features feed the decision mechanism.
enum class FeatureMode : std::uint8_t { re_only, sil_only, re_and_sil };

inline constexpr FeatureMode kAllFeatureModes[] = {FeatureMode::re_only, FeatureMode::sil_only,
                                                   FeatureMode::re_and_sil};

std::string_view to_string(FeatureMode mode) noexcept;
/// Accepts re_only, sil_only, re_and_sil.
FeatureMode parse_feature_mode(std::string_view text);

/// 1, bottleneck width, or 1 + bottleneck width.
std::size_t feature_dimension(FeatureMode mode, std::size_t bottleneck_dim) noexcept;

double reconstruction_error(const Autoencoder& model, std::span<const double> x);

/// Post-ReLU bottleneck activations (the intermediate-layer output).
std::vector<double> bottleneck_output(const Autoencoder& model, std::span<const double> x);

struct FeatureVector {
    std::vector<double> values;
    std::size_t source_index = 0;
};

/// RE_AND_SIL is laid out as [RE, SIL_1 .. SIL_k].
FeatureVector extract(const Autoencoder& model, std::span<const double> x, FeatureMode mode,
                      std::size_t source_index = 0);

/// Features of every row of `inputs` in one pass per row.
Matrix extract_all(const Autoencoder& model, const Matrix& inputs, FeatureMode mode, std::size_t jobs = 1);

/// Writes a comma-separated dump: a `# mode=<mode>,dimension=<d>` header line,
/// then one row per sample.
void write_feature_dump(std::ostream& out, const Matrix& features, FeatureMode mode);

}  // namespace aeids
