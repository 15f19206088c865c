#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "aeids/matrix.hpp"

namespace aeids {

/// Fully connected layer, weights stored out x in, row-major.
struct DenseLayer {
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    std::vector<double> weights;
    std::vector<double> bias;

    DenseLayer() = default;
    DenseLayer(std::size_t in, std::size_t out) : inputs(in), outputs(out), weights(in * out, 0.0), bias(out, 0.0) {}

    double& weight(std::size_t o, std::size_t i) { return weights[o * inputs + i]; }
    double weight(std::size_t o, std::size_t i) const { return weights[o * inputs + i]; }

    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct TrainConfig {
    std::size_t epochs = 50;
    std::size_t batch_size = 256;
    double learning_rate = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 0;

    /// Throws InputError on epochs == 0, batch_size == 0 or learning_rate <= 0.
    void validate() const;
};

/// Intermediate values of one forward pass, kept for backpropagation.
struct ForwardTrace {
    std::vector<std::vector<double>> pre;  // one per dense layer
    std::vector<std::vector<double>> act;  // act[0] is the input, act[l + 1] = relu(pre[l])
    std::size_t bottleneck_index = 0;      // into act
    std::uint64_t model_revision = 0;

    std::span<const double> reconstruction() const { return act.back(); }
    std::span<const double> bottleneck() const { return act[bottleneck_index]; }
};

/// Same shapes as the model's layers.
struct Gradients {
    std::vector<DenseLayer> layers;

    void zero();
};

/// Dense autoencoder with ReLU after every layer, output included. The
/// bottleneck is the middle activation.
class Autoencoder {
public:
    Autoencoder() = default;

    /// Arbitrary symmetric-ended topology such as {4, 2, 1, 2, 4}; Glorot-uniform
    /// weights and zero biases drawn from `seed`.
    static Autoencoder with_topology(std::vector<std::size_t> sizes, std::uint64_t seed);

    /// Rebuilds a model from stored layers (deserialization, tests).
    static Autoencoder from_layers(std::vector<DenseLayer> layers);

    const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
    std::size_t input_dim() const noexcept { return sizes_.empty() ? 0 : sizes_.front(); }
    std::size_t bottleneck_index() const noexcept { return (sizes_.size() - 1) / 2; }
    std::size_t bottleneck_dim() const noexcept { return sizes_.empty() ? 0 : sizes_[bottleneck_index()]; }
    std::size_t parameter_count() const noexcept;

    const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
    /// Mutable access; bumps the revision so traces taken earlier go stale.
    std::vector<DenseLayer>& mutable_layers() noexcept {
        ++revision_;
        return layers_;
    }
    std::uint64_t revision() const noexcept { return revision_; }

    /// Forward pass into a reusable trace.
    void forward_into(std::span<const double> x, ForwardTrace& trace) const;

    friend bool operator==(const Autoencoder& a, const Autoencoder& b) {
        return a.sizes_ == b.sizes_ && a.layers_ == b.layers_;
    }

private:
    std::vector<std::size_t> sizes_;
    std::vector<DenseLayer> layers_;
    std::uint64_t revision_ = 0;
};

/// Hidden layer widths between the input and output of the detector's network.
inline constexpr std::size_t kEncoderWidth = 32;
inline constexpr std::size_t kBottleneckWidth = 16;

/// N-32-16-32-N network. Requires n > 32.
Autoencoder init_model(std::size_t n, std::uint64_t seed);

ForwardTrace forward(const Autoencoder& model, std::span<const double> x);

/// (1/N) * sum (x_i - xhat_i)^2
double mse_loss(std::span<const double> x, std::span<const double> xhat);

/// Adds `scale` times the gradient of mse_loss(x, forward(x)) into `into`.
/// ReLU'(0) is taken as 0.
void accumulate_gradients(const Autoencoder& model, const ForwardTrace& trace, std::span<const double> x,
                          Gradients& into, double scale = 1.0);

/// Gradient of the single-sample loss.
Gradients backward(const Autoencoder& model, const ForwardTrace& trace, std::span<const double> x);

Gradients zero_gradients(const Autoencoder& model);

struct AdamState {
    Gradients first_moment;
    Gradients second_moment;
    std::uint64_t step = 0;

    static AdamState for_model(const Autoencoder& model);
};

/// One bias-corrected Adam update.
void adam_step(Autoencoder& model, const Gradients& grads, AdamState& state, const TrainConfig& config);

/// Called after each epoch with (epoch index, mean loss).
using EpochCallback = std::function<void(std::size_t, double)>;

/// Mini-batch training on rows of `data`. Sample order is reshuffled every
/// epoch from config.seed. Returns the mean per-sample loss of every epoch.
std::vector<double> train(Autoencoder& model, const Matrix& data, const TrainConfig& config,
                          const EpochCallback& on_epoch = {});

}  // namespace aeids
