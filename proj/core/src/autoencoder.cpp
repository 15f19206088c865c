#include "aeids/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "aeids/error.hpp"
#include "aeids/rng.hpp"

namespace aeids {
namespace {

void check_same_shapes(const std::vector<DenseLayer>& a, const std::vector<DenseLayer>& b, const char* what) {
    if (a.size() != b.size()) throw Error(std::string(what) + ": layer count mismatch");
    for (std::size_t l = 0; l < a.size(); ++l) {
        if (a[l].inputs != b[l].inputs || a[l].outputs != b[l].outputs) {
            throw Error(std::string(what) + ": shape mismatch at layer " + std::to_string(l));
        }
    }
}

}  // namespace

void TrainConfig::validate() const {
    if (epochs == 0) throw InputError("ae.epochs must be >= 1");
    if (batch_size == 0) throw InputError("ae.batch must be >= 1");
    if (!(learning_rate > 0.0)) throw InputError("ae.lr must be > 0");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) throw InputError("Adam betas must lie in [0, 1)");
    if (!(epsilon > 0.0)) throw InputError("Adam epsilon must be > 0");
}

void Gradients::zero() {
    for (auto& l : layers) {
        std::fill(l.weights.begin(), l.weights.end(), 0.0);
        std::fill(l.bias.begin(), l.bias.end(), 0.0);
    }
}

Autoencoder Autoencoder::with_topology(std::vector<std::size_t> sizes, std::uint64_t seed) {
    if (sizes.size() < 3 || sizes.size() % 2 == 0) throw InputError("autoencoder topology needs an odd number (>= 3) of layer sizes");
    if (sizes.front() != sizes.back()) throw InputError("autoencoder output size must equal input size");
    for (auto s : sizes) {
        if (s == 0) throw InputError("autoencoder layer size must be positive");
    }
    Autoencoder model;
    model.sizes_ = std::move(sizes);
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < model.sizes_.size(); ++l) {
        DenseLayer layer(model.sizes_[l], model.sizes_[l + 1]);
        const double limit = std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
        for (auto& w : layer.weights) w = rng.uniform(-limit, limit);
        model.layers_.push_back(std::move(layer));
    }
    return model;
}

Autoencoder Autoencoder::from_layers(std::vector<DenseLayer> layers) {
    if (layers.size() < 2 || layers.size() % 2 != 0) throw InputError("autoencoder needs an even number (>= 2) of layers");
    Autoencoder model;
    model.sizes_.push_back(layers.front().inputs);
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& layer = layers[l];
        if (layer.inputs != model.sizes_.back()) throw InputError("autoencoder layers do not chain");
        if (layer.weights.size() != layer.inputs * layer.outputs || layer.bias.size() != layer.outputs) {
            throw InputError("autoencoder layer " + std::to_string(l) + " has inconsistent storage");
        }
        model.sizes_.push_back(layer.outputs);
    }
    if (model.sizes_.front() != model.sizes_.back()) throw InputError("autoencoder output size must equal input size");
    model.layers_ = std::move(layers);
    return model;
}

std::size_t Autoencoder::parameter_count() const noexcept {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
    return n;
}

void Autoencoder::forward_into(std::span<const double> x, ForwardTrace& trace) const {
    if (x.size() != input_dim()) {
        throw Error("forward: input has dimension " + std::to_string(x.size()) + ", model expects " +
                    std::to_string(input_dim()));
    }
    trace.pre.resize(layers_.size());
    trace.act.resize(layers_.size() + 1);
    trace.act[0].assign(x.begin(), x.end());
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& layer = layers_[l];
        const auto& in = trace.act[l];
        auto& z = trace.pre[l];
        auto& a = trace.act[l + 1];
        z.resize(layer.outputs);
        a.resize(layer.outputs);
        for (std::size_t o = 0; o < layer.outputs; ++o) {
            const double* w = layer.weights.data() + o * layer.inputs;
            double s = layer.bias[o];
            for (std::size_t i = 0; i < layer.inputs; ++i) s += w[i] * in[i];
            z[o] = s;
            a[o] = s > 0.0 ? s : 0.0;
        }
    }
    trace.bottleneck_index = bottleneck_index();
    trace.model_revision = revision_;
}

Autoencoder init_model(std::size_t n, std::uint64_t seed) {
    if (n <= kEncoderWidth) {
        throw InputError("autoencoder input dimension must exceed " + std::to_string(kEncoderWidth) + ", got " +
                         std::to_string(n));
    }
    return Autoencoder::with_topology({n, kEncoderWidth, kBottleneckWidth, kEncoderWidth, n}, seed);
}

ForwardTrace forward(const Autoencoder& model, std::span<const double> x) {
    ForwardTrace trace;
    model.forward_into(x, trace);
    return trace;
}

double mse_loss(std::span<const double> x, std::span<const double> xhat) {
    if (x.size() != xhat.size()) throw Error("mse_loss: dimension mismatch");
    if (x.empty()) throw Error("mse_loss: empty vectors");
    return squared_distance(x, xhat) / static_cast<double>(x.size());
}

Gradients zero_gradients(const Autoencoder& model) {
    Gradients g;
    for (const auto& l : model.layers()) g.layers.emplace_back(l.inputs, l.outputs);
    return g;
}

void accumulate_gradients(const Autoencoder& model, const ForwardTrace& trace, std::span<const double> x,
                          Gradients& into, double scale) {
    const auto& layers = model.layers();
    if (trace.model_revision != model.revision() || trace.pre.size() != layers.size() ||
        trace.act.size() != layers.size() + 1) {
        throw Error("backward: trace does not belong to the current model state");
    }
    if (x.size() != model.input_dim() || trace.act[0].size() != x.size() ||
        !std::equal(x.begin(), x.end(), trace.act[0].begin())) {
        throw Error("backward: trace was produced for a different input");
    }
    check_same_shapes(layers, into.layers, "backward");

    // delta = dLoss/dPre for the current layer.
    const auto& out = trace.act.back();
    const auto& z_out = trace.pre.back();
    const double n = static_cast<double>(x.size());
    std::vector<double> delta(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        delta[i] = z_out[i] > 0.0 ? 2.0 * (out[i] - x[i]) / n : 0.0;
    }
    std::vector<double> next;
    for (std::size_t l = layers.size(); l-- > 0;) {
        const auto& layer = layers[l];
        auto& g = into.layers[l];
        const auto& in = trace.act[l];
        for (std::size_t o = 0; o < layer.outputs; ++o) {
            const double d = delta[o] * scale;
            if (d == 0.0) continue;
            double* gw = g.weights.data() + o * layer.inputs;
            for (std::size_t i = 0; i < layer.inputs; ++i) gw[i] += d * in[i];
            g.bias[o] += d;
        }
        if (l == 0) break;
        const auto& z_prev = trace.pre[l - 1];
        next.assign(layer.inputs, 0.0);
        for (std::size_t o = 0; o < layer.outputs; ++o) {
            const double d = delta[o];
            if (d == 0.0) continue;
            const double* w = layer.weights.data() + o * layer.inputs;
            for (std::size_t i = 0; i < layer.inputs; ++i) next[i] += w[i] * d;
        }
        for (std::size_t i = 0; i < layer.inputs; ++i) {
            if (!(z_prev[i] > 0.0)) next[i] = 0.0;
        }
        delta.swap(next);
    }
}

Gradients backward(const Autoencoder& model, const ForwardTrace& trace, std::span<const double> x) {
    auto g = zero_gradients(model);
    accumulate_gradients(model, trace, x, g, 1.0);
    return g;
}

AdamState AdamState::for_model(const Autoencoder& model) {
    return AdamState{zero_gradients(model), zero_gradients(model), 0};
}

void adam_step(Autoencoder& model, const Gradients& grads, AdamState& state, const TrainConfig& config) {
    check_same_shapes(model.layers(), grads.layers, "adam_step");
    check_same_shapes(model.layers(), state.first_moment.layers, "adam_step");
    check_same_shapes(model.layers(), state.second_moment.layers, "adam_step");

    ++state.step;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(config.beta1, t);
    const double c2 = 1.0 - std::pow(config.beta2, t);
    auto update = [&](std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
                      std::vector<double>& v) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
            v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
            const double m_hat = m[i] / c1;
            const double v_hat = v[i] / c2;
            p[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
        }
    };
    auto& layers = model.mutable_layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        update(layers[l].weights, grads.layers[l].weights, state.first_moment.layers[l].weights,
               state.second_moment.layers[l].weights);
        update(layers[l].bias, grads.layers[l].bias, state.first_moment.layers[l].bias,
               state.second_moment.layers[l].bias);
    }
}

std::vector<double> train(Autoencoder& model, const Matrix& data, const TrainConfig& config,
                          const EpochCallback& on_epoch) {
    config.validate();
    if (data.empty()) throw InputError("train: empty training set");
    if (data.cols() != model.input_dim()) {
        throw Error("train: data has dimension " + std::to_string(data.cols()) + ", model expects " +
                    std::to_string(model.input_dim()));
    }

    Rng rng(config.seed);
    AdamState state = AdamState::for_model(model);
    Gradients grads = zero_gradients(model);
    ForwardTrace trace;
    std::vector<std::size_t> order(data.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::vector<double> history;
    history.reserve(config.epochs);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(std::span(order));
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            const double scale = 1.0 / static_cast<double>(end - start);
            grads.zero();
            for (std::size_t b = start; b < end; ++b) {
                const auto x = data.row(order[b]);
                model.forward_into(x, trace);
                epoch_loss += mse_loss(x, trace.reconstruction());
                accumulate_gradients(model, trace, x, grads, scale);
            }
            adam_step(model, grads, state, config);
        }
        epoch_loss /= static_cast<double>(order.size());
        if (!std::isfinite(epoch_loss)) {
            throw Error("train: non-finite loss at epoch " + std::to_string(epoch + 1) +
                        " (check input scaling and learning rate)");
        }
        history.push_back(epoch_loss);
        if (on_epoch) on_epoch(epoch, epoch_loss);
    }
    for (const auto& l : model.layers()) {
        for (double w : l.weights) {
            if (!std::isfinite(w)) throw Error("train: non-finite weight after training");
        }
    }
    return history;
}

}  // namespace aeids
