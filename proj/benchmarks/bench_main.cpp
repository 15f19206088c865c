#include <benchmark/benchmark.h>

#include "aeids/autoencoder.hpp"
#include "aeids/classifiers.hpp"
#include "aeids/features.hpp"
#include "aeids/rng.hpp"

using namespace aeids;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(rows, cols);
    for (auto& v : m.data()) v = rng.uniform();
    return m;
}

std::vector<BinaryLabel> alternating(std::size_t n) {
    std::vector<BinaryLabel> l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = i % 2 ? BinaryLabel::anomalous : BinaryLabel::normal;
    return l;
}

void BM_ForwardBackward(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto model = init_model(n, 1);
    const auto x = random_matrix(1, n, 2);
    for (auto _ : state) {
        const auto trace = forward(model, x.row(0));
        benchmark::DoNotOptimize(backward(model, trace, x.row(0)));
    }
}
BENCHMARK(BM_ForwardBackward)->Arg(52)->Arg(122);

void BM_TrainEpoch(benchmark::State& state) {
    const auto data = random_matrix(4096, 52, 3);
    TrainConfig cfg;
    cfg.epochs = 1;
    for (auto _ : state) {
        auto model = init_model(52, 1);
        benchmark::DoNotOptimize(train(model, data, cfg));
    }
    state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

void BM_ExtractFeatures(benchmark::State& state) {
    const auto model = init_model(52, 1);
    const auto data = random_matrix(2048, 52, 4);
    for (auto _ : state) benchmark::DoNotOptimize(extract_all(model, data, FeatureMode::re_and_sil, 1));
    state.SetItemsProcessed(state.iterations() * 2048);
}
BENCHMARK(BM_ExtractFeatures)->Unit(benchmark::kMillisecond);

void BM_KnnPredict(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto model = fit_knn(random_matrix(n, 17, 5), alternating(n), 11);
    const auto queries = random_matrix(64, 17, 6);
    for (auto _ : state) {
        for (std::size_t q = 0; q < queries.rows(); ++q) benchmark::DoNotOptimize(predict_knn(model, queries.row(q)));
    }
    state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_KnnPredict)->Arg(1000)->Arg(10000);

void BM_KMeansFit(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto data = random_matrix(n, 16, 7);
    const auto labels = alternating(n);
    for (auto _ : state) benchmark::DoNotOptimize(fit_kmeans(data, labels, {2, 1, 300, 1e-4}));
}
BENCHMARK(BM_KMeansFit)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_SvmFit(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto data = random_matrix(n, 2, 8);
    const auto labels = alternating(n);
    for (std::size_t i = 0; i < n; ++i) data(i, 0) += labels[i] == BinaryLabel::anomalous ? 0.5 : 0.0;
    for (auto _ : state) benchmark::DoNotOptimize(fit_svm(data, labels));
}
BENCHMARK(BM_SvmFit)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
