#include <benchmark/benchmark.h>

#include "spa/classifier.hpp"
#include "spa/dataset.hpp"
#include "spa/evaluation.hpp"
#include "spa/geometry.hpp"
#include "spa/neighbors.hpp"
#include "spa/rng.hpp"

namespace {

using namespace spa;

Matrix random_points(Index n, Index dim, std::uint64_t seed) {
    Rng rng(seed);
    Matrix out(n, dim);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < dim; ++j) out(i, j) = rng.normal();
    }
    return out;
}

void BM_spca_fit(benchmark::State& state) {
    const auto k = static_cast<Index>(state.range(0));
    const auto dim = static_cast<Index>(state.range(1));
    const Matrix points = random_points(k, dim, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spca_fit(points, 1));
    }
}
BENCHMARK(BM_spca_fit)->Args({12, 90})->Args({11, 256})->Args({32, 2});

void BM_project_to_sphere(benchmark::State& state) {
    const auto dim = static_cast<Index>(state.range(0));
    const Matrix points = random_points(dim + 4, dim, 2);
    const Sphere sphere = spca_fit(points, 2);
    Rng rng(3);
    Vector x(dim);
    for (Index j = 0; j < dim; ++j) x[j] = rng.normal();
    for (auto _ : state) {
        benchmark::DoNotOptimize(project_to_sphere(sphere, x));
    }
}
BENCHMARK(BM_project_to_sphere)->Arg(16)->Arg(256);

void BM_knn_within_class(benchmark::State& state) {
    const auto n = static_cast<Index>(state.range(0));
    LabeledDataset data;
    data.features = random_points(n, 32, 4);
    data.labels.assign(static_cast<std::size_t>(n), 1);
    const auto indexes = build_indexes(data);
    Rng rng(5);
    Vector x(32);
    for (Index j = 0; j < 32; ++j) x[j] = rng.normal();
    for (auto _ : state) {
        benchmark::DoNotOptimize(knn_within_class(indexes[0], x, 16));
    }
}
BENCHMARK(BM_knn_within_class)->Arg(100)->Arg(1000)->Arg(10000);

void BM_classify(benchmark::State& state) {
    SynthSpec spec;
    spec.family = CurveFamily::funky_curves;
    spec.n_per_class = static_cast<int>(state.range(0));
    spec.sigma = 0.02;
    spec.seed = 6;
    const auto data = generate(spec);
    SpaConfig config;
    config.p = 1;
    const auto model = SpaModel::fit(data, config);
    Rng rng(7);
    Vector x(2);
    for (auto _ : state) {
        x[0] = rng.uniform(-1.0, 1.0);
        x[1] = rng.uniform(-1.0, 1.0);
        benchmark::DoNotOptimize(model.classify(x));
    }
}
BENCHMARK(BM_classify)->Arg(50)->Arg(500);

void BM_misclassification_bound(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(misclassification_bound({1.0, 0.1, 2}));
    }
}
BENCHMARK(BM_misclassification_bound);

} // namespace

BENCHMARK_MAIN();
