#include <benchmark/benchmark.h>

#include "grulstm/baselines.hpp"
#include "grulstm/numerics.hpp"
#include "grulstm/recurrent.hpp"
#include "grulstm/rng.hpp"

using namespace grulstm;

namespace {

Vector random_vector(std::size_t n, SeededRng& rng) {
    Vector v(n);
    for (auto& x : v) x = rng.uniform(-1, 1);
    return v;
}

void bm_matvec(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    SeededRng rng(1);
    Matrix m = init_matrix(n, n, rng);
    Vector v = random_vector(n, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(matvec(m, v));
    }
    state.SetItemsProcessed(static_cast<long>(state.iterations()) * static_cast<long>(n * n));
}
BENCHMARK(bm_matvec)->Arg(32)->Arg(100)->Arg(200);

void bm_gru_step(benchmark::State& state) {
    const auto h = static_cast<std::size_t>(state.range(0));
    SeededRng rng(2);
    GruParams p;
    p.W_z = init_matrix(h, 7, rng);
    p.W_r = init_matrix(h, 7, rng);
    p.W_h = init_matrix(h, 7, rng);
    p.U_z = init_matrix(h, h, rng);
    p.U_r = init_matrix(h, h, rng);
    p.U_h = init_matrix(h, h, rng);
    p.b_z = p.b_r = p.b_h = Vector(h, 0.0);
    Vector x = random_vector(7, rng);
    Vector hp = random_vector(h, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gru_step(p, CandidateActivation::Tanh, x, hp));
    }
}
BENCHMARK(bm_gru_step)->Arg(32)->Arg(100)->Arg(200);

void bm_model_forward(benchmark::State& state) {
    ModelOptions opts;
    opts.recurrent_hidden = static_cast<int>(state.range(0));
    Model m = Model::make(Architecture::GruLstm, 1, opts, 3);
    SeededRng rng(4);
    SequenceSample s;
    for (int t = 0; t < 7; ++t) s.steps.push_back(Vector{rng.next_double()});
    for (auto _ : state) {
        benchmark::DoNotOptimize(model_forward(m, s, false));
    }
}
BENCHMARK(bm_model_forward)->Arg(16)->Arg(50)->Arg(100);

void bm_fit_tree(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    SeededRng rng(5);
    std::vector<LabeledRow> rows;
    for (std::size_t i = 0; i < n; ++i) {
        LabeledRow r;
        for (int j = 0; j < kNumFeatures; ++j) r.features.push_back(rng.uniform(0, 10));
        r.label = static_cast<int>(rng.below(kNumClasses));
        rows.push_back(r);
    }
    TreeConfig cfg;
    cfg.max_depth = 8;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_tree(rows, cfg));
    }
}
BENCHMARK(bm_fit_tree)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
