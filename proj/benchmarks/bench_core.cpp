#include <benchmark/benchmark.h>

#include <cmath>

#include "sqg/bubbles.hpp"
#include "sqg/direct_kernel.hpp"
#include "sqg/evolution.hpp"
#include "sqg/lagrangian.hpp"

using namespace sqg;

namespace {

ScalarField field(int R) {
    return sample_odd_odd(Grid(R), [](double x1, double x2) {
        return std::sin(M_PI * x1) * std::sin(2 * M_PI * x2) + 0.3 * std::sin(5 * M_PI * x1) * std::sin(3 * M_PI * x2);
    });
}

void BM_Forward(benchmark::State& st) {
    const ScalarField f = field(int(st.range(0)));
    auto& tr = transformer_for(f.grid);
    Spectrum s(f.grid);
    for (auto _ : st) {
        tr.forward(f, s);
        benchmark::DoNotOptimize(s.coeff.data());
    }
}
BENCHMARK(BM_Forward)->Arg(256)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_Inverse(benchmark::State& st) {
    const ScalarField f = field(int(st.range(0)));
    auto& tr = transformer_for(f.grid);
    const Spectrum s = tr.forward(f);
    ScalarField out(f.grid);
    for (auto _ : st) {
        tr.inverse(s, out);
        benchmark::DoNotOptimize(out.values.data());
    }
}
BENCHMARK(BM_Inverse)->Arg(256)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_RK4Step(benchmark::State& st) {
    const ScalarField f = field(int(st.range(0)));
    Stepper stepper(f.grid, MultiplierSpec{}, true);
    Spectrum s = forward_transform(f);
    const double dt = 0.1 * f.grid.spacing() / stepper.max_velocity(s);
    for (auto _ : st) s = stepper.step(s, dt, 0.4);
}
BENCHMARK(BM_RK4Step)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_DirectKernelProbe(benchmark::State& st) {
    const DataSpec d{3, 5, 0.55, 3};
    const DirectKernel dk(assemble_data(d, Grid(1024)));
    const Vec2 x = make_bubbles(d)[1].center;
    for (auto _ : st) benchmark::DoNotOptimize(dk.velocity(KernelProbe{x, int(st.range(0)), 8.0}));
}
BENCHMARK(BM_DirectKernelProbe)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_MarkerVelocity(benchmark::State& st) {
    const ScalarField f = field(1024);
    const GridVelocity gv(forward_transform(f), MultiplierSpec{});
    Vec2 x{0.1234, 0.0567};
    for (auto _ : st) {
        benchmark::DoNotOptimize(gv(x));
        x.x1 = std::fmod(x.x1 + 0.0013, 0.9);
    }
}
BENCHMARK(BM_MarkerVelocity);

}  // namespace

BENCHMARK_MAIN();
