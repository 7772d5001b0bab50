#include <benchmark/benchmark.h>

#include <string>

#include "pstflow/pstflow.hpp"

using namespace pstflow;

namespace {

// Ring of `n` buses with a chord every fifth bus, a fixed 300 MW of load
// spread over every bus but the slack, and corrected
// PSTs of alternating sign on the chords.
Network synthetic_grid(int n) {
    Network net;
    net.correction_tables.push_back(reference_pst_table("ref"));
    for (int i = 1; i <= n; ++i) {
        Bus b;
        b.id = i;
        b.name = "B" + std::to_string(i);
        b.area = i <= n / 2 ? "north" : "south";
        b.base_kv = 230.0;
        b.kind = i == 1 ? BusKind::slack : BusKind::pq;
        if (i == 1) b.v_setpoint_pu = 1.04;
        net.buses.push_back(b);
        if (i > 1) net.loads.push_back({i, 300.0 / n, 75.0 / n});
    }
    int id = 0;
    auto add = [&](int f, int t, double x, double phi = 0.0) {
        Branch br;
        br.id = ++id;
        br.from_bus = f;
        br.to_bus = t;
        br.r_pu = 0.1 * x;
        br.x_pu = x;
        br.b_pu = 0.01;
        br.rating_mva = 400.0;
        if (phi != 0.0) br.transformer = TransformerExt{1.0, phi, "ref"};
        net.branches.push_back(br);
    };
    for (int i = 1; i <= n; ++i) add(i, i % n + 1, 0.02);
    for (int i = 1; i + 5 <= n; i += 5) add(i, i + 5, 0.05, i % 10 == 1 ? 2.0 : -2.0);
    Generator g;
    g.bus = 1;
    g.p_max_mw = 400.0;
    net.generators.push_back(g);
    Generator g2;
    g2.bus = n / 4 + 1;
    g2.p_mw = 100.0;
    g2.p_max_mw = 200.0;
    net.generators.push_back(g2);
    return net;
}

void BM_InterpolateFactor(benchmark::State& state) {
    const auto table = reference_pst_table();
    double phi = -150.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(interpolate_factor(table, phi));
        phi = phi > 150.0 ? -150.0 : phi + 0.37;
    }
}
BENCHMARK(BM_InterpolateFactor);

void BM_AssembleYbus(benchmark::State& state) {
    const auto net = synthetic_grid(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_ybus(net, true));
    }
}
BENCHMARK(BM_AssembleYbus)->Arg(30)->Arg(100)->Arg(300);

void BM_NewtonSolve(benchmark::State& state) {
    const auto net = synthetic_grid(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(net));
    }
}
BENCHMARK(BM_NewtonSolve)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Ptdf(benchmark::State& state) {
    const auto net = synthetic_grid(static_cast<int>(state.range(0)));
    const auto transfer = make_transfer(net, "north", "south");
    for (auto _ : state) {
        benchmark::DoNotOptimize(ptdf(net, transfer, true));
    }
}
BENCHMARK(BM_Ptdf)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_AngleSweep(benchmark::State& state) {
    const auto net = synthetic_grid(30);
    SweepOptions opts;
    opts.pst_branch = 31;  // first chord
    opts.from_deg = -10.0;
    opts.to_deg = 10.0;
    opts.parallel = state.range(0) != 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(angle_sweep(net, opts));
    }
}
BENCHMARK(BM_AngleSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
