#include <benchmark/benchmark.h>

#include "micz/quadrature.hpp"

using namespace micz;

namespace {

const SystemSpec kTwoCenter = make_two_center(1.0, 0.6, -1.0, -0.4, -0.5);
const PhaseState kState{0.0, {1.2, 0, 0.3}, {0, 0.75, 0.1}};

void BM_FlatRhs(benchmark::State& state) {
    for (auto _ : state) {
        const StateDerivative d = equations_of_motion(kState, kTwoCenter);
        benchmark::DoNotOptimize(d.dv.x);
    }
}
BENCHMARK(BM_FlatRhs);

void BM_EllipticInvariant(benchmark::State& state) {
    for (auto _ : state) {
        const ConservedSet c = conserved_quantities(kState, kTwoCenter);
        benchmark::DoNotOptimize(c.E);
    }
}
BENCHMARK(BM_EllipticInvariant);

void BM_IntegrateTwoCenter(benchmark::State& state) {
    IntegratorControls ctl;
    ctl.rel_tol = 1e-10;
    ctl.abs_tol = 1e-12;
    ctl.sample_dt = 10.0;
    for (auto _ : state) {
        const Trajectory traj = integrate(kState, kTwoCenter, 100.0, ctl);
        benchmark::DoNotOptimize(traj.samples.back().r.x);
    }
}
BENCHMARK(BM_IntegrateTwoCenter)->Unit(benchmark::kMillisecond);

void BM_GreenCustomBuild(benchmark::State& state) {
    std::vector<double> rs, Gs;
    const MetricProfile sphere = MetricProfile::sphere(1.0);
    for (int i = 0; i < 600; ++i) {
        const double r = 0.05 * std::exp(std::log(200.0) * i / 599.0);
        rs.push_back(r);
        Gs.push_back(sphere.G(r));
    }
    const MetricProfile custom = MetricProfile::custom(rs, Gs);
    for (auto _ : state) {
        const GreenFunction green(custom);
        benchmark::DoNotOptimize(green(1.0));
    }
}
BENCHMARK(BM_GreenCustomBuild)->Unit(benchmark::kMillisecond);

void BM_TimeQuadrature(benchmark::State& state) {
    const SeparationConstants c = extract_constants(kState, kTwoCenter);
    const Radicand R(kTwoCenter, c, RadicandVar::XiElliptic);
    const auto intervals = turning_points(R, 1.0, 20.0);
    for (auto _ : state) {
        const QuadratureResult q = time_integral(R, intervals.front());
        benchmark::DoNotOptimize(q.value);
    }
}
BENCHMARK(BM_TimeQuadrature);

}  // namespace

BENCHMARK_MAIN();
