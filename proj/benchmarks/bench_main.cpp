#include <benchmark/benchmark.h>

#include "sincdvr/convergence.hpp"
#include "sincdvr/states.hpp"

using namespace sincdvr;

namespace {

const CircuitSpec kFluxonium = CircuitSpec::fluxonium(2.5, 0.5, 10, 0.5);

void assemble_and_solve(benchmark::State& state, const Representation& rep) {
    const auto d = static_cast<Eigen::Index>(state.range(0));
    for (auto _ : state) {
        const auto h = assemble(kFluxonium, rep, d);
        benchmark::DoNotOptimize(eigensolve(h, 5, false).energies);
    }
}

void BM_TraditionalPhase(benchmark::State& s) {
    assemble_and_solve(s, DvrRepresentation{DvrKind::TraditionalPhase, Spacing::make(5, 32, true), false});
}
void BM_TruncatedPhase(benchmark::State& s) {
    assemble_and_solve(s, DvrRepresentation{DvrKind::TruncatedPhase, Spacing::make(5, 32, true), false});
}
void BM_TraditionalCharge(benchmark::State& s) {
    assemble_and_solve(s, DvrRepresentation{DvrKind::TraditionalCharge, Spacing::make(1, 5), false});
}
void BM_HarmonicOscillator(benchmark::State& s) { assemble_and_solve(s, HoRepresentation{LengthScale::LC, 1001}); }

void BM_TruncatedMoment(benchmark::State& state) {
    const auto b = DvrBasis::make(DvrKind::TruncatedPhase, Spacing::make(1, 8, true), state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(conj_moment_truncated(b, 2).entries);
}

void BM_FdSweep(benchmark::State& state) {
    const auto lc = CircuitSpec::lc(1, 1);
    const auto sizes = odd_sizes(3, state.range(0), 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(sweep(lc, FdRepresentation{Spacing::make(1, 128, true), 1}, sizes, 0).deltas);
}

void BM_ShiftFastPath(benchmark::State& state) {
    const auto b = DvrBasis::make(DvrKind::TraditionalPhase, Spacing::make(1, 8, true), 50);
    CVector c = CVector::Zero(b.dim());
    c(b.row(0)) = 1.0;
    const auto st = StateVector::normalized_checked(c, b.tag(), -50);
    for (auto _ : state) benchmark::DoNotOptimize(apply_shift(st, b, {16, ShiftDirection::Minus}).norm);
}

}  // namespace

BENCHMARK(BM_TraditionalPhase)->Arg(41)->Arg(101)->Arg(301);
BENCHMARK(BM_TruncatedPhase)->Arg(41)->Arg(101)->Arg(301);
BENCHMARK(BM_TraditionalCharge)->Arg(41)->Arg(101)->Arg(301);
BENCHMARK(BM_HarmonicOscillator)->Arg(41)->Arg(101);
BENCHMARK(BM_TruncatedMoment)->Arg(20)->Arg(150);
BENCHMARK(BM_FdSweep)->Arg(201)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShiftFastPath);
BENCHMARK_MAIN();
