#include "mocp/case_study.hpp"
#include "mocp/comp_automaton.hpp"
#include "mocp/manager.hpp"
#include "mocp/simulation.hpp"

#include <benchmark/benchmark.h>

using namespace mocp;

namespace {

CompAutomatonSpec single_state(std::size_t frame_width) {
    CompAutomatonSpec s;
    s.name = "bench";
    s.states = {"q"};
    s.initial = "q";
    std::vector<InstructionTemplate> frame(frame_width, InstructionTemplate{"undo", {{"amount", "amount"}}});
    s.transitions = {CompTransition{"q", "q", "payment", Guard{}, frame, TransitionAction::None}};
    return s;
}

Event payment(std::uint64_t seq) {
    return Event{seq, "payment", {{"user", "u1"}, {"card", "c1"}, {"txn", "t1"}}, {{"amount", std::int64_t{3000}}},
                 Phase::Normal};
}

}  // namespace

static void BM_InstallAndActivate(benchmark::State& state) {
    const auto spec = single_state(2);
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        CompInstance inst(spec);
        for (std::uint64_t i = 1; i <= n; ++i) inst.step(payment(i));
        benchmark::DoNotOptimize(inst.activate());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_InstallAndActivate)->Range(8, 4096);

static void BM_GuardEvaluate(benchmark::State& state) {
    const auto g = Guard::parse("payload.amount > 100 && subject.user == \"u1\" || phase == \"DuringCompensation\"");
    const auto e = payment(1);
    for (auto _ : state) benchmark::DoNotOptimize(g.evaluate(&e));
}
BENCHMARK(BM_GuardEvaluate);

static void BM_ResolveBlacklistedCancel(benchmark::State& state) {
    const auto strategies = case_study::strategies();
    const auto expr = TriggerExpr::parse("seq(par(B2, C2), B4)");
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        state.PauseTiming();
        Manager m(strategies);
        for (std::uint64_t i = 1; i <= n; ++i) m.on_event(payment(i));
        state.ResumeTiming();
        benchmark::DoNotOptimize(m.resolve(expr));
    }
}
BENCHMARK(BM_ResolveBlacklistedCancel)->Range(8, 1024);

static void BM_ScenarioRun(benchmark::State& state) {
    Simulation sim(case_study::strategies(), case_study::monitors());
    const auto script = case_study::canonical_scenario(case_study::UserClass::Black, case_study::ErrorKind::UserCancel);
    for (auto _ : state) benchmark::DoNotOptimize(sim.run(script));
}
BENCHMARK(BM_ScenarioRun);

static void BM_Matrix(benchmark::State& state) {
    const auto strategies = case_study::strategies();
    const auto monitors = case_study::monitors();
    for (auto _ : state) benchmark::DoNotOptimize(case_study::run_matrix(strategies, monitors));
}
BENCHMARK(BM_Matrix);

BENCHMARK_MAIN();
