#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "problock/bench_io.hpp"
#include "problock/graph.hpp"
#include "problock/locking.hpp"
#include "problock/probability.hpp"
#include "problock/simulation.hpp"
#include "problock/timing.hpp"

namespace {

const char* const kCircuits[] = {"iscas85/c432.bench", "iscas85/c1908.bench", "iscas85/c7552.bench",
                                 "iscas89/s13207.bench"};

std::string slurp(const std::string& relative) {
    std::ifstream in(std::string(PROBLOCK_DATA_DIR) + "/" + relative, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

problock::Netlist load(int index) {
    return problock::read_bench_file(std::string(PROBLOCK_DATA_DIR) + "/" + kCircuits[index]);
}

void BM_ParseBench(benchmark::State& state) {
    const auto text = slurp(kCircuits[state.range(0)]);
    for (auto _ : state) benchmark::DoNotOptimize(problock::parse_bench(text));
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
    state.SetLabel(kCircuits[state.range(0)]);
}
BENCHMARK(BM_ParseBench)->DenseRange(0, 3);

void BM_AnalyzeTiming(benchmark::State& state) {
    const auto g = problock::build_graph(load(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(problock::analyze_timing(g, problock::DelayModel::unit()));
    state.SetLabel(kCircuits[state.range(0)]);
}
BENCHMARK(BM_AnalyzeTiming)->DenseRange(0, 3);

void BM_Propagate(benchmark::State& state) {
    const auto n = load(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(problock::propagate(n));
    state.SetLabel(kCircuits[state.range(0)]);
}
BENCHMARK(BM_Propagate)->DenseRange(0, 3);

void BM_Simulate64(benchmark::State& state) {
    const auto n = load(static_cast<int>(state.range(0)));
    const problock::Simulator sim(n);
    std::vector<problock::Word> pi(n.primary_inputs().size(), 0x5555555555555555ull);
    std::vector<problock::Word> st(n.dffs().size(), 0);
    for (auto _ : state) benchmark::DoNotOptimize(sim.step(pi, {}, st));
    state.SetItemsProcessed(state.iterations() * 64);
    state.SetLabel(kCircuits[state.range(0)]);
}
BENCHMARK(BM_Simulate64)->DenseRange(0, 3);

void BM_Lock(benchmark::State& state) {
    const auto n = load(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(problock::lock(n, {}));
    state.SetLabel(kCircuits[state.range(0)]);
}
BENCHMARK(BM_Lock)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
