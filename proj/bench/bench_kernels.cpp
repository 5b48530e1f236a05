#include "teamnet/bccm.hpp"
#include "teamnet/diffusion.hpp"
#include "teamnet/extraction.hpp"
#include "teamnet/network.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <string>

using namespace teamnet;

namespace {

InteractionNetwork random_network(std::size_t nodes, std::size_t edges, std::size_t blocks,
                                  BlockAssignment& assignment)
{
    std::mt19937_64 rng(nodes * 31 + edges);
    InteractionNetwork net(Platform::IssueTracker, 2010);
    assignment = {};
    for (std::size_t b = 0; b < blocks; ++b)
        assignment.labels.push_back("b" + std::to_string(b));
    for (std::size_t i = 0; i < nodes; ++i) {
        net.add_node(MemberId("m" + std::to_string(i)), Role::developer());
        assignment.block_of.push_back(rng() % blocks);
    }
    for (std::size_t e = 0; e < edges; ++e) {
        const auto a = rng() % nodes;
        const auto b = rng() % nodes;
        if (a != b)
            net.add_interactions(a, b);
    }
    return net;
}

void BM_Xi(benchmark::State& state, Execution exec)
{
    BlockAssignment blocks;
    auto net = random_network(state.range(0), state.range(0) * 20, 4, blocks);
    for (auto _ : state)
        benchmark::DoNotOptimize(compute_xi(net, blocks, exec));
    state.SetComplexityN(state.range(0));
}

void BM_Ensemble(benchmark::State& state, Execution exec)
{
    BlockAssignment blocks;
    auto net = random_network(state.range(0), state.range(0) * 20, 4, blocks);
    for (auto _ : state)
        benchmark::DoNotOptimize(ensemble_potentialities(net, blocks, 64, 1, exec));
}

void BM_IssueLog(benchmark::State& state, Execution exec)
{
    std::mt19937_64 rng(5);
    std::vector<IssueEntryEvent> events;
    for (long k = 0; k < state.range(0); ++k)
        events.push_back({MemberId("m" + std::to_string(rng() % 50)), std::to_string(rng() % 500),
                          Timestamp{std::chrono::seconds(1262304000 + k)}});
    for (auto _ : state)
        benchmark::DoNotOptimize(extract_issue_log(events, exec));
}

} // namespace

BENCHMARK_CAPTURE(BM_Xi, serial, Execution::Serial)->RangeMultiplier(4)->Range(64, 4096)->Complexity();
BENCHMARK_CAPTURE(BM_Xi, parallel, Execution::Parallel)->RangeMultiplier(4)->Range(64, 4096)->Complexity();
BENCHMARK_CAPTURE(BM_Ensemble, serial, Execution::Serial)->Arg(32)->Arg(128);
BENCHMARK_CAPTURE(BM_Ensemble, parallel, Execution::Parallel)->Arg(32)->Arg(128);
BENCHMARK_CAPTURE(BM_IssueLog, serial, Execution::Serial)->Arg(20000);
BENCHMARK_CAPTURE(BM_IssueLog, parallel, Execution::Parallel)->Arg(20000);

BENCHMARK_MAIN();
