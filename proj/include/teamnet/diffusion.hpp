#pragma once

#include "teamnet/bccm.hpp"
#include "teamnet/execution.hpp"
#include "teamnet/network.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace teamnet {

// Entropy of the dyad distribution (multiplicity / m over ordered pairs for
// directed networks, unordered pairs otherwise) relative to the entropy of
// the uniform distribution over every dyad of the node set.
struct PotentialityValue {
    double value = 0.0;
    double h_observed = 0.0;
    double h_max = 0.0;
};

// Throws DegenerateNetwork for fewer than two possible dyads or m = 0.
PotentialityValue potentiality(const InteractionNetwork& network);

// Same measure from raw dyad counts over `num_dyads` possible dyads.
PotentialityValue potentiality_from_counts(std::span<const std::uint64_t> counts,
                                           std::uint64_t num_dyads);

std::uint64_t num_dyads(std::size_t num_nodes, bool directed);

// Samples networks from a BCCM fitted to `network` under `blocks`; the
// network must outlive the sampler. Each
// sample places exactly m interactions on dyads drawn independently with
// probability proportional to Ξ_ij * (1 - exp(-ω_b(i)b(j))), which is the
// dyad's expected count under the fitted model. Sample s draws from its own
// generator seeded by (seed, s), so serial and parallel runs agree.
class EnsembleSampler {
public:
    EnsembleSampler(const InteractionNetwork& network, const BlockAssignment& blocks);

    std::size_t num_dyads() const noexcept { return dyads_.size(); }
    std::uint64_t m() const noexcept { return m_; }

    // Sparse (dyad index, count) pairs for sample `index`.
    std::vector<std::pair<std::size_t, std::uint64_t>> draw(std::uint64_t seed,
                                                            std::uint64_t index) const;

    InteractionNetwork materialise(
        const std::vector<std::pair<std::size_t, std::uint64_t>>& counts) const;

    double sample_potentiality(std::uint64_t seed, std::uint64_t index) const;

private:
    const InteractionNetwork* network_;
    std::uint64_t m_;
    std::vector<std::pair<std::size_t, std::size_t>> dyads_;
    std::vector<double> cumulative_;
    std::uint64_t all_dyads_;
};

std::vector<InteractionNetwork> sample_ensemble(const InteractionNetwork& network,
                                                const BlockAssignment& blocks, std::size_t n,
                                                std::uint64_t seed,
                                                Execution exec = Execution::Parallel);
std::vector<InteractionNetwork> sample_ensemble(const InteractionNetwork& network,
                                                const BlockPartition& partition, std::size_t n,
                                                std::uint64_t seed,
                                                Execution exec = Execution::Parallel);

// Potentiality of each of n samples, without building the networks.
std::vector<double> ensemble_potentialities(const InteractionNetwork& network,
                                            const BlockAssignment& blocks, std::size_t n,
                                            std::uint64_t seed,
                                            Execution exec = Execution::Parallel);

enum class ScenarioKind { ObsInt, EcdeDevs, EcdeAll, Custom };
const char* to_string(ScenarioKind kind);
std::optional<ScenarioKind> parse_scenario(std::string_view text);

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::ObsInt;
    std::string name;
    // Only read for Custom scenarios.
    BlockPartition partition;
    std::size_t ensemble_size = 100;
    std::uint64_t seed = 1;

    std::string label() const { return name.empty() ? to_string(kind) : name; }
};

// ecdeDevs: all developers in one block, every other member alone.
// ecdeAll: one block per role. ObsInt has no partition and yields
// std::nullopt.
std::optional<BlockAssignment> scenario_blocks(const InteractionNetwork& network,
                                               const ScenarioSpec& spec);

struct ScenarioSummary {
    double mean = 0.0;
    double p5 = 0.0;
    double p95 = 0.0;
    std::size_t n = 0;
};

// Percentiles interpolate linearly between order statistics.
ScenarioSummary summarise(std::span<const double> values);

struct ScenarioResult {
    Platform platform = Platform::IssueTracker;
    int year = 0;
    std::string scenario;
    std::vector<double> values;
    ScenarioSummary summary;
};

// One result per (network, spec), network-major. The seed used for a slice
// mixes the spec seed with platform, year and scenario.
std::vector<ScenarioResult> run_scenarios(std::span<const InteractionNetwork> networks,
                                          std::span<const ScenarioSpec> specs,
                                          Execution exec = Execution::Parallel);

ScenarioResult run_scenario(const InteractionNetwork& network, const ScenarioSpec& spec,
                            Execution exec = Execution::Parallel);

} // namespace teamnet
