#include "teamnet/diffusion.hpp"

#include "teamnet/error.hpp"
#include "teamnet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace teamnet {

std::uint64_t num_dyads(std::size_t num_nodes, bool directed)
{
    const std::uint64_t n = num_nodes;
    if (n < 2)
        return 0;
    return directed ? n * (n - 1) : n * (n - 1) / 2;
}

PotentialityValue potentiality_from_counts(std::span<const std::uint64_t> counts,
                                           std::uint64_t dyads)
{
    if (dyads < 2)
        throw Error(ErrorKind::DegenerateNetwork,
                    "potentiality needs at least two possible dyads, got " + std::to_string(dyads));
    std::uint64_t m = 0;
    for (auto c : counts)
        m += c;
    if (m == 0)
        throw Error(ErrorKind::DegenerateNetwork, "network has no interactions");

    const double total = static_cast<double>(m);
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0)
            continue;
        const double p = static_cast<double>(c) / total;
        h -= p * std::log(p);
    }
    PotentialityValue out;
    out.h_observed = std::max(h, 0.0);
    out.h_max = std::log(static_cast<double>(dyads));
    out.value = std::clamp(out.h_observed / out.h_max, 0.0, 1.0);
    return out;
}

PotentialityValue potentiality(const InteractionNetwork& network)
{
    std::vector<std::uint64_t> counts;
    for (const auto& e : network.edges())
        counts.push_back(e.count);
    return potentiality_from_counts(counts, num_dyads(network.num_nodes(), network.directed()));
}

EnsembleSampler::EnsembleSampler(const InteractionNetwork& network, const BlockAssignment& blocks)
    : network_(&network), m_(network.m()),
      all_dyads_(teamnet::num_dyads(network.num_nodes(), network.directed()))
{
    const auto fit = fit_slice(network, blocks, Execution::Serial);
    const auto deg = degree_sequence(network);
    const std::size_t n = network.num_nodes();

    double running = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = network.directed() ? 0 : i + 1; j < n; ++j) {
            if (i == j)
                continue;
            const double capacity =
                static_cast<double>(deg.out_degree[i]) * static_cast<double>(deg.in_degree[j]);
            const double omega = fit.propensity.omega_at(blocks.block_of[i], blocks.block_of[j]);
            const double weight = capacity * -std::expm1(-omega);
            if (weight <= 0.0)
                continue;
            running += weight;
            dyads_.emplace_back(i, j);
            cumulative_.push_back(running);
        }
    }
    if (dyads_.empty() || m_ == 0)
        throw Error(ErrorKind::AllZeroWeights, "every dyad has zero sampling weight");
}

std::vector<std::pair<std::size_t, std::uint64_t>> EnsembleSampler::draw(std::uint64_t seed,
                                                                         std::uint64_t index) const
{
    std::mt19937_64 rng(derive_seed({seed, index}));
    std::uniform_real_distribution<double> uniform(0.0, cumulative_.back());

    std::vector<std::size_t> picks(m_);
    for (auto& p : picks) {
        const double u = uniform(rng);
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        p = std::min(static_cast<std::size_t>(it - cumulative_.begin()), dyads_.size() - 1);
    }
    std::sort(picks.begin(), picks.end());

    std::vector<std::pair<std::size_t, std::uint64_t>> out;
    for (std::size_t k = 0; k < picks.size();) {
        std::size_t end = k;
        while (end < picks.size() && picks[end] == picks[k])
            ++end;
        out.emplace_back(picks[k], end - k);
        k = end;
    }
    return out;
}

InteractionNetwork EnsembleSampler::materialise(
    const std::vector<std::pair<std::size_t, std::uint64_t>>& counts) const
{
    InteractionNetwork out(network_->platform(), network_->year(), network_->directed());
    for (const auto& node : network_->nodes())
        out.add_node(node.member, node.role);
    for (const auto& [dyad, count] : counts)
        out.add_interactions(dyads_[dyad].first, dyads_[dyad].second, count);
    return out;
}

double EnsembleSampler::sample_potentiality(std::uint64_t seed, std::uint64_t index) const
{
    const auto drawn = draw(seed, index);
    std::vector<std::uint64_t> counts;
    counts.reserve(drawn.size());
    for (const auto& [dyad, count] : drawn)
        counts.push_back(count);
    return potentiality_from_counts(counts, all_dyads_).value;
}

namespace {

void require_samples(std::size_t n)
{
    if (n == 0)
        throw Error(ErrorKind::InvalidInput, "ensemble size must be at least 1");
}

} // namespace

std::vector<InteractionNetwork> sample_ensemble(const InteractionNetwork& network,
                                                const BlockAssignment& blocks, std::size_t n,
                                                std::uint64_t seed, Execution exec)
{
    require_samples(n);
    const EnsembleSampler sampler(network, blocks);
    std::vector<std::optional<InteractionNetwork>> slots(n);
    const long count = static_cast<long>(n);
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (long s = 0; s < count; ++s)
            slots[s] = sampler.materialise(sampler.draw(seed, static_cast<std::uint64_t>(s)));
    } else {
        for (long s = 0; s < count; ++s)
            slots[s] = sampler.materialise(sampler.draw(seed, static_cast<std::uint64_t>(s)));
    }
    std::vector<InteractionNetwork> out;
    out.reserve(n);
    for (auto& s : slots)
        out.push_back(std::move(*s));
    return out;
}

std::vector<InteractionNetwork> sample_ensemble(const InteractionNetwork& network,
                                                const BlockPartition& partition, std::size_t n,
                                                std::uint64_t seed, Execution exec)
{
    return sample_ensemble(network, partition.resolve(network), n, seed, exec);
}

std::vector<double> ensemble_potentialities(const InteractionNetwork& network,
                                            const BlockAssignment& blocks, std::size_t n,
                                            std::uint64_t seed, Execution exec)
{
    require_samples(n);
    // Fails early with DegenerateNetwork rather than inside the loop.
    potentiality(network);
    const EnsembleSampler sampler(network, blocks);
    std::vector<double> values(n);
    const long count = static_cast<long>(n);
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (long s = 0; s < count; ++s)
            values[s] = sampler.sample_potentiality(seed, static_cast<std::uint64_t>(s));
    } else {
        for (long s = 0; s < count; ++s)
            values[s] = sampler.sample_potentiality(seed, static_cast<std::uint64_t>(s));
    }
    return values;
}

const char* to_string(ScenarioKind kind)
{
    switch (kind) {
    case ScenarioKind::ObsInt: return "obsInt";
    case ScenarioKind::EcdeDevs: return "ecdeDevs";
    case ScenarioKind::EcdeAll: return "ecdeAll";
    case ScenarioKind::Custom: return "custom";
    }
    return "?";
}

std::optional<ScenarioKind> parse_scenario(std::string_view text)
{
    for (auto k : {ScenarioKind::ObsInt, ScenarioKind::EcdeDevs, ScenarioKind::EcdeAll,
                   ScenarioKind::Custom})
        if (text == to_string(k))
            return k;
    return std::nullopt;
}

std::optional<BlockAssignment> scenario_blocks(const InteractionNetwork& network,
                                               const ScenarioSpec& spec)
{
    switch (spec.kind) {
    case ScenarioKind::ObsInt: return std::nullopt;
    case ScenarioKind::EcdeAll: return role_blocks(network);
    case ScenarioKind::Custom: return spec.partition.resolve(network);
    case ScenarioKind::EcdeDevs: {
        BlockPartition p;
        for (const auto& n : network.nodes()) {
            if (n.role == Role::developer())
                p.assign(n.member, n.role.name());
            else
                p.assign(n.member, "member:" + n.member.str());
        }
        return p.resolve(network);
    }
    }
    return std::nullopt;
}

ScenarioSummary summarise(std::span<const double> values)
{
    ScenarioSummary s;
    s.n = values.size();
    if (values.empty())
        return s;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(sorted.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, sorted.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
    };
    s.p5 = quantile(0.05);
    s.p95 = quantile(0.95);
    if (s.n == 1)
        s.p5 = s.p95 = s.mean;
    return s;
}

namespace {

std::uint64_t fnv1a(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

ScenarioResult run_scenario(const InteractionNetwork& network, const ScenarioSpec& spec,
                            Execution exec)
{
    ScenarioResult r;
    r.platform = network.platform();
    r.year = network.year();
    r.scenario = spec.label();
    auto blocks = scenario_blocks(network, spec);
    if (!blocks) {
        r.values = {potentiality(network).value};
    } else {
        const auto seed = derive_seed({spec.seed, static_cast<std::uint64_t>(network.platform()),
                                       static_cast<std::uint64_t>(network.year()),
                                       fnv1a(r.scenario)});
        r.values = ensemble_potentialities(network, *blocks, spec.ensemble_size, seed, exec);
    }
    r.summary = summarise(r.values);
    return r;
}

std::vector<ScenarioResult> run_scenarios(std::span<const InteractionNetwork> networks,
                                          std::span<const ScenarioSpec> specs, Execution exec)
{
    std::vector<ScenarioResult> out;
    out.reserve(networks.size() * specs.size());
    for (const auto& net : networks)
        for (const auto& spec : specs)
            out.push_back(run_scenario(net, spec, exec));
    return out;
}

} // namespace teamnet
