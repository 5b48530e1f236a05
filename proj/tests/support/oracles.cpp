#include "oracles.hpp"

#include <cmath>
#include <string>

namespace oracle {

RandomGraph random_graph(std::mt19937_64& rng, std::size_t max_nodes, std::size_t max_edges,
                         bool directed)
{
    RandomGraph g;
    g.directed = directed;
    g.nodes = std::uniform_int_distribution<std::size_t>(2, max_nodes)(rng);
    g.blocks = std::uniform_int_distribution<std::size_t>(1, g.nodes)(rng);
    std::uniform_int_distribution<std::size_t> pick_block(0, g.blocks - 1);
    for (std::size_t i = 0; i < g.nodes; ++i)
        g.block_of.push_back(pick_block(rng));
    const auto m = std::uniform_int_distribution<std::size_t>(1, max_edges)(rng);
    std::uniform_int_distribution<std::size_t> pick_node(0, g.nodes - 1);
    while (g.edges.size() < m) {
        auto a = pick_node(rng);
        auto b = pick_node(rng);
        if (a != b)
            g.edges.push_back({a, b});
    }
    return g;
}

teamnet::InteractionNetwork to_network(const RandomGraph& g)
{
    teamnet::InteractionNetwork net(teamnet::Platform::IssueTracker, 2010, g.directed);
    for (std::size_t i = 0; i < g.nodes; ++i)
        net.add_node(teamnet::MemberId("n" + std::to_string(100 + i)), teamnet::Role::developer());
    for (const auto& e : g.edges)
        net.add_interactions(e.source, e.target);
    return net;
}

teamnet::BlockAssignment to_blocks(const RandomGraph& g)
{
    teamnet::BlockAssignment b;
    for (std::size_t k = 0; k < g.blocks; ++k)
        b.labels.push_back("b" + std::to_string(k));
    b.block_of = g.block_of;
    return b;
}

std::vector<std::uint64_t> tally_out(const RandomGraph& g)
{
    std::vector<std::uint64_t> d(g.nodes, 0);
    for (const auto& e : g.edges) {
        ++d[e.source];
        if (!g.directed)
            ++d[e.target];
    }
    return d;
}

std::vector<std::uint64_t> tally_in(const RandomGraph& g)
{
    if (!g.directed)
        return tally_out(g);
    std::vector<std::uint64_t> d(g.nodes, 0);
    for (const auto& e : g.edges)
        ++d[e.target];
    return d;
}

std::vector<std::vector<double>> count_pairs(const RandomGraph& g)
{
    std::vector<std::vector<double>> a(g.blocks, std::vector<double>(g.blocks, 0.0));
    for (const auto& e : g.edges) {
        const auto r = g.block_of[e.source];
        const auto s = g.block_of[e.target];
        a[r][s] += 1.0;
        if (!g.directed && r != s)
            a[s][r] += 1.0;
    }
    return a;
}

std::vector<std::vector<double>> enumerate_xi(const RandomGraph& g)
{
    const auto dout = tally_out(g);
    const auto din = tally_in(g);
    std::vector<std::vector<double>> xi(g.blocks, std::vector<double>(g.blocks, 0.0));
    for (std::size_t i = 0; i < g.nodes; ++i) {
        for (std::size_t j = 0; j < g.nodes; ++j) {
            if (i == j)
                continue;
            if (!g.directed && j < i)
                continue; // unordered pair {i, j} counted once
            const auto r = g.block_of[i];
            const auto s = g.block_of[j];
            const double w = static_cast<double>(dout[i]) * static_cast<double>(din[j]);
            xi[r][s] += w;
            if (!g.directed && r != s)
                xi[s][r] += w;
        }
    }
    return xi;
}

double entropy_bits(const std::vector<double>& weights)
{
    double total = 0.0;
    for (double w : weights)
        total += w;
    double h = 0.0;
    for (double w : weights)
        if (w > 0.0)
            h -= (w / total) * std::log2(w / total);
    return h;
}

} // namespace oracle
