#include "teamnet/network.hpp"

#include "teamnet/error.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace teamnet {

InteractionNetwork::InteractionNetwork(Platform platform, int year, bool directed)
    : platform_(platform), year_(year), directed_(directed)
{
}

std::size_t InteractionNetwork::add_node(const MemberId& member, const Role& role)
{
    auto [it, inserted] = index_.try_emplace(member, nodes_.size());
    if (inserted)
        nodes_.push_back({member, role});
    return it->second;
}

void InteractionNetwork::add_interactions(std::size_t source, std::size_t target,
                                          std::uint64_t count)
{
    if (source >= nodes_.size() || target >= nodes_.size())
        throw Error(ErrorKind::InvalidInput, "edge endpoint is not a node of the network");
    if (source == target)
        throw Error(ErrorKind::InvalidInput, "self-loop on " + nodes_[source].member.str());
    if (count == 0)
        return;
    if (!directed_ && source > target)
        std::swap(source, target);
    edges_[{source, target}] += count;
    m_ += count;
}

std::optional<std::size_t> InteractionNetwork::find(const MemberId& member) const
{
    auto it = index_.find(member);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::vector<Edge> InteractionNetwork::edges() const
{
    std::vector<Edge> out;
    out.reserve(edges_.size());
    for (const auto& [key, count] : edges_)
        out.push_back({key.first, key.second, count});
    return out;
}

std::uint64_t InteractionNetwork::multiplicity(std::size_t source, std::size_t target) const
{
    if (!directed_ && source > target)
        std::swap(source, target);
    auto it = edges_.find({source, target});
    return it == edges_.end() ? 0 : it->second;
}

NetworkSet build_networks(std::span<const Interaction> interactions, const RoleBook& roles,
                          std::optional<YearRange> years)
{
    struct Slice {
        bool directed = true;
        std::set<MemberId> members;
        std::map<std::pair<MemberId, MemberId>, std::uint64_t> counts;
    };
    std::map<std::pair<Platform, int>, Slice> slices;

    for (const auto& x : interactions) {
        if (x.source == x.target)
            throw Error(ErrorKind::InvalidInput, "self-interaction of " + x.source.str());
        const int year = utc_year(x.timestamp);
        if (years && !years->contains(year))
            continue;
        auto& slice = slices[{x.platform, year}];
        slice.directed = x.directed;
        slice.members.insert(x.source);
        slice.members.insert(x.target);
        auto key = std::make_pair(x.source, x.target);
        if (!x.directed && key.second < key.first)
            std::swap(key.first, key.second);
        ++slice.counts[key];
    }

    NetworkSet out;
    for (const auto& [key, slice] : slices) {
        const auto [platform, year] = key;
        InteractionNetwork net(platform, year, slice.directed);
        for (const auto& member : slice.members) {
            auto role = roles.find(member, year);
            if (!role) {
                out.unassigned.emplace_back(member, year);
                role = Role::unassigned();
            }
            net.add_node(member, *role);
        }
        for (const auto& [pair, count] : slice.counts)
            net.add_interactions(*net.find(pair.first), *net.find(pair.second), count);
        out.networks.push_back(std::move(net));
    }
    return out;
}

DegreeSequence degree_sequence(const InteractionNetwork& network)
{
    DegreeSequence d;
    d.directed = network.directed();
    d.out_degree.assign(network.num_nodes(), 0);
    d.in_degree.assign(network.num_nodes(), 0);
    for (const auto& e : network.edges()) {
        d.out_degree[e.source] += e.count;
        d.in_degree[e.target] += e.count;
    }
    if (!d.directed) {
        for (std::size_t i = 0; i < d.out_degree.size(); ++i)
            d.out_degree[i] += d.in_degree[i];
        d.in_degree = d.out_degree;
    }
    return d;
}

namespace {

int label_rank(const std::string& label)
{
    if (auto role = Role::parse(label, false); role && role->name() == label)
        return role->rank();
    if (label == Role::unassigned().name())
        return 5;
    return 4;
}

} // namespace

bool block_label_less(const std::string& a, const std::string& b)
{
    return std::make_tuple(label_rank(a), std::cref(a)) < std::make_tuple(label_rank(b), std::cref(b));
}

BlockAssignment role_blocks(const InteractionNetwork& network)
{
    std::set<Role> present;
    for (const auto& n : network.nodes())
        present.insert(n.role);

    BlockAssignment blocks;
    std::map<Role, std::size_t> index;
    for (const auto& role : present) {
        index[role] = blocks.labels.size();
        blocks.labels.push_back(role.name());
    }
    blocks.block_of.reserve(network.num_nodes());
    for (const auto& n : network.nodes())
        blocks.block_of.push_back(index[n.role]);
    return blocks;
}

CountMatrix::CountMatrix(std::vector<std::string> labels, bool directed)
    : labels_(std::move(labels)), directed_(directed), data_(labels_.size() * labels_.size(), 0)
{
}

std::optional<std::size_t> CountMatrix::index_of(const std::string& label) const
{
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t CountMatrix::slot(std::size_t a, std::size_t b) const
{
    if (a >= size() || b >= size())
        throw Error(ErrorKind::InvalidInput, "block index out of range");
    if (!directed_ && a > b)
        std::swap(a, b);
    return a * size() + b;
}

std::uint64_t CountMatrix::at(std::size_t a, std::size_t b) const
{
    return data_[slot(a, b)];
}

std::uint64_t CountMatrix::at(const std::string& a, const std::string& b) const
{
    auto ia = index_of(a);
    auto ib = index_of(b);
    if (!ia || !ib)
        return 0;
    return at(*ia, *ib);
}

void CountMatrix::add(std::size_t a, std::size_t b, std::uint64_t count)
{
    data_[slot(a, b)] += count;
}

std::uint64_t CountMatrix::total() const
{
    std::uint64_t sum = 0;
    for (auto v : data_)
        sum += v;
    return sum;
}

CountMatrix count_by_block(const InteractionNetwork& network, const BlockAssignment& blocks)
{
    if (blocks.block_of.size() != network.num_nodes())
        throw Error(ErrorKind::InvalidInput, "block assignment does not cover the network");
    CountMatrix counts(blocks.labels, network.directed());
    for (const auto& e : network.edges())
        counts.add(blocks.block_of[e.source], blocks.block_of[e.target], e.count);
    return counts;
}

RoleCountMatrix count_by_role(const InteractionNetwork& network)
{
    return count_by_block(network, role_blocks(network));
}

CountMatrix merge_counts(std::span<const CountMatrix> parts)
{
    std::vector<std::string> labels;
    bool directed = true;
    for (const auto& p : parts) {
        labels.insert(labels.end(), p.labels().begin(), p.labels().end());
        directed = directed && p.directed();
    }
    std::sort(labels.begin(), labels.end(), block_label_less);
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    CountMatrix out(labels, directed);
    for (const auto& p : parts) {
        for (std::size_t a = 0; a < p.size(); ++a) {
            for (std::size_t b = 0; b < p.size(); ++b) {
                if (!p.directed() && b < a)
                    continue;
                out.add(*out.index_of(p.labels()[a]), *out.index_of(p.labels()[b]), p.at(a, b));
            }
        }
    }
    return out;
}

} // namespace teamnet
