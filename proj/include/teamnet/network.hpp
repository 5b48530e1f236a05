#pragma once

#include "teamnet/events.hpp"
#include "teamnet/extraction.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace teamnet {

struct Node {
    MemberId member;
    Role role;
};

struct Edge {
    std::size_t source = 0;
    std::size_t target = 0;
    std::uint64_t count = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Multi-edge interaction network for one (platform, year) slice. Undirected
// edges are stored once per unordered pair with source < target.
class InteractionNetwork {
public:
    InteractionNetwork(Platform platform, int year, bool directed);
    InteractionNetwork(Platform platform, int year)
        : InteractionNetwork(platform, year, is_directed(platform))
    {
    }

    // Returns the index of the member, adding it when new.
    std::size_t add_node(const MemberId& member, const Role& role);
    // Throws InvalidInput on self-loops or unknown node indices.
    void add_interactions(std::size_t source, std::size_t target, std::uint64_t count = 1);

    std::optional<std::size_t> find(const MemberId& member) const;

    Platform platform() const noexcept { return platform_; }
    int year() const noexcept { return year_; }
    bool directed() const noexcept { return directed_; }
    std::size_t num_nodes() const noexcept { return nodes_.size(); }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const Node& node(std::size_t i) const { return nodes_.at(i); }
    std::uint64_t m() const noexcept { return m_; }

    // Sorted by (source, target).
    std::vector<Edge> edges() const;
    std::uint64_t multiplicity(std::size_t source, std::size_t target) const;

private:
    Platform platform_;
    int year_;
    bool directed_;
    std::vector<Node> nodes_;
    std::map<MemberId, std::size_t> index_;
    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> edges_;
    std::uint64_t m_ = 0;
};

struct NetworkSet {
    std::vector<InteractionNetwork> networks;
    // (member, year) pairs active in a slice without a role assignment; they
    // are placed in the Unassigned role.
    std::vector<std::pair<MemberId, int>> unassigned;
};

// One network per (platform, UTC calendar year) with at least one
// interaction, ordered by (platform, year). Nodes are sorted by member id.
NetworkSet build_networks(std::span<const Interaction> interactions, const RoleBook& roles,
                          std::optional<YearRange> years = std::nullopt);

// Multiplicity-weighted degrees. For undirected networks both vectors hold
// the plain degree.
struct DegreeSequence {
    bool directed = true;
    std::vector<std::uint64_t> out_degree;
    std::vector<std::uint64_t> in_degree;

    const std::vector<std::uint64_t>& degree() const noexcept { return out_degree; }
};

DegreeSequence degree_sequence(const InteractionNetwork& network);

// Dense node -> block mapping with block labels.
struct BlockAssignment {
    std::vector<std::string> labels;
    std::vector<std::size_t> block_of;

    std::size_t num_blocks() const noexcept { return labels.size(); }
};

// Blocks are the roles present in the network, in role order.
BlockAssignment role_blocks(const InteractionNetwork& network);

// Interaction counts per block pair. Directed matrices use ordered pairs;
// undirected ones store each unordered pair once and read symmetrically.
class CountMatrix {
public:
    CountMatrix() = default;
    CountMatrix(std::vector<std::string> labels, bool directed);

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return labels_.size(); }
    bool directed() const noexcept { return directed_; }
    std::optional<std::size_t> index_of(const std::string& label) const;

    std::uint64_t at(std::size_t a, std::size_t b) const;
    std::uint64_t at(const std::string& a, const std::string& b) const;
    void add(std::size_t a, std::size_t b, std::uint64_t count);
    std::uint64_t total() const;

private:
    std::size_t slot(std::size_t a, std::size_t b) const;

    std::vector<std::string> labels_;
    bool directed_ = true;
    std::vector<std::uint64_t> data_;
};

using RoleCountMatrix = CountMatrix;

CountMatrix count_by_block(const InteractionNetwork& network, const BlockAssignment& blocks);
RoleCountMatrix count_by_role(const InteractionNetwork& network);

// Sums matrices over the union of their labels (label order: role order for
// role names, then lexicographic). Mixed directedness folds into unordered
// pairs.
CountMatrix merge_counts(std::span<const CountMatrix> parts);

// Orders block labels the way roles are ordered; non-role labels sort after.
bool block_label_less(const std::string& a, const std::string& b);

} // namespace teamnet
