#pragma once

// Block-constrained configuration model fits: capacities, propensities,
// normalised interaction preferences and their aggregation across years
// and platforms.

#include "teamnet/execution.hpp"
#include "teamnet/network.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace teamnet {

// Ratio A/Ξ is clamped here before taking the log, which bounds ω at about
// 20.7 for saturated block pairs.
inline constexpr double max_capacity_ratio = 1.0 - 1e-9;

// Member -> block label. The default partition uses role names.
class BlockPartition {
public:
    BlockPartition() = default;

    static BlockPartition by_role(const InteractionNetwork& network);

    void assign(const MemberId& member, std::string label);
    std::optional<std::string> block_of(const MemberId& member) const;
    std::size_t size() const noexcept { return blocks_.size(); }

    // Dense form over the network's nodes; throws InvalidInput when a node
    // has no block.
    BlockAssignment resolve(const InteractionNetwork& network) const;

private:
    std::map<MemberId, std::string> blocks_;
};

// Square block matrix of doubles, row-major. Undirected matrices are stored
// symmetrically.
struct BlockMatrix {
    std::vector<std::string> labels;
    bool directed = true;
    std::vector<double> values;

    BlockMatrix() = default;
    BlockMatrix(std::vector<std::string> labels, bool directed, double fill = 0.0);

    std::size_t size() const noexcept { return labels.size(); }
    std::optional<std::size_t> index_of(const std::string& label) const;
    double& at(std::size_t a, std::size_t b) { return values[a * size() + b]; }
    double at(std::size_t a, std::size_t b) const { return values[a * size() + b]; }
};

// Ξ: the number of possible interactions between two blocks given the
// members' degrees. Directed: sum over i in r1, j in r2, j != i of
// dout(i)*din(j). Undirected: the same over unordered member pairs.
using XiMatrix = BlockMatrix;

// Block-sum kernel (OpenMP reduction over nodes) or the serial pair
// enumeration, selected by `exec`. Results are identical: both accumulate
// exact integer products.
XiMatrix compute_xi(const InteractionNetwork& network, const BlockAssignment& blocks,
                    Execution exec = Execution::Parallel);
XiMatrix compute_xi(const InteractionNetwork& network, const BlockPartition& partition,
                    Execution exec = Execution::Parallel);

struct PropensityMatrix {
    std::vector<std::string> labels;
    bool directed = true;
    std::vector<double> omega;
    // Row-normalised omega; empty until normalise_rows runs.
    std::vector<double> share;
    std::vector<char> saturated;
    // Per row: no outgoing propensity at all, so no shares exist.
    std::vector<char> no_data;
    // Per pair: number of fits that contributed (1 for a single slice).
    std::vector<unsigned> support;

    std::size_t size() const noexcept { return labels.size(); }
    std::optional<std::size_t> index_of(const std::string& label) const;
    double omega_at(std::size_t a, std::size_t b) const { return omega[a * size() + b]; }
    double share_at(std::size_t a, std::size_t b) const { return share[a * size() + b]; }
    bool has_share(std::size_t a, std::size_t b) const;
};

// omega = -ln(1 - A/Ξ). Throws CapacityViolation when A > 0 meets Ξ = 0.
PropensityMatrix fit_omega(const CountMatrix& counts, const XiMatrix& xi);

// Divides each row by its sum; all-zero rows are flagged no_data.
PropensityMatrix normalise_rows(PropensityMatrix omega);

enum class Preference { Positive, Negative, Neutral, NoData };
const char* to_string(Preference p);

struct PreferenceEntry {
    double share = 0.0;
    Preference preference = Preference::NoData;
    double strength = 0.0;
};

struct PreferenceReport {
    std::string scope;
    std::vector<std::string> labels;
    double threshold = 0.0;
    std::vector<PreferenceEntry> entries;

    std::size_t size() const noexcept { return labels.size(); }
    std::optional<std::size_t> index_of(const std::string& label) const;
    const PreferenceEntry& at(std::size_t a, std::size_t b) const { return entries[a * size() + b]; }
    const PreferenceEntry& at(const std::string& a, const std::string& b) const;
};

// Threshold 1/k: above is Positive, below Negative, within 1e-12 Neutral.
PreferenceReport classify(const PropensityMatrix& shares, std::size_t k_roles);
PreferenceReport classify_at(const PropensityMatrix& shares, double threshold);

// Mean share per pair over the fits in which both blocks were active.
PropensityMatrix average_years(std::span<const PropensityMatrix> fits);

// A pair is Positive when it is Positive on at least one platform; strength
// and share are averaged over the platforms that have data for it.
PreferenceReport combine_platforms(std::span<const PreferenceReport> reports);

struct SliceFit {
    CountMatrix counts;
    XiMatrix xi;
    PropensityMatrix propensity;
};

// compute_xi + fit_omega + normalise_rows on one network.
SliceFit fit_slice(const InteractionNetwork& network, const BlockAssignment& blocks,
                   Execution exec = Execution::Parallel);

} // namespace teamnet
