#include "teamnet/bccm.hpp"

#include "teamnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace teamnet {

namespace {

std::optional<std::size_t> find_label(const std::vector<std::string>& labels,
                                      const std::string& label)
{
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - labels.begin());
}

std::vector<std::string> union_labels(std::vector<std::string> labels)
{
    std::sort(labels.begin(), labels.end(), block_label_less);
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

} // namespace

BlockPartition BlockPartition::by_role(const InteractionNetwork& network)
{
    BlockPartition p;
    for (const auto& n : network.nodes())
        p.assign(n.member, n.role.name());
    return p;
}

void BlockPartition::assign(const MemberId& member, std::string label)
{
    blocks_[member] = std::move(label);
}

std::optional<std::string> BlockPartition::block_of(const MemberId& member) const
{
    auto it = blocks_.find(member);
    if (it == blocks_.end())
        return std::nullopt;
    return it->second;
}

BlockAssignment BlockPartition::resolve(const InteractionNetwork& network) const
{
    std::vector<std::string> labels;
    for (const auto& n : network.nodes()) {
        auto label = block_of(n.member);
        if (!label)
            throw Error(ErrorKind::InvalidInput, "member " + n.member.str() + " has no block");
        labels.push_back(*label);
    }
    BlockAssignment out;
    out.labels = union_labels(labels);
    for (const auto& label : labels)
        out.block_of.push_back(*find_label(out.labels, label));
    return out;
}

BlockMatrix::BlockMatrix(std::vector<std::string> labels_, bool directed_, double fill)
    : labels(std::move(labels_)), directed(directed_), values(labels.size() * labels.size(), fill)
{
}

std::optional<std::size_t> BlockMatrix::index_of(const std::string& label) const
{
    return find_label(labels, label);
}

namespace {

void check_blocks(const InteractionNetwork& network, const BlockAssignment& blocks)
{
    if (blocks.block_of.size() != network.num_nodes())
        throw Error(ErrorKind::InvalidInput, "block assignment does not cover the network");
    for (auto b : blocks.block_of)
        if (b >= blocks.num_blocks())
            throw Error(ErrorKind::InvalidInput, "block index out of range");
}

XiMatrix xi_pair_enumeration(const InteractionNetwork& network, const BlockAssignment& blocks)
{
    const auto deg = degree_sequence(network);
    const std::size_t n = network.num_nodes();
    const std::size_t k = blocks.num_blocks();
    std::vector<std::uint64_t> xi(k * k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        // Undirected pairs are visited once (j > i).
        for (std::size_t j = network.directed() ? 0 : i + 1; j < n; ++j) {
            if (i == j)
                continue;
            const auto bi = blocks.block_of[i];
            const auto bj = blocks.block_of[j];
            const auto product = deg.out_degree[i] * deg.in_degree[j];
            xi[bi * k + bj] += product;
            if (!network.directed() && bi != bj)
                xi[bj * k + bi] += product;
        }
    }
    XiMatrix out(blocks.labels, network.directed());
    for (std::size_t s = 0; s < k * k; ++s)
        out.values[s] = static_cast<double>(xi[s]);
    return out;
}

XiMatrix xi_block_sums(const InteractionNetwork& network, const BlockAssignment& blocks)
{
    const auto deg = degree_sequence(network);
    const long n = static_cast<long>(network.num_nodes());
    const std::size_t k = blocks.num_blocks();

    std::vector<std::uint64_t> out_sum(k, 0), in_sum(k, 0), self_sum(k, 0);
    std::uint64_t* po = out_sum.data();
    std::uint64_t* pi = in_sum.data();
    std::uint64_t* ps = self_sum.data();
    const auto* block_of = blocks.block_of.data();
    const auto* dout = deg.out_degree.data();
    const auto* din = deg.in_degree.data();

#pragma omp parallel for reduction(+ : po[:k], pi[:k], ps[:k])
    for (long i = 0; i < n; ++i) {
        const auto b = block_of[i];
        po[b] += dout[i];
        pi[b] += din[i];
        ps[b] += dout[i] * din[i];
    }

    XiMatrix out(blocks.labels, network.directed());
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            std::uint64_t value = out_sum[a] * in_sum[b];
            if (a == b) {
                value -= self_sum[a];
                if (!network.directed())
                    value /= 2;
            }
            out.at(a, b) = static_cast<double>(value);
        }
    }
    return out;
}

} // namespace

XiMatrix compute_xi(const InteractionNetwork& network, const BlockAssignment& blocks, Execution exec)
{
    check_blocks(network, blocks);
    return exec == Execution::Parallel ? xi_block_sums(network, blocks)
                                       : xi_pair_enumeration(network, blocks);
}

XiMatrix compute_xi(const InteractionNetwork& network, const BlockPartition& partition,
                    Execution exec)
{
    return compute_xi(network, partition.resolve(network), exec);
}

std::optional<std::size_t> PropensityMatrix::index_of(const std::string& label) const
{
    return find_label(labels, label);
}

bool PropensityMatrix::has_share(std::size_t a, std::size_t b) const
{
    return !share.empty() && !no_data[a] && support[a * size() + b] > 0;
}

PropensityMatrix fit_omega(const CountMatrix& counts, const XiMatrix& xi)
{
    if (counts.labels() != xi.labels || counts.directed() != xi.directed)
        throw Error(ErrorKind::InvalidInput, "count and capacity matrices use different blocks");

    const std::size_t k = xi.size();
    PropensityMatrix out;
    out.labels = xi.labels;
    out.directed = xi.directed;
    out.omega.assign(k * k, 0.0);
    out.saturated.assign(k * k, 0);
    out.no_data.assign(k, 0);
    out.support.assign(k * k, 1);

    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            const double count = static_cast<double>(counts.at(a, b));
            const double capacity = xi.at(a, b);
            if (count == 0.0)
                continue;
            if (capacity <= 0.0)
                throw Error(ErrorKind::CapacityViolation,
                            "blocks " + xi.labels[a] + " and " + xi.labels[b]
                                + " interact but have no capacity");
            double ratio = count / capacity;
            if (ratio >= max_capacity_ratio) {
                ratio = max_capacity_ratio;
                out.saturated[a * k + b] = 1;
            }
            out.omega[a * k + b] = -std::log1p(-ratio);
        }
    }
    return out;
}

PropensityMatrix normalise_rows(PropensityMatrix m)
{
    const std::size_t k = m.size();
    m.share.assign(k * k, 0.0);
    m.no_data.assign(k, 0);
    for (std::size_t a = 0; a < k; ++a) {
        double sum = 0.0;
        for (std::size_t b = 0; b < k; ++b)
            sum += m.omega[a * k + b];
        if (sum <= 0.0) {
            m.no_data[a] = 1;
            continue;
        }
        for (std::size_t b = 0; b < k; ++b)
            m.share[a * k + b] = m.omega[a * k + b] / sum;
    }
    return m;
}

const char* to_string(Preference p)
{
    switch (p) {
    case Preference::Positive: return "positive";
    case Preference::Negative: return "negative";
    case Preference::Neutral: return "neutral";
    case Preference::NoData: return "nodata";
    }
    return "?";
}

std::optional<std::size_t> PreferenceReport::index_of(const std::string& label) const
{
    return find_label(labels, label);
}

const PreferenceEntry& PreferenceReport::at(const std::string& a, const std::string& b) const
{
    auto ia = index_of(a);
    auto ib = index_of(b);
    if (!ia || !ib)
        throw Error(ErrorKind::InvalidInput, "unknown block pair " + a + " -> " + b);
    return at(*ia, *ib);
}

PreferenceReport classify_at(const PropensityMatrix& shares, double threshold)
{
    constexpr double tie = 1e-12;
    const std::size_t k = shares.size();
    PreferenceReport out;
    out.labels = shares.labels;
    out.threshold = threshold;
    out.entries.assign(k * k, {});
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            if (!shares.has_share(a, b))
                continue;
            auto& e = out.entries[a * k + b];
            e.share = shares.share_at(a, b);
            const double delta = e.share - threshold;
            e.strength = std::abs(delta);
            if (std::abs(delta) <= tie)
                e.preference = Preference::Neutral;
            else
                e.preference = delta > 0 ? Preference::Positive : Preference::Negative;
        }
    }
    return out;
}

PreferenceReport classify(const PropensityMatrix& shares, std::size_t k_roles)
{
    if (k_roles == 0)
        throw Error(ErrorKind::InvalidInput, "number of roles must be positive");
    return classify_at(shares, 1.0 / static_cast<double>(k_roles));
}

PropensityMatrix average_years(std::span<const PropensityMatrix> fits)
{
    std::vector<std::string> all;
    bool directed = true;
    for (const auto& f : fits) {
        all.insert(all.end(), f.labels.begin(), f.labels.end());
        directed = f.directed;
    }
    const auto labels = union_labels(std::move(all));
    const std::size_t k = labels.size();

    PropensityMatrix out;
    out.labels = labels;
    out.directed = directed;
    out.omega.assign(k * k, 0.0);
    out.share.assign(k * k, 0.0);
    out.saturated.assign(k * k, 0);
    out.no_data.assign(k, 0);
    out.support.assign(k * k, 0);

    for (const auto& f : fits) {
        std::vector<std::size_t> map;
        for (const auto& l : f.labels)
            map.push_back(*find_label(labels, l));
        for (std::size_t a = 0; a < f.size(); ++a) {
            for (std::size_t b = 0; b < f.size(); ++b) {
                if (!f.has_share(a, b))
                    continue;
                const std::size_t s = map[a] * k + map[b];
                out.share[s] += f.share_at(a, b);
                out.omega[s] += f.omega_at(a, b);
                out.support[s] += 1;
                if (f.saturated[a * f.size() + b])
                    out.saturated[s] = 1;
            }
        }
    }
    for (std::size_t a = 0; a < k; ++a) {
        bool any = false;
        for (std::size_t b = 0; b < k; ++b) {
            const std::size_t s = a * k + b;
            if (out.support[s] == 0)
                continue;
            any = true;
            out.share[s] /= out.support[s];
            out.omega[s] /= out.support[s];
        }
        out.no_data[a] = any ? 0 : 1;
    }
    return out;
}

PreferenceReport combine_platforms(std::span<const PreferenceReport> reports)
{
    std::vector<std::string> all;
    for (const auto& r : reports)
        all.insert(all.end(), r.labels.begin(), r.labels.end());

    PreferenceReport out;
    out.scope = "combined";
    out.labels = union_labels(std::move(all));
    out.threshold = reports.empty() ? 0.0 : reports.front().threshold;
    const std::size_t k = out.labels.size();
    out.entries.assign(k * k, {});

    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            std::size_t n = 0;
            bool positive = false, negative = false, neutral = false;
            double strength = 0.0, share = 0.0;
            for (const auto& r : reports) {
                auto ia = r.index_of(out.labels[a]);
                auto ib = r.index_of(out.labels[b]);
                if (!ia || !ib)
                    continue;
                const auto& e = r.at(*ia, *ib);
                if (e.preference == Preference::NoData)
                    continue;
                ++n;
                strength += e.strength;
                share += e.share;
                positive = positive || e.preference == Preference::Positive;
                negative = negative || e.preference == Preference::Negative;
                neutral = neutral || e.preference == Preference::Neutral;
            }
            if (n == 0)
                continue;
            auto& e = out.entries[a * k + b];
            e.strength = strength / static_cast<double>(n);
            e.share = share / static_cast<double>(n);
            e.preference = positive   ? Preference::Positive
                           : negative ? Preference::Negative
                           : neutral  ? Preference::Neutral
                                      : Preference::NoData;
        }
    }
    return out;
}

SliceFit fit_slice(const InteractionNetwork& network, const BlockAssignment& blocks, Execution exec)
{
    auto counts = count_by_block(network, blocks);
    auto xi = compute_xi(network, blocks, exec);
    auto propensity = normalise_rows(fit_omega(counts, xi));
    return {std::move(counts), std::move(xi), std::move(propensity)};
}

} // namespace teamnet
