#include "teamnet/synth.hpp"

#include "teamnet/error.hpp"
#include "teamnet/rng.hpp"

#include <algorithm>
#include <chrono>
#include <random>

namespace teamnet {

MemberId synthetic_member(const Role& role, std::size_t index)
{
    return MemberId(role.name() + "-" + std::to_string(index + 1));
}

namespace {

std::size_t clique_of(const SyntheticTeamSpec& spec, const Role& role, std::size_t index)
{
    auto it = spec.cliques.find(role);
    if (it == spec.cliques.end() || it->second <= 1)
        return 0;
    return index % it->second;
}

std::size_t population(const SyntheticTeamSpec& spec, const Role& role)
{
    auto it = spec.populations.find(role);
    if (it == spec.populations.end() || it->second == 0)
        throw Error(ErrorKind::InfeasibleSpec, "role " + role.name() + " has no members");
    return it->second;
}

} // namespace

SyntheticTeam synthesize(const SyntheticTeamSpec& spec)
{
    using namespace std::chrono;
    const bool directed = is_directed(spec.platform);
    const Timestamp year_start = sys_days{year{spec.year} / January / 1};
    const auto year_seconds =
        static_cast<std::uint64_t>((sys_days{year{spec.year + 1} / January / 1} - year_start).count()
                                   * 86400);

    SyntheticTeam team;
    for (const auto& [role, size] : spec.populations)
        for (std::size_t i = 0; i < size; ++i)
            team.roles.push_back({synthetic_member(role, i), spec.year, role});

    std::mt19937_64 rng(derive_seed({spec.seed}));
    std::uint64_t clock = 0;

    for (const auto& pair : spec.counts) {
        if (pair.count == 0)
            continue;
        const auto ns = population(spec, pair.source);
        const auto nt = population(spec, pair.target);
        const bool same = pair.source == pair.target;

        std::vector<std::pair<std::size_t, std::size_t>> eligible;
        for (std::size_t i = 0; i < ns; ++i) {
            for (std::size_t j = 0; j < nt; ++j) {
                if (same && (i == j || (!directed && j < i)))
                    continue;
                if (same && clique_of(spec, pair.source, i) != clique_of(spec, pair.target, j))
                    continue;
                eligible.emplace_back(i, j);
            }
        }
        if (eligible.empty())
            throw Error(ErrorKind::InfeasibleSpec,
                        "no member pair can carry " + pair.source.name() + " -> "
                            + pair.target.name() + " interactions");

        std::shuffle(eligible.begin(), eligible.end(), rng);
        const std::uint64_t base = pair.count / eligible.size();
        const std::uint64_t extra = pair.count % eligible.size();
        for (std::size_t p = 0; p < eligible.size(); ++p) {
            const auto times = base + (p < extra ? 1 : 0);
            const auto source = synthetic_member(pair.source, eligible[p].first);
            const auto target = synthetic_member(pair.target, eligible[p].second);
            for (std::uint64_t t = 0; t < times; ++t) {
                if (clock >= year_seconds)
                    throw Error(ErrorKind::InfeasibleSpec, "more interactions than seconds in a year");
                team.interactions.push_back({source, target, directed, spec.platform,
                                             year_start + seconds{clock++},
                                             spec.platform == Platform::IssueTracker ? Rule::R1
                                             : spec.platform == Platform::CodeReview ? Rule::R3
                                                                                     : Rule::Coedit});
            }
        }
    }
    return team;
}

SyntheticTeamSpec parse_synth_spec(const nlohmann::json& doc, bool allow_extension_roles)
{
    auto role_of = [&](const std::string& label) {
        auto role = Role::parse(label, allow_extension_roles);
        if (!role)
            throw Error(ErrorKind::UnknownRole, "unknown role '" + label + "'");
        return *role;
    };

    SyntheticTeamSpec spec;
    try {
        if (doc.contains("platform")) {
            auto p = parse_platform(doc.at("platform").get<std::string>());
            if (!p)
                throw Error(ErrorKind::InvalidInput, "unknown platform in synthetic spec");
            spec.platform = *p;
        }
        spec.year = doc.value("year", spec.year);
        spec.seed = doc.value("seed", spec.seed);
        for (const auto& [label, size] : doc.at("populations").items())
            spec.populations[role_of(label)] = size.get<std::size_t>();
        if (doc.contains("counts")) {
            for (const auto& c : doc.at("counts")) {
                auto count = c.at("count").get<std::int64_t>();
                if (count < 0)
                    throw Error(ErrorKind::InfeasibleSpec, "negative interaction count");
                spec.counts.push_back({role_of(c.at("source").get<std::string>()),
                                       role_of(c.at("target").get<std::string>()),
                                       static_cast<std::uint64_t>(count)});
            }
        }
        if (doc.contains("cliques"))
            for (const auto& [label, size] : doc.at("cliques").items())
                spec.cliques[role_of(label)] = size.get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::MalformedRecord, std::string("synthetic spec: ") + e.what());
    }
    return spec;
}

} // namespace teamnet
