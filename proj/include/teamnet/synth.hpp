#pragma once

#include "teamnet/events.hpp"
#include "teamnet/extraction.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

namespace teamnet {

struct RolePairCount {
    Role source;
    Role target;
    std::uint64_t count = 0;
};

// A synthetic team: members per role, interaction counts per role pair and
// an optional split of a role into cliques that only interact internally.
struct SyntheticTeamSpec {
    Platform platform = Platform::CodeReview;
    int year = 2010;
    std::map<Role, std::size_t> populations;
    std::vector<RolePairCount> counts;
    std::map<Role, std::size_t> cliques;
    std::uint64_t seed = 1;
};

struct SyntheticTeam {
    std::vector<RoleAssignment> roles;
    std::vector<Interaction> interactions;
};

// Realises every role-pair count exactly, spread as evenly as possible over
// the eligible member pairs. Throws InfeasibleSpec when a positive count has
// no eligible pair (e.g. within-role interactions of a single member).
SyntheticTeam synthesize(const SyntheticTeamSpec& spec);

// {"platform": "code_review", "year": 2010, "seed": 1,
//  "populations": {"Developer": 3, ...},
//  "counts": [{"source": "ProductOwner", "target": "Developer", "count": 50}, ...],
//  "cliques": {"Developer": 2}}
SyntheticTeamSpec parse_synth_spec(const nlohmann::json& doc, bool allow_extension_roles = true);

// Member ids are "<Role>-<n>", n starting at 1.
MemberId synthetic_member(const Role& role, std::size_t index);

} // namespace teamnet
