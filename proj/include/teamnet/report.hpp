#pragma once

// Record and report formats: JSONL interaction/edge records, CSV tables and
// DOT preference graphs.

#include "teamnet/bccm.hpp"
#include "teamnet/diffusion.hpp"
#include "teamnet/events.hpp"
#include "teamnet/extraction.hpp"
#include "teamnet/network.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace teamnet {

// {"source", "target", "directed", "platform", "timestamp", "rule"} per line.
void write_interactions(std::ostream& out, std::span<const Interaction> interactions);
std::vector<Interaction> parse_interactions(std::istream& in);
std::vector<Interaction> load_interactions(const std::filesystem::path& path);

// {"member_id", "year", "role"} per line.
void write_roles(std::ostream& out, std::span<const RoleAssignment> roles);

// {"source", "target", "count", "platform", "year", "directed"} per line.
void write_network_edges(std::ostream& out, const InteractionNetwork& network);

struct ScopedCounts {
    std::string scope;
    CountMatrix counts;
};

// scope,source,target,count; undirected matrices list each pair once.
void write_counts_csv(std::ostream& out, std::span<const ScopedCounts> tables);

struct SliceReport {
    Platform platform = Platform::IssueTracker;
    int year = 0;
    SliceFit fit;
};

// platform,year,source,target,count,xi,omega,share,saturated
void write_propensities_csv(std::ostream& out, std::span<const SliceReport> slices);

// source,target,platform,mean_share,classification,strength
void write_preferences_csv(std::ostream& out, std::span<const PreferenceReport> reports);

// Positive edges solid, negative dashed, neutral dotted; penwidth scales
// with strength. `positive_only` drops everything but positive edges.
void write_preferences_dot(std::ostream& out, const PreferenceReport& report, bool positive_only);

// platform,year,scenario,mean,p5,p95,n
void write_scenarios_csv(std::ostream& out, std::span<const ScenarioResult> results);
// platform,year,scenario,sample,potentiality
void write_samples_csv(std::ostream& out, std::span<const ScenarioResult> results);

std::string preferences_json(std::span<const SliceReport> slices,
                             std::span<const PreferenceReport> reports);
std::string scenarios_json(std::span<const ScenarioResult> results);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace teamnet
