#include "teamnet/report.hpp"

#include "teamnet/error.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace teamnet {

namespace {

using nlohmann::json;

std::string num(double v)
{
    return fmt::format("{:.12g}", v);
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string dot_id(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + "\"";
}

} // namespace

void write_interactions(std::ostream& out, std::span<const Interaction> interactions)
{
    for (const auto& x : interactions) {
        json record = {{"source", x.source.str()},
                       {"target", x.target.str()},
                       {"directed", x.directed},
                       {"platform", to_string(x.platform)},
                       {"timestamp", format_timestamp(x.timestamp)},
                       {"rule", to_string(x.rule)}};
        out << record.dump() << '\n';
    }
}

std::vector<Interaction> parse_interactions(std::istream& in)
{
    std::vector<Interaction> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try {
            auto record = json::parse(line);
            Interaction x;
            x.source = MemberId(record.at("source").get<std::string>());
            x.target = MemberId(record.at("target").get<std::string>());
            x.directed = record.at("directed").get<bool>();
            auto platform = parse_platform(record.at("platform").get<std::string>());
            auto rule = parse_rule(record.at("rule").get<std::string>());
            auto stamp = parse_timestamp(record.at("timestamp").get<std::string>());
            if (!platform || !rule)
                throw Error(ErrorKind::MalformedRecord, "unknown platform or rule", lineno);
            if (!stamp)
                throw Error(ErrorKind::UnparseableTimestamp, "cannot parse timestamp", lineno);
            x.platform = *platform;
            x.rule = *rule;
            x.timestamp = *stamp;
            if (platform_of(x.rule) != x.platform || x.directed != is_directed(x.platform))
                throw Error(ErrorKind::MalformedRecord,
                            "rule, platform and directedness are inconsistent", lineno);
            if (x.source == x.target)
                throw Error(ErrorKind::MalformedRecord, "self-interaction", lineno);
            out.push_back(std::move(x));
        } catch (const json::exception& e) {
            throw Error(ErrorKind::MalformedRecord, e.what(), lineno);
        } catch (const Error& e) {
            if (e.line() != 0)
                throw;
            throw Error(e.kind(), e.message(), lineno);
        }
    }
    return out;
}

std::vector<Interaction> load_interactions(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    return parse_interactions(in);
}

void write_roles(std::ostream& out, std::span<const RoleAssignment> roles)
{
    for (const auto& r : roles) {
        json record = {{"member_id", r.member.str()}, {"year", r.year}, {"role", r.role.name()}};
        out << record.dump() << '\n';
    }
}

void write_network_edges(std::ostream& out, const InteractionNetwork& network)
{
    for (const auto& e : network.edges()) {
        json record = {{"source", network.node(e.source).member.str()},
                       {"target", network.node(e.target).member.str()},
                       {"count", e.count},
                       {"platform", to_string(network.platform())},
                       {"year", network.year()},
                       {"directed", network.directed()}};
        out << record.dump() << '\n';
    }
}

void write_counts_csv(std::ostream& out, std::span<const ScopedCounts> tables)
{
    out << "scope,source,target,count\n";
    for (const auto& t : tables) {
        const auto& c = t.counts;
        for (std::size_t a = 0; a < c.size(); ++a)
            for (std::size_t b = c.directed() ? 0 : a; b < c.size(); ++b)
                out << csv_field(t.scope) << ',' << csv_field(c.labels()[a]) << ','
                    << csv_field(c.labels()[b]) << ',' << c.at(a, b) << '\n';
    }
}

void write_propensities_csv(std::ostream& out, std::span<const SliceReport> slices)
{
    out << "platform,year,source,target,count,xi,omega,share,saturated\n";
    for (const auto& s : slices) {
        const auto& p = s.fit.propensity;
        for (std::size_t a = 0; a < p.size(); ++a) {
            for (std::size_t b = 0; b < p.size(); ++b) {
                out << to_string(s.platform) << ',' << s.year << ',' << csv_field(p.labels[a]) << ','
                    << csv_field(p.labels[b]) << ',' << s.fit.counts.at(a, b) << ','
                    << num(s.fit.xi.at(a, b)) << ',' << num(p.omega_at(a, b)) << ','
                    << (p.no_data[a] ? std::string() : num(p.share_at(a, b))) << ','
                    << (p.saturated[a * p.size() + b] ? 1 : 0) << '\n';
            }
        }
    }
}

void write_preferences_csv(std::ostream& out, std::span<const PreferenceReport> reports)
{
    out << "source,target,platform,mean_share,classification,strength\n";
    for (const auto& r : reports) {
        for (std::size_t a = 0; a < r.size(); ++a) {
            for (std::size_t b = 0; b < r.size(); ++b) {
                const auto& e = r.at(a, b);
                const bool data = e.preference != Preference::NoData;
                out << csv_field(r.labels[a]) << ',' << csv_field(r.labels[b]) << ','
                    << csv_field(r.scope) << ',' << (data ? num(e.share) : std::string()) << ','
                    << to_string(e.preference) << ',' << (data ? num(e.strength) : std::string())
                    << '\n';
            }
        }
    }
}

void write_preferences_dot(std::ostream& out, const PreferenceReport& report, bool positive_only)
{
    // Widths are relative to the strongest shown edge.
    double strongest = 0.0;
    for (const auto& e : report.entries)
        if (e.preference != Preference::NoData
            && (!positive_only || e.preference == Preference::Positive))
            strongest = std::max(strongest, e.strength);

    out << "digraph " << dot_id(report.scope.empty() ? "preferences" : report.scope) << " {\n";
    out << "  graph [label=" << dot_id("threshold " + num(report.threshold)) << "];\n";
    out << "  node [shape=ellipse];\n";
    for (const auto& l : report.labels)
        out << "  " << dot_id(l) << ";\n";
    for (std::size_t a = 0; a < report.size(); ++a) {
        for (std::size_t b = 0; b < report.size(); ++b) {
            const auto& e = report.at(a, b);
            if (e.preference == Preference::NoData)
                continue;
            if (positive_only && e.preference != Preference::Positive)
                continue;
            const char* style = e.preference == Preference::Positive   ? "solid"
                                : e.preference == Preference::Negative ? "dashed"
                                                                       : "dotted";
            const double width = strongest > 0.0 ? 1.0 + 4.0 * e.strength / strongest : 1.0;
            out << "  " << dot_id(report.labels[a]) << " -> " << dot_id(report.labels[b])
                << " [style=" << style << ", penwidth=" << fmt::format("{:.3f}", width)
                << ", strength=" << num(e.strength) << ", share=" << num(e.share)
                << ", class=" << to_string(e.preference) << "];\n";
        }
    }
    out << "}\n";
}

void write_scenarios_csv(std::ostream& out, std::span<const ScenarioResult> results)
{
    out << "platform,year,scenario,mean,p5,p95,n\n";
    for (const auto& r : results)
        out << to_string(r.platform) << ',' << r.year << ',' << csv_field(r.scenario) << ','
            << num(r.summary.mean) << ',' << num(r.summary.p5) << ',' << num(r.summary.p95) << ','
            << r.summary.n << '\n';
}

void write_samples_csv(std::ostream& out, std::span<const ScenarioResult> results)
{
    out << "platform,year,scenario,sample,potentiality\n";
    for (const auto& r : results)
        for (std::size_t s = 0; s < r.values.size(); ++s)
            out << to_string(r.platform) << ',' << r.year << ',' << csv_field(r.scenario) << ','
                << s << ',' << num(r.values[s]) << '\n';
}

std::string preferences_json(std::span<const SliceReport> slices,
                             std::span<const PreferenceReport> reports)
{
    json doc;
    doc["slices"] = json::array();
    for (const auto& s : slices) {
        const auto& p = s.fit.propensity;
        json pairs = json::array();
        for (std::size_t a = 0; a < p.size(); ++a)
            for (std::size_t b = 0; b < p.size(); ++b) {
                json entry = {{"source", p.labels[a]},
                              {"target", p.labels[b]},
                              {"count", s.fit.counts.at(a, b)},
                              {"xi", s.fit.xi.at(a, b)},
                              {"omega", p.omega_at(a, b)},
                              {"saturated", p.saturated[a * p.size() + b] != 0}};
                entry["share"] = p.no_data[a] ? json(nullptr) : json(p.share_at(a, b));
                pairs.push_back(entry);
            }
        doc["slices"].push_back(
            {{"platform", to_string(s.platform)}, {"year", s.year}, {"pairs", pairs}});
    }
    doc["reports"] = json::array();
    for (const auto& r : reports) {
        json pairs = json::array();
        for (std::size_t a = 0; a < r.size(); ++a)
            for (std::size_t b = 0; b < r.size(); ++b) {
                const auto& e = r.at(a, b);
                pairs.push_back({{"source", r.labels[a]},
                                 {"target", r.labels[b]},
                                 {"share", e.share},
                                 {"classification", to_string(e.preference)},
                                 {"strength", e.strength}});
            }
        doc["reports"].push_back({{"scope", r.scope}, {"threshold", r.threshold}, {"pairs", pairs}});
    }
    return doc.dump(2) + "\n";
}

std::string scenarios_json(std::span<const ScenarioResult> results)
{
    json doc = json::array();
    for (const auto& r : results)
        doc.push_back({{"platform", to_string(r.platform)},
                       {"year", r.year},
                       {"scenario", r.scenario},
                       {"mean", r.summary.mean},
                       {"p5", r.summary.p5},
                       {"p95", r.summary.p95},
                       {"n", r.summary.n},
                       {"values", r.values}});
    return doc.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorKind::Io, "cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw Error(ErrorKind::Io, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw Error(ErrorKind::Io, "cannot move " + tmp.string() + " into place: " + ec.message());
}

} // namespace teamnet
