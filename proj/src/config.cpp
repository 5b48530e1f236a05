#include "teamnet/config.hpp"

#include "teamnet/error.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace teamnet {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value)
{
    T v{};
    auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
        throw Error(ErrorKind::InvalidInput, "invalid number for '" + key + "': " + value);
    return v;
}

bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1" || value == "yes")
        return true;
    if (value == "false" || value == "0" || value == "no")
        return false;
    throw Error(ErrorKind::InvalidInput, "invalid boolean for '" + key + "': " + value);
}

} // namespace

std::optional<Threshold> parse_threshold(std::string_view text)
{
    if (text == "global" || text == "global_k")
        return Threshold{ThresholdMode::GlobalK, 0.0};
    if (text == "per-slice" || text == "per_slice" || text == "per_slice_k")
        return Threshold{ThresholdMode::PerSliceK, 0.0};
    double v = 0.0;
    try {
        std::size_t used = 0;
        v = std::stod(std::string(text), &used);
        if (used != text.size())
            return std::nullopt;
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (!(v > 0.0 && v < 1.0))
        return std::nullopt;
    return Threshold{ThresholdMode::Explicit, v};
}

void AnalysisConfig::validate() const
{
    if (years && years->first > years->last)
        throw Error(ErrorKind::InvalidInput, "empty year range");
    if (samples < 1)
        throw Error(ErrorKind::InvalidInput, "ensemble size must be at least 1");
    if (threshold.mode == ThresholdMode::Explicit
        && !(threshold.value > 0.0 && threshold.value < 1.0))
        throw Error(ErrorKind::InvalidInput, "explicit threshold must lie in (0, 1)");
    for (const auto& f : formats)
        if (f != "json" && f != "csv" && f != "dot")
            throw Error(ErrorKind::InvalidInput, "unknown output format '" + f + "'");
}

void apply_setting(AnalysisConfig& c, const std::string& key, const std::string& value)
{
    if (key == "roles") {
        c.roles = value;
    } else if (key == "issues") {
        c.events[Platform::IssueTracker] = value;
    } else if (key == "reviews") {
        c.events[Platform::CodeReview] = value;
    } else if (key == "edits") {
        c.events[Platform::VersionControl] = value;
    } else if (key == "interactions") {
        for (const auto& item : split_list(value))
            c.interactions.emplace_back(item);
    } else if (key == "synth_spec") {
        c.synth_spec = value;
    } else if (key == "years") {
        auto range = parse_year_range(value);
        if (!range)
            throw Error(ErrorKind::InvalidInput, "invalid year range '" + value + "'");
        c.years = range;
    } else if (key == "platform") {
        for (const auto& item : split_list(value)) {
            auto p = parse_platform(item);
            if (!p)
                throw Error(ErrorKind::InvalidInput, "unknown platform '" + item + "'");
            c.platforms.insert(*p);
        }
    } else if (key == "threshold") {
        auto t = parse_threshold(value);
        if (!t)
            throw Error(ErrorKind::InvalidInput, "invalid threshold '" + value + "'");
        c.threshold = *t;
    } else if (key == "samples") {
        c.samples = parse_number<std::size_t>(key, value);
    } else if (key == "seed") {
        c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "out") {
        c.out_dir = value;
    } else if (key == "format") {
        for (const auto& item : split_list(value))
            c.formats.insert(item);
    } else if (key == "extension_roles") {
        c.allow_extension_roles = parse_bool(key, value);
    } else if (key == "raw_samples") {
        c.raw_samples = parse_bool(key, value);
    } else if (key == "threads") {
        c.threads = parse_number<int>(key, value);
    } else {
        throw Error(ErrorKind::InvalidInput, "unknown configuration key '" + key + "'");
    }
}

AnalysisConfig parse_config(std::istream& in, const std::filesystem::path& base_dir)
{
    static const std::set<std::string> path_keys{"roles", "issues", "reviews",
                                                 "edits", "synth_spec", "out"};
    AnalysisConfig c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::MalformedRecord, "expected 'key = value'", lineno);
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (!base_dir.empty() && path_keys.count(key) && std::filesystem::path(value).is_relative())
            value = (base_dir / value).lexically_normal().string();
        if (!base_dir.empty() && key == "interactions") {
            std::string joined;
            for (const auto& item : split_list(value)) {
                auto p = std::filesystem::path(item);
                if (p.is_relative())
                    p = (base_dir / p).lexically_normal();
                joined += (joined.empty() ? "" : ",") + p.string();
            }
            value = joined;
        }
        try {
            apply_setting(c, key, value);
        } catch (const Error& e) {
            throw Error(e.kind(), e.message(), lineno);
        }
    }
    return c;
}

AnalysisConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open config " + path.string());
    return parse_config(in, path.parent_path());
}

} // namespace teamnet
