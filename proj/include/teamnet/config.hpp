#pragma once

#include "teamnet/events.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace teamnet {

enum class ThresholdMode { GlobalK, PerSliceK, Explicit };

struct Threshold {
    ThresholdMode mode = ThresholdMode::GlobalK;
    double value = 0.0;
};

// "global", "per-slice" or a number in (0, 1).
std::optional<Threshold> parse_threshold(std::string_view text);

struct AnalysisConfig {
    std::optional<std::filesystem::path> roles;
    std::map<Platform, std::filesystem::path> events;
    std::vector<std::filesystem::path> interactions;
    std::optional<std::filesystem::path> synth_spec;
    std::optional<YearRange> years;
    std::set<Platform> platforms; // empty: all
    Threshold threshold;
    std::size_t samples = 100;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir = ".";
    std::set<std::string> formats; // empty: command defaults
    bool allow_extension_roles = false;
    bool raw_samples = false;
    int threads = 0;

    bool wants(const std::string& format, bool by_default) const
    {
        return formats.empty() ? by_default : formats.count(format) > 0;
    }
    bool includes(Platform p) const { return platforms.empty() || platforms.count(p) > 0; }

    // Throws InvalidInput when an invariant does not hold.
    void validate() const;
};

// Applies one "key = value" setting; unknown keys and bad values throw
// InvalidInput.
void apply_setting(AnalysisConfig& config, const std::string& key, const std::string& value);

// Reads "key = value" lines; '#' starts a comment. Relative paths resolve
// against the config file's directory.
AnalysisConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
AnalysisConfig load_config(const std::filesystem::path& path);

} // namespace teamnet
