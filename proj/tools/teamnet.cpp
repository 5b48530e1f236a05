// teamnet: extract interaction networks from platform event logs, fit
// role-level interaction preferences and compare knowledge diffusion
// scenarios.

#include "teamnet/commands.hpp"
#include "teamnet/config.hpp"
#include "teamnet/error.hpp"
#include "teamnet/execution.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace {

struct Flags {
    std::string config;
    std::vector<std::pair<std::string, std::string>> settings;
};

// Registers the shared flags on a subcommand. Values are collected as
// (key, value) pairs and applied over the config file afterwards.
void add_common(CLI::App* cmd, Flags& flags)
{
    auto setting = [&flags, cmd](const std::string& name, const std::string& key,
                                 const std::string& help) {
        cmd->add_option_function<std::vector<std::string>>(
            name,
            [&flags, key](const std::vector<std::string>& values) {
                for (const auto& v : values)
                    flags.settings.emplace_back(key, v);
            },
            help);
    };
    cmd->add_option("--config", flags.config, "key = value configuration file");
    setting("--platform", "platform", "issue_tracker, code_review or version_control");
    setting("--years", "years", "analysis years, e.g. 2010..2018");
    setting("--threshold", "threshold", "global, per-slice or a value in (0,1)");
    setting("--samples", "samples", "ensemble size per sampled scenario");
    setting("--seed", "seed", "random seed");
    setting("--out", "out", "output directory");
    setting("--format", "format", "json, csv or dot (repeatable)");
    setting("--roles", "roles", "role assignment file (JSONL)");
    setting("--issues", "issues", "issue tracker events (JSONL)");
    setting("--reviews", "reviews", "code review events (JSONL)");
    setting("--edits", "edits", "line edit events (JSONL)");
    setting("--interactions", "interactions", "extracted interaction files (JSONL)");
    setting("--threads", "threads", "OpenMP threads (0 = runtime default)");
    cmd->add_flag_function(
        "--raw-samples",
        [&flags](std::int64_t) { flags.settings.emplace_back("raw_samples", "true"); },
        "also write every sampled potentiality value");
    cmd->add_flag_function(
        "--extension-roles",
        [&flags](std::int64_t) { flags.settings.emplace_back("extension_roles", "true"); },
        "accept role labels beyond the four canonical ones");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Team interaction networks, role preferences and knowledge diffusion"};
    app.require_subcommand(1);

    Flags flags;
    auto* extract = app.add_subcommand("extract", "extract interactions from event logs");
    auto* preferences = app.add_subcommand("preferences", "fit role-level interaction preferences");
    auto* potentiality = app.add_subcommand("potentiality", "compare knowledge diffusion scenarios");
    auto* synth = app.add_subcommand("synth", "generate a synthetic team");
    for (auto* cmd : {extract, preferences, potentiality, synth})
        add_common(cmd, flags);
    std::string spec_path;
    synth->add_option("spec", spec_path, "synthetic team specification (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : teamnet::exit_input;
    }

    teamnet::AnalysisConfig config;
    try {
        if (!flags.config.empty())
            config = teamnet::load_config(flags.config);
        for (const auto& [key, value] : flags.settings)
            teamnet::apply_setting(config, key, value);
        if (!spec_path.empty())
            config.synth_spec = spec_path;
        config.validate();
    } catch (const teamnet::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return teamnet::exit_input;
    }
    teamnet::set_max_threads(config.threads);

    if (extract->parsed())
        return teamnet::cmd_extract(config, std::cerr);
    if (preferences->parsed())
        return teamnet::cmd_preferences(config, std::cerr);
    if (potentiality->parsed())
        return teamnet::cmd_potentiality(config, std::cerr);
    return teamnet::cmd_synth(config, std::cerr);
}
