#include "teamnet/commands.hpp"

#include "teamnet/bccm.hpp"
#include "teamnet/diffusion.hpp"
#include "teamnet/error.hpp"
#include "teamnet/extraction.hpp"
#include "teamnet/network.hpp"
#include "teamnet/report.hpp"
#include "teamnet/synth.hpp"

#include <json.hpp>

#include <exception>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace teamnet {

namespace {

using nlohmann::json;

// Reports the failure and maps it to an exit code.
template <typename Body>
int guarded(std::ostream& log, Body&& body)
{
    try {
        return body();
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::CapacityViolation ? exit_internal : exit_input;
    } catch (const std::exception& e) {
        log << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
}

// Rethrows with the file name in front of the line number.
[[noreturn]] void rethrow_in(const std::filesystem::path& path, const Error& e)
{
    std::string where = path.string();
    if (e.line() != 0)
        where += ":" + std::to_string(e.line());
    throw Error(e.kind(), where + ": " + e.message(), 0);
}

void prepare_out_dir(const AnalysisConfig& config)
{
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec)
        throw Error(ErrorKind::Io, "cannot create " + config.out_dir.string() + ": " + ec.message());
}

RoleBook load_role_book(const AnalysisConfig& config, std::vector<RoleAssignment>* all = nullptr)
{
    if (!config.roles)
        return {};
    try {
        LoadOptions options;
        options.allow_extension_roles = config.allow_extension_roles;
        options.years = config.years;
        auto assignments = load_roles(*config.roles, options);
        if (all)
            *all = assignments;
        return RoleBook(assignments);
    } catch (const Error& e) {
        rethrow_in(*config.roles, e);
    }
}

struct PlatformExtraction {
    Platform platform;
    std::size_t events = 0;
    ExtractionResult result;
};

std::vector<PlatformExtraction> extract_configured(const AnalysisConfig& config)
{
    std::vector<PlatformExtraction> out;
    for (const auto& [platform, path] : config.events) {
        if (!config.includes(platform))
            continue;
        try {
            auto log = load_events(path, platform);
            PlatformExtraction x{platform, 0, {}};
            x.events = std::visit([](const auto& v) { return v.size(); }, log);
            x.result = extract_log(log);
            out.push_back(std::move(x));
        } catch (const Error& e) {
            rethrow_in(path, e);
        }
    }
    return out;
}

// Interactions from extracted files plus anything extracted from raw events.
std::vector<Interaction> gather_interactions(const AnalysisConfig& config)
{
    if (config.interactions.empty() && config.events.empty())
        throw Error(ErrorKind::InvalidInput, "no interaction or event inputs configured");
    std::vector<Interaction> all;
    for (const auto& path : config.interactions) {
        try {
            for (auto& x : load_interactions(path))
                if (config.includes(x.platform))
                    all.push_back(std::move(x));
        } catch (const Error& e) {
            rethrow_in(path, e);
        }
    }
    for (auto& x : extract_configured(config))
        all.insert(all.end(), std::make_move_iterator(x.result.interactions.begin()),
                   std::make_move_iterator(x.result.interactions.end()));
    return all;
}

void report_unassigned(const NetworkSet& set, std::ostream& log)
{
    if (set.unassigned.empty())
        return;
    log << "warning: " << set.unassigned.size()
        << " member-years have no role and were placed in Unassigned\n";
}

template <typename Fn>
std::string render(Fn&& fn)
{
    std::ostringstream out;
    fn(out);
    return out.str();
}

} // namespace

int cmd_extract(const AnalysisConfig& config, std::ostream& log)
{
    return guarded(log, [&] {
        config.validate();
        if (config.events.empty())
            throw Error(ErrorKind::InvalidInput, "extract needs at least one event file");
        const auto roles = load_role_book(config);
        auto extractions = extract_configured(config);
        prepare_out_dir(config);

        json summary = json::object();
        for (const auto& x : extractions) {
            const auto& r = x.result;
            write_file_atomic(config.out_dir / (std::string("interactions_") + to_string(x.platform) + ".jsonl"),
                              render([&](std::ostream& out) { write_interactions(out, r.interactions); }));

            std::map<std::string, std::size_t> by_rule, self_by_rule;
            for (const auto& i : r.interactions)
                ++by_rule[to_string(i.rule)];
            for (const auto& s : r.self_links)
                ++self_by_rule[to_string(s.rule)];

            std::set<std::pair<std::string, int>> unknown;
            if (config.roles) {
                for (const auto& i : r.interactions) {
                    const int year = utc_year(i.timestamp);
                    for (const auto* m : {&i.source, &i.target})
                        if (!roles.find(*m, year))
                            unknown.emplace(m->str(), year);
                }
            }
            json unknown_list = json::array();
            for (const auto& [member, year] : unknown)
                unknown_list.push_back({{"member_id", member}, {"year", year}});

            summary[to_string(x.platform)] = {{"events", x.events},
                                              {"interactions", r.interactions.size()},
                                              {"by_rule", by_rule},
                                              {"skipped_self_links", r.self_links.size()},
                                              {"skipped_self_links_by_rule", self_by_rule},
                                              {"inferred_outcomes", r.inferred_outcomes},
                                              {"warnings", r.warnings},
                                              {"unknown_members", unknown_list}};
            log << to_string(x.platform) << ": " << x.events << " events -> "
                << r.interactions.size() << " interactions (" << r.self_links.size()
                << " self-links skipped, " << r.inferred_outcomes << " outcomes inferred, "
                << unknown.size() << " unknown member-years, " << r.warnings.size()
                << " warnings)\n";
        }
        write_file_atomic(config.out_dir / "extract_summary.json", summary.dump(2) + "\n");
        return static_cast<int>(exit_ok);
    });
}

int cmd_preferences(const AnalysisConfig& config, std::ostream& log)
{
    return guarded(log, [&] {
        config.validate();
        std::vector<RoleAssignment> assignments;
        const auto roles = load_role_book(config, &assignments);
        const auto interactions = gather_interactions(config);
        const auto set = build_networks(interactions, roles, config.years);
        report_unassigned(set, log);
        prepare_out_dir(config);

        // Slices are independent; each fit runs the serial kernels so the
        // parallel loop is the only OpenMP level.
        const auto& networks = set.networks;
        std::vector<SliceReport> slices(networks.size());
        std::vector<std::exception_ptr> errors(networks.size());
        const long n = static_cast<long>(networks.size());
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < n; ++i) {
            try {
                slices[i] = {networks[i].platform(), networks[i].year(),
                             fit_slice(networks[i], role_blocks(networks[i]), Execution::Serial)};
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
        for (auto& e : errors)
            if (e)
                std::rethrow_exception(e);

        std::set<std::string> universe;
        for (const auto& a : assignments)
            universe.insert(a.role.name());
        for (const auto& s : slices)
            universe.insert(s.fit.propensity.labels.begin(), s.fit.propensity.labels.end());

        std::vector<PreferenceReport> reports;
        std::vector<ScopedCounts> counts;
        std::vector<CountMatrix> all_counts;
        for (Platform p : all_platforms) {
            std::vector<PropensityMatrix> fits;
            std::vector<CountMatrix> platform_counts;
            for (const auto& s : slices) {
                if (s.platform != p)
                    continue;
                fits.push_back(s.fit.propensity);
                platform_counts.push_back(s.fit.counts);
            }
            if (fits.empty())
                continue;
            const auto averaged = average_years(fits);
            PreferenceReport report;
            switch (config.threshold.mode) {
            case ThresholdMode::GlobalK: report = classify(averaged, universe.size()); break;
            case ThresholdMode::PerSliceK: report = classify(averaged, averaged.size()); break;
            case ThresholdMode::Explicit: report = classify_at(averaged, config.threshold.value); break;
            }
            report.scope = to_string(p);
            reports.push_back(std::move(report));
            counts.push_back({to_string(p), merge_counts(platform_counts)});
            all_counts.insert(all_counts.end(), platform_counts.begin(), platform_counts.end());
        }
        const auto combined = combine_platforms(reports);
        if (!all_counts.empty())
            counts.push_back({"combined", merge_counts(all_counts)});

        auto with_combined = reports;
        with_combined.push_back(combined);

        if (config.wants("csv", true)) {
            write_file_atomic(config.out_dir / "propensities.csv",
                              render([&](std::ostream& o) { write_propensities_csv(o, slices); }));
            write_file_atomic(config.out_dir / "preferences.csv",
                              render([&](std::ostream& o) { write_preferences_csv(o, with_combined); }));
            write_file_atomic(config.out_dir / "counts.csv",
                              render([&](std::ostream& o) { write_counts_csv(o, counts); }));
        }
        if (config.wants("dot", true)) {
            for (const auto& r : reports)
                write_file_atomic(config.out_dir / ("preferences_" + r.scope + ".dot"),
                                  render([&](std::ostream& o) { write_preferences_dot(o, r, false); }));
            write_file_atomic(config.out_dir / "organigraph.dot",
                              render([&](std::ostream& o) { write_preferences_dot(o, combined, true); }));
        }
        if (config.wants("json", false))
            write_file_atomic(config.out_dir / "preferences.json", preferences_json(slices, with_combined));

        log << slices.size() << " slices fitted over " << reports.size() << " platforms\n";
        return static_cast<int>(exit_ok);
    });
}

int cmd_potentiality(const AnalysisConfig& config, std::ostream& log)
{
    return guarded(log, [&] {
        config.validate();
        const auto roles = load_role_book(config);
        const auto interactions = gather_interactions(config);
        const auto set = build_networks(interactions, roles, config.years);
        report_unassigned(set, log);
        prepare_out_dir(config);

        std::vector<ScenarioSpec> specs;
        for (auto kind : {ScenarioKind::ObsInt, ScenarioKind::EcdeDevs, ScenarioKind::EcdeAll}) {
            ScenarioSpec spec;
            spec.kind = kind;
            spec.ensemble_size = config.samples;
            spec.seed = config.seed;
            specs.push_back(std::move(spec));
        }

        std::vector<ScenarioResult> results;
        bool degenerate = false;
        for (const auto& net : set.networks) {
            try {
                auto slice = run_scenarios(std::span(&net, 1), specs);
                results.insert(results.end(), slice.begin(), slice.end());
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::DegenerateNetwork && e.kind() != ErrorKind::AllZeroWeights)
                    throw;
                degenerate = true;
                log << "error: " << to_string(net.platform()) << " " << net.year() << ": "
                    << e.what() << '\n';
            }
        }

        if (config.wants("csv", true)) {
            write_file_atomic(config.out_dir / "scenarios.csv",
                              render([&](std::ostream& o) { write_scenarios_csv(o, results); }));
            if (config.raw_samples)
                write_file_atomic(config.out_dir / "scenario_samples.csv",
                                  render([&](std::ostream& o) { write_samples_csv(o, results); }));
        }
        if (config.wants("json", false))
            write_file_atomic(config.out_dir / "scenarios.json", scenarios_json(results));

        log << results.size() << " scenario results over " << set.networks.size() << " slices\n";
        return static_cast<int>(degenerate ? exit_input : exit_ok);
    });
}

int cmd_synth(const AnalysisConfig& config, std::ostream& log)
{
    return guarded(log, [&] {
        if (!config.synth_spec)
            throw Error(ErrorKind::InvalidInput, "synth needs a team specification file");
        std::ifstream in(*config.synth_spec);
        if (!in)
            throw Error(ErrorKind::Io, "cannot open " + config.synth_spec->string());
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::MalformedRecord, config.synth_spec->string() + ": " + e.what());
        }
        auto spec = parse_synth_spec(doc, true);
        if (doc.find("seed") == doc.end())
            spec.seed = config.seed;
        const auto team = synthesize(spec);
        prepare_out_dir(config);
        write_file_atomic(config.out_dir / "roles.jsonl",
                          render([&](std::ostream& o) { write_roles(o, team.roles); }));
        write_file_atomic(config.out_dir / "interactions.jsonl",
                          render([&](std::ostream& o) { write_interactions(o, team.interactions); }));
        log << team.roles.size() << " members, " << team.interactions.size() << " interactions\n";
        return static_cast<int>(exit_ok);
    });
}

} // namespace teamnet
