// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include "oracles.hpp"

#include "teamnet/bccm.hpp"
#include "teamnet/commands.hpp"
#include "teamnet/diffusion.hpp"
#include "teamnet/execution.hpp"
#include "teamnet/extraction.hpp"
#include "teamnet/network.hpp"
#include "teamnet/synth.hpp"

#include <fmt/core.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace teamnet;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr double omega_tolerance = 1e-12;
constexpr double omega_budget_s = 10.0;
constexpr double confound_min_ratio = 5.0;
constexpr double confound_budget_s = 1.0;
constexpr double uniform_tolerance = 1e-9;
constexpr double skew_expected = 0.94639;
constexpr double skew_tolerance = 1e-4;
constexpr double ordering_min_rate = 0.95;
constexpr double ordering_budget_s = 60.0;
constexpr double threshold_offset = 1e-6;

const fs::path data_dir = TEAMNET_TEST_DATA;

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Verdict omega_oracle()
{
    Verdict out;
    std::mt19937_64 rng(20240601);
    double worst = 0.0;
    const auto start = Clock::now();
    for (int trial = 0; trial < 200; ++trial) {
        auto g = oracle::random_graph(rng, 6, 50, trial % 2 == 0);
        auto net = oracle::to_network(g);
        auto blocks = oracle::to_blocks(g);
        auto omega = fit_omega(count_by_block(net, blocks), compute_xi(net, blocks));
        const auto a = oracle::count_pairs(g);
        const auto xi = oracle::enumerate_xi(g);
        for (std::size_t r = 0; r < g.blocks; ++r) {
            for (std::size_t s = 0; s < g.blocks; ++s) {
                double expect = 0.0;
                if (a[r][s] > 0.0) {
                    const double ratio = std::min(a[r][s] / xi[r][s], max_capacity_ratio);
                    expect = -std::log(1.0 - ratio);
                }
                worst = std::max(worst, std::abs(omega.omega_at(r, s) - expect));
            }
        }
    }
    const double elapsed = seconds_since(start);
    out.require(worst <= omega_tolerance, fmt::format("max error {:.3g}", worst));
    out.require(elapsed < omega_budget_s, fmt::format("took {:.2f}s", elapsed));
    out.detail = out.pass ? fmt::format("max abs error {:.3g} <= {:g}, {:.2f}s", worst, omega_tolerance, elapsed)
                          : out.detail;
    return out;
}

Verdict rule_fixtures()
{
    Verdict out;

    auto issues = std::get<std::vector<IssueEntryEvent>>(
        load_events(data_dir / "thread_issues.jsonl", Platform::IssueTracker));
    auto thread = extract_issue_interactions(issues);
    std::map<std::string, int> derived;
    int emitted = 0;
    for (const auto& i : thread.interactions) {
        if (i.target.str() == "dev-d") {
            ++derived[to_string(i.rule)];
            ++emitted;
        }
    }
    for (const auto& s : thread.self_links)
        if (s.member.str() == "dev-d")
            ++derived[to_string(s.rule)];
    const bool a_ok = derived == std::map<std::string, int>{{"r1", 3}, {"r2", 5}} && emitted == 7;
    out.require(a_ok, fmt::format("issue thread: {} r1 + {} r2 links, {} emitted", derived["r1"], derived["r2"],
                                  emitted));

    auto actions = std::get<std::vector<ReviewActionEvent>>(
        load_events(data_dir / "change_reviews.jsonl", Platform::CodeReview));
    auto change = extract_review_interactions(infer_outcomes(actions));
    using Link = std::tuple<std::string, std::string, std::string>;
    auto key = [](std::string a, std::string b, std::string rule) {
        if (b < a)
            std::swap(a, b);
        return Link{a, b, rule};
    };
    std::multiset<Link> expected{key("dev-d", "rev-1", "r3"), key("rev-1", "int-i", "r5"),
                                 key("int-i", "dev-d", "r6"), key("dev-d", "rev-1", "r3"),
                                 key("rev-1", "rev-2", "r7"), key("dev-d", "int-i", "r4"),
                                 key("dev-d", "int-i", "r4"), key("dev-d", "rev-2", "r4")};
    std::multiset<Link> got;
    for (const auto& i : change.interactions) {
        out.require(!i.directed, "review interaction marked directed");
        got.insert(key(i.source.str(), i.target.str(), to_string(i.rule)));
    }
    if (got != expected) {
        std::vector<Link> missing, extra;
        std::set_difference(expected.begin(), expected.end(), got.begin(), got.end(), std::back_inserter(missing));
        std::set_difference(got.begin(), got.end(), expected.begin(), expected.end(), std::back_inserter(extra));
        std::string diff;
        for (const auto& [a, b, r] : missing)
            diff += fmt::format(" missing ({},{}) {}", a, b, r);
        for (const auto& [a, b, r] : extra)
            diff += fmt::format(" extracted ({},{}) {}", a, b, r);
        out.require(false, fmt::format("review change: {} interactions,{}", got.size(), diff));
    }
    if (out.pass)
        out.detail = "issue thread 3 r1 + 5 r2 (7 emitted, 1 self-read); review change 8 links match";
    return out;
}

Verdict activity_confound()
{
    Verdict out;
    const auto start = Clock::now();
    std::ifstream in(data_dir / "six_member_spec.json");
    auto team = synthesize(parse_synth_spec(nlohmann::json::parse(in)));
    auto set = build_networks(team.interactions, RoleBook(team.roles));
    const auto& net = set.networks.at(0);
    auto fit = fit_slice(net, role_blocks(net));
    const auto po = *fit.counts.index_of("ProductOwner");
    const auto s = *fit.counts.index_of("Stakeholder");
    const auto d = *fit.counts.index_of("Developer");
    const auto a_s = fit.counts.at(po, s);
    const auto a_d = fit.counts.at(po, d);
    const double ratio = fit.propensity.share_at(po, s) / fit.propensity.share_at(po, d);
    const double elapsed = seconds_since(start);
    out.require(a_d == 50 && a_s == 10, fmt::format("counts PO-D {} PO-S {}", a_d, a_s));
    out.require(ratio >= confound_min_ratio, fmt::format("share ratio {:.4f}", ratio));
    out.require(elapsed < confound_budget_s, fmt::format("took {:.3f}s", elapsed));
    if (out.pass)
        out.detail = fmt::format("counts PO-D {} > PO-S {}; propensity PO-S/PO-D = {:.4f} >= {:g}; {:.3f}s", a_d,
                                 a_s, ratio, confound_min_ratio, elapsed);
    return out;
}

Verdict potentiality_anchors()
{
    Verdict out;
    std::mt19937_64 rng(77);
    int outside = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto g = oracle::random_graph(rng, 12, 120, trial % 2 == 0);
        if (num_dyads(g.nodes, g.directed) < 2)
            continue;
        const double v = potentiality(oracle::to_network(g)).value;
        outside += (v < 0.0 || v > 1.0);
    }
    out.require(outside == 0, fmt::format("{} values outside [0,1]", outside));

    double worst_uniform = 0.0;
    for (bool directed : {true, false}) {
        for (std::size_t n = 3; n <= 7; ++n) {
            InteractionNetwork net(Platform::IssueTracker, 2010, directed);
            for (std::size_t i = 0; i < n; ++i)
                net.add_node(MemberId("u" + std::to_string(i)), Role::developer());
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = directed ? 0 : i + 1; j < n; ++j)
                    if (i != j)
                        net.add_interactions(i, j, 3);
            worst_uniform = std::max(worst_uniform, std::abs(potentiality(net).value - 1.0));
        }
    }
    out.require(worst_uniform <= uniform_tolerance, fmt::format("uniform off by {:.3g}", worst_uniform));

    InteractionNetwork point(Platform::CodeReview, 2010);
    for (auto id : {"a", "b", "c", "d"})
        point.add_node(MemberId(id), Role::developer());
    point.add_interactions(0, 1, 9);
    const double p0 = potentiality(point).value;
    out.require(p0 == 0.0, fmt::format("point mass gives {}", p0));

    InteractionNetwork skew(Platform::CodeReview, 2010);
    for (auto id : {"a", "b", "c"})
        skew.add_node(MemberId(id), Role::developer());
    skew.add_interactions(0, 1, 2);
    skew.add_interactions(0, 2, 1);
    skew.add_interactions(1, 2, 1);
    const double ps = potentiality(skew).value;
    const double hand = oracle::entropy_bits({2, 1, 1}) / std::log2(3.0);
    out.require(std::abs(ps - skew_expected) <= skew_tolerance && std::abs(ps - hand) <= skew_tolerance,
                fmt::format("skewed triangle gives {:.6f} (oracle {:.6f})", ps, hand));
    if (out.pass)
        out.detail = fmt::format("1000 random in [0,1]; uniform |Pot-1| {:.2g}; point mass 0; {{2,1,1}} {:.5f}",
                                 worst_uniform, ps);
    return out;
}

// A team whose developers and stakeholders split into cliques, drawn from
// the seed.
InteractionNetwork heterogeneous_team(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    auto pick = [&](std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); };
    SyntheticTeamSpec spec;
    spec.platform = seed % 2 ? Platform::CodeReview : Platform::IssueTracker;
    spec.seed = seed;
    spec.populations = {{Role::developer(), pick(4, 8)},
                        {Role::stakeholder(), pick(4, 6)},
                        {Role::product_owner(), pick(1, 2)},
                        {Role::documenter(), pick(1, 2)}};
    spec.cliques = {{Role::developer(), 2}, {Role::stakeholder(), 2}};
    spec.counts = {{Role::developer(), Role::developer(), pick(300, 800)},
                   {Role::stakeholder(), Role::stakeholder(), pick(40, 120)},
                   {Role::product_owner(), Role::developer(), pick(50, 150)},
                   {Role::product_owner(), Role::stakeholder(), pick(30, 80)},
                   {Role::documenter(), Role::developer(), pick(20, 60)},
                   {Role::stakeholder(), Role::developer(), pick(10, 40)}};
    if (is_directed(spec.platform)) {
        spec.counts.push_back({Role::developer(), Role::product_owner(), pick(50, 150)});
        spec.counts.push_back({Role::stakeholder(), Role::product_owner(), pick(30, 80)});
    }
    auto team = synthesize(spec);
    return build_networks(team.interactions, RoleBook(team.roles)).networks.at(0);
}

Verdict scenario_ordering()
{
    Verdict out;
    constexpr int teams = 20;
    const auto start = Clock::now();
    std::vector<ScenarioSpec> specs(3);
    specs[0].kind = ScenarioKind::ObsInt;
    specs[1].kind = ScenarioKind::EcdeDevs;
    specs[2].kind = ScenarioKind::EcdeAll;
    int held = 0;
    for (int t = 0; t < teams; ++t) {
        for (auto& s : specs) {
            s.ensemble_size = 100;
            s.seed = 1000 + t;
        }
        std::vector<InteractionNetwork> nets{heterogeneous_team(500 + t)};
        auto r = run_scenarios(nets, specs);
        const double obs = r[0].summary.mean, devs = r[1].summary.mean, all = r[2].summary.mean;
        held += (all >= devs && devs >= obs);
    }
    const double rate = static_cast<double>(held) / teams;
    const double elapsed = seconds_since(start);
    out.require(rate >= ordering_min_rate, fmt::format("ordering held for {}/{} teams", held, teams));
    out.require(elapsed < ordering_budget_s, fmt::format("took {:.1f}s", elapsed));
    if (out.pass)
        out.detail = fmt::format("ecdeAll >= ecdeDevs >= obsInt for {}/{} teams (n=100), {:.1f}s", held, teams,
                                 elapsed);
    return out;
}

// Runs every report command into `dir` and returns the CSV/DOT outputs.
std::map<std::string, std::string> pipeline_outputs(const fs::path& dir, int threads)
{
    set_max_threads(threads);
    fs::remove_all(dir);
    std::ostringstream log;

    AnalysisConfig synth;
    synth.synth_spec = data_dir / "cliques_spec.json";
    synth.out_dir = dir / "team";
    cmd_synth(synth, log);

    auto config = load_config(data_dir / "pipeline.conf");
    config.interactions = {dir / "team" / "interactions.jsonl"};
    config.out_dir = dir / "out";
    config.samples = 30;
    cmd_preferences(config, log);
    cmd_potentiality(config, log);

    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir / "out")) {
        const auto ext = entry.path().extension();
        if (ext == ".csv" || ext == ".dot")
            files[entry.path().filename().string()] = slurp(entry.path());
    }
    return files;
}

Verdict determinism()
{
    Verdict out;
    const auto root = fs::temp_directory_path() / "teamnet_acceptance_determinism";
    const auto first = pipeline_outputs(root / "a", 4);
    const auto second = pipeline_outputs(root / "b", 4);
    const auto serial = pipeline_outputs(root / "c", 1);
    set_max_threads(0);
    out.require(first.size() >= 6, fmt::format("only {} output files", first.size()));
    for (const auto& [name, content] : first) {
        out.require(second.count(name) && second.at(name) == content, name + " differs between runs");
        out.require(serial.count(name) && serial.at(name) == content, name + " differs with one thread");
    }
    if (out.pass)
        out.detail = fmt::format("{} CSV/DOT files byte-identical across 2 parallel runs and 1 single-thread run",
                                 first.size());
    return out;
}

Verdict conservation()
{
    Verdict out;
    std::mt19937_64 rng(4242);
    std::size_t sampled = 0, bad_m = 0, loops = 0, bad_degree = 0, built = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto g = oracle::random_graph(rng, 10, 80, trial % 2 == 0);
        auto net = oracle::to_network(g);
        EnsembleSampler sampler(net, oracle::to_blocks(g));
        for (std::uint64_t s = 0; s < 100; ++s) {
            std::uint64_t m = 0;
            for (const auto& [dyad, count] : sampler.draw(trial, s))
                m += count;
            auto sample = sampler.materialise(sampler.draw(trial, s));
            ++sampled;
            bad_m += (m != net.m() || sample.m() != net.m());
            for (const auto& e : sample.edges())
                loops += (e.source == e.target);
        }
    }

    auto check_degrees = [&](const InteractionNetwork& net) {
        const auto deg = degree_sequence(net);
        std::uint64_t out_sum = 0, in_sum = 0;
        for (auto d : deg.out_degree)
            out_sum += d;
        for (auto d : deg.in_degree)
            in_sum += d;
        ++built;
        if (net.directed())
            bad_degree += (out_sum != net.m() || in_sum != net.m());
        else
            bad_degree += (out_sum != 2 * net.m());
    };
    for (int trial = 0; trial < 500; ++trial)
        check_degrees(oracle::to_network(oracle::random_graph(rng, 10, 80, trial % 2 == 0)));
    std::vector<Interaction> fixtures;
    for (auto [file, platform] : {std::pair{"thread_issues.jsonl", Platform::IssueTracker},
                                  std::pair{"change_reviews.jsonl", Platform::CodeReview},
                                  std::pair{"edits.jsonl", Platform::VersionControl}}) {
        auto r = extract_log(load_events(data_dir / file, platform));
        fixtures.insert(fixtures.end(), r.interactions.begin(), r.interactions.end());
    }
    for (const auto& net : build_networks(fixtures, RoleBook{}).networks)
        check_degrees(net);

    out.require(sampled >= 10000, fmt::format("only {} samples", sampled));
    out.require(bad_m == 0, fmt::format("{} samples with the wrong m", bad_m));
    out.require(loops == 0, fmt::format("{} self-loops", loops));
    out.require(bad_degree == 0, fmt::format("{} networks break the degree sum", bad_degree));
    if (out.pass)
        out.detail = fmt::format("{} samples conserve m without self-loops; {} built networks satisfy degree sums",
                                 sampled, built);
    return out;
}

Verdict thresholds()
{
    Verdict out;
    for (std::size_t k : {2u, 3u, 4u, 6u}) {
        const double t = 1.0 / static_cast<double>(k);
        PropensityMatrix m;
        m.labels = {"above", "below", "exact"};
        m.omega.assign(9, 1.0);
        m.share = {t + threshold_offset, 0, 0, t - threshold_offset, 0, 0, t, 0, 0};
        m.saturated.assign(9, 0);
        m.no_data.assign(3, 0);
        m.support.assign(9, 1);
        auto r = classify(m, k);
        out.require(r.at(0, 0).preference == Preference::Positive, fmt::format("K={} above", k));
        out.require(r.at(1, 0).preference == Preference::Negative, fmt::format("K={} below", k));
        out.require(r.at(2, 0).preference == Preference::Neutral, fmt::format("K={} exact", k));
    }
    if (out.pass)
        out.detail = fmt::format("1/K +/- {:g} and 1/K exact classify correctly for K in {{2,3,4,6}}",
                                 threshold_offset);
    return out;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"1 propensity oracle", omega_oracle},
        {"2 rule fixtures", rule_fixtures},
        {"3 activity confound", activity_confound},
        {"4 potentiality anchors", potentiality_anchors},
        {"5 scenario ordering", scenario_ordering},
        {"6 determinism", determinism},
        {"7 conservation", conservation},
        {"8 classification threshold", thresholds},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Verdict o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        fmt::print("{} {}: {}\n", o.pass ? "PASS" : "FAIL", name, o.detail);
    }
    fmt::print("{}/{} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed;
}
