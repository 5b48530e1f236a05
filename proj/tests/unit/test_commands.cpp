#include "teamnet/commands.hpp"
#include "teamnet/report.hpp"

#include <json.hpp>

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace teamnet;
namespace fs = std::filesystem;

namespace {

const fs::path data_dir = TEAMNET_TEST_DATA;

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / ("teamnet_unit_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Rows of a CSV file split into fields (no quoting in these tests).
std::vector<std::vector<std::string>> csv_rows(const fs::path& p)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ','))
            fields.push_back(f);
        if (!line.empty() && line.back() == ',')
            fields.emplace_back();
        rows.push_back(fields);
    }
    return rows;
}

AnalysisConfig synth_into(const fs::path& dir, const std::string& spec)
{
    AnalysisConfig c;
    c.synth_spec = data_dir / spec;
    c.out_dir = dir;
    std::ostringstream log;
    REQUIRE(cmd_synth(c, log) == exit_ok);
    AnalysisConfig next;
    next.roles = dir / "roles.jsonl";
    next.interactions = {dir / "interactions.jsonl"};
    next.out_dir = dir / "out";
    return next;
}

} // namespace

TEST_CASE("extract: issue thread")
{
    auto dir = scratch("extract");
    AnalysisConfig c;
    c.roles = data_dir / "roles.jsonl";
    c.events[Platform::IssueTracker] = data_dir / "thread_issues.jsonl";
    c.out_dir = dir;
    std::ostringstream log;
    REQUIRE(cmd_extract(c, log) == exit_ok);

    auto records = load_interactions(dir / "interactions_issue_tracker.jsonl");
    int to_d = 0;
    for (const auto& r : records)
        to_d += r.target.str() == "dev-d";
    CHECK(to_d == 7);
    CHECK(records.size() == 8);

    auto summary = nlohmann::json::parse(slurp(dir / "extract_summary.json"));
    const auto& it = summary.at("issue_tracker");
    CHECK(it.at("events") == 9);
    CHECK(it.at("by_rule").at("r1") == 3);
    CHECK(it.at("skipped_self_links") == 12);
    CHECK(it.at("unknown_members").empty());
}

TEST_CASE("extract: review change with inferred outcomes")
{
    auto dir = scratch("extract_review");
    AnalysisConfig c;
    c.events[Platform::CodeReview] = data_dir / "change_reviews.jsonl";
    c.out_dir = dir;
    std::ostringstream log;
    REQUIRE(cmd_extract(c, log) == exit_ok);
    auto summary = nlohmann::json::parse(slurp(dir / "extract_summary.json"));
    const auto& cr = summary.at("code_review");
    CHECK(cr.at("interactions") == 8);
    CHECK(cr.at("inferred_outcomes") == 5);
    CHECK(cr.at("by_rule").at("r5") == 1);
    CHECK(cr.at("by_rule").at("r6") == 1);
}

TEST_CASE("extract: empty and corrupt inputs")
{
    auto dir = scratch("extract_empty");
    AnalysisConfig c;
    c.events[Platform::IssueTracker] = data_dir / "empty.jsonl";
    c.out_dir = dir;
    std::ostringstream log;
    CHECK(cmd_extract(c, log) == exit_ok);
    CHECK(slurp(dir / "interactions_issue_tracker.jsonl").empty());
    CHECK(fs::exists(dir / "extract_summary.json"));

    c.events[Platform::IssueTracker] = data_dir / "corrupt_issues.jsonl";
    std::ostringstream bad;
    CHECK(cmd_extract(c, bad) == exit_input);
    CHECK(bad.str().find("corrupt_issues.jsonl:7") != std::string::npos);

    c.events[Platform::IssueTracker] = data_dir / "missing.jsonl";
    std::ostringstream missing;
    CHECK(cmd_extract(c, missing) == exit_input);
}

TEST_CASE("preferences: six-member team")
{
    auto dir = scratch("prefs");
    auto c = synth_into(dir, "six_member_spec.json");
    c.formats = {"csv", "dot", "json"};
    std::ostringstream log;
    REQUIRE(cmd_preferences(c, log) == exit_ok);
    for (auto f : {"propensities.csv", "preferences.csv", "counts.csv", "preferences_code_review.dot",
                   "organigraph.dot", "preferences.json"})
        CHECK(fs::exists(c.out_dir / f));

    double to_s = -1, to_d = -1;
    for (const auto& row : csv_rows(c.out_dir / "preferences.csv")) {
        if (row[0] != "ProductOwner" || row[2] != "code_review")
            continue;
        if (row[1] == "Stakeholder")
            to_s = std::stod(row[3]);
        if (row[1] == "Developer")
            to_d = std::stod(row[3]);
    }
    CHECK(to_s > to_d);
    CHECK(to_d > 0.0);

    const auto first = slurp(c.out_dir / "preferences.csv");
    const auto dot = slurp(c.out_dir / "organigraph.dot");
    REQUIRE(cmd_preferences(c, log) == exit_ok);
    CHECK(slurp(c.out_dir / "preferences.csv") == first);
    CHECK(slurp(c.out_dir / "organigraph.dot") == dot);
    CHECK(dot.find("ProductOwner") != std::string::npos);
}

TEST_CASE("preferences: single role and repeated years")
{
    auto dir = scratch("prefs_single");
    std::vector<Interaction> two_years;
    for (int year : {2010, 2011}) {
        for (int k = 0; k < 3; ++k) {
            Interaction i;
            i.source = MemberId("a");
            i.target = MemberId(k == 1 ? "c" : "b");
            i.platform = Platform::IssueTracker;
            i.timestamp = *parse_timestamp(std::to_string(year) + "-02-01T00:00:0" + std::to_string(k) + "Z");
            two_years.push_back(i);
        }
    }
    {
        std::ofstream out(dir / "i.jsonl");
        write_interactions(out, two_years);
    }
    AnalysisConfig c;
    c.interactions = {dir / "i.jsonl"};
    c.out_dir = dir / "both";
    std::ostringstream log;
    REQUIRE(cmd_preferences(c, log) == exit_ok);
    c.years = YearRange{2010, 2010};
    c.out_dir = dir / "one";
    REQUIRE(cmd_preferences(c, log) == exit_ok);
    CHECK(slurp(dir / "both" / "preferences.csv") == slurp(dir / "one" / "preferences.csv"));

    auto rows = csv_rows(dir / "one" / "preferences.csv");
    // Header, one issue tracker row and one combined row for the only block.
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == "Unassigned");
}

TEST_CASE("preferences: no inputs")
{
    AnalysisConfig c;
    c.out_dir = scratch("prefs_none");
    std::ostringstream log;
    CHECK(cmd_preferences(c, log) == exit_input);
}

TEST_CASE("potentiality: scenarios and determinism")
{
    auto dir = scratch("pot");
    auto c = synth_into(dir, "cliques_spec.json");
    c.samples = 40;
    c.raw_samples = true;
    std::ostringstream log;
    REQUIRE(cmd_potentiality(c, log) == exit_ok);
    auto rows = csv_rows(c.out_dir / "scenarios.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"platform", "year", "scenario", "mean", "p5", "p95", "n"});
    CHECK(rows[1][2] == "obsInt");
    CHECK(std::stod(rows[3][3]) >= std::stod(rows[2][3]));
    CHECK(std::stod(rows[2][3]) >= std::stod(rows[1][3]));
    CHECK(rows[3][6] == "40");
    CHECK(fs::exists(c.out_dir / "scenario_samples.csv"));

    const auto first = slurp(c.out_dir / "scenarios.csv");
    REQUIRE(cmd_potentiality(c, log) == exit_ok);
    CHECK(slurp(c.out_dir / "scenarios.csv") == first);

    c.samples = 1;
    REQUIRE(cmd_potentiality(c, log) == exit_ok);
    for (const auto& row : csv_rows(c.out_dir / "scenarios.csv"))
        if (row[0] != "platform")
            CHECK((row[3] == row[4] && row[4] == row[5]));
}

TEST_CASE("potentiality: degenerate slices are skipped and reported")
{
    auto dir = scratch("pot_degenerate");
    std::vector<Interaction> in;
    auto add = [&](const char* a, const char* b, const char* when) {
        Interaction i;
        i.source = MemberId(a);
        i.target = MemberId(b);
        i.directed = false;
        i.platform = Platform::CodeReview;
        i.rule = Rule::R3;
        i.timestamp = *parse_timestamp(when);
        in.push_back(i);
    };
    add("a", "b", "2010-01-01T00:00:00Z");
    add("a", "b", "2011-01-01T00:00:00Z");
    add("b", "c", "2011-01-01T00:00:01Z");
    {
        std::ofstream out(dir / "i.jsonl");
        write_interactions(out, in);
    }
    AnalysisConfig c;
    c.interactions = {dir / "i.jsonl"};
    c.out_dir = dir / "out";
    c.samples = 5;
    std::ostringstream log;
    CHECK(cmd_potentiality(c, log) == exit_input);
    CHECK(log.str().find("2010") != std::string::npos);
    auto rows = csv_rows(c.out_dir / "scenarios.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[1][1] == "2011");
}

TEST_CASE("synth: infeasible spec")
{
    auto dir = scratch("synth_bad");
    {
        std::ofstream out(dir / "spec.json");
        out << R"({"populations": {"Developer": 1}, "counts": [{"source": "Developer", "target": "Developer", "count": 2}]})";
    }
    AnalysisConfig c;
    c.synth_spec = dir / "spec.json";
    c.out_dir = dir;
    std::ostringstream log;
    CHECK(cmd_synth(c, log) == exit_input);
    CHECK(log.str().find("InfeasibleSpec") != std::string::npos);
}
