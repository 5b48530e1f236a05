#include "teamnet/events.hpp"

#include "teamnet/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>

namespace teamnet {

namespace {

using nlohmann::json;

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int& out)
{
    if (pos + len > text.size())
        return false;
    for (std::size_t i = pos; i < pos + len; ++i)
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            return false;
    auto res = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return res.ec == std::errc{};
}

std::string normalise_label(std::string_view text)
{
    std::string out;
    for (char c : text) {
        if (c == ' ' || c == '_' || c == '-')
            continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

} // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text)
{
    using namespace std::chrono;

    // YYYY-MM-DDTHH:MM:SS
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    if (text.size() < 20)
        return std::nullopt;
    if (!read_int(text, 0, 4, y) || text[4] != '-' || !read_int(text, 5, 2, mo) || text[7] != '-'
        || !read_int(text, 8, 2, d))
        return std::nullopt;
    if (text[10] != 'T' && text[10] != 't' && text[10] != ' ')
        return std::nullopt;
    if (!read_int(text, 11, 2, h) || text[13] != ':' || !read_int(text, 14, 2, mi)
        || text[16] != ':' || !read_int(text, 17, 2, s))
        return std::nullopt;
    if (h > 23 || mi > 59 || s > 60)
        return std::nullopt;

    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok())
        return std::nullopt;

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t digits = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            ++pos;
            ++digits;
        }
        if (digits == 0)
            return std::nullopt;
    }
    if (pos >= text.size())
        return std::nullopt;

    seconds offset{0};
    if (text[pos] == 'Z' || text[pos] == 'z') {
        ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
        int oh = 0, om = 0;
        if (!read_int(text, pos + 1, 2, oh) || pos + 3 >= text.size() || text[pos + 3] != ':'
            || !read_int(text, pos + 4, 2, om) || oh > 23 || om > 59)
            return std::nullopt;
        offset = hours{oh} + minutes{om};
        if (text[pos] == '-')
            offset = -offset;
        pos += 6;
    } else {
        return std::nullopt;
    }
    if (pos != text.size())
        return std::nullopt;

    Timestamp local = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
    return local - offset;
}

std::string format_timestamp(Timestamp t)
{
    using namespace std::chrono;
    auto day_point = floor<days>(t);
    year_month_day ymd{day_point};
    hh_mm_ss hms{t - day_point};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

int utc_year(Timestamp t)
{
    using namespace std::chrono;
    return static_cast<int>(year_month_day{floor<days>(t)}.year());
}

std::optional<YearRange> parse_year_range(std::string_view text)
{
    auto parse_one = [](std::string_view s) -> std::optional<int> {
        int v = 0;
        if (s.empty())
            return std::nullopt;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
            return std::nullopt;
        return v;
    };
    auto dots = text.find("..");
    if (dots == std::string_view::npos) {
        auto y = parse_one(text);
        if (!y)
            return std::nullopt;
        return YearRange{*y, *y};
    }
    auto a = parse_one(text.substr(0, dots));
    auto b = parse_one(text.substr(dots + 2));
    if (!a || !b || *a > *b)
        return std::nullopt;
    return YearRange{*a, *b};
}

MemberId::MemberId(std::string id) : id_(std::move(id))
{
    if (id_.empty())
        throw Error(ErrorKind::InvalidInput, "member id must not be empty");
}

const char* to_string(Platform p)
{
    switch (p) {
    case Platform::IssueTracker: return "issue_tracker";
    case Platform::CodeReview: return "code_review";
    case Platform::VersionControl: return "version_control";
    }
    return "?";
}

std::optional<Platform> parse_platform(std::string_view text)
{
    auto key = normalise_label(text);
    if (key == "issuetracker" || key == "issue" || key == "issues")
        return Platform::IssueTracker;
    if (key == "codereview" || key == "review" || key == "reviews")
        return Platform::CodeReview;
    if (key == "versioncontrol" || key == "vcs" || key == "git" || key == "coedit")
        return Platform::VersionControl;
    return std::nullopt;
}

std::optional<Role> Role::parse(std::string_view text, bool allow_extension)
{
    auto key = normalise_label(text);
    if (key == "developer")
        return developer();
    if (key == "documenter")
        return documenter();
    if (key == "productowner")
        return product_owner();
    if (key == "stakeholder")
        return stakeholder();
    if (allow_extension && !text.empty() && key != "unassigned")
        return Role(std::string(text));
    return std::nullopt;
}

int Role::rank() const noexcept
{
    if (name_ == "Developer")
        return 0;
    if (name_ == "Documenter")
        return 1;
    if (name_ == "ProductOwner")
        return 2;
    if (name_ == "Stakeholder")
        return 3;
    if (name_ == "Unassigned")
        return 5;
    return 4;
}

std::strong_ordering operator<=>(const Role& a, const Role& b)
{
    if (auto c = a.rank() <=> b.rank(); c != 0)
        return c;
    return a.name_ <=> b.name_;
}

RoleBook::RoleBook(const std::vector<RoleAssignment>& assignments)
{
    for (const auto& a : assignments) {
        auto [it, inserted] = table_.emplace(std::make_pair(a.member, a.year), a.role);
        if (!inserted && !(it->second == a.role))
            throw Error(ErrorKind::ConflictingRole,
                        "member " + a.member.str() + " has two roles in " + std::to_string(a.year));
    }
}

std::optional<Role> RoleBook::find(const MemberId& member, int year) const
{
    auto it = table_.find({member, year});
    if (it == table_.end())
        return std::nullopt;
    return it->second;
}

std::vector<Role> RoleBook::roles() const
{
    std::vector<Role> out;
    for (const auto& [key, role] : table_)
        out.push_back(role);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

const char* to_string(ReviewAction a)
{
    switch (a) {
    case ReviewAction::Develop: return "D";
    case ReviewAction::Review: return "R";
    case ReviewAction::Integrate: return "I";
    }
    return "?";
}

namespace {

// Iterates the non-blank lines of a JSONL stream, handing each parsed object
// and its 1-based line number to `fn`.
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn)
{
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::MalformedRecord, std::string("invalid JSON: ") + e.what(), lineno);
        }
        if (!record.is_object())
            throw Error(ErrorKind::MalformedRecord, "record is not a JSON object", lineno);
        fn(record, lineno);
    }
}

const json& require(const json& record, const char* field, std::size_t lineno)
{
    auto it = record.find(field);
    if (it == record.end() || it->is_null())
        throw Error(ErrorKind::MissingField, std::string("missing field '") + field + "'", lineno);
    return *it;
}

std::string require_string(const json& record, const char* field, std::size_t lineno)
{
    const auto& v = require(record, field, lineno);
    if (!v.is_string())
        throw Error(ErrorKind::MalformedRecord, std::string("field '") + field + "' must be a string",
                    lineno);
    auto s = v.get<std::string>();
    if (s.empty())
        throw Error(ErrorKind::MalformedRecord, std::string("field '") + field + "' is empty",
                    lineno);
    return s;
}

MemberId require_member(const json& record, std::size_t lineno)
{
    return MemberId(require_string(record, "member_id", lineno));
}

Timestamp require_timestamp(const json& record, std::size_t lineno)
{
    auto text = require_string(record, "timestamp", lineno);
    auto t = parse_timestamp(text);
    if (!t)
        throw Error(ErrorKind::UnparseableTimestamp, "cannot parse timestamp '" + text + "'", lineno);
    return *t;
}

template <typename Event>
void sort_by_time(std::vector<Event>& events)
{
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
}

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    return in;
}

} // namespace

std::vector<RoleAssignment> parse_roles(std::istream& in, const LoadOptions& options)
{
    std::vector<RoleAssignment> out;
    std::map<std::pair<MemberId, int>, Role> seen;
    for_each_record(in, [&](const json& record, std::size_t lineno) {
        auto member = require_member(record, lineno);
        const auto& year_field = require(record, "year", lineno);
        if (!year_field.is_number_integer())
            throw Error(ErrorKind::MalformedRecord, "field 'year' must be an integer", lineno);
        int year = year_field.get<int>();
        auto label = require_string(record, "role", lineno);
        auto role = Role::parse(label, options.allow_extension_roles);
        if (!role)
            throw Error(ErrorKind::UnknownRole, "unknown role '" + label + "'", lineno);
        if (options.years && !options.years->contains(year))
            return;

        auto [it, inserted] = seen.emplace(std::make_pair(member, year), *role);
        if (!inserted) {
            if (it->second == *role)
                return;
            throw Error(ErrorKind::ConflictingRole,
                        "member " + member.str() + " in " + std::to_string(year) + " is both "
                            + it->second.name() + " and " + role->name(),
                        lineno);
        }
        out.push_back({std::move(member), year, *role});
    });
    return out;
}

std::vector<RoleAssignment> load_roles(const std::filesystem::path& path, const LoadOptions& options)
{
    auto in = open_input(path);
    return parse_roles(in, options);
}

std::vector<IssueEntryEvent> parse_issue_events(std::istream& in)
{
    std::vector<IssueEntryEvent> out;
    for_each_record(in, [&](const json& record, std::size_t lineno) {
        IssueEntryEvent e;
        e.member = require_member(record, lineno);
        e.issue = require_string(record, "issue_id", lineno);
        e.timestamp = require_timestamp(record, lineno);
        out.push_back(std::move(e));
    });
    sort_by_time(out);
    return out;
}

std::vector<ReviewActionEvent> parse_review_events(std::istream& in)
{
    std::vector<ReviewActionEvent> out;
    for_each_record(in, [&](const json& record, std::size_t lineno) {
        ReviewActionEvent e;
        e.member = require_member(record, lineno);
        e.change = require_string(record, "change_id", lineno);
        e.timestamp = require_timestamp(record, lineno);
        auto action = require_string(record, "action", lineno);
        if (action == "D")
            e.action = ReviewAction::Develop;
        else if (action == "R")
            e.action = ReviewAction::Review;
        else if (action == "I")
            e.action = ReviewAction::Integrate;
        else
            throw Error(ErrorKind::MalformedRecord, "unknown action '" + action + "'", lineno);

        if (auto it = record.find("outcome"); it != record.end() && !it->is_null()) {
            if (!it->is_string())
                throw Error(ErrorKind::MalformedRecord, "field 'outcome' must be a string", lineno);
            auto outcome = it->get<std::string>();
            if (outcome == "pass")
                e.outcome = Outcome::Pass;
            else if (outcome == "fail")
                e.outcome = Outcome::Fail;
            else
                throw Error(ErrorKind::MalformedRecord, "unknown outcome '" + outcome + "'", lineno);
            // Development has no outcome.
            if (e.action == ReviewAction::Develop)
                e.outcome.reset();
        }
        out.push_back(std::move(e));
    });
    sort_by_time(out);
    return out;
}

std::vector<LineEditEvent> parse_line_edit_events(std::istream& in)
{
    std::vector<LineEditEvent> out;
    for_each_record(in, [&](const json& record, std::size_t lineno) {
        LineEditEvent e;
        e.member = require_member(record, lineno);
        e.commit = require_string(record, "commit_id", lineno);
        e.file = require_string(record, "file_id", lineno);
        e.line = require_string(record, "line_id", lineno);
        e.timestamp = require_timestamp(record, lineno);
        out.push_back(std::move(e));
    });
    sort_by_time(out);
    return out;
}

EventLog load_events(const std::filesystem::path& path, Platform platform)
{
    auto in = open_input(path);
    switch (platform) {
    case Platform::IssueTracker: return parse_issue_events(in);
    case Platform::CodeReview: return parse_review_events(in);
    case Platform::VersionControl: return parse_line_edit_events(in);
    }
    throw Error(ErrorKind::InvalidInput, "unknown platform");
}

} // namespace teamnet
