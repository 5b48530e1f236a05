#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace teamnet {

// UTC instant with second precision.
using Timestamp = std::chrono::sys_seconds;

// Parses an RFC-3339 timestamp ("2010-03-04T12:00:00Z", "...+02:00",
// fractional seconds truncated) and normalises it to UTC.
std::optional<Timestamp> parse_timestamp(std::string_view text);

// Always "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp t);

int utc_year(Timestamp t);

struct YearRange {
    int first = 0;
    int last = 0;

    bool contains(int year) const noexcept { return year >= first && year <= last; }
};

// Parses "2010..2018" (or a single year).
std::optional<YearRange> parse_year_range(std::string_view text);

class MemberId {
public:
    MemberId() = default;
    explicit MemberId(std::string id);

    const std::string& str() const noexcept { return id_; }
    bool empty() const noexcept { return id_.empty(); }

    friend auto operator<=>(const MemberId&, const MemberId&) = default;

private:
    std::string id_;
};

enum class Platform { IssueTracker, CodeReview, VersionControl };

inline constexpr Platform all_platforms[] = {Platform::IssueTracker, Platform::CodeReview,
                                             Platform::VersionControl};

// "issue_tracker", "code_review", "version_control".
const char* to_string(Platform p);
std::optional<Platform> parse_platform(std::string_view text);

// Interactions on the issue tracker and the version control system follow
// the flow of information; code review discussions are symmetric.
constexpr bool is_directed(Platform p) noexcept { return p != Platform::CodeReview; }

class Role {
public:
    Role() = default;

    static Role developer() { return Role("Developer"); }
    static Role documenter() { return Role("Documenter"); }
    static Role product_owner() { return Role("ProductOwner"); }
    static Role stakeholder() { return Role("Stakeholder"); }
    static Role unassigned() { return Role("Unassigned"); }

    // Canonical labels parse case-insensitively, ignoring spaces, '_' and '-'.
    // Any other non-empty label is kept verbatim when `allow_extension` is set.
    static std::optional<Role> parse(std::string_view text, bool allow_extension);

    const std::string& name() const noexcept { return name_; }
    bool is_canonical() const noexcept { return rank() < 4; }

    // Canonical roles first, then extensions, then Unassigned.
    int rank() const noexcept;

    friend bool operator==(const Role& a, const Role& b) { return a.name_ == b.name_; }
    friend std::strong_ordering operator<=>(const Role& a, const Role& b);

private:
    explicit Role(std::string name) : name_(std::move(name)) {}
    std::string name_;
};

struct RoleAssignment {
    MemberId member;
    int year = 0;
    Role role;

    friend bool operator==(const RoleAssignment&, const RoleAssignment&) = default;
};

// Lookup of a member's role in a given year.
class RoleBook {
public:
    RoleBook() = default;
    explicit RoleBook(const std::vector<RoleAssignment>& assignments);

    std::optional<Role> find(const MemberId& member, int year) const;
    std::vector<Role> roles() const;
    bool empty() const noexcept { return table_.empty(); }

private:
    std::map<std::pair<MemberId, int>, Role> table_;
};

struct IssueEntryEvent {
    MemberId member;
    std::string issue;
    Timestamp timestamp;

    friend bool operator==(const IssueEntryEvent&, const IssueEntryEvent&) = default;
};

enum class ReviewAction { Develop, Review, Integrate };
enum class Outcome { Pass, Fail };

const char* to_string(ReviewAction a);

struct ReviewActionEvent {
    MemberId member;
    std::string change;
    Timestamp timestamp;
    ReviewAction action = ReviewAction::Develop;
    std::optional<Outcome> outcome;

    friend bool operator==(const ReviewActionEvent&, const ReviewActionEvent&) = default;
};

struct LineEditEvent {
    MemberId member;
    std::string commit;
    std::string file;
    std::string line;
    Timestamp timestamp;

    friend bool operator==(const LineEditEvent&, const LineEditEvent&) = default;
};

using EventLog = std::variant<std::vector<IssueEntryEvent>, std::vector<ReviewActionEvent>,
                              std::vector<LineEditEvent>>;

struct LoadOptions {
    bool allow_extension_roles = false;
    // Role records outside this range are ignored.
    std::optional<YearRange> years;
};

std::vector<RoleAssignment> load_roles(const std::filesystem::path& path,
                                       const LoadOptions& options = {});
std::vector<RoleAssignment> parse_roles(std::istream& in, const LoadOptions& options = {});

// Events come back in stable ascending timestamp order.
EventLog load_events(const std::filesystem::path& path, Platform platform);

std::vector<IssueEntryEvent> parse_issue_events(std::istream& in);
std::vector<ReviewActionEvent> parse_review_events(std::istream& in);
std::vector<LineEditEvent> parse_line_edit_events(std::istream& in);

} // namespace teamnet
