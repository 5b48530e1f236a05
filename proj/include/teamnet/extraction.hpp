#pragma once

#include "teamnet/events.hpp"
#include "teamnet/execution.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace teamnet {

// Practice that produced an interaction: r1-r2 on the issue tracker, r3-r7 on
// the code review platform, co-editing on the version control system.
enum class Rule { R1, R2, R3, R4, R5, R6, R7, Coedit };

const char* to_string(Rule r);
std::optional<Rule> parse_rule(std::string_view text);
Platform platform_of(Rule r);

struct Interaction {
    MemberId source;
    MemberId target;
    bool directed = true;
    Platform platform = Platform::IssueTracker;
    Timestamp timestamp;
    Rule rule = Rule::R1;

    friend bool operator==(const Interaction&, const Interaction&) = default;
};

// A link the practices derive but which connects a member with themself,
// e.g. a member re-reading their own previous entry under r2. Never emitted
// as an interaction; kept for the validation summary.
struct SelfLink {
    MemberId member;
    Rule rule = Rule::R1;
    Timestamp timestamp;

    friend bool operator==(const SelfLink&, const SelfLink&) = default;
};

struct ExtractionResult {
    std::vector<Interaction> interactions;
    std::vector<SelfLink> self_links;
    std::vector<std::string> warnings;
    std::size_t inferred_outcomes = 0;

    void append(ExtractionResult&& other);
};

// One issue thread, entries sorted ascending. Interactions point from the
// author of a read entry to the reader.
ExtractionResult extract_issue_interactions(std::span<const IssueEntryEvent> thread);

// One change, actions sorted ascending. Unset outcomes count as passes; run
// infer_outcomes first when outcomes were not recorded.
ExtractionResult extract_review_interactions(std::span<const ReviewActionEvent> change);

// Any number of files and lines, edits sorted ascending.
ExtractionResult extract_coedit_interactions(std::span<const LineEditEvent> edits);

// Fills unset Review/Integrate outcomes of one change. A review fails when
// development resumes before any integration; an integration fails when
// development resumes before a passing integration. Explicit outcomes stay.
std::vector<ReviewActionEvent> infer_outcomes(std::span<const ReviewActionEvent> actions);

// Whole-log variants: events are grouped by thread or change, each group is
// extracted independently and the results are concatenated in context-id
// order, so both execution modes return identical output.
ExtractionResult extract_issue_log(std::span<const IssueEntryEvent> events,
                                   Execution exec = Execution::Parallel);
ExtractionResult extract_review_log(std::span<const ReviewActionEvent> events,
                                    Execution exec = Execution::Parallel);
ExtractionResult extract_log(const EventLog& log, Execution exec = Execution::Parallel);

} // namespace teamnet
