#include "teamnet/extraction.hpp"

#include "teamnet/error.hpp"

#include <array>
#include <exception>
#include <type_traits>
#include <variant>
#include <map>
#include <set>
#include <utility>

namespace teamnet {

const char* to_string(Rule r)
{
    switch (r) {
    case Rule::R1: return "r1";
    case Rule::R2: return "r2";
    case Rule::R3: return "r3";
    case Rule::R4: return "r4";
    case Rule::R5: return "r5";
    case Rule::R6: return "r6";
    case Rule::R7: return "r7";
    case Rule::Coedit: return "coedit";
    }
    return "?";
}

std::optional<Rule> parse_rule(std::string_view text)
{
    static constexpr std::array rules{Rule::R1, Rule::R2, Rule::R3, Rule::R4,
                                      Rule::R5, Rule::R6, Rule::R7, Rule::Coedit};
    for (Rule r : rules)
        if (text == to_string(r))
            return r;
    return std::nullopt;
}

Platform platform_of(Rule r)
{
    switch (r) {
    case Rule::R1:
    case Rule::R2: return Platform::IssueTracker;
    case Rule::Coedit: return Platform::VersionControl;
    default: return Platform::CodeReview;
    }
}

void ExtractionResult::append(ExtractionResult&& other)
{
    interactions.insert(interactions.end(), std::make_move_iterator(other.interactions.begin()),
                        std::make_move_iterator(other.interactions.end()));
    self_links.insert(self_links.end(), std::make_move_iterator(other.self_links.begin()),
                      std::make_move_iterator(other.self_links.end()));
    warnings.insert(warnings.end(), std::make_move_iterator(other.warnings.begin()),
                    std::make_move_iterator(other.warnings.end()));
    inferred_outcomes += other.inferred_outcomes;
}

namespace {

template <typename Event>
void require_sorted(std::span<const Event> events, const char* what)
{
    for (std::size_t i = 1; i < events.size(); ++i)
        if (events[i].timestamp < events[i - 1].timestamp)
            throw Error(ErrorKind::UnsortedInput,
                        std::string(what) + " not in ascending timestamp order at position "
                            + std::to_string(i));
}

// Emits `from -> to` or records a self-link.
void link(ExtractionResult& out, const MemberId& from, const MemberId& to, Platform platform,
          Timestamp t, Rule rule)
{
    if (from == to) {
        out.self_links.push_back({to, rule, t});
        return;
    }
    out.interactions.push_back({from, to, is_directed(platform), platform, t, rule});
}

constexpr std::size_t npos = static_cast<std::size_t>(-1);

} // namespace

ExtractionResult extract_issue_interactions(std::span<const IssueEntryEvent> thread)
{
    ExtractionResult out;
    if (thread.empty())
        return out;
    require_sorted(thread, "issue entries");
    for (const auto& e : thread)
        if (e.issue != thread.front().issue)
            throw Error(ErrorKind::InvalidInput,
                        "thread mixes issues " + thread.front().issue + " and " + e.issue);

    // The opening entry has nothing before it to read.
    std::map<MemberId, std::size_t> last_entry{{thread.front().member, 0}};
    for (std::size_t k = 1; k < thread.size(); ++k) {
        const auto& reader = thread[k].member;
        // Indices of the entries read before writing entry k; the set
        // collapses overlapping references to one link per (read, new) pair.
        std::set<std::size_t> read{0};
        Rule rule = Rule::R1;
        if (auto prev = last_entry.find(reader); prev != last_entry.end()) {
            rule = Rule::R2;
            for (std::size_t x = prev->second; x < k; ++x)
                read.insert(x);
        } else {
            read.insert(k - 1);
            if (k >= 2)
                read.insert(k - 2);
        }
        for (std::size_t x : read)
            link(out, thread[x].member, reader, Platform::IssueTracker, thread[k].timestamp, rule);
        last_entry[reader] = k;
    }
    return out;
}

ExtractionResult extract_review_interactions(std::span<const ReviewActionEvent> change)
{
    ExtractionResult out;
    if (change.empty())
        return out;
    require_sorted(change, "review actions");
    for (const auto& a : change)
        if (a.change != change.front().change)
            throw Error(ErrorKind::InvalidInput,
                        "change log mixes " + change.front().change + " and " + a.change);

    std::size_t last_develop = npos;
    std::size_t last_passing_review = npos;
    std::size_t failed_since_develop = npos;
    std::array<std::size_t, 3> last_of_type{npos, npos, npos};

    auto emit = [&](std::size_t earlier, std::size_t later, Rule rule) {
        link(out, change[earlier].member, change[later].member, Platform::CodeReview,
             change[later].timestamp, rule);
    };
    auto missing_developer = [&](std::size_t k) {
        out.warnings.push_back("change " + change[k].change + ": " + to_string(change[k].action)
                               + " by " + change[k].member.str() + " at "
                               + format_timestamp(change[k].timestamp)
                               + " has no preceding development");
    };

    for (std::size_t k = 0; k < change.size(); ++k) {
        const auto& a = change[k];
        const bool failed = a.outcome == Outcome::Fail;
        const auto type = static_cast<std::size_t>(a.action);

        switch (a.action) {
        case ReviewAction::Develop:
            if (failed_since_develop != npos)
                emit(failed_since_develop, k, Rule::R6);
            break;
        case ReviewAction::Review:
            if (last_develop != npos)
                emit(last_develop, k, Rule::R3);
            else
                missing_developer(k);
            break;
        case ReviewAction::Integrate:
            if (last_develop != npos)
                emit(last_develop, k, Rule::R4);
            else
                missing_developer(k);
            if (failed && last_passing_review != npos)
                emit(last_passing_review, k, Rule::R5);
            break;
        }

        if (last_of_type[type] != npos && change[last_of_type[type]].member != a.member)
            emit(last_of_type[type], k, Rule::R7);

        last_of_type[type] = k;
        if (a.action == ReviewAction::Develop) {
            last_develop = k;
            failed_since_develop = npos;
        } else if (failed) {
            failed_since_develop = k;
        } else if (a.action == ReviewAction::Review) {
            last_passing_review = k;
        }
    }
    return out;
}

ExtractionResult extract_coedit_interactions(std::span<const LineEditEvent> edits)
{
    ExtractionResult out;
    require_sorted(edits, "line edits");
    std::map<std::pair<std::string, std::string>, std::size_t> last_edit;
    for (std::size_t k = 0; k < edits.size(); ++k) {
        const auto& e = edits[k];
        auto [it, inserted] = last_edit.try_emplace({e.file, e.line}, k);
        if (inserted)
            continue;
        const auto& previous = edits[it->second];
        // Consecutive edits by one member are not an interaction.
        if (previous.member != e.member)
            out.interactions.push_back(
                {previous.member, e.member, true, Platform::VersionControl, e.timestamp, Rule::Coedit});
        it->second = k;
    }
    return out;
}

std::vector<ReviewActionEvent> infer_outcomes(std::span<const ReviewActionEvent> actions)
{
    std::vector<ReviewActionEvent> out(actions.begin(), actions.end());
    for (std::size_t k = 0; k < out.size(); ++k) {
        auto& a = out[k];
        if (a.action == ReviewAction::Develop || a.outcome)
            continue;
        Outcome inferred = Outcome::Pass;
        for (std::size_t j = k + 1; j < out.size(); ++j) {
            const auto& next = out[j];
            if (next.action == ReviewAction::Develop) {
                inferred = Outcome::Fail;
                break;
            }
            if (next.action == ReviewAction::Integrate
                && (a.action == ReviewAction::Review || next.outcome == Outcome::Pass))
                break;
        }
        a.outcome = inferred;
    }
    return out;
}

namespace {

template <typename Event, typename Key, typename Extract>
ExtractionResult extract_grouped(std::span<const Event> events, Key key, Extract extract,
                                 Execution exec)
{
    // Groups keep input order, so each group is sorted when the log is.
    std::map<std::string, std::vector<Event>> groups;
    for (const auto& e : events)
        groups[key(e)].push_back(e);

    std::vector<const std::vector<Event>*> order;
    order.reserve(groups.size());
    for (const auto& [id, group] : groups)
        order.push_back(&group);

    std::vector<ExtractionResult> partial(order.size());
    const auto n = static_cast<long>(order.size());
    if (exec == Execution::Parallel) {
        // Exceptions must not escape the parallel region; keep the first.
        std::vector<std::exception_ptr> errors(order.size());
#pragma omp parallel for schedule(dynamic, 16)
        for (long i = 0; i < n; ++i) {
            try {
                partial[i] = extract(std::span<const Event>(*order[i]));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
        for (auto& e : errors)
            if (e)
                std::rethrow_exception(e);
    } else {
        for (long i = 0; i < n; ++i)
            partial[i] = extract(std::span<const Event>(*order[i]));
    }

    ExtractionResult out;
    for (auto& p : partial)
        out.append(std::move(p));
    return out;
}

} // namespace

ExtractionResult extract_issue_log(std::span<const IssueEntryEvent> events, Execution exec)
{
    require_sorted(events, "issue entries");
    return extract_grouped(
        events, [](const IssueEntryEvent& e) { return e.issue; },
        [](std::span<const IssueEntryEvent> thread) { return extract_issue_interactions(thread); },
        exec);
}

ExtractionResult extract_review_log(std::span<const ReviewActionEvent> events, Execution exec)
{
    require_sorted(events, "review actions");
    return extract_grouped(
        events, [](const ReviewActionEvent& e) { return e.change; },
        [](std::span<const ReviewActionEvent> change) {
            std::size_t unset = 0;
            for (const auto& a : change)
                if (a.action != ReviewAction::Develop && !a.outcome)
                    ++unset;
            auto completed = infer_outcomes(change);
            auto result = extract_review_interactions(completed);
            result.inferred_outcomes = unset;
            return result;
        },
        exec);
}

ExtractionResult extract_log(const EventLog& log, Execution exec)
{
    return std::visit(
        [exec](const auto& events) -> ExtractionResult {
            using Event = typename std::decay_t<decltype(events)>::value_type;
            std::span<const Event> view(events);
            if constexpr (std::is_same_v<Event, IssueEntryEvent>)
                return extract_issue_log(view, exec);
            else if constexpr (std::is_same_v<Event, ReviewActionEvent>)
                return extract_review_log(view, exec);
            else
                return extract_coedit_interactions(view);
        },
        log);
}

} // namespace teamnet
