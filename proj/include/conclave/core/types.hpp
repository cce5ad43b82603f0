#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace conclave::core {

/// Expertise domain of an agent roster.
enum class ExpertGroup { Math, Finance, Medical, Law };

/// Task domain of a benchmark instance.
enum class TaskDomain { Math, Business, Health, Law };

/// How the experts of a roster collaborate.
enum class Paradigm { DiversityDriven, StructuredWorkflow };

/// Primary reasoning type demanded by a task domain.
enum class ReasoningType { Mathematical, FactualRecall, Contextual };

/// Where a roster came from.
enum class Provenance { Shipped, Generated, Augmented };

// Lowercase identifiers used in JSON files, file names and CLI flags.
std::string_view token(ExpertGroup g);
std::string_view token(TaskDomain d);
std::string_view token(Paradigm p);
std::string_view token(ReasoningType r);
std::string_view token(Provenance p);

// Human-facing names used in prompts and reports.
std::string_view display_name(ExpertGroup g);
std::string_view display_name(TaskDomain d);
std::string_view display_name(Paradigm p);

// Case-insensitive parsing of the token (and display) forms.
std::optional<ExpertGroup> parse_expert_group(std::string_view s);
std::optional<TaskDomain> parse_task_domain(std::string_view s);
std::optional<Paradigm> parse_paradigm(std::string_view s);
std::optional<Provenance> parse_provenance(std::string_view s);

ReasoningType reasoning_type_of(TaskDomain d);

/// The expert group whose knowledge domain matches a task domain
/// (Math<->Math, Business<->Finance, Health<->Medical, Law<->Law).
ExpertGroup aligned_group(TaskDomain d);
TaskDomain home_domain(ExpertGroup g);

constexpr std::size_t kMaxOptions = 10;

/// 0 -> 'A', 1 -> 'B', ... 9 -> 'J'.
char option_letter(std::uint32_t index);
std::optional<std::uint32_t> option_index_from_letter(char letter);

/// One agent's identity inside a roster.
struct ExpertSpec {
    ExpertGroup expert_group = ExpertGroup::Math;
    std::string formal_role;
    std::string responsibility;
    std::uint32_t index = 0;  // unique among experts sharing formal_role
    Paradigm paradigm = Paradigm::DiversityDriven;

    bool operator==(const ExpertSpec&) const = default;
};

/// Ordered group of experts collaborating on one instance.
struct AgentRoster {
    ExpertGroup domain_tag = ExpertGroup::Math;
    Paradigm paradigm = Paradigm::DiversityDriven;
    std::uint32_t size = 0;
    std::vector<ExpertSpec> experts;
    Provenance provenance = Provenance::Generated;

    bool operator==(const AgentRoster&) const = default;
};

/// One multiple-choice question.
struct TaskInstance {
    std::string instance_id;
    TaskDomain domain = TaskDomain::Math;
    std::string question;
    std::vector<std::string> options;  // positions map to letters A..J
    std::uint32_t gold_index = 0;

    ReasoningType reasoning_type() const { return reasoning_type_of(domain); }

    bool operator==(const TaskInstance&) const = default;
};

/// One agent's contribution to a collaboration.
struct AgentTurn {
    std::uint32_t agent_index = 0;  // 1-based position in the roster
    std::string full_output;
    std::optional<std::uint32_t> final_answer;  // absent when extraction failed
    std::uint64_t reasoning_tokens = 0;
    std::uint64_t answer_tokens = 0;

    bool operator==(const AgentTurn&) const = default;
};

/// Complete transcript of one collaboration run.
struct CollaborationResult {
    std::string instance_id;
    std::string roster_fingerprint;
    std::vector<AgentTurn> turns;
    std::optional<std::uint32_t> system_answer;  // the last agent's final answer
    bool correct = false;
    std::uint64_t wall_time_ms = 0;

    bool operator==(const CollaborationResult&) const = default;
};

}  // namespace conclave::core
