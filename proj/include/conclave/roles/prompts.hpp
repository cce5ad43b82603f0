#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "conclave/core/types.hpp"
#include "conclave/protocol/history.hpp"

namespace conclave::roles {

/// A generated role listing could not be interpreted as the requested roster.
class RoleParseError : public std::runtime_error {
public:
    explicit RoleParseError(const std::string& what) : std::runtime_error(what) {}
};

struct AgentPrompts {
    std::string system_prompt;
    std::string user_prompt;
};

/// Prompt asking a model to invent a size-3 expert group for the given
/// paradigm. Group generation is defined only at size 3; larger groups are
/// produced by augmentation. Throws std::invalid_argument when size != 3.
std::string render_generation_prompt(core::ExpertGroup group, core::Paradigm paradigm,
                                     std::uint32_t size);

/// Serializes a roster as a numbered role listing:
///
///   I. Role Name
///   Responsibilities:
///   <responsibility text>
///
/// This is the format embedded in augmentation prompts and the one
/// parse_generated_roster reads back (the two are inverses).
std::string format_roster_description(const core::AgentRoster& roster);

/// Prompt asking a model to grow a size-3 roster to target_size, embedding
/// the base roster via format_roster_description. Throws
/// std::invalid_argument unless base.size == 3 and target_size > 3.
std::string render_augmentation_prompt(const core::AgentRoster& base, std::uint32_t target_size);

/// Parses a role listing (model output or our own serialization) into a
/// roster. Role headers are uppercase roman numerals ("IV. Some Role");
/// arabic-numbered lines are treated as responsibility content, which is
/// what keeps numbered duty lists intact. Indices are assigned 0..n-1 in
/// listed order. Throws RoleParseError when the listing does not contain
/// exactly target_size roles or a role/responsibility is empty.
core::AgentRoster parse_generated_roster(std::string_view llm_output, core::ExpertGroup group,
                                         core::Paradigm paradigm, std::uint32_t target_size);

/// Renders the history block of the user prompt. Empty history (agent 1)
/// renders as the literal marker "(none)" so the prompt keeps its shape.
std::string render_history(const protocol::VisibleHistory& history);

/// Question plus lettered options ("A. ..." per line).
std::string render_problem(const core::TaskInstance& instance);

/// Fills the role-play system/user prompt pair for one agent turn.
AgentPrompts render_agent_prompts(const core::ExpertSpec& expert,
                                  const core::TaskInstance& instance,
                                  const protocol::VisibleHistory& history);

}  // namespace conclave::roles
