#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "conclave/core/types.hpp"

namespace conclave::protocol {

/// Protocol-state violation: the orchestration invariants were broken
/// (e.g. history requested for an agent that does not follow the turns).
class ProtocolError : public std::logic_error {
public:
    explicit ProtocolError(const std::string& what) : std::logic_error(what) {}
};

/// Answer rendered for an agent whose output had no parseable boxed token.
inline constexpr std::string_view kUnparsed = "UNPARSED";

struct EarlierFinal {
    std::uint32_t agent_index = 0;  // 1-based
    std::string formal_role;
    std::string answer;  // option letter, or kUnparsed

    bool operator==(const EarlierFinal&) const = default;
};

/// What agent i is allowed to see: the complete output of agent i-1 and
/// only the final answers of agents 1..i-2.
struct VisibleHistory {
    std::optional<std::string> predecessor_full;  // present iff i >= 2
    std::vector<EarlierFinal> earlier_finals;     // agents 1..i-2, ascending

    bool operator==(const VisibleHistory&) const = default;
};

/// Assembles the history visible to agent next_agent_index. The roster
/// supplies the formal roles shown next to earlier agents' answers.
/// Pre: turns_so_far.size() == next_agent_index - 1 (ProtocolError otherwise).
VisibleHistory build_history(const core::AgentRoster& roster,
                             const std::vector<core::AgentTurn>& turns_so_far,
                             std::uint32_t next_agent_index);

/// Finds the final answer in an agent's output: the LAST occurrence of
/// \boxed{...} whose content — after trimming and case-folding — is a single
/// option letter (or 1-based numeral) within range. Tolerates the doubled
/// braces (\boxed{{B}}) the prompt template's escaping can leak into outputs.
/// Pre: n_options in 2..10.
std::optional<std::uint32_t> extract_boxed(std::string_view full_output, std::size_t n_options);

}  // namespace conclave::protocol
