#include "conclave/protocol/history.hpp"

#include <cctype>

namespace conclave::protocol {

VisibleHistory build_history(const core::AgentRoster& roster,
                             const std::vector<core::AgentTurn>& turns_so_far,
                             std::uint32_t next_agent_index) {
    if (next_agent_index < 1) {
        throw ProtocolError("build_history: agent indices are 1-based");
    }
    if (turns_so_far.size() != next_agent_index - 1) {
        throw ProtocolError("build_history: agent " + std::to_string(next_agent_index) +
                            " requires " + std::to_string(next_agent_index - 1) +
                            " prior turns, got " + std::to_string(turns_so_far.size()));
    }

    VisibleHistory history;
    if (next_agent_index < 2) return history;

    history.predecessor_full = turns_so_far.back().full_output;
    for (std::size_t j = 0; j + 1 < turns_so_far.size(); ++j) {
        const core::AgentTurn& turn = turns_so_far[j];
        if (turn.agent_index != j + 1) {
            throw ProtocolError("build_history: turn " + std::to_string(j) +
                                " carries agent_index " + std::to_string(turn.agent_index));
        }
        if (j >= roster.experts.size()) {
            throw ProtocolError("build_history: more turns than roster experts");
        }
        EarlierFinal entry;
        entry.agent_index = turn.agent_index;
        entry.formal_role = roster.experts[j].formal_role;
        entry.answer = turn.final_answer
                           ? std::string(1, core::option_letter(*turn.final_answer))
                           : std::string(kUnparsed);
        history.earlier_finals.push_back(std::move(entry));
    }
    return history;
}

namespace {

std::string_view trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Interprets trimmed boxed content as an option index, or nullopt.
std::optional<std::uint32_t> interpret_content(std::string_view content, std::size_t n_options) {
    content = trim(content);
    if (content.empty()) return std::nullopt;

    if (content.size() == 1) {
        const char folded = static_cast<char>(
            std::toupper(static_cast<unsigned char>(content.front())));
        if (const auto index = core::option_index_from_letter(folded)) {
            if (*index < n_options) return index;
            return std::nullopt;
        }
    }

    // 1-based numeral, no leading zeros ("2" and "10" are valid, "02" is not).
    if (content.front() == '0') return std::nullopt;
    std::uint32_t value = 0;
    for (const char c : content) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        value = value * 10 + static_cast<std::uint32_t>(c - '0');
        if (value > core::kMaxOptions) return std::nullopt;
    }
    if (value == 0 || value > n_options) return std::nullopt;
    return value - 1;
}

}  // namespace

std::optional<std::uint32_t> extract_boxed(std::string_view full_output, std::size_t n_options) {
    if (n_options < 2 || n_options > core::kMaxOptions) {
        throw std::invalid_argument("extract_boxed: n_options must be in 2..10");
    }

    constexpr std::string_view kTag = "\\boxed{";
    std::optional<std::uint32_t> last_valid;
    std::size_t search = 0;
    while (true) {
        const std::size_t pos = full_output.find(kTag, search);
        if (pos == std::string_view::npos) break;
        // Resume just past the opening tag so a nested \boxed{...\boxed{X}...}
        // still yields its inner occurrence.
        search = pos + kTag.size();

        std::size_t body = pos + kTag.size();
        if (body < full_output.size() && full_output[body] == '{') ++body;  // \boxed{{X}}
        const std::size_t close = full_output.find('}', body);
        if (close == std::string_view::npos) continue;

        if (const auto index =
                interpret_content(full_output.substr(body, close - body), n_options)) {
            last_valid = index;
        }
    }
    return last_valid;
}

}  // namespace conclave::protocol
