#include "conclave/core/validate.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace conclave::core {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::vector<std::string> validate_roster(const AgentRoster& roster) {
    std::vector<std::string> violations;

    if (roster.experts.size() != roster.size) {
        violations.push_back("length mismatch: declared size " + std::to_string(roster.size) +
                             " but " + std::to_string(roster.experts.size()) + " experts listed");
    }

    std::set<std::pair<std::string, std::uint32_t>> seen;
    for (std::size_t i = 0; i < roster.experts.size(); ++i) {
        const ExpertSpec& e = roster.experts[i];
        const std::string at = "expert " + std::to_string(i);
        if (e.formal_role.empty()) violations.push_back(at + ": formal_role is empty");
        if (e.responsibility.empty()) violations.push_back(at + ": responsibility is empty");
        if (e.paradigm != roster.paradigm) {
            violations.push_back(at + ": paradigm differs from the roster's");
        }
        if (e.expert_group != roster.domain_tag) {
            violations.push_back(at + ": expert_group differs from the roster's");
        }
        if (!seen.insert({lower(e.formal_role), e.index}).second) {
            violations.push_back(at + ": duplicate (formal_role, index) pair '" + e.formal_role +
                                 "', " + std::to_string(e.index));
        }
    }

    if (roster.paradigm == Paradigm::StructuredWorkflow && roster.size == 3) {
        for (const char* required : {"solver", "critic", "coordinator"}) {
            const bool found = std::any_of(
                roster.experts.begin(), roster.experts.end(),
                [&](const ExpertSpec& e) { return lower(e.formal_role) == required; });
            if (!found) {
                violations.push_back(std::string("required role absent: ") + required);
            }
        }
    }

    return violations;
}

}  // namespace conclave::core
