#include "conclave/roles/prompts.hpp"

#include <array>
#include <cctype>
#include <sstream>
#include <vector>

namespace conclave::roles {

namespace {

constexpr std::array<std::string_view, 10> kRoman = {"I",  "II", "III", "IV", "V",
                                                     "VI", "VII", "VIII", "IX", "X"};

std::string_view trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// If the trimmed line starts with an uppercase roman numeral followed by a
// dot, returns the text after the dot (the role name, possibly empty).
std::optional<std::string> match_role_header(std::string_view line) {
    const std::string_view t = trim(line);
    for (const std::string_view numeral : kRoman) {
        if (t.size() > numeral.size() && t.substr(0, numeral.size()) == numeral &&
            t[numeral.size()] == '.') {
            return std::string(trim(t.substr(numeral.size() + 1)));
        }
        if (t == numeral) return std::nullopt;  // bare numeral without dot: not a header
    }
    return std::nullopt;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.emplace_back(text.substr(start));
            break;
        }
        lines.emplace_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

std::string join_body(const std::vector<std::string>& lines) {
    std::size_t b = 0;
    std::size_t e = lines.size();
    while (b < e && trim(lines[b]).empty()) ++b;
    while (e > b && trim(lines[e - 1]).empty()) --e;
    std::string out;
    for (std::size_t i = b; i < e; ++i) {
        if (i > b) out += '\n';
        out += lines[i];
    }
    return std::string(trim(out));
}

}  // namespace

std::string render_generation_prompt(core::ExpertGroup group, core::Paradigm paradigm,
                                     std::uint32_t size) {
    if (size != 3) {
        throw std::invalid_argument("render_generation_prompt: groups are generated at size 3");
    }
    const std::string domain(core::display_name(group));
    if (paradigm == core::Paradigm::StructuredWorkflow) {
        return "Generate me an expert group in " + domain +
               " domain of size three, assigning them roles of solver, critic and coordinator "
               "together with their detailed responsibilities.";
    }
    return "Generate an expert group of size 3 in the " + domain +
           " domain, each specializing in a distinct sub-domain of " + domain +
           ". Provide a detailed configuration for each expert, including their role and "
           "responsibility, ensuring that their roles are complementary and collectively form a "
           "balanced, high-functioning team capable of addressing complex challenges in the "
           "domain.\n"
           "For example, an expert in a sub-domain of business could be \"Global Compliance "
           "Architect\".";
}

std::string format_roster_description(const core::AgentRoster& roster) {
    std::string out;
    for (std::size_t i = 0; i < roster.experts.size(); ++i) {
        if (i > 0) out += "\n\n";
        if (i < kRoman.size()) {
            out += kRoman[i];
        } else {
            out += std::to_string(i + 1);  // past X; never reached at supported sizes
        }
        out += ". ";
        out += roster.experts[i].formal_role;
        out += "\nResponsibilities:\n";
        out += roster.experts[i].responsibility;
    }
    return out;
}

std::string render_augmentation_prompt(const core::AgentRoster& base, std::uint32_t target_size) {
    if (base.size != 3 || base.experts.size() != 3) {
        throw std::invalid_argument("render_augmentation_prompt: base roster must have size 3");
    }
    if (target_size <= 3) {
        throw std::invalid_argument("render_augmentation_prompt: target size must exceed 3");
    }
    const std::string domain(core::display_name(base.domain_tag));
    std::string out = "Here is a expert group configuration in " + domain +
                      " domain of size 3: " + format_roster_description(base) + ".\n";
    if (base.paradigm == core::Paradigm::StructuredWorkflow) {
        out += "Please augment the group size to " + std::to_string(target_size) +
               " by assigning new experts with roles of solver, critic, strategist and "
               "coordinator.\n";
    } else {
        out += "Please augment the group size to " + std::to_string(target_size) +
               " by assigning new experts with roles of expert in other sub-domains in " + domain +
               " together with their responsibilities.\n";
    }
    out += "Output your configuration following the format of the given group configuration.";
    return out;
}

core::AgentRoster parse_generated_roster(std::string_view llm_output, core::ExpertGroup group,
                                         core::Paradigm paradigm, std::uint32_t target_size) {
    struct RawRole {
        std::string name;
        std::vector<std::string> body;
    };
    std::vector<RawRole> raw;

    const std::vector<std::string> lines = split_lines(llm_output);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (auto name = match_role_header(lines[i])) {
            RawRole role;
            role.name = *name;
            // Header with the name wrapped onto the following line.
            if (role.name.empty()) {
                while (i + 1 < lines.size() && trim(lines[i + 1]).empty()) ++i;
                if (i + 1 < lines.size() && !match_role_header(lines[i + 1])) {
                    role.name = trim(lines[++i]);
                }
            }
            raw.push_back(std::move(role));
        } else if (!raw.empty()) {
            raw.back().body.push_back(lines[i]);
        }
    }

    if (raw.size() != target_size) {
        throw RoleParseError("role listing: expected " + std::to_string(target_size) +
                             " roles, found " + std::to_string(raw.size()));
    }

    core::AgentRoster roster;
    roster.domain_tag = group;
    roster.paradigm = paradigm;
    roster.size = target_size;
    roster.provenance = core::Provenance::Generated;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        // Drop a leading "Responsibilities:" label; text after the colon counts.
        std::vector<std::string> body = raw[i].body;
        for (std::size_t j = 0; j < body.size(); ++j) {
            const std::string_view t = trim(body[j]);
            if (t.empty()) continue;
            const std::string folded = lower(t);
            if (folded == "responsibilities:" || folded == "responsibilities") {
                body[j].clear();
            } else if (folded.rfind("responsibilities:", 0) == 0) {
                body[j] = std::string(trim(std::string_view(t).substr(17)));
            }
            break;
        }

        core::ExpertSpec expert;
        expert.expert_group = group;
        expert.paradigm = paradigm;
        expert.index = static_cast<std::uint32_t>(i);
        expert.formal_role = raw[i].name;
        expert.responsibility = join_body(body);
        if (expert.formal_role.empty()) {
            throw RoleParseError("role listing: role " + std::to_string(i + 1) + " has no name");
        }
        if (expert.responsibility.empty()) {
            throw RoleParseError("role listing: role '" + expert.formal_role +
                                 "' has no responsibilities");
        }
        roster.experts.push_back(std::move(expert));
    }
    return roster;
}

std::string render_history(const protocol::VisibleHistory& history) {
    if (!history.predecessor_full && history.earlier_finals.empty()) return "(none)";
    std::string out;
    for (const protocol::EarlierFinal& entry : history.earlier_finals) {
        out += "Agent " + std::to_string(entry.agent_index) + " (" + entry.formal_role +
               "): " + entry.answer + "\n";
    }
    if (history.predecessor_full) out += *history.predecessor_full;
    return out;
}

std::string render_problem(const core::TaskInstance& instance) {
    std::string out = instance.question + "\nOptions:";
    for (std::size_t i = 0; i < instance.options.size(); ++i) {
        out += '\n';
        out += core::option_letter(static_cast<std::uint32_t>(i));
        out += ". ";
        out += instance.options[i];
    }
    return out;
}

AgentPrompts render_agent_prompts(const core::ExpertSpec& expert,
                                  const core::TaskInstance& instance,
                                  const protocol::VisibleHistory& history) {
    const std::string title = expert.formal_role;
    const std::string domain(core::display_name(expert.expert_group));

    AgentPrompts prompts;
    prompts.system_prompt = "[ROLE ASSIGNMENT]\n"
                            "You are a " + title + " specializing in " + domain + ".\n"
                            "Your professional responsibility is to " + expert.responsibility +
                            ".\n"
                            "IMPORTANT: Think and respond EXACTLY as a real " + title + " in " +
                            domain + " would.\n"
                            "Use terminology, methods, and perspectives specific to your "
                            "professional field.";

    prompts.user_prompt = "Previous discussion: " + render_history(history) + "\n"
                          "PROBLEM TO SOLVE: " + render_problem(instance) + "\n"
                          "RESPONSE INSTRUCTIONS:\n"
                          "1. Begin with: \"As a " + title + " in " + domain + ", I...\"\n"
                          "2. Analyze the problem using your professional expertise\n"
                          "3. Provide your expert recommendation\n"
                          "4. End with: \"My answer is \\boxed{{X}}\" where X is the answer "
                          "index\n"
                          "\n"
                          "REQUIREMENTS:\n"
                          "- Maintain your " + title + " perspective throughout\n"
                          "- Use terminology from " + domain + "\n"
                          "- Keep response under 150 words\n"
                          "- Your answer MUST be in \\boxed{{}} format\n"
                          "\n"
                          "Remember: You are a " + title + ", not an AI assistant. Think and "
                          "respond accordingly.";
    return prompts;
}

}  // namespace conclave::roles
