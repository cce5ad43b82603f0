#include "conclave/core/types.hpp"

#include <algorithm>
#include <cctype>

namespace conclave::core {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::string_view token(ExpertGroup g) {
    switch (g) {
        case ExpertGroup::Math: return "math";
        case ExpertGroup::Finance: return "finance";
        case ExpertGroup::Medical: return "medical";
        case ExpertGroup::Law: return "law";
    }
    return "math";
}

std::string_view token(TaskDomain d) {
    switch (d) {
        case TaskDomain::Math: return "math";
        case TaskDomain::Business: return "business";
        case TaskDomain::Health: return "health";
        case TaskDomain::Law: return "law";
    }
    return "math";
}

std::string_view token(Paradigm p) {
    return p == Paradigm::DiversityDriven ? "diversity" : "workflow";
}

std::string_view token(ReasoningType r) {
    switch (r) {
        case ReasoningType::Mathematical: return "mathematical";
        case ReasoningType::FactualRecall: return "factual_recall";
        case ReasoningType::Contextual: return "contextual";
    }
    return "mathematical";
}

std::string_view token(Provenance p) {
    switch (p) {
        case Provenance::Shipped: return "shipped";
        case Provenance::Generated: return "generated";
        case Provenance::Augmented: return "augmented";
    }
    return "generated";
}

std::string_view display_name(ExpertGroup g) {
    switch (g) {
        case ExpertGroup::Math: return "Math";
        case ExpertGroup::Finance: return "Finance";
        case ExpertGroup::Medical: return "Medical";
        case ExpertGroup::Law: return "Law";
    }
    return "Math";
}

std::string_view display_name(TaskDomain d) {
    switch (d) {
        case TaskDomain::Math: return "Math";
        case TaskDomain::Business: return "Business";
        case TaskDomain::Health: return "Health";
        case TaskDomain::Law: return "Law";
    }
    return "Math";
}

std::string_view display_name(Paradigm p) {
    return p == Paradigm::DiversityDriven ? "Diversity-Driven" : "Structured Workflow";
}

std::optional<ExpertGroup> parse_expert_group(std::string_view s) {
    const std::string v = lower(s);
    if (v == "math") return ExpertGroup::Math;
    if (v == "finance") return ExpertGroup::Finance;
    if (v == "medical") return ExpertGroup::Medical;
    if (v == "law") return ExpertGroup::Law;
    return std::nullopt;
}

std::optional<TaskDomain> parse_task_domain(std::string_view s) {
    const std::string v = lower(s);
    if (v == "math") return TaskDomain::Math;
    if (v == "business") return TaskDomain::Business;
    if (v == "health") return TaskDomain::Health;
    if (v == "law") return TaskDomain::Law;
    return std::nullopt;
}

std::optional<Paradigm> parse_paradigm(std::string_view s) {
    const std::string v = lower(s);
    if (v == "diversity" || v == "diversity-driven" || v == "diversity_driven")
        return Paradigm::DiversityDriven;
    if (v == "workflow" || v == "structured workflow" || v == "structured_workflow")
        return Paradigm::StructuredWorkflow;
    return std::nullopt;
}

std::optional<Provenance> parse_provenance(std::string_view s) {
    const std::string v = lower(s);
    if (v == "shipped") return Provenance::Shipped;
    if (v == "generated") return Provenance::Generated;
    if (v == "augmented") return Provenance::Augmented;
    return std::nullopt;
}

ReasoningType reasoning_type_of(TaskDomain d) {
    switch (d) {
        case TaskDomain::Math:
        case TaskDomain::Business:
            return ReasoningType::Mathematical;
        case TaskDomain::Health:
        case TaskDomain::Law:
            return ReasoningType::Contextual;
    }
    return ReasoningType::Contextual;
}

ExpertGroup aligned_group(TaskDomain d) {
    switch (d) {
        case TaskDomain::Math: return ExpertGroup::Math;
        case TaskDomain::Business: return ExpertGroup::Finance;
        case TaskDomain::Health: return ExpertGroup::Medical;
        case TaskDomain::Law: return ExpertGroup::Law;
    }
    return ExpertGroup::Math;
}

TaskDomain home_domain(ExpertGroup g) {
    switch (g) {
        case ExpertGroup::Math: return TaskDomain::Math;
        case ExpertGroup::Finance: return TaskDomain::Business;
        case ExpertGroup::Medical: return TaskDomain::Health;
        case ExpertGroup::Law: return TaskDomain::Law;
    }
    return TaskDomain::Math;
}

char option_letter(std::uint32_t index) {
    return static_cast<char>('A' + index);
}

std::optional<std::uint32_t> option_index_from_letter(char letter) {
    const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(letter)));
    if (u < 'A' || u > 'J') return std::nullopt;
    return static_cast<std::uint32_t>(u - 'A');
}

}  // namespace conclave::core
