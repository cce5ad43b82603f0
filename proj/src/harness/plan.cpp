#include "conclave/harness/plan.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "conclave/core/serde.hpp"

namespace conclave::harness {

using nlohmann::json;

namespace {

// nlohmann stores parsed non-negative literals as unsigned but in-memory
// initializer lists as signed, so check the value, not the storage class.
bool is_nonnegative_integer(const json& j) {
    if (j.is_number_unsigned()) return true;
    return j.is_number_integer() && j.get<std::int64_t>() >= 0;
}

template <typename Enum, typename Parser>
std::vector<Enum> decode_enum_list(const json& j, const std::string& field, Parser parse) {
    if (!j.contains(field) || !j.at(field).is_array()) {
        throw PlanError("plan: '" + field + "' must be an array");
    }
    std::vector<Enum> out;
    for (const json& item : j.at(field)) {
        if (!item.is_string()) {
            throw PlanError("plan: '" + field + "' entries must be strings");
        }
        const auto parsed = parse(item.get<std::string>());
        if (!parsed) {
            throw PlanError("plan: '" + field + "' has unknown entry '" +
                            item.get<std::string>() + "'");
        }
        out.push_back(*parsed);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty()) {
        throw PlanError("plan: '" + field + "' must not be empty");
    }
    return out;
}

}  // namespace

ExperimentPlan plan_from_json(const json& j) {
    if (!j.is_object()) throw PlanError("plan: top level must be an object");

    ExperimentPlan plan;
    if (!j.contains("dataset_path") || !j.at("dataset_path").is_string()) {
        throw PlanError("plan: 'dataset_path' must be a string");
    }
    plan.dataset_path = j.at("dataset_path").get<std::string>();

    plan.domains = decode_enum_list<core::TaskDomain>(j, "domains", core::parse_task_domain);
    plan.groups = decode_enum_list<core::ExpertGroup>(j, "groups", core::parse_expert_group);
    plan.paradigms = decode_enum_list<core::Paradigm>(j, "paradigms", core::parse_paradigm);

    if (!j.contains("sizes") || !j.at("sizes").is_array() || j.at("sizes").empty()) {
        throw PlanError("plan: 'sizes' must be a non-empty array");
    }
    for (const json& item : j.at("sizes")) {
        if (!is_nonnegative_integer(item)) {
            throw PlanError("plan: 'sizes' entries must be integers");
        }
        const auto size = item.get<std::uint32_t>();
        if (size != 3 && size != 6 && size != 10) {
            throw PlanError("plan: size " + std::to_string(size) + " is not one of 3, 6, 10");
        }
        plan.sizes.push_back(size);
    }
    std::sort(plan.sizes.begin(), plan.sizes.end());
    plan.sizes.erase(std::unique(plan.sizes.begin(), plan.sizes.end()), plan.sizes.end());

    if (j.contains("sample_limit") && !j.at("sample_limit").is_null()) {
        if (!is_nonnegative_integer(j.at("sample_limit"))) {
            throw PlanError("plan: 'sample_limit' must be a positive integer");
        }
        plan.sample_limit = j.at("sample_limit").get<std::uint64_t>();
        if (*plan.sample_limit < 1) throw PlanError("plan: 'sample_limit' must be >= 1");
    }

    if (!j.contains("seed") || !is_nonnegative_integer(j.at("seed"))) {
        throw PlanError("plan: 'seed' must be a non-negative integer");
    }
    plan.seed = j.at("seed").get<std::uint64_t>();

    if (!j.contains("backend_profile") || !j.at("backend_profile").is_string()) {
        throw PlanError("plan: 'backend_profile' must be a string");
    }
    plan.backend_profile = j.at("backend_profile").get<std::string>();
    if (plan.backend_profile.empty()) {
        throw PlanError("plan: 'backend_profile' must not be empty");
    }
    return plan;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw PlanError("plan: cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw PlanError("plan: " + path.string() + ": " + e.what());
    }
    ExperimentPlan plan = plan_from_json(j);
    // A relative dataset path means "next to the plan file", matching how
    // config files resolve their own relative paths.
    const std::filesystem::path dataset(plan.dataset_path);
    if (dataset.is_relative()) {
        plan.dataset_path = (path.parent_path() / dataset).string();
    }
    return plan;
}

json to_json(const ExperimentPlan& plan) {
    json domains = json::array();
    for (const auto d : plan.domains) domains.push_back(std::string(core::token(d)));
    json groups = json::array();
    for (const auto g : plan.groups) groups.push_back(std::string(core::token(g)));
    json paradigms = json::array();
    for (const auto p : plan.paradigms) paradigms.push_back(std::string(core::token(p)));

    json j{
        {"backend_profile", plan.backend_profile},
        {"dataset_path", plan.dataset_path},
        {"domains", domains},
        {"groups", groups},
        {"paradigms", paradigms},
        {"seed", plan.seed},
        {"sizes", plan.sizes},
    };
    j["sample_limit"] = plan.sample_limit ? json(*plan.sample_limit) : json(nullptr);
    return j;
}

std::string plan_fingerprint(const ExperimentPlan& plan) {
    return core::hex64(core::fnv1a64(core::canonical_dump(to_json(plan))));
}

std::vector<PlanCell> expand_cells(const ExperimentPlan& plan) {
    std::vector<PlanCell> cells;
    for (const auto domain : plan.domains) {
        for (const auto group : plan.groups) {
            for (const auto paradigm : plan.paradigms) {
                for (const auto size : plan.sizes) {
                    cells.push_back({domain, group, paradigm, size});
                }
            }
        }
    }
    return cells;
}

std::vector<std::string> select_instances(std::vector<std::string> instance_ids,
                                          core::TaskDomain domain, std::uint64_t seed,
                                          std::optional<std::uint64_t> sample_limit) {
    std::sort(instance_ids.begin(), instance_ids.end());

    // Seeded Fisher-Yates over the sorted ids. std::shuffle is not used
    // because its draw sequence is implementation-defined; modulo on raw
    // engine output is biased but stable everywhere, which is what the
    // cross-machine reproducibility contract needs.
    std::mt19937_64 rng(core::fnv1a64(std::to_string(seed) + ":" +
                                      std::string(core::token(domain))));
    for (std::size_t i = instance_ids.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(instance_ids[i - 1], instance_ids[j]);
    }

    if (sample_limit && *sample_limit < instance_ids.size()) {
        instance_ids.resize(static_cast<std::size_t>(*sample_limit));
    }
    return instance_ids;
}

}  // namespace conclave::harness
