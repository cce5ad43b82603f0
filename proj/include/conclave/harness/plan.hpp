#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conclave/core/types.hpp"

namespace conclave::harness {

class PlanError : public std::runtime_error {
public:
    explicit PlanError(const std::string& what) : std::runtime_error(what) {}
};

/// One experiment matrix: every listed domain is evaluated against every
/// (group, paradigm, size) roster over (a seeded subsample of) the dataset.
struct ExperimentPlan {
    std::string dataset_path;
    std::vector<core::TaskDomain> domains;
    std::vector<core::ExpertGroup> groups;
    std::vector<core::Paradigm> paradigms;
    std::vector<std::uint32_t> sizes;          // subset of {3, 6, 10}
    std::optional<std::uint64_t> sample_limit;  // absent = full domain split
    std::uint64_t seed = 0;
    std::string backend_profile;

    bool operator==(const ExperimentPlan&) const = default;
};

struct PlanCell {
    core::TaskDomain domain = core::TaskDomain::Math;
    core::ExpertGroup group = core::ExpertGroup::Math;
    core::Paradigm paradigm = core::Paradigm::DiversityDriven;
    std::uint32_t size = 0;

    bool operator==(const PlanCell&) const = default;
};

/// Decodes and canonicalizes a plan: selections are deduplicated and put in
/// enum/ascending order, so two files naming the same matrix in different
/// orders produce the same plan (and the same fingerprint). Throws PlanError
/// on empty selections, sizes outside {3,6,10}, or sample_limit < 1.
ExperimentPlan plan_from_json(const nlohmann::json& j);
ExperimentPlan load_plan(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentPlan& plan);

/// Hash of the canonical plan encoding; names the run log file.
std::string plan_fingerprint(const ExperimentPlan& plan);

/// The (domain, group, paradigm, size) cells in deterministic execution
/// order: domain-major, then group, paradigm, size.
std::vector<PlanCell> expand_cells(const ExperimentPlan& plan);

/// Deterministic per-domain subsample: instance ids are sorted, permuted by
/// a generator seeded from (seed, domain), and the first min(limit, n) are
/// kept — in permutation order. Identical across machines and runs.
std::vector<std::string> select_instances(std::vector<std::string> instance_ids,
                                          core::TaskDomain domain, std::uint64_t seed,
                                          std::optional<std::uint64_t> sample_limit);

}  // namespace conclave::harness
