#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <vector>

#include "conclave/analysis/error.hpp"
#include "conclave/core/types.hpp"
#include "conclave/harness/runner.hpp"

namespace conclave::analysis {

struct CellKey {
    core::TaskDomain domain = core::TaskDomain::Math;
    core::ExpertGroup group = core::ExpertGroup::Math;
    core::Paradigm paradigm = core::Paradigm::DiversityDriven;
    std::uint32_t size = 0;

    auto operator<=>(const CellKey&) const = default;
};

/// Exact rational accuracy: kept as counts so oracle comparisons never
/// accumulate float drift; converted to a decimal only where reported.
struct CellStats {
    std::uint64_t correct = 0;
    std::uint64_t total = 0;
    std::uint64_t total_tokens = 0;  // sum over turns of reasoning + answer

    double accuracy() const {
        return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
    }

    bool operator==(const CellStats&) const = default;
};

struct AccuracyMatrix {
    std::map<CellKey, CellStats> cells;
};

/// One cell per (domain, group, paradigm, size) present in the records.
/// Failed instances count incorrect — their denominators stay fixed.
/// Throws AnalysisError when records is empty.
AccuracyMatrix compute_accuracy_matrix(const std::vector<harness::RunRecord>& records);

struct AlignmentDelta {
    core::Paradigm paradigm = core::Paradigm::DiversityDriven;
    std::uint32_t size = 0;
    core::TaskDomain task_domain = core::TaskDomain::Math;
    core::ExpertGroup aligned_group = core::ExpertGroup::Math;
    core::ExpertGroup best_alternative_group = core::ExpertGroup::Math;
    double aligned_acc = 0.0;
    double best_alternative_acc = 0.0;
    double delta_abs = 0.0;  // aligned - best alternative, as a fraction
    double delta_rel = 0.0;  // delta_abs / best_alternative

    bool operator==(const AlignmentDelta&) const = default;
};

/// The canonical task-domain -> expert-group pairing: math -> math,
/// business -> finance, health -> medical, law -> law.
std::map<core::TaskDomain, core::ExpertGroup> default_alignment();

/// Computes, per (paradigm, size) slice and task domain, the gap between
/// the domain-aligned expert group and the best-performing alternative.
/// Every slice domain must carry its aligned cell and at least one
/// alternative (AnalysisError otherwise). Rounding to presentation form
/// (one decimal of a percent) happens only in the report writers.
std::vector<AlignmentDelta> compute_alignment_deltas(
    const AccuracyMatrix& matrix, const std::map<core::TaskDomain, core::ExpertGroup>& alignment);

inline std::vector<AlignmentDelta> compute_alignment_deltas(const AccuracyMatrix& matrix) {
    return compute_alignment_deltas(matrix, default_alignment());
}

}  // namespace conclave::analysis
