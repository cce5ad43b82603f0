#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "conclave/analysis/accuracy.hpp"
#include "conclave/analysis/diversity.hpp"
#include "conclave/analysis/relevance.hpp"
#include "conclave/analysis/scaling.hpp"

namespace conclave::analysis {

/// Machine-readable snapshot of whichever analyses ran — the hand-off
/// between `analyze` (computes, may talk to backends) and `report`
/// (renders, pure). Absent sections stay absent through a round trip.
struct AnalysisSnapshot {
    std::optional<AccuracyMatrix> accuracy;
    std::optional<std::vector<AlignmentDelta>> alignment;
    std::optional<RelevanceMatrix> relevance;
    std::optional<DiversityReport> diversity;
    std::optional<ScalingReport> scaling;
};

nlohmann::json to_json(const AnalysisSnapshot& snapshot);
AnalysisSnapshot snapshot_from_json(const nlohmann::json& j);

void save_snapshot(const AnalysisSnapshot& snapshot, const std::filesystem::path& path);
AnalysisSnapshot load_snapshot(const std::filesystem::path& path);

}  // namespace conclave::analysis
