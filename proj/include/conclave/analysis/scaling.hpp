#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conclave/analysis/accuracy.hpp"

namespace conclave::analysis {

/// Relative gains of one scaled-up cell against its size-baseline cell
/// (same domain, group, paradigm).
struct ScalingEntry {
    CellKey key;  // key.size > baseline
    double baseline_acc = 0.0;
    double acc = 0.0;
    std::uint64_t baseline_tokens = 0;
    std::uint64_t tokens = 0;
    double perf_improvement_rel = 0.0;  // (acc - baseline_acc) / baseline_acc
    double token_overhead_rel = 0.0;    // (tokens - baseline_tokens) / baseline_tokens
    std::optional<double> pot;          // perf/token; absent unless overhead > 0
    std::optional<std::string> note;    // why pot is absent

    bool operator==(const ScalingEntry&) const = default;
};

struct ScalingReport {
    std::uint32_t baseline_size = 3;
    std::vector<ScalingEntry> entries;       // ordered by key
    std::vector<std::string> skipped_notes;  // rows dropped entirely (zero baselines)
};

/// Compares every cell with size > baseline_size against its baseline cell.
/// A missing baseline is an error (AnalysisError). A zero-accuracy or
/// zero-token baseline makes the relative measures undefined: the row is
/// skipped with a note instead of emitting NaN/Inf. Zero or negative token
/// overhead leaves the entry in place with pot absent and a note.
ScalingReport compute_scaling_report(const AccuracyMatrix& matrix,
                                     std::uint32_t baseline_size = 3);

}  // namespace conclave::analysis
