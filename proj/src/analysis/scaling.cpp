#include "conclave/analysis/scaling.hpp"

namespace conclave::analysis {

namespace {

std::string cell_name(const CellKey& key) {
    return std::string(core::token(key.domain)) + "/" + std::string(core::token(key.group)) +
           "/" + std::string(core::token(key.paradigm)) + "/" + std::to_string(key.size);
}

}  // namespace

ScalingReport compute_scaling_report(const AccuracyMatrix& matrix, std::uint32_t baseline_size) {
    ScalingReport report;
    report.baseline_size = baseline_size;

    for (const auto& [key, stats] : matrix.cells) {
        if (key.size <= baseline_size) continue;

        const CellKey baseline_key{key.domain, key.group, key.paradigm, baseline_size};
        const auto baseline = matrix.cells.find(baseline_key);
        if (baseline == matrix.cells.end()) {
            throw AnalysisError("scaling: no size-" + std::to_string(baseline_size) +
                                " baseline for " + cell_name(key));
        }

        const double baseline_acc = baseline->second.accuracy();
        const std::uint64_t baseline_tokens = baseline->second.total_tokens;
        if (baseline_acc == 0.0) {
            report.skipped_notes.push_back(cell_name(key) +
                                           ": baseline accuracy is zero; relative improvement "
                                           "undefined, row skipped");
            continue;
        }
        if (baseline_tokens == 0) {
            report.skipped_notes.push_back(cell_name(key) +
                                           ": baseline token count is zero; overhead undefined, "
                                           "row skipped");
            continue;
        }

        ScalingEntry entry;
        entry.key = key;
        entry.baseline_acc = baseline_acc;
        entry.acc = stats.accuracy();
        entry.baseline_tokens = baseline_tokens;
        entry.tokens = stats.total_tokens;
        entry.perf_improvement_rel = (entry.acc - baseline_acc) / baseline_acc;
        entry.token_overhead_rel =
            (static_cast<double>(entry.tokens) - static_cast<double>(baseline_tokens)) /
            static_cast<double>(baseline_tokens);
        if (entry.token_overhead_rel > 0.0) {
            entry.pot = entry.perf_improvement_rel / entry.token_overhead_rel;
        } else {
            entry.note = entry.token_overhead_rel == 0.0
                             ? "zero token overhead; PoT undefined"
                             : "negative token overhead; PoT undefined";
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

}  // namespace conclave::analysis
