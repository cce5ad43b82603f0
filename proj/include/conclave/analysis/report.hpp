#pragma once

#include <filesystem>
#include <vector>

#include "conclave/analysis/accuracy.hpp"
#include "conclave/analysis/diversity.hpp"
#include "conclave/analysis/relevance.hpp"
#include "conclave/analysis/scaling.hpp"

namespace conclave::analysis {

// Writers are pure presentations of already-computed reports: fixed column
// orders, fixed float formats, keys emitted in sorted order — identical
// inputs produce byte-identical files. Non-finite values are refused
// (AnalysisError), never written. Relative deltas are rounded to one
// decimal of a percent here and nowhere upstream.

void write_accuracy_csv(const AccuracyMatrix& matrix, const std::filesystem::path& path);
void write_alignment_csv(const std::vector<AlignmentDelta>& deltas,
                         const std::filesystem::path& path);
void write_relevance_csv(const RelevanceMatrix& matrix, const std::filesystem::path& path);
void write_diversity_csv(const DiversityReport& report, const std::filesystem::path& path);
void write_scaling_csv(const ScalingReport& report, const std::filesystem::path& path);

/// Self-contained heatmap of the relevance counts; cell color scales
/// linearly from the smallest to the largest count.
void write_relevance_svg(const RelevanceMatrix& matrix, const std::filesystem::path& path);

/// Pointers identify which analyses ran; null sections are omitted.
struct ReportBundle {
    const AccuracyMatrix* accuracy = nullptr;
    const std::vector<AlignmentDelta>* alignment = nullptr;
    const RelevanceMatrix* relevance = nullptr;
    const DiversityReport* diversity = nullptr;
    const ScalingReport* scaling = nullptr;
};

void write_summary_json(const ReportBundle& bundle, const std::filesystem::path& path);

}  // namespace conclave::analysis
