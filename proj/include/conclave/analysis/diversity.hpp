#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "conclave/analysis/accuracy.hpp"
#include "conclave/backends/embedder.hpp"
#include "conclave/harness/runner.hpp"

namespace conclave::analysis {

/// Throws AnalysisError on dimension mismatch or a zero-norm vector.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

struct InstanceDiversity {
    std::string instance_id;
    CellKey cell;
    std::vector<double> pairwise;  // upper triangle, (1,2), (1,3), ..., row-major
    double mean_similarity = 0.0;
};

/// Distribution summary over a set of similarities. Deciles use the
/// nearest-rank method (ceil(p*n)), so they are exact sample values.
struct DistributionSummary {
    std::uint64_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    std::array<double, 9> deciles{};  // 10%, 20%, ..., 90%
};

DistributionSummary summarize(std::vector<double> values);

/// Whether similarities should be aggregated per instance first or pooled
/// across all pairs is a judgment call; both views are computed and labeled
/// so downstream consumers can pick.
struct ConfigDiversity {
    DistributionSummary instance_mean;  // over per-instance mean similarities
    DistributionSummary pooled_pairs;   // over every pairwise similarity
};

struct DiversityReport {
    std::vector<InstanceDiversity> instances;
    std::map<CellKey, ConfigDiversity> by_config;
    std::uint64_t skipped_short = 0;  // records with fewer than 2 turns
};

/// Embeds each turn's full output (rationale included) one instance at a
/// time and computes all n(n-1)/2 pairwise cosine similarities.
DiversityReport compute_diversity(const std::vector<harness::RunRecord>& records,
                                  backends::Embedder& embedder);

}  // namespace conclave::analysis
