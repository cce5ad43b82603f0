#include "conclave/analysis/diversity.hpp"

#include <algorithm>
#include <cmath>

namespace conclave::analysis {

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty()) {
        throw AnalysisError("cosine: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + ")");
    }
    double dot = 0.0;
    double norm_a = 0.0;
    double norm_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        norm_a += a[i] * a[i];
        norm_b += b[i] * b[i];
    }
    if (norm_a == 0.0 || norm_b == 0.0) {
        throw AnalysisError("cosine: zero-norm vector");
    }
    return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

DistributionSummary summarize(std::vector<double> values) {
    DistributionSummary summary;
    summary.n = values.size();
    if (values.empty()) return summary;

    double sum = 0.0;
    for (const double v : values) sum += v;
    summary.mean = sum / static_cast<double>(values.size());

    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    summary.median =
        n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    for (std::size_t d = 1; d <= 9; ++d) {
        // Nearest rank: smallest value with at least d/10 of the mass below-or-at.
        const std::size_t rank = (d * n + 9) / 10;  // ceil(d*n/10), >= 1
        summary.deciles[d - 1] = values[rank - 1];
    }
    return summary;
}

DiversityReport compute_diversity(const std::vector<harness::RunRecord>& records,
                                  backends::Embedder& embedder) {
    DiversityReport report;
    std::map<CellKey, std::vector<double>> means_by_cell;
    std::map<CellKey, std::vector<double>> pairs_by_cell;

    for (const harness::RunRecord& record : records) {
        const std::vector<core::AgentTurn>& turns = record.result.turns;
        if (turns.size() < 2) {
            ++report.skipped_short;
            continue;
        }

        std::vector<std::string> texts;
        texts.reserve(turns.size());
        for (const core::AgentTurn& turn : turns) texts.push_back(turn.full_output);
        const std::vector<backends::EmbeddingVector> vectors = embedder.embed(texts);

        InstanceDiversity instance;
        instance.instance_id = record.instance_id;
        instance.cell = CellKey{record.domain, record.group, record.paradigm, record.size};
        double sum = 0.0;
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            for (std::size_t j = i + 1; j < vectors.size(); ++j) {
                const double sim = cosine_similarity(vectors[i].values, vectors[j].values);
                instance.pairwise.push_back(sim);
                sum += sim;
            }
        }
        instance.mean_similarity = sum / static_cast<double>(instance.pairwise.size());

        means_by_cell[instance.cell].push_back(instance.mean_similarity);
        auto& pooled = pairs_by_cell[instance.cell];
        pooled.insert(pooled.end(), instance.pairwise.begin(), instance.pairwise.end());
        report.instances.push_back(std::move(instance));
    }

    for (auto& [cell, means] : means_by_cell) {
        ConfigDiversity config;
        config.instance_mean = summarize(std::move(means));
        config.pooled_pairs = summarize(std::move(pairs_by_cell[cell]));
        report.by_config[cell] = config;
    }
    return report;
}

}  // namespace conclave::analysis
