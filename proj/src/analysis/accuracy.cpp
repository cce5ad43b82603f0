#include "conclave/analysis/accuracy.hpp"

#include <set>

namespace conclave::analysis {

AccuracyMatrix compute_accuracy_matrix(const std::vector<harness::RunRecord>& records) {
    if (records.empty()) {
        throw AnalysisError("accuracy: no records");
    }

    AccuracyMatrix matrix;
    for (const harness::RunRecord& record : records) {
        CellStats& stats =
            matrix.cells[CellKey{record.domain, record.group, record.paradigm, record.size}];
        stats.total += 1;
        if (record.result.correct) stats.correct += 1;
        for (const core::AgentTurn& turn : record.result.turns) {
            stats.total_tokens += turn.reasoning_tokens + turn.answer_tokens;
        }
    }
    return matrix;
}

std::map<core::TaskDomain, core::ExpertGroup> default_alignment() {
    std::map<core::TaskDomain, core::ExpertGroup> alignment;
    for (const core::TaskDomain domain : {core::TaskDomain::Math, core::TaskDomain::Business,
                                          core::TaskDomain::Health, core::TaskDomain::Law}) {
        alignment[domain] = core::aligned_group(domain);
    }
    return alignment;
}

std::vector<AlignmentDelta> compute_alignment_deltas(
    const AccuracyMatrix& matrix,
    const std::map<core::TaskDomain, core::ExpertGroup>& alignment) {
    // Slice the matrix by (paradigm, size); Table-1-style deltas compare
    // expert groups within one slice, over the domains that slice covers.
    std::map<std::pair<core::Paradigm, std::uint32_t>, std::set<core::TaskDomain>> slices;
    for (const auto& [key, stats] : matrix.cells) {
        slices[{key.paradigm, key.size}].insert(key.domain);
    }

    std::vector<AlignmentDelta> deltas;
    for (const auto& [slice, slice_domains] : slices) {
        const auto& [paradigm, size] = slice;
        for (const core::TaskDomain domain : slice_domains) {
            const auto aligned_it = alignment.find(domain);
            if (aligned_it == alignment.end()) {
                throw AnalysisError("alignment deltas: no aligned group mapped for domain " +
                                    std::string(core::token(domain)));
            }
            const core::ExpertGroup aligned_group = aligned_it->second;

            const auto aligned_cell =
                matrix.cells.find(CellKey{domain, aligned_group, paradigm, size});
            if (aligned_cell == matrix.cells.end()) {
                throw AnalysisError("alignment deltas: missing aligned cell " +
                                    std::string(core::token(domain)) + "/" +
                                    std::string(core::token(aligned_group)) + "/" +
                                    std::string(core::token(paradigm)) + "/" +
                                    std::to_string(size));
            }

            bool found_alternative = false;
            double best_acc = 0.0;
            core::ExpertGroup best_group = aligned_group;
            for (const core::ExpertGroup group :
                 {core::ExpertGroup::Math, core::ExpertGroup::Finance, core::ExpertGroup::Medical,
                  core::ExpertGroup::Law}) {
                if (group == aligned_group) continue;
                const auto cell = matrix.cells.find(CellKey{domain, group, paradigm, size});
                if (cell == matrix.cells.end()) continue;
                const double acc = cell->second.accuracy();
                if (!found_alternative || acc > best_acc) {
                    found_alternative = true;
                    best_acc = acc;
                    best_group = group;
                }
            }
            if (!found_alternative) {
                throw AnalysisError("alignment deltas: domain " +
                                    std::string(core::token(domain)) +
                                    " has no alternative-group cell in slice " +
                                    std::string(core::token(paradigm)) + "/" +
                                    std::to_string(size));
            }

            AlignmentDelta delta;
            delta.paradigm = paradigm;
            delta.size = size;
            delta.task_domain = domain;
            delta.aligned_group = aligned_group;
            delta.best_alternative_group = best_group;
            delta.aligned_acc = aligned_cell->second.accuracy();
            delta.best_alternative_acc = best_acc;
            delta.delta_abs = delta.aligned_acc - delta.best_alternative_acc;
            if (best_acc == 0.0) {
                if (delta.delta_abs != 0.0) {
                    throw AnalysisError(
                        "alignment deltas: relative delta over a zero-accuracy alternative is "
                        "undefined (domain " +
                        std::string(core::token(domain)) + ")");
                }
                delta.delta_rel = 0.0;
            } else {
                delta.delta_rel = delta.delta_abs / best_acc;
            }
            deltas.push_back(delta);
        }
    }
    return deltas;
}

}  // namespace conclave::analysis
