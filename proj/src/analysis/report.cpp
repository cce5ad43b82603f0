#include "conclave/analysis/report.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <utility>

#include <nlohmann/json.hpp>

namespace conclave::analysis {

using nlohmann::json;

namespace {

constexpr std::array<core::TaskDomain, 4> kAllDomains = {
    core::TaskDomain::Math, core::TaskDomain::Business, core::TaskDomain::Health,
    core::TaskDomain::Law};

std::string fmt(double value, const char* spec) {
    if (!std::isfinite(value)) {
        throw AnalysisError("report: refusing to write a non-finite value");
    }
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), spec, value);
    return buffer;
}

std::string fmt6(double value) { return fmt(value, "%.6f"); }
std::string fmt1(double value) { return fmt(value, "%.1f"); }

double round1(double value) { return std::round(value * 10.0) / 10.0; }

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw AnalysisError("report: cannot write " + path.string());
    return out;
}

std::string key_prefix(const CellKey& key) {
    return std::string(core::token(key.domain)) + "," + std::string(core::token(key.group)) +
           "," + std::string(core::token(key.paradigm)) + "," + std::to_string(key.size);
}

json key_json(const CellKey& key) {
    return json{{"domain", std::string(core::token(key.domain))},
                {"group", std::string(core::token(key.group))},
                {"paradigm", std::string(core::token(key.paradigm))},
                {"size", key.size}};
}

json summary_json(const DistributionSummary& summary) {
    json deciles = json::array();
    for (const double d : summary.deciles) deciles.push_back(d);
    return json{{"n", summary.n},
                {"mean", summary.mean},
                {"median", summary.median},
                {"deciles", deciles}};
}

}  // namespace

void write_accuracy_csv(const AccuracyMatrix& matrix, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "domain,group,paradigm,size,correct,total,accuracy,total_tokens\n";
    for (const auto& [key, stats] : matrix.cells) {
        out << key_prefix(key) << ',' << stats.correct << ',' << stats.total << ','
            << fmt6(stats.accuracy()) << ',' << stats.total_tokens << '\n';
    }
}

void write_alignment_csv(const std::vector<AlignmentDelta>& deltas,
                         const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "paradigm,size,task_domain,aligned_group,aligned_acc,best_alternative_group,"
           "best_alternative_acc,delta_abs_pp,delta_rel_pct\n";
    for (const AlignmentDelta& delta : deltas) {
        out << core::token(delta.paradigm) << ',' << delta.size << ','
            << core::token(delta.task_domain) << ',' << core::token(delta.aligned_group) << ','
            << fmt6(delta.aligned_acc) << ',' << core::token(delta.best_alternative_group) << ','
            << fmt6(delta.best_alternative_acc) << ',' << fmt1(delta.delta_abs * 100.0) << ','
            << fmt1(delta.delta_rel * 100.0) << '\n';
    }
}

void write_relevance_csv(const RelevanceMatrix& matrix, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "task_domain";
    for (const core::TaskDomain d : kAllDomains) out << ',' << core::token(d);
    out << ",queried,dropped,row_total\n";
    for (const auto& [task_domain, row] : matrix.counts) {
        out << core::token(task_domain);
        std::uint64_t total = 0;
        for (const core::TaskDomain d : kAllDomains) {
            const auto it = row.find(d);
            const std::uint64_t count = it == row.end() ? 0 : it->second;
            total += count;
            out << ',' << count;
        }
        const auto queried = matrix.queried.find(task_domain);
        const auto dropped = matrix.dropped.find(task_domain);
        out << ',' << (queried == matrix.queried.end() ? 0 : queried->second) << ','
            << (dropped == matrix.dropped.end() ? 0 : dropped->second) << ',' << total << '\n';
    }
}

void write_diversity_csv(const DiversityReport& report, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "domain,group,paradigm,size,aggregation,n,mean,median,d10,d20,d30,d40,d50,d60,d70,d80,"
           "d90\n";
    for (const auto& [key, config] : report.by_config) {
        for (const auto& [label, summary] :
             {std::pair<const char*, const DistributionSummary&>{"instance_mean",
                                                                 config.instance_mean},
              std::pair<const char*, const DistributionSummary&>{"pooled_pairs",
                                                                 config.pooled_pairs}}) {
            out << key_prefix(key) << ',' << label << ',' << summary.n << ','
                << fmt6(summary.mean) << ',' << fmt6(summary.median);
            for (const double d : summary.deciles) out << ',' << fmt6(d);
            out << '\n';
        }
    }
}

void write_scaling_csv(const ScalingReport& report, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "domain,group,paradigm,size,baseline_size,baseline_acc,acc,baseline_tokens,tokens,"
           "perf_improvement_rel,token_overhead_rel,pot,note\n";
    for (const ScalingEntry& entry : report.entries) {
        out << key_prefix(entry.key) << ',' << report.baseline_size << ','
            << fmt6(entry.baseline_acc) << ',' << fmt6(entry.acc) << ',' << entry.baseline_tokens
            << ',' << entry.tokens << ',' << fmt6(entry.perf_improvement_rel) << ','
            << fmt6(entry.token_overhead_rel) << ',' << (entry.pot ? fmt6(*entry.pot) : "") << ','
            << csv_escape(entry.note.value_or("")) << '\n';
    }
}

void write_relevance_svg(const RelevanceMatrix& matrix, const std::filesystem::path& path) {
    constexpr int kCellW = 110;
    constexpr int kCellH = 48;
    constexpr int kLeft = 110;
    constexpr int kTop = 50;

    std::vector<core::TaskDomain> rows;
    for (const auto& [task_domain, row] : matrix.counts) rows.push_back(task_domain);

    std::uint64_t min_count = 0;
    std::uint64_t max_count = 0;
    bool first = true;
    for (const auto& [task_domain, row] : matrix.counts) {
        for (const core::TaskDomain d : kAllDomains) {
            const auto it = row.find(d);
            const std::uint64_t count = it == row.end() ? 0 : it->second;
            if (first || count < min_count) min_count = count;
            if (first || count > max_count) max_count = count;
            first = false;
        }
    }

    const int width = kLeft + kCellW * static_cast<int>(kAllDomains.size()) + 20;
    const int height = kTop + kCellH * static_cast<int>(rows.size()) + 30;

    std::ofstream out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
    out << "  <text x=\"" << kLeft / 2 << "\" y=\"20\">relevance counts</text>\n";

    for (std::size_t c = 0; c < kAllDomains.size(); ++c) {
        out << "  <text x=\"" << kLeft + static_cast<int>(c) * kCellW + kCellW / 2 << "\" y=\""
            << kTop - 10 << "\" text-anchor=\"middle\">" << core::token(kAllDomains[c])
            << "</text>\n";
    }

    for (std::size_t r = 0; r < rows.size(); ++r) {
        const int y = kTop + static_cast<int>(r) * kCellH;
        out << "  <text x=\"" << kLeft - 10 << "\" y=\"" << y + kCellH / 2 + 5
            << "\" text-anchor=\"end\">" << core::token(rows[r]) << "</text>\n";
        const auto& row = matrix.counts.at(rows[r]);
        for (std::size_t c = 0; c < kAllDomains.size(); ++c) {
            const auto it = row.find(kAllDomains[c]);
            const std::uint64_t count = it == row.end() ? 0 : it->second;
            // Linear min->max ramp from white to a deep blue, integer math
            // so output bytes are platform-independent.
            const std::uint64_t span = max_count - min_count;
            const std::uint64_t t256 = span == 0 ? 0 : ((count - min_count) * 256) / span;
            const int red = static_cast<int>(255 - (185 * t256) / 256);
            const int green = static_cast<int>(255 - (125 * t256) / 256);
            const int blue = static_cast<int>(255 - (75 * t256) / 256);
            const int x = kLeft + static_cast<int>(c) * kCellW;
            out << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCellW
                << "\" height=\"" << kCellH << "\" fill=\"rgb(" << red << ',' << green << ','
                << blue << ")\" stroke=\"#444\"/>\n";
            out << "  <text x=\"" << x + kCellW / 2 << "\" y=\"" << y + kCellH / 2 + 5
                << "\" text-anchor=\"middle\">" << count << "</text>\n";
        }
    }
    out << "</svg>\n";
}

void write_summary_json(const ReportBundle& bundle, const std::filesystem::path& path) {
    json doc;

    if (bundle.accuracy != nullptr) {
        json cells = json::array();
        for (const auto& [key, stats] : bundle.accuracy->cells) {
            json cell = key_json(key);
            cell["correct"] = stats.correct;
            cell["total"] = stats.total;
            cell["accuracy"] = stats.accuracy();
            cell["total_tokens"] = stats.total_tokens;
            cells.push_back(std::move(cell));
        }
        doc["accuracy"] = std::move(cells);
    }

    if (bundle.alignment != nullptr) {
        // Group by (paradigm, size) slice; the contextual average is the
        // mean of the two contextual domains' ROUNDED relative gains, so it
        // matches what the presentation table shows.
        std::map<std::pair<core::Paradigm, std::uint32_t>, json> slices;
        for (const AlignmentDelta& delta : *bundle.alignment) {
            json& slice = slices[{delta.paradigm, delta.size}];
            if (slice.is_null()) {
                slice = json{{"paradigm", std::string(core::token(delta.paradigm))},
                             {"size", delta.size},
                             {"deltas", json::array()}};
            }
            slice["deltas"].push_back(
                json{{"task_domain", std::string(core::token(delta.task_domain))},
                     {"aligned_group", std::string(core::token(delta.aligned_group))},
                     {"best_alternative_group",
                      std::string(core::token(delta.best_alternative_group))},
                     {"aligned_acc", delta.aligned_acc},
                     {"best_alternative_acc", delta.best_alternative_acc},
                     {"delta_abs_pp", delta.delta_abs * 100.0},
                     {"delta_rel_pct", delta.delta_rel * 100.0}});
        }
        json alignment = json::array();
        for (auto& [slice_key, slice] : slices) {
            std::optional<double> health;
            std::optional<double> law;
            for (const AlignmentDelta& delta : *bundle.alignment) {
                if (delta.paradigm != slice_key.first || delta.size != slice_key.second) continue;
                if (delta.task_domain == core::TaskDomain::Health) {
                    health = round1(delta.delta_rel * 100.0);
                }
                if (delta.task_domain == core::TaskDomain::Law) {
                    law = round1(delta.delta_rel * 100.0);
                }
            }
            if (health && law) {
                slice["contextual_domains_avg_rel_improvement_pct"] = (*health + *law) / 2.0;
            }
            alignment.push_back(std::move(slice));
        }
        doc["alignment"] = std::move(alignment);
    }

    if (bundle.relevance != nullptr) {
        json rows;
        for (const auto& [task_domain, row] : bundle.relevance->counts) {
            json counts;
            for (const core::TaskDomain d : kAllDomains) {
                const auto it = row.find(d);
                counts[std::string(core::token(d))] = it == row.end() ? 0 : it->second;
            }
            rows[std::string(core::token(task_domain))] = std::move(counts);
        }
        json queried;
        for (const auto& [domain, n] : bundle.relevance->queried) {
            queried[std::string(core::token(domain))] = n;
        }
        json dropped;
        for (const auto& [domain, n] : bundle.relevance->dropped) {
            dropped[std::string(core::token(domain))] = n;
        }
        doc["relevance"] = json{{"samples_per_domain", bundle.relevance->samples_per_domain},
                                {"counts", std::move(rows)},
                                {"queried", std::move(queried)},
                                {"dropped", std::move(dropped)}};
    }

    if (bundle.diversity != nullptr) {
        json configs = json::array();
        for (const auto& [key, config] : bundle.diversity->by_config) {
            json entry = key_json(key);
            entry["instance_mean"] = summary_json(config.instance_mean);
            entry["pooled_pairs"] = summary_json(config.pooled_pairs);
            configs.push_back(std::move(entry));
        }
        doc["diversity"] = json{{"by_config", std::move(configs)},
                                {"skipped_short_runs", bundle.diversity->skipped_short}};
    }

    if (bundle.scaling != nullptr) {
        json entries = json::array();
        for (const ScalingEntry& entry : bundle.scaling->entries) {
            json e = key_json(entry.key);
            e["baseline_acc"] = entry.baseline_acc;
            e["acc"] = entry.acc;
            e["baseline_tokens"] = entry.baseline_tokens;
            e["tokens"] = entry.tokens;
            e["perf_improvement_rel"] = entry.perf_improvement_rel;
            e["token_overhead_rel"] = entry.token_overhead_rel;
            if (entry.pot) e["pot"] = *entry.pot;
            if (entry.note) e["note"] = *entry.note;
            entries.push_back(std::move(e));
        }
        doc["scaling"] = json{{"baseline_size", bundle.scaling->baseline_size},
                              {"entries", std::move(entries)},
                              {"skipped", bundle.scaling->skipped_notes}};
    }

    std::ofstream out = open_out(path);
    out << doc.dump(2) << '\n';
}

}  // namespace conclave::analysis
