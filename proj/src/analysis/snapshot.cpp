#include "conclave/analysis/snapshot.hpp"

#include <fstream>
#include <string>

#include "conclave/core/serde.hpp"

namespace conclave::analysis {

using nlohmann::json;

namespace {

template <typename Enum, typename Parser>
Enum parse_enum(const json& j, const char* field, Parser parse, const char* what) {
    const auto parsed = parse(j.at(field).get<std::string>());
    if (!parsed) {
        throw AnalysisError("snapshot: '" + j.at(field).get<std::string>() + "' is not a " +
                            what);
    }
    return *parsed;
}

json cell_key_to_json(const CellKey& key) {
    return json{{"domain", std::string(core::token(key.domain))},
                {"group", std::string(core::token(key.group))},
                {"paradigm", std::string(core::token(key.paradigm))},
                {"size", key.size}};
}

CellKey cell_key_from_json(const json& j) {
    CellKey key;
    key.domain = parse_enum<core::TaskDomain>(j, "domain", core::parse_task_domain, "task domain");
    key.group = parse_enum<core::ExpertGroup>(j, "group", core::parse_expert_group,
                                              "expert group");
    key.paradigm = parse_enum<core::Paradigm>(j, "paradigm", core::parse_paradigm, "paradigm");
    key.size = j.at("size").get<std::uint32_t>();
    return key;
}

json summary_to_json(const DistributionSummary& s) {
    json deciles = json::array();
    for (const double d : s.deciles) deciles.push_back(d);
    return json{{"n", s.n}, {"mean", s.mean}, {"median", s.median}, {"deciles", deciles}};
}

DistributionSummary summary_from_json(const json& j) {
    DistributionSummary s;
    s.n = j.at("n").get<std::uint64_t>();
    s.mean = j.at("mean").get<double>();
    s.median = j.at("median").get<double>();
    const json& deciles = j.at("deciles");
    if (!deciles.is_array() || deciles.size() != s.deciles.size()) {
        throw AnalysisError("snapshot: deciles must be an array of 9 numbers");
    }
    for (std::size_t i = 0; i < s.deciles.size(); ++i) s.deciles[i] = deciles[i].get<double>();
    return s;
}

template <typename T>
std::map<core::TaskDomain, T> domain_map_from_json(const json& j) {
    std::map<core::TaskDomain, T> out;
    for (const auto& [name, value] : j.items()) {
        const auto domain = core::parse_task_domain(name);
        if (!domain) throw AnalysisError("snapshot: '" + name + "' is not a task domain");
        out[*domain] = value.template get<T>();
    }
    return out;
}

}  // namespace

json to_json(const AnalysisSnapshot& snapshot) {
    json doc = json::object();

    if (snapshot.accuracy) {
        json cells = json::array();
        for (const auto& [key, stats] : snapshot.accuracy->cells) {
            json cell = cell_key_to_json(key);
            cell["correct"] = stats.correct;
            cell["total"] = stats.total;
            cell["total_tokens"] = stats.total_tokens;
            cells.push_back(std::move(cell));
        }
        doc["accuracy"] = std::move(cells);
    }

    if (snapshot.alignment) {
        json deltas = json::array();
        for (const AlignmentDelta& d : *snapshot.alignment) {
            deltas.push_back(json{
                {"paradigm", std::string(core::token(d.paradigm))},
                {"size", d.size},
                {"task_domain", std::string(core::token(d.task_domain))},
                {"aligned_group", std::string(core::token(d.aligned_group))},
                {"best_alternative_group", std::string(core::token(d.best_alternative_group))},
                {"aligned_acc", d.aligned_acc},
                {"best_alternative_acc", d.best_alternative_acc},
                {"delta_abs", d.delta_abs},
                {"delta_rel", d.delta_rel}});
        }
        doc["alignment"] = std::move(deltas);
    }

    if (snapshot.relevance) {
        json counts = json::object();
        for (const auto& [task_domain, row] : snapshot.relevance->counts) {
            json row_json = json::object();
            for (const auto& [expertise, n] : row) {
                row_json[std::string(core::token(expertise))] = n;
            }
            counts[std::string(core::token(task_domain))] = std::move(row_json);
        }
        json queried = json::object();
        for (const auto& [d, n] : snapshot.relevance->queried) {
            queried[std::string(core::token(d))] = n;
        }
        json dropped = json::object();
        for (const auto& [d, n] : snapshot.relevance->dropped) {
            dropped[std::string(core::token(d))] = n;
        }
        doc["relevance"] = json{{"samples_per_domain", snapshot.relevance->samples_per_domain},
                                {"counts", std::move(counts)},
                                {"queried", std::move(queried)},
                                {"dropped", std::move(dropped)}};
    }

    if (snapshot.diversity) {
        json instances = json::array();
        for (const InstanceDiversity& inst : snapshot.diversity->instances) {
            instances.push_back(json{{"instance_id", inst.instance_id},
                                     {"cell", cell_key_to_json(inst.cell)},
                                     {"pairwise", inst.pairwise},
                                     {"mean_similarity", inst.mean_similarity}});
        }
        json configs = json::array();
        for (const auto& [key, config] : snapshot.diversity->by_config) {
            configs.push_back(json{{"cell", cell_key_to_json(key)},
                                   {"instance_mean", summary_to_json(config.instance_mean)},
                                   {"pooled_pairs", summary_to_json(config.pooled_pairs)}});
        }
        doc["diversity"] = json{{"instances", std::move(instances)},
                                {"by_config", std::move(configs)},
                                {"skipped_short", snapshot.diversity->skipped_short}};
    }

    if (snapshot.scaling) {
        json entries = json::array();
        for (const ScalingEntry& entry : snapshot.scaling->entries) {
            json e = json{{"cell", cell_key_to_json(entry.key)},
                          {"baseline_acc", entry.baseline_acc},
                          {"acc", entry.acc},
                          {"baseline_tokens", entry.baseline_tokens},
                          {"tokens", entry.tokens},
                          {"perf_improvement_rel", entry.perf_improvement_rel},
                          {"token_overhead_rel", entry.token_overhead_rel}};
            if (entry.pot) e["pot"] = *entry.pot;
            if (entry.note) e["note"] = *entry.note;
            entries.push_back(std::move(e));
        }
        doc["scaling"] = json{{"baseline_size", snapshot.scaling->baseline_size},
                              {"entries", std::move(entries)},
                              {"skipped_notes", snapshot.scaling->skipped_notes}};
    }

    return doc;
}

AnalysisSnapshot snapshot_from_json(const json& j) {
    AnalysisSnapshot snapshot;
    if (!j.is_object()) throw AnalysisError("snapshot: top level must be a JSON object");

    if (j.contains("accuracy")) {
        AccuracyMatrix matrix;
        for (const json& cell : j.at("accuracy")) {
            CellStats stats;
            stats.correct = cell.at("correct").get<std::uint64_t>();
            stats.total = cell.at("total").get<std::uint64_t>();
            stats.total_tokens = cell.at("total_tokens").get<std::uint64_t>();
            if (stats.correct > stats.total) {
                throw AnalysisError("snapshot: accuracy cell with correct > total");
            }
            if (!matrix.cells.emplace(cell_key_from_json(cell), stats).second) {
                throw AnalysisError("snapshot: duplicate accuracy cell");
            }
        }
        snapshot.accuracy = std::move(matrix);
    }

    if (j.contains("alignment")) {
        std::vector<AlignmentDelta> deltas;
        for (const json& d : j.at("alignment")) {
            AlignmentDelta delta;
            delta.paradigm = parse_enum<core::Paradigm>(d, "paradigm", core::parse_paradigm,
                                                        "paradigm");
            delta.size = d.at("size").get<std::uint32_t>();
            delta.task_domain = parse_enum<core::TaskDomain>(d, "task_domain",
                                                             core::parse_task_domain,
                                                             "task domain");
            delta.aligned_group = parse_enum<core::ExpertGroup>(d, "aligned_group",
                                                                core::parse_expert_group,
                                                                "expert group");
            delta.best_alternative_group = parse_enum<core::ExpertGroup>(
                d, "best_alternative_group", core::parse_expert_group, "expert group");
            delta.aligned_acc = d.at("aligned_acc").get<double>();
            delta.best_alternative_acc = d.at("best_alternative_acc").get<double>();
            delta.delta_abs = d.at("delta_abs").get<double>();
            delta.delta_rel = d.at("delta_rel").get<double>();
            deltas.push_back(delta);
        }
        snapshot.alignment = std::move(deltas);
    }

    if (j.contains("relevance")) {
        const json& r = j.at("relevance");
        RelevanceMatrix matrix;
        matrix.samples_per_domain = r.at("samples_per_domain").get<std::uint64_t>();
        for (const auto& [name, row] : r.at("counts").items()) {
            const auto domain = core::parse_task_domain(name);
            if (!domain) throw AnalysisError("snapshot: '" + name + "' is not a task domain");
            matrix.counts[*domain] = domain_map_from_json<std::uint64_t>(row);
        }
        matrix.queried = domain_map_from_json<std::uint64_t>(r.at("queried"));
        matrix.dropped = domain_map_from_json<std::uint64_t>(r.at("dropped"));
        snapshot.relevance = std::move(matrix);
    }

    if (j.contains("diversity")) {
        const json& d = j.at("diversity");
        DiversityReport report;
        for (const json& inst : d.at("instances")) {
            InstanceDiversity div;
            div.instance_id = inst.at("instance_id").get<std::string>();
            div.cell = cell_key_from_json(inst.at("cell"));
            div.pairwise = inst.at("pairwise").get<std::vector<double>>();
            div.mean_similarity = inst.at("mean_similarity").get<double>();
            report.instances.push_back(std::move(div));
        }
        for (const json& config : d.at("by_config")) {
            ConfigDiversity diversity;
            diversity.instance_mean = summary_from_json(config.at("instance_mean"));
            diversity.pooled_pairs = summary_from_json(config.at("pooled_pairs"));
            if (!report.by_config.emplace(cell_key_from_json(config.at("cell")), diversity)
                     .second) {
                throw AnalysisError("snapshot: duplicate diversity cell");
            }
        }
        report.skipped_short = d.at("skipped_short").get<std::uint64_t>();
        snapshot.diversity = std::move(report);
    }

    if (j.contains("scaling")) {
        const json& s = j.at("scaling");
        ScalingReport report;
        report.baseline_size = s.at("baseline_size").get<std::uint32_t>();
        for (const json& e : s.at("entries")) {
            ScalingEntry entry;
            entry.key = cell_key_from_json(e.at("cell"));
            entry.baseline_acc = e.at("baseline_acc").get<double>();
            entry.acc = e.at("acc").get<double>();
            entry.baseline_tokens = e.at("baseline_tokens").get<std::uint64_t>();
            entry.tokens = e.at("tokens").get<std::uint64_t>();
            entry.perf_improvement_rel = e.at("perf_improvement_rel").get<double>();
            entry.token_overhead_rel = e.at("token_overhead_rel").get<double>();
            if (e.contains("pot")) entry.pot = e.at("pot").get<double>();
            if (e.contains("note")) entry.note = e.at("note").get<std::string>();
            report.entries.push_back(std::move(entry));
        }
        report.skipped_notes = s.at("skipped_notes").get<std::vector<std::string>>();
        snapshot.scaling = std::move(report);
    }

    return snapshot;
}

void save_snapshot(const AnalysisSnapshot& snapshot, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw AnalysisError("snapshot: cannot write " + path.string());
    out << to_json(snapshot).dump(2) << '\n';
}

AnalysisSnapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw AnalysisError("snapshot: cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw AnalysisError("snapshot " + path.string() + ": " + e.what());
    }
    try {
        return snapshot_from_json(j);
    } catch (const json::exception& e) {
        throw AnalysisError("snapshot " + path.string() + ": " + e.what());
    }
}

}  // namespace conclave::analysis
