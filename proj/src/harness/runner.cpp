#include "conclave/harness/runner.hpp"

#include <algorithm>
#include <atomic>
#include <ctime>
#include <map>
#include <set>
#include <thread>

#include "conclave/core/serde.hpp"
#include "conclave/harness/dataset.hpp"

namespace conclave::harness {

using nlohmann::json;

json to_json(const RunRecord& record) {
    json j{
        {"config",
         json{{"backend_profile", record.config.backend_profile},
              {"max_tokens", record.config.max_tokens},
              {"temperature", record.config.temperature}}},
        {"created_at", record.created_at},
        {"domain", std::string(core::token(record.domain))},
        {"group", std::string(core::token(record.group))},
        {"instance_id", record.instance_id},
        {"paradigm", std::string(core::token(record.paradigm))},
        {"plan_fingerprint", record.plan_fingerprint},
        {"result", core::to_json(record.result)},
        {"roster_fingerprint", record.roster_fingerprint},
        {"size", record.size},
    };
    if (record.failure_reason) j["failure_reason"] = *record.failure_reason;
    return j;
}

namespace {

template <typename Parser>
auto parse_enum_field(const json& j, const char* field, Parser parse) {
    if (!j.contains(field) || !j.at(field).is_string()) {
        throw HarnessError(std::string("run record: '") + field + "' must be a string");
    }
    const auto parsed = parse(j.at(field).get<std::string>());
    if (!parsed) {
        throw HarnessError(std::string("run record: unknown ") + field + " '" +
                           j.at(field).get<std::string>() + "'");
    }
    return *parsed;
}

std::string require_record_string(const json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_string()) {
        throw HarnessError(std::string("run record: '") + field + "' must be a string");
    }
    return j.at(field).get<std::string>();
}

std::string record_key(const RunRecord& record) {
    return record.plan_fingerprint + '\x1f' + record.roster_fingerprint + '\x1f' +
           record.instance_id;
}

}  // namespace

RunRecord run_record_from_json(const json& j) {
    if (!j.is_object()) throw HarnessError("run record: not an object");

    RunRecord record;
    record.plan_fingerprint = require_record_string(j, "plan_fingerprint");
    record.roster_fingerprint = require_record_string(j, "roster_fingerprint");
    record.instance_id = require_record_string(j, "instance_id");
    record.domain = parse_enum_field(j, "domain", core::parse_task_domain);
    record.group = parse_enum_field(j, "group", core::parse_expert_group);
    record.paradigm = parse_enum_field(j, "paradigm", core::parse_paradigm);
    if (!j.contains("size") || !j.at("size").is_number_integer() ||
        j.at("size").get<std::int64_t>() < 0) {
        throw HarnessError("run record: 'size' must be a non-negative integer");
    }
    record.size = j.at("size").get<std::uint32_t>();

    if (!j.contains("result")) throw HarnessError("run record: 'result' missing");
    try {
        record.result = core::collaboration_result_from_json(j.at("result"));
    } catch (const core::SchemaError& e) {
        throw HarnessError(std::string("run record: ") + e.what());
    }

    if (!j.contains("config") || !j.at("config").is_object()) {
        throw HarnessError("run record: 'config' must be an object");
    }
    const json& config = j.at("config");
    record.config.backend_profile = require_record_string(config, "backend_profile");
    if (!config.contains("max_tokens") || !config.at("max_tokens").is_number_integer() ||
        config.at("max_tokens").get<std::int64_t>() < 0) {
        throw HarnessError("run record: 'config.max_tokens' must be a non-negative integer");
    }
    record.config.max_tokens = config.at("max_tokens").get<std::uint32_t>();
    if (!config.contains("temperature") || !config.at("temperature").is_number()) {
        throw HarnessError("run record: 'config.temperature' must be a number");
    }
    record.config.temperature = config.at("temperature").get<double>();

    record.created_at = require_record_string(j, "created_at");
    if (j.contains("failure_reason")) {
        record.failure_reason = require_record_string(j, "failure_reason");
    }
    return record;
}

std::string now_utc_iso8601() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

RunLog::RunLog(std::filesystem::path path) : path_(std::move(path)) {
    if (path_.has_parent_path()) {
        std::filesystem::create_directories(path_.parent_path());
    }

    // Drop a partial final line left by a killed writer: everything after
    // the last newline is an incomplete append. The lost record reruns.
    if (std::filesystem::exists(path_)) {
        std::ifstream in(path_, std::ios::binary);
        std::string contents((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
        in.close();
        const std::size_t last_newline = contents.rfind('\n');
        const std::uintmax_t keep =
            last_newline == std::string::npos ? 0 : static_cast<std::uintmax_t>(last_newline + 1);
        if (keep != contents.size()) {
            std::filesystem::resize_file(path_, keep);
        }
    }

    out_.open(path_, std::ios::app);
    if (!out_) {
        throw HarnessError("run log: cannot open " + path_.string() + " for appending");
    }
}

void RunLog::append(const RunRecord& record) {
    const std::string line = core::canonical_dump(to_json(record));
    std::lock_guard<std::mutex> lock(mutex_);
    out_ << line << '\n';
    out_.flush();
    if (!out_) {
        throw HarnessError("run log: write failed for " + path_.string());
    }
}

std::vector<RunRecord> RunLog::read(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) return {};
    std::ifstream in(path);
    if (!in) throw HarnessError("run log: cannot open " + path.string());

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);

    std::vector<RunRecord> records;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        RunRecord record;
        try {
            record = run_record_from_json(json::parse(lines[i]));
        } catch (const std::exception& e) {
            if (i + 1 == lines.size()) continue;  // crash tail
            throw HarnessError("run log " + path.string() + ": corrupt line " +
                               std::to_string(i + 1) + ": " + e.what());
        }
        if (seen.insert(record_key(record)).second) {
            records.push_back(std::move(record));
        }
    }
    return records;
}

ExecutionSummary execute_plan(const ExperimentPlan& plan, const roles::RoleLibrary& library,
                              backends::ChatBackend& backend,
                              const std::filesystem::path& log_dir,
                              const ExecutionOptions& options) {
    const std::vector<core::TaskInstance> instances = load_dataset(plan.dataset_path);

    // Pre-flight: every cell's roster must exist before any backend call.
    std::vector<std::string> missing;
    for (const core::ExpertGroup group : plan.groups) {
        for (const core::Paradigm paradigm : plan.paradigms) {
            for (const std::uint32_t size : plan.sizes) {
                if (library.find(group, paradigm, size) == nullptr) {
                    missing.push_back(roles::roster_filename(group, paradigm, size));
                }
            }
        }
    }
    if (!missing.empty()) {
        std::string message = "execute_plan: missing rosters:";
        for (const std::string& m : missing) message += ' ' + m;
        throw HarnessError(message);
    }

    std::map<std::string, const core::TaskInstance*> by_id;
    std::map<core::TaskDomain, std::vector<std::string>> ids_by_domain;
    for (const core::TaskInstance& instance : instances) {
        by_id[instance.instance_id] = &instance;
        ids_by_domain[instance.domain].push_back(instance.instance_id);
    }

    std::map<core::TaskDomain, std::vector<std::string>> selected;
    for (const core::TaskDomain domain : plan.domains) {
        selected[domain] =
            select_instances(ids_by_domain[domain], domain, plan.seed, plan.sample_limit);
    }

    const std::string plan_fp = plan_fingerprint(plan);
    RunLog log(log_dir / (plan_fp + ".jsonl"));

    std::set<std::string> done;
    for (const RunRecord& record : RunLog::read(log.path())) {
        if (record.plan_fingerprint == plan_fp) done.insert(record_key(record));
    }

    struct WorkItem {
        PlanCell cell;
        const core::TaskInstance* instance = nullptr;
        const core::AgentRoster* roster = nullptr;
        std::string roster_fp;
    };

    ExecutionSummary summary;
    summary.log_path = log.path();

    std::vector<WorkItem> work;
    for (const PlanCell& cell : expand_cells(plan)) {
        const core::AgentRoster* roster = library.find(cell.group, cell.paradigm, cell.size);
        const std::string roster_fp = core::roster_fingerprint(*roster);
        for (const std::string& id : selected[cell.domain]) {
            ++summary.planned;
            const std::string key = plan_fp + '\x1f' + roster_fp + '\x1f' + id;
            if (done.count(key) != 0) {
                ++summary.resumed;
                continue;
            }
            work.push_back({cell, by_id.at(id), roster, roster_fp});
        }
    }

    std::atomic<std::uint64_t> executed{0};
    std::atomic<std::uint64_t> failed{0};
    std::atomic<std::size_t> next{0};
    std::mutex progress_mutex;

    auto run_one = [&](const WorkItem& item) {
        RunRecord record;
        record.plan_fingerprint = plan_fp;
        record.roster_fingerprint = item.roster_fp;
        record.instance_id = item.instance->instance_id;
        record.domain = item.cell.domain;
        record.group = item.cell.group;
        record.paradigm = item.cell.paradigm;
        record.size = item.cell.size;
        record.config = {plan.backend_profile, options.sampling.max_tokens,
                         options.sampling.temperature};

        try {
            record.result =
                protocol::run_collaboration(*item.roster, *item.instance, backend,
                                            options.sampling);
        } catch (const protocol::CollaborationAborted& e) {
            record.result = e.partial();
            record.failure_reason = e.what();
            ++failed;
        }
        record.created_at = now_utc_iso8601();
        log.append(record);
        ++executed;

        if (options.progress) {
            std::lock_guard<std::mutex> lock(progress_mutex);
            options.progress(std::string(core::token(item.cell.domain)) + "/" +
                             std::string(core::token(item.cell.group)) + "/" +
                             std::string(core::token(item.cell.paradigm)) + "/" +
                             std::to_string(item.cell.size) + " " +
                             item.instance->instance_id +
                             (record.failure_reason ? " FAILED" : ""));
        }
    };

    const std::uint32_t parallelism = std::max<std::uint32_t>(1, options.parallelism);
    if (parallelism == 1 || work.size() <= 1) {
        for (const WorkItem& item : work) run_one(item);
    } else {
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::atomic<bool> abort{false};

        auto worker = [&] {
            while (!abort.load()) {
                const std::size_t i = next.fetch_add(1);
                if (i >= work.size()) break;
                try {
                    run_one(work[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    abort.store(true);
                    break;
                }
            }
        };

        std::vector<std::thread> threads;
        const std::size_t n_threads =
            std::min<std::size_t>(parallelism, work.size());
        threads.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    summary.executed = executed.load();
    summary.failed = failed.load();
    return summary;
}

}  // namespace conclave::harness
