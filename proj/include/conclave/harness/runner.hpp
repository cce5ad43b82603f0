#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conclave/backends/chat.hpp"
#include "conclave/core/types.hpp"
#include "conclave/harness/plan.hpp"
#include "conclave/protocol/engine.hpp"
#include "conclave/roles/library.hpp"

namespace conclave::harness {

class HarnessError : public std::runtime_error {
public:
    explicit HarnessError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfigSnapshot {
    std::string backend_profile;
    std::uint32_t max_tokens = 4096;
    double temperature = 0.6;

    bool operator==(const RunConfigSnapshot&) const = default;
};

/// The persisted unit of one (roster, instance) collaboration.
/// (plan_fingerprint, roster_fingerprint, instance_id) is unique per log.
struct RunRecord {
    std::string plan_fingerprint;
    std::string roster_fingerprint;
    std::string instance_id;
    core::TaskDomain domain = core::TaskDomain::Math;
    core::ExpertGroup group = core::ExpertGroup::Math;
    core::Paradigm paradigm = core::Paradigm::DiversityDriven;
    std::uint32_t size = 0;
    core::CollaborationResult result;
    RunConfigSnapshot config;
    std::string created_at;  // ISO-8601 UTC
    std::optional<std::string> failure_reason;

    bool operator==(const RunRecord&) const = default;
};

nlohmann::json to_json(const RunRecord& record);
RunRecord run_record_from_json(const nlohmann::json& j);

/// Current time as "YYYY-MM-DDTHH:MM:SSZ".
std::string now_utc_iso8601();

/// Append-only JSONL run log, one RunRecord per line, flushed per line.
/// Crash-safe without a database: the only damage a killed writer can do is
/// a partial final line, which opening for append truncates away and
/// reading tolerates.
class RunLog {
public:
    explicit RunLog(std::filesystem::path path);

    /// Thread-safe; serializes all appends through one writer.
    void append(const RunRecord& record);

    const std::filesystem::path& path() const { return path_; }

    /// All complete records, deduplicated by key (first occurrence wins).
    /// A malformed final line is dropped as a crash tail; a malformed
    /// interior line means real corruption and raises HarnessError.
    /// A missing file reads as empty.
    static std::vector<RunRecord> read(const std::filesystem::path& path);

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::mutex mutex_;
};

struct ExecutionOptions {
    std::uint32_t parallelism = 1;
    protocol::SamplingParams sampling;
    /// Called with one short line per finished instance; may be empty.
    std::function<void(const std::string&)> progress;
};

struct ExecutionSummary {
    std::filesystem::path log_path;
    std::uint64_t planned = 0;   // (cell, instance) pairs the plan covers
    std::uint64_t resumed = 0;   // already present in the log, skipped
    std::uint64_t executed = 0;  // run in this invocation
    std::uint64_t failed = 0;    // of executed, recorded as failures
};

/// Runs every (cell, instance) pair of the plan that the log does not
/// already contain. Rosters for all cells must exist in the library before
/// any backend call (pre-flight). Failed instances are recorded with
/// correct=false and a failure_reason rather than dropped. Re-running over
/// a complete log issues zero backend calls.
ExecutionSummary execute_plan(const ExperimentPlan& plan, const roles::RoleLibrary& library,
                              backends::ChatBackend& backend,
                              const std::filesystem::path& log_dir,
                              const ExecutionOptions& options = {});

}  // namespace conclave::harness
