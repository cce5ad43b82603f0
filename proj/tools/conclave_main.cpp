// conclave — run multi-agent collaboration experiments over multiple-choice
// benchmarks and turn the run logs into accuracy/diversity/relevance reports.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conclave/analysis/accuracy.hpp"
#include "conclave/analysis/diversity.hpp"
#include "conclave/analysis/relevance.hpp"
#include "conclave/analysis/report.hpp"
#include "conclave/analysis/scaling.hpp"
#include "conclave/analysis/snapshot.hpp"
#include "conclave/cli/config.hpp"
#include "conclave/core/serde.hpp"
#include "conclave/core/validate.hpp"
#include "conclave/harness/dataset.hpp"
#include "conclave/harness/plan.hpp"
#include "conclave/harness/runner.hpp"
#include "conclave/roles/library.hpp"
#include "conclave/roles/prompts.hpp"

namespace {

namespace fs = std::filesystem;
using conclave::cli::CliConfig;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPartialFailure = 2;

constexpr const char* kGenerationSystemPrompt = "You are a helpful assistant.";

CliConfig load_config_or_default(const std::string& config_flag) {
    if (!config_flag.empty()) return conclave::cli::load_config(config_flag);
    const fs::path well_known = "conclave.json";
    if (fs::exists(well_known)) return conclave::cli::load_config(well_known);
    return CliConfig{};  // built-in defaults; backend profiles must come from a file
}

// Enum flags are validated during argument parsing so typos surface as
// usage errors (nonzero exit, help text), not as runtime failures.
const CLI::Validator kGroupValidator(
    [](std::string& s) -> std::string {
        return conclave::core::parse_expert_group(s) ? "" : "unknown expert group: " + s;
    },
    "GROUP");
const CLI::Validator kParadigmValidator(
    [](std::string& s) -> std::string {
        return conclave::core::parse_paradigm(s) ? "" : "unknown paradigm: " + s;
    },
    "PARADIGM");

std::string call_backend(conclave::backends::ChatBackend& backend, const std::string& task_tag,
                         const std::string& user_prompt,
                         const conclave::cli::BackendProfile& profile) {
    conclave::backends::ChatRequest request;
    request.system_prompt = kGenerationSystemPrompt;
    request.user_prompt = user_prompt;
    request.max_tokens = profile.max_tokens;
    request.temperature = profile.temperature;
    request.instance_id = task_tag;
    request.agent_index = 0;
    return backend.complete(request).full_text;
}

const conclave::cli::BackendProfile& profile_or_throw(const CliConfig& config,
                                                      const std::string& name) {
    const auto it = config.backends.find(name);
    if (it == config.backends.end()) {
        throw conclave::cli::ConfigError("unknown backend profile '" + name + "'");
    }
    return it->second;
}

void write_roster(const conclave::core::AgentRoster& roster, const fs::path& dir, bool force) {
    const fs::path target =
        dir / conclave::roles::roster_filename(roster.domain_tag, roster.paradigm, roster.size);
    if (fs::exists(target) && !force) {
        throw std::runtime_error("refusing to overwrite " + target.string() +
                                 " (pass --force to regenerate)");
    }
    conclave::roles::RoleLibrary library;
    library.put(roster);
    library.save(dir, roster.domain_tag, roster.paradigm, roster.size);
    std::cout << target.string() << "\n";
}

int cmd_gen_roles(const CliConfig& config, const std::string& group_flag,
                  const std::string& paradigm_flag, std::uint32_t size,
                  const std::string& backend_name, bool force) {
    const auto group = *conclave::core::parse_expert_group(group_flag);
    const auto paradigm = *conclave::core::parse_paradigm(paradigm_flag);

    const std::string prompt = conclave::roles::render_generation_prompt(group, paradigm, size);
    const auto backend = conclave::cli::make_chat_backend(config, backend_name);
    const std::string tag = "gen-roles:" + std::string(conclave::core::token(group)) + "_" +
                            std::string(conclave::core::token(paradigm));
    std::cerr << "generating " << conclave::core::token(group) << "/"
              << conclave::core::token(paradigm) << " size " << size << " via '" << backend_name
              << "'\n";
    const std::string output =
        call_backend(*backend, tag, prompt, profile_or_throw(config, backend_name));

    auto roster = conclave::roles::parse_generated_roster(output, group, paradigm, size);
    const auto violations = conclave::core::validate_roster(roster);
    if (!violations.empty()) {
        std::string message = "generated roster is invalid:";
        for (const auto& v : violations) message += "\n  - " + v;
        throw std::runtime_error(message);
    }
    write_roster(roster, config.role_library_dir, force);
    return kExitOk;
}

int cmd_augment_roles(const CliConfig& config, const fs::path& role_file,
                      std::uint32_t target_size, const std::string& backend_name, bool force) {
    std::ifstream in(role_file);
    if (!in) throw std::runtime_error("cannot open " + role_file.string());
    nlohmann::json j;
    in >> j;
    const auto base = conclave::core::roster_from_json(j);

    const std::string prompt = conclave::roles::render_augmentation_prompt(base, target_size);
    const auto backend = conclave::cli::make_chat_backend(config, backend_name);
    const std::string tag = "augment-roles:" +
                            std::string(conclave::core::token(base.domain_tag)) + "_" +
                            std::string(conclave::core::token(base.paradigm)) + "_" +
                            std::to_string(target_size);
    std::cerr << "augmenting " << role_file.string() << " to size " << target_size << " via '"
              << backend_name << "'\n";
    const std::string output =
        call_backend(*backend, tag, prompt, profile_or_throw(config, backend_name));

    const auto parsed = conclave::roles::parse_generated_roster(output, base.domain_tag,
                                                                base.paradigm, target_size);

    // The original experts are authoritative: the model's restatement of
    // them must match by role name, and their responsibilities are carried
    // over from the base file verbatim rather than trusted to a retelling.
    for (std::size_t i = 0; i < base.experts.size(); ++i) {
        if (parsed.experts[i].formal_role != base.experts[i].formal_role) {
            throw std::runtime_error(
                "augmented listing does not preserve the base roles: position " +
                std::to_string(i + 1) + " is '" + parsed.experts[i].formal_role +
                "', expected '" + base.experts[i].formal_role + "'");
        }
    }
    conclave::core::AgentRoster augmented;
    augmented.domain_tag = base.domain_tag;
    augmented.paradigm = base.paradigm;
    augmented.size = target_size;
    augmented.provenance = conclave::core::Provenance::Augmented;
    augmented.experts = base.experts;
    for (std::size_t i = base.experts.size(); i < parsed.experts.size(); ++i) {
        augmented.experts.push_back(parsed.experts[i]);
    }
    for (std::size_t i = 0; i < augmented.experts.size(); ++i) {
        augmented.experts[i].index = static_cast<std::uint32_t>(i);
    }

    const auto violations = conclave::core::validate_roster(augmented);
    if (!violations.empty()) {
        std::string message = "augmented roster is invalid:";
        for (const auto& v : violations) message += "\n  - " + v;
        throw std::runtime_error(message);
    }
    write_roster(augmented, config.role_library_dir, force);
    return kExitOk;
}

int cmd_run(const CliConfig& config, const fs::path& plan_file) {
    const auto plan = conclave::harness::load_plan(plan_file);
    const auto library = conclave::roles::RoleLibrary::load_dir(config.role_library_dir);
    const auto backend = conclave::cli::make_chat_backend(config, plan.backend_profile);
    const auto& profile = profile_or_throw(config, plan.backend_profile);

    conclave::harness::ExecutionOptions options;
    options.parallelism = config.parallelism;
    options.sampling.max_tokens = profile.max_tokens;
    options.sampling.temperature = profile.temperature;
    options.progress = [](const std::string& line) { std::cerr << line << "\n"; };

    const auto summary =
        conclave::harness::execute_plan(plan, library, *backend, config.run_log_dir, options);

    std::cerr << "planned " << summary.planned << ", resumed " << summary.resumed
              << ", executed " << summary.executed << ", failed " << summary.failed << "\n";
    std::cout << summary.log_path.string() << "\n";
    return summary.failed == 0 ? kExitOk : kExitPartialFailure;
}

int cmd_analyze(const CliConfig& config, const fs::path& run_log, bool with_diversity,
                bool with_scaling, const std::string& relevance_dataset,
                const std::string& backend_name, const std::string& embedder_name,
                std::uint64_t relevance_samples, std::uint64_t seed, fs::path out_dir) {
    if (out_dir.empty()) out_dir = config.report_dir;

    // Resolve every profile before writing anything, so a typo in a backend
    // or embedder name fails cleanly instead of leaving partial output.
    std::unique_ptr<conclave::backends::Embedder> embedder;
    if (with_diversity) embedder = conclave::cli::make_embedder(config, embedder_name);
    std::unique_ptr<conclave::backends::ChatBackend> relevance_backend;
    if (!relevance_dataset.empty()) {
        relevance_backend = conclave::cli::make_chat_backend(config, backend_name);
    }

    const auto records = conclave::harness::RunLog::read(run_log);
    if (records.empty()) throw std::runtime_error(run_log.string() + ": no records");

    conclave::analysis::AnalysisSnapshot snapshot;
    snapshot.accuracy = conclave::analysis::compute_accuracy_matrix(records);
    conclave::analysis::write_accuracy_csv(*snapshot.accuracy, out_dir / "accuracy.csv");
    std::cerr << "accuracy: " << snapshot.accuracy->cells.size() << " cells\n";

    try {
        snapshot.alignment = conclave::analysis::compute_alignment_deltas(*snapshot.accuracy);
        conclave::analysis::write_alignment_csv(*snapshot.alignment, out_dir / "alignment.csv");
        std::cerr << "alignment: " << snapshot.alignment->size() << " deltas\n";
    } catch (const conclave::analysis::AnalysisError& e) {
        std::cerr << "alignment skipped: " << e.what() << "\n";
    }

    if (with_scaling) {
        snapshot.scaling = conclave::analysis::compute_scaling_report(*snapshot.accuracy);
        conclave::analysis::write_scaling_csv(*snapshot.scaling, out_dir / "scaling.csv");
        std::cerr << "scaling: " << snapshot.scaling->entries.size() << " entries, "
                  << snapshot.scaling->skipped_notes.size() << " skipped\n";
    }

    if (with_diversity) {
        snapshot.diversity = conclave::analysis::compute_diversity(records, *embedder);
        conclave::analysis::write_diversity_csv(*snapshot.diversity, out_dir / "diversity.csv");
        std::cerr << "diversity: " << snapshot.diversity->instances.size() << " instances ("
                  << snapshot.diversity->skipped_short << " too short)\n";
    }

    if (!relevance_dataset.empty()) {
        const auto instances = conclave::harness::load_dataset(relevance_dataset);
        std::map<conclave::core::TaskDomain, std::vector<std::string>> ids_by_domain;
        std::map<std::string, const conclave::core::TaskInstance*> by_id;
        for (const auto& instance : instances) {
            ids_by_domain[instance.domain].push_back(instance.instance_id);
            by_id[instance.instance_id] = &instance;
        }
        std::vector<conclave::core::TaskInstance> sampled;
        for (auto& [domain, ids] : ids_by_domain) {
            const auto chosen = conclave::harness::select_instances(std::move(ids), domain, seed,
                                                                    relevance_samples);
            for (const auto& id : chosen) sampled.push_back(*by_id.at(id));
        }
        snapshot.relevance = conclave::analysis::build_relevance_matrix(sampled, *relevance_backend,
                                                                        relevance_samples);
        conclave::analysis::write_relevance_csv(*snapshot.relevance, out_dir / "relevance.csv");
        std::cerr << "relevance: " << sampled.size() << " instances judged\n";
    }

    conclave::analysis::save_snapshot(snapshot, out_dir / "analysis.json");
    std::cout << (out_dir / "analysis.json").string() << "\n";
    return kExitOk;
}

int cmd_report(const CliConfig& config, fs::path reports_dir) {
    if (reports_dir.empty()) reports_dir = config.report_dir;
    const auto snapshot = conclave::analysis::load_snapshot(reports_dir / "analysis.json");

    conclave::analysis::ReportBundle bundle;
    if (snapshot.accuracy) {
        bundle.accuracy = &*snapshot.accuracy;
        conclave::analysis::write_accuracy_csv(*snapshot.accuracy, reports_dir / "accuracy.csv");
    }
    if (snapshot.alignment) {
        bundle.alignment = &*snapshot.alignment;
        conclave::analysis::write_alignment_csv(*snapshot.alignment,
                                                reports_dir / "alignment.csv");
    }
    if (snapshot.relevance) {
        bundle.relevance = &*snapshot.relevance;
        conclave::analysis::write_relevance_csv(*snapshot.relevance,
                                                reports_dir / "relevance.csv");
        conclave::analysis::write_relevance_svg(*snapshot.relevance,
                                                reports_dir / "relevance.svg");
    }
    if (snapshot.diversity) {
        bundle.diversity = &*snapshot.diversity;
        conclave::analysis::write_diversity_csv(*snapshot.diversity,
                                                reports_dir / "diversity.csv");
    }
    if (snapshot.scaling) {
        bundle.scaling = &*snapshot.scaling;
        conclave::analysis::write_scaling_csv(*snapshot.scaling, reports_dir / "scaling.csv");
    }
    conclave::analysis::write_summary_json(bundle, reports_dir / "summary.json");
    std::cout << (reports_dir / "summary.json").string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-agent collaboration experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "config file (default: ./conclave.json if present)");

    // gen-roles
    auto* gen = app.add_subcommand("gen-roles", "generate an expert group via the backend");
    std::string gen_group, gen_paradigm;
    std::uint32_t gen_size = 3;
    std::string gen_backend = "default";
    bool gen_force = false;
    gen->add_option("--group", gen_group, "expert group (math|finance|medical|law)")
        ->required()
        ->check(kGroupValidator);
    gen->add_option("--paradigm", gen_paradigm, "collaboration paradigm (diversity|workflow)")
        ->required()
        ->check(kParadigmValidator);
    gen->add_option("--size", gen_size, "group size (generation is defined at 3)")
        ->capture_default_str();
    gen->add_option("--backend", gen_backend, "backend profile")->capture_default_str();
    gen->add_flag("--force", gen_force, "overwrite an existing role file");

    // augment-roles
    auto* aug = app.add_subcommand("augment-roles", "grow a size-3 group to 6 or 10");
    std::string aug_file;
    std::uint32_t aug_target = 0;
    std::string aug_backend = "default";
    bool aug_force = false;
    aug->add_option("role_file", aug_file, "size-3 role file to augment")
        ->required()
        ->check(CLI::ExistingFile);
    aug->add_option("--target-size", aug_target, "augmented size")
        ->required()
        ->check(CLI::IsMember({6, 10}));
    aug->add_option("--backend", aug_backend, "backend profile")->capture_default_str();
    aug->add_flag("--force", aug_force, "overwrite an existing role file");

    // run
    auto* run = app.add_subcommand("run", "execute an experiment plan");
    std::string run_plan;
    run->add_option("plan_file", run_plan, "experiment plan (JSON)")
        ->required()
        ->check(CLI::ExistingFile);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "compute metrics from a run log");
    std::string an_log;
    bool an_diversity = false, an_scaling = false;
    std::string an_relevance, an_backend = "default", an_embedder = "default";
    std::uint64_t an_samples = 25, an_seed = 0;
    std::string an_out;
    analyze->add_option("run_log", an_log, "run log (JSONL)")
        ->required()
        ->check(CLI::ExistingFile);
    analyze->add_flag("--diversity", an_diversity, "pairwise response-similarity analysis");
    analyze->add_flag("--scaling", an_scaling, "size scaling and performance-over-token table");
    analyze->add_option("--relevance", an_relevance,
                        "judge domain relevance over this dataset (JSONL)")
        ->check(CLI::ExistingFile);
    analyze->add_option("--backend", an_backend, "backend profile for relevance judging")
        ->capture_default_str();
    analyze->add_option("--embedder", an_embedder, "embedder profile for diversity")
        ->capture_default_str();
    analyze->add_option("--samples", an_samples, "relevance samples per task domain")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    analyze->add_option("--seed", an_seed, "relevance sampling seed")->capture_default_str();
    analyze->add_option("--out", an_out, "output directory (default: configured report dir)");

    // report
    auto* report = app.add_subcommand("report", "render the consolidated report bundle");
    std::string rep_dir;
    report->add_option("reports_dir", rep_dir, "directory holding analysis.json");

    CLI11_PARSE(app, argc, argv);

    try {
        const CliConfig config = load_config_or_default(config_path);
        if (gen->parsed()) {
            return cmd_gen_roles(config, gen_group, gen_paradigm, gen_size, gen_backend,
                                 gen_force);
        }
        if (aug->parsed()) {
            return cmd_augment_roles(config, aug_file, aug_target, aug_backend, aug_force);
        }
        if (run->parsed()) return cmd_run(config, run_plan);
        if (analyze->parsed()) {
            return cmd_analyze(config, an_log, an_diversity, an_scaling, an_relevance, an_backend,
                               an_embedder, an_samples, an_seed, an_out);
        }
        if (report->parsed()) return cmd_report(config, rep_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;  // unreachable: require_subcommand(1)
}
