#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "conclave/backends/chat.hpp"
#include "conclave/backends/embedder.hpp"

namespace conclave::cli {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A named way to reach a chat backend. Credentials are referenced by the
/// NAME of an environment variable; the value is read at request time and
/// must never be written to any output file.
struct BackendProfile {
    std::string kind;  // "mock" or "http"

    // http
    std::string base_url;
    std::string path = "/v1/chat/completions";
    std::string model;
    std::string api_key_env;
    int timeout_ms = 120000;
    int max_in_flight = 4;
    int retry_backoff_ms = 250;

    // mock
    std::filesystem::path script_path;

    // sampling defaults, overridable per plan
    std::uint32_t max_tokens = 4096;
    double temperature = 0.6;
};

struct EmbedderProfile {
    std::string kind;  // "hash" or "http"

    std::size_t dimension = 64;  // hash

    // http
    std::string base_url;
    std::string path = "/v1/embeddings";
    std::string model;
    std::string api_key_env;
    int timeout_ms = 30000;
};

struct CliConfig {
    std::map<std::string, BackendProfile> backends;
    std::map<std::string, EmbedderProfile> embedders;

    std::filesystem::path role_library_dir = "data/roles";
    std::filesystem::path run_log_dir = "runs";
    std::filesystem::path report_dir = "reports";

    unsigned parallelism = 1;
};

/// Parses and validates a JSON config file. All problems are reported in
/// one ConfigError. Relative paths are resolved against the config file's
/// directory so invocations work from anywhere.
CliConfig load_config(const std::filesystem::path& path);

CliConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// Instantiates the named profile. Unknown name -> ConfigError.
std::unique_ptr<backends::ChatBackend> make_chat_backend(const CliConfig& config,
                                                         const std::string& profile);
std::unique_ptr<backends::Embedder> make_embedder(const CliConfig& config,
                                                  const std::string& profile);

}  // namespace conclave::cli
