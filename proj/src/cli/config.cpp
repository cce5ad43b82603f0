#include "conclave/cli/config.hpp"

#include <fstream>
#include <vector>

#include "conclave/backends/http.hpp"
#include "conclave/backends/mock.hpp"

namespace conclave::cli {

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base_dir,
                              const std::filesystem::path& p) {
    if (p.is_absolute()) return p.lexically_normal();
    return (base_dir / p).lexically_normal();
}

std::string require_string(const json& j, const char* field, const std::string& where,
                           std::vector<std::string>& problems) {
    if (!j.contains(field) || !j.at(field).is_string() ||
        j.at(field).get<std::string>().empty()) {
        problems.push_back(where + ": missing or empty string field '" + field + "'");
        return {};
    }
    return j.at(field).get<std::string>();
}

BackendProfile backend_from_json(const std::string& name, const json& j,
                                 const std::filesystem::path& base_dir,
                                 std::vector<std::string>& problems) {
    BackendProfile profile;
    const std::string where = "backends." + name;
    if (!j.is_object()) {
        problems.push_back(where + ": must be an object");
        return profile;
    }
    profile.kind = require_string(j, "kind", where, problems);
    if (profile.kind == "http") {
        profile.base_url = require_string(j, "base_url", where, problems);
        profile.model = require_string(j, "model", where, problems);
        if (j.contains("path")) profile.path = j.at("path").get<std::string>();
        if (j.contains("api_key_env")) profile.api_key_env = j.at("api_key_env").get<std::string>();
        if (j.contains("timeout_ms")) profile.timeout_ms = j.at("timeout_ms").get<int>();
        if (j.contains("max_in_flight")) profile.max_in_flight = j.at("max_in_flight").get<int>();
        if (j.contains("retry_backoff_ms")) {
            profile.retry_backoff_ms = j.at("retry_backoff_ms").get<int>();
        }
        if (profile.timeout_ms <= 0) problems.push_back(where + ": timeout_ms must be positive");
        if (profile.max_in_flight <= 0) {
            problems.push_back(where + ": max_in_flight must be positive");
        }
        if (profile.retry_backoff_ms < 0) {
            problems.push_back(where + ": retry_backoff_ms must be non-negative");
        }
    } else if (profile.kind == "mock") {
        const std::string script = require_string(j, "script", where, problems);
        if (!script.empty()) profile.script_path = resolve(base_dir, script);
    } else if (!profile.kind.empty()) {
        problems.push_back(where + ": unknown kind '" + profile.kind + "' (want http or mock)");
    }
    if (j.contains("max_tokens")) profile.max_tokens = j.at("max_tokens").get<std::uint32_t>();
    if (j.contains("temperature")) profile.temperature = j.at("temperature").get<double>();
    if (profile.max_tokens == 0) problems.push_back(where + ": max_tokens must be positive");
    if (!(profile.temperature >= 0.0 && profile.temperature <= 2.0)) {
        problems.push_back(where + ": temperature must be in [0, 2]");
    }
    return profile;
}

EmbedderProfile embedder_from_json(const std::string& name, const json& j,
                                   std::vector<std::string>& problems) {
    EmbedderProfile profile;
    const std::string where = "embedders." + name;
    if (!j.is_object()) {
        problems.push_back(where + ": must be an object");
        return profile;
    }
    profile.kind = require_string(j, "kind", where, problems);
    if (profile.kind == "hash") {
        if (j.contains("dimension")) profile.dimension = j.at("dimension").get<std::size_t>();
        if (profile.dimension == 0) problems.push_back(where + ": dimension must be positive");
    } else if (profile.kind == "http") {
        profile.base_url = require_string(j, "base_url", where, problems);
        profile.model = require_string(j, "model", where, problems);
        if (j.contains("path")) profile.path = j.at("path").get<std::string>();
        if (j.contains("api_key_env")) profile.api_key_env = j.at("api_key_env").get<std::string>();
        if (j.contains("timeout_ms")) profile.timeout_ms = j.at("timeout_ms").get<int>();
        if (profile.timeout_ms <= 0) problems.push_back(where + ": timeout_ms must be positive");
    } else if (!profile.kind.empty()) {
        problems.push_back(where + ": unknown kind '" + profile.kind + "' (want hash or http)");
    }
    return profile;
}

}  // namespace

CliConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
    std::vector<std::string> problems;
    CliConfig config;

    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");

    if (j.contains("backends")) {
        if (!j.at("backends").is_object()) {
            problems.push_back("backends: must be an object");
        } else {
            for (const auto& [name, value] : j.at("backends").items()) {
                config.backends[name] = backend_from_json(name, value, base_dir, problems);
            }
        }
    }
    if (j.contains("embedders")) {
        if (!j.at("embedders").is_object()) {
            problems.push_back("embedders: must be an object");
        } else {
            for (const auto& [name, value] : j.at("embedders").items()) {
                config.embedders[name] = embedder_from_json(name, value, problems);
            }
        }
    }

    if (j.contains("paths")) {
        const json& paths = j.at("paths");
        if (!paths.is_object()) {
            problems.push_back("paths: must be an object");
        } else {
            if (paths.contains("role_library")) {
                config.role_library_dir = paths.at("role_library").get<std::string>();
            }
            if (paths.contains("run_logs")) {
                config.run_log_dir = paths.at("run_logs").get<std::string>();
            }
            if (paths.contains("reports")) {
                config.report_dir = paths.at("reports").get<std::string>();
            }
        }
    }
    // Defaults and overrides alike are relative to the config file.
    config.role_library_dir = resolve(base_dir, config.role_library_dir);
    config.run_log_dir = resolve(base_dir, config.run_log_dir);
    config.report_dir = resolve(base_dir, config.report_dir);

    if (j.contains("parallelism")) {
        const auto p = j.at("parallelism").get<std::int64_t>();
        if (p < 1 || p > 256) {
            problems.push_back("parallelism: must be in [1, 256]");
        } else {
            config.parallelism = static_cast<unsigned>(p);
        }
    }

    if (!problems.empty()) {
        std::string message = "invalid config:";
        for (const std::string& p : problems) message += "\n  - " + p;
        throw ConfigError(message);
    }
    return config;
}

CliConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    try {
        return config_from_json(j, path.has_parent_path() ? path.parent_path()
                                                          : std::filesystem::path("."));
    } catch (const json::exception& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
}

std::unique_ptr<backends::ChatBackend> make_chat_backend(const CliConfig& config,
                                                         const std::string& profile) {
    const auto it = config.backends.find(profile);
    if (it == config.backends.end()) {
        throw ConfigError("unknown backend profile '" + profile + "'");
    }
    const BackendProfile& p = it->second;
    if (p.kind == "mock") {
        return std::make_unique<backends::MockChatBackend>(
            backends::MockChatBackend::load_script(p.script_path));
    }
    backends::HttpBackendConfig http;
    http.base_url = p.base_url;
    http.path = p.path;
    http.model = p.model;
    http.api_key_env = p.api_key_env;
    http.timeout_ms = static_cast<std::uint32_t>(p.timeout_ms);
    http.max_in_flight = static_cast<std::uint32_t>(p.max_in_flight);
    http.retry_backoff_ms = static_cast<std::uint32_t>(p.retry_backoff_ms);
    return std::make_unique<backends::HttpChatBackend>(http);
}

std::unique_ptr<backends::Embedder> make_embedder(const CliConfig& config,
                                                  const std::string& profile) {
    const auto it = config.embedders.find(profile);
    if (it == config.embedders.end()) {
        throw ConfigError("unknown embedder profile '" + profile + "'");
    }
    const EmbedderProfile& p = it->second;
    if (p.kind == "hash") return std::make_unique<backends::HashEmbedder>(p.dimension);
    backends::HttpEmbedderConfig http;
    http.base_url = p.base_url;
    http.path = p.path;
    http.model = p.model;
    http.api_key_env = p.api_key_env;
    http.timeout_ms = static_cast<std::uint32_t>(p.timeout_ms);
    return std::make_unique<backends::HttpEmbedder>(http);
}

}  // namespace conclave::cli
