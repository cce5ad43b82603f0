#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conclave/backends/chat.hpp"

namespace conclave::backends {

/// Deterministic scripted backend for tests and offline runs.
///
/// Script file format (JSON):
///   {
///     "default": "fallback response text",
///     "responses": {
///       "<instance_id>": {
///         "<agent_index>": "response text",
///         "<agent_index>": {"text": "...", "fail_times": 1, "fail_kind": "retryable"}
///       }
///     }
///   }
///
/// An entry with fail_times > 0 throws a BackendError of the given kind for
/// its first fail_times calls, then serves its text. Lookups key on the
/// request's (instance_id, agent_index); a missing key falls back to
/// "default", and a missing default is a terminal error. Responses are
/// bit-identical for identical scripts and call sequences.
class MockChatBackend : public ChatBackend {
public:
    struct RecordedRequest {
        std::string instance_id;
        std::uint32_t agent_index = 0;
        std::string system_prompt;
        std::string user_prompt;
    };

    explicit MockChatBackend(const nlohmann::json& script);

    /// Reads and syntax-checks a script file; pass the result to the ctor.
    static nlohmann::json load_script(const std::filesystem::path& path);

    ChatResponse complete(const ChatRequest& request) override;
    std::string name() const override { return "mock"; }

    std::uint64_t call_count() const;
    std::vector<RecordedRequest> requests() const;

private:
    struct Entry {
        std::string text;
        std::uint32_t fail_times = 0;
        bool fail_retryable = true;
        std::uint32_t failures_served = 0;
    };

    mutable std::mutex mutex_;
    std::map<std::pair<std::string, std::uint32_t>, Entry> entries_;
    std::optional<std::string> default_text_;
    std::uint64_t calls_ = 0;
    std::vector<RecordedRequest> requests_;
};

}  // namespace conclave::backends
