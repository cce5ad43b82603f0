#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace conclave::backends {

/// Failure talking to a provider. `retryable()` distinguishes transient
/// transport/rate-limit conditions from terminal ones (bad request,
/// exhausted retry budget).
class BackendError : public std::runtime_error {
public:
    BackendError(const std::string& what, bool retryable)
        : std::runtime_error(what), retryable_(retryable) {}
    bool retryable() const { return retryable_; }

private:
    bool retryable_;
};

struct ChatRequest {
    std::string system_prompt;
    std::string user_prompt;
    std::uint32_t max_tokens = 4096;
    double temperature = 0.6;
    std::optional<std::vector<std::string>> stop;

    // Routing metadata for scripted backends; HTTP providers ignore both.
    // agent_index 0 marks a query issued outside a roster (e.g. relevance).
    std::string instance_id;
    std::uint32_t agent_index = 0;
};

struct ChatResponse {
    std::string full_text;
    std::uint64_t reasoning_tokens = 0;
    std::uint64_t answer_tokens = 0;
    std::uint64_t latency_ms = 0;
};

/// Throws BackendError(terminal) when the request violates its invariants
/// (empty prompts, max_tokens < 64).
void check_request(const ChatRequest& request);

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
    virtual std::string name() const = 0;
};

/// Reads a credential from the named environment variable. Throws
/// BackendError(terminal) when the variable is unset or empty. The value
/// must never appear in logs, reports, or error messages.
std::string resolve_env_credential(const std::string& env_var);

/// Number of whitespace-separated tokens; the provider-independent fallback
/// when no usage counts are reported.
std::uint64_t whitespace_token_count(std::string_view text);

struct TokenSplit {
    std::uint64_t reasoning = 0;
    std::uint64_t answer = 0;
};

/// Splits a completion into reasoning/answer token counts.
///
/// Priority: a provider-reported reasoning count wins; otherwise a single
/// leading <think>...</think> block splits the text (counts scaled to the
/// provider total when one is reported); otherwise everything is answer
/// tokens. A non-empty completion always costs at least one token.
TokenSplit split_completion_tokens(std::string_view text,
                                   std::optional<std::uint64_t> provider_total,
                                   std::optional<std::uint64_t> provider_reasoning);

}  // namespace conclave::backends
