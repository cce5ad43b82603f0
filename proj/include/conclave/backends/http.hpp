#pragma once

#include <cstdint>
#include <semaphore>
#include <string>

#include "conclave/backends/chat.hpp"

namespace conclave::backends {

struct HttpBackendConfig {
    std::string base_url;     // scheme + host[:port]
    std::string path = "/v1/chat/completions";
    std::string model;
    std::string api_key_env;  // name of the env var holding the credential; empty = no auth
    std::uint32_t timeout_ms = 120000;
    std::uint32_t max_in_flight = 4;
    std::uint32_t retry_backoff_ms = 250;
};

/// Chat-completion client for an OpenAI-style endpoint.
///
/// Transport errors, timeouts, HTTP 429 and 5xx are retryable and get one
/// internal retry; a second failure surfaces as a terminal BackendError.
/// Other non-200 statuses are terminal immediately. A counting semaphore
/// caps concurrent in-flight requests at config.max_in_flight, so one
/// backend handle can be shared across worker threads.
class HttpChatBackend : public ChatBackend {
public:
    explicit HttpChatBackend(HttpBackendConfig config);

    ChatResponse complete(const ChatRequest& request) override;
    std::string name() const override { return "http"; }

private:
    ChatResponse attempt(const ChatRequest& request);

    HttpBackendConfig config_;
    std::counting_semaphore<> in_flight_;
};

}  // namespace conclave::backends
