#include "conclave/backends/http.hpp"

#include <chrono>
#include <stdexcept>
#include <thread>
#include <utility>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace conclave::backends {

using nlohmann::json;

HttpChatBackend::HttpChatBackend(HttpBackendConfig config)
    : config_(std::move(config)), in_flight_(config_.max_in_flight) {
    if (config_.base_url.empty()) {
        throw std::invalid_argument("HttpChatBackend: base_url must be configured");
    }
    if (config_.max_in_flight == 0) {
        throw std::invalid_argument("HttpChatBackend: max_in_flight must be positive");
    }
}

ChatResponse HttpChatBackend::complete(const ChatRequest& request) {
    check_request(request);

    in_flight_.acquire();
    struct Release {
        std::counting_semaphore<>& sem;
        ~Release() { sem.release(); }
    } release{in_flight_};

    try {
        return attempt(request);
    } catch (const BackendError& first) {
        if (!first.retryable()) throw;
        if (config_.retry_backoff_ms > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(config_.retry_backoff_ms));
        }
        try {
            return attempt(request);
        } catch (const BackendError& second) {
            throw BackendError(std::string("after retry budget: ") + second.what(), false);
        }
    }
}

ChatResponse HttpChatBackend::attempt(const ChatRequest& request) {
    json body{
        {"model", config_.model},
        {"messages",
         json::array({json{{"role", "system"}, {"content", request.system_prompt}},
                      json{{"role", "user"}, {"content", request.user_prompt}}})},
        {"max_tokens", request.max_tokens},
        {"temperature", request.temperature},
    };
    if (request.stop) body["stop"] = *request.stop;

    httplib::Client client(config_.base_url);
    const time_t seconds = config_.timeout_ms / 1000;
    const time_t micros = (config_.timeout_ms % 1000) * 1000;
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);

    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        headers.emplace("Authorization", "Bearer " + resolve_env_credential(config_.api_key_env));
    }

    const auto started = std::chrono::steady_clock::now();
    auto res = client.Post(config_.path, headers, body.dump(), "application/json");
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();

    if (!res) {
        throw BackendError("chat: transport error: " + httplib::to_string(res.error()), true);
    }
    if (res->status == 429 || res->status == 408 || res->status >= 500) {
        throw BackendError("chat: HTTP " + std::to_string(res->status), true);
    }
    if (res->status != 200) {
        throw BackendError("chat: HTTP " + std::to_string(res->status) + ": " + res->body, false);
    }

    json payload;
    try {
        payload = json::parse(res->body);
    } catch (const json::exception& e) {
        throw BackendError(std::string("chat: malformed response: ") + e.what(), false);
    }

    std::string text;
    try {
        text = payload.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
        throw BackendError("chat: response has no choices[0].message.content", false);
    }

    std::optional<std::uint64_t> provider_total;
    std::optional<std::uint64_t> provider_reasoning;
    if (payload.contains("usage") && payload.at("usage").is_object()) {
        const json& usage = payload.at("usage");
        if (usage.contains("completion_tokens") &&
            usage.at("completion_tokens").is_number_unsigned()) {
            provider_total = usage.at("completion_tokens").get<std::uint64_t>();
        }
        if (usage.contains("completion_tokens_details") &&
            usage.at("completion_tokens_details").is_object()) {
            const json& details = usage.at("completion_tokens_details");
            if (details.contains("reasoning_tokens") &&
                details.at("reasoning_tokens").is_number_unsigned()) {
                provider_reasoning = details.at("reasoning_tokens").get<std::uint64_t>();
            }
        }
    }

    ChatResponse response;
    response.full_text = std::move(text);
    const TokenSplit split =
        split_completion_tokens(response.full_text, provider_total, provider_reasoning);
    response.reasoning_tokens = split.reasoning;
    response.answer_tokens = split.answer;
    response.latency_ms = static_cast<std::uint64_t>(elapsed);
    return response;
}

}  // namespace conclave::backends
