#include "conclave/backends/chat.hpp"

#include <cctype>
#include <cstdlib>

namespace conclave::backends {

void check_request(const ChatRequest& request) {
    if (request.system_prompt.empty()) {
        throw BackendError("chat request: system_prompt is empty", false);
    }
    if (request.user_prompt.empty()) {
        throw BackendError("chat request: user_prompt is empty", false);
    }
    if (request.max_tokens < 64) {
        throw BackendError("chat request: max_tokens must be at least 64", false);
    }
}

std::string resolve_env_credential(const std::string& env_var) {
    if (env_var.empty()) {
        throw BackendError("credential: no environment variable configured", false);
    }
    const char* value = std::getenv(env_var.c_str());
    if (value == nullptr || *value == '\0') {
        throw BackendError("credential: environment variable " + env_var + " is unset or empty",
                           false);
    }
    return value;
}

std::uint64_t whitespace_token_count(std::string_view text) {
    std::uint64_t count = 0;
    bool in_token = false;
    for (const char c : text) {
        const bool ws = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (!ws && !in_token) ++count;
        in_token = !ws;
    }
    return count;
}

namespace {

constexpr std::string_view kThinkOpen = "<think>";
constexpr std::string_view kThinkClose = "</think>";

// Returns the reasoning segment when the text starts (modulo leading
// whitespace) with exactly one think block.
std::optional<std::pair<std::string_view, std::string_view>> split_think_prefix(
    std::string_view text) {
    std::size_t start = 0;
    while (start < text.size() && std::isspace(static_cast<unsigned char>(text[start]))) ++start;
    if (text.substr(start, kThinkOpen.size()) != kThinkOpen) return std::nullopt;
    const std::size_t body = start + kThinkOpen.size();
    const std::size_t close = text.find(kThinkClose, body);
    if (close == std::string_view::npos) return std::nullopt;
    // A second opening tag means the convention is not being followed.
    if (text.find(kThinkOpen, body) != std::string_view::npos &&
        text.find(kThinkOpen, body) < close) {
        return std::nullopt;
    }
    if (text.find(kThinkOpen, close) != std::string_view::npos) return std::nullopt;
    return std::make_pair(text.substr(body, close - body),
                          text.substr(close + kThinkClose.size()));
}

}  // namespace

TokenSplit split_completion_tokens(std::string_view text,
                                   std::optional<std::uint64_t> provider_total,
                                   std::optional<std::uint64_t> provider_reasoning) {
    TokenSplit split;
    if (provider_reasoning) {
        const std::uint64_t total =
            provider_total ? *provider_total
                           : std::max(*provider_reasoning, whitespace_token_count(text));
        split.reasoning = std::min(*provider_reasoning, total);
        split.answer = total - split.reasoning;
        if (!text.empty() && split.reasoning + split.answer == 0) split.answer = 1;
        return split;
    }

    const auto segments = split_think_prefix(text);
    if (segments) {
        const std::uint64_t think_tokens = whitespace_token_count(segments->first);
        const std::uint64_t rest_tokens = whitespace_token_count(segments->second);
        if (provider_total) {
            const std::uint64_t total = *provider_total;
            const std::uint64_t denom = think_tokens + rest_tokens;
            split.reasoning =
                denom == 0 ? 0
                           : static_cast<std::uint64_t>(
                                 (static_cast<double>(total) * static_cast<double>(think_tokens)) /
                                     static_cast<double>(denom) +
                                 0.5);
            split.reasoning = std::min(split.reasoning, total);
            split.answer = total - split.reasoning;
        } else {
            split.reasoning = think_tokens;
            split.answer = rest_tokens;
        }
    } else {
        split.answer = provider_total ? *provider_total : whitespace_token_count(text);
    }

    if (!text.empty() && split.reasoning + split.answer == 0) split.answer = 1;
    return split;
}

}  // namespace conclave::backends
