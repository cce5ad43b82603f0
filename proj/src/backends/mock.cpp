#include "conclave/backends/mock.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace conclave::backends {

using nlohmann::json;

MockChatBackend::MockChatBackend(const json& script) {
    if (!script.is_object()) {
        throw BackendError("mock script: top level must be an object", false);
    }
    if (script.contains("default")) {
        default_text_ = script.at("default").get<std::string>();
    }
    if (!script.contains("responses")) return;
    const json& responses = script.at("responses");
    if (!responses.is_object()) {
        throw BackendError("mock script: 'responses' must be an object", false);
    }
    for (const auto& [instance_id, per_agent] : responses.items()) {
        if (!per_agent.is_object()) {
            throw BackendError("mock script: responses['" + instance_id + "'] must be an object",
                               false);
        }
        for (const auto& [agent_key, value] : per_agent.items()) {
            std::uint32_t agent_index = 0;
            try {
                agent_index = static_cast<std::uint32_t>(std::stoul(agent_key));
            } catch (const std::exception&) {
                throw BackendError("mock script: agent index '" + agent_key +
                                       "' is not an integer",
                                   false);
            }
            Entry entry;
            if (value.is_string()) {
                entry.text = value.get<std::string>();
            } else if (value.is_object()) {
                entry.text = value.at("text").get<std::string>();
                if (value.contains("fail_times")) {
                    entry.fail_times = value.at("fail_times").get<std::uint32_t>();
                }
                if (value.contains("fail_kind")) {
                    const std::string kind = value.at("fail_kind").get<std::string>();
                    if (kind == "retryable") {
                        entry.fail_retryable = true;
                    } else if (kind == "terminal") {
                        entry.fail_retryable = false;
                    } else {
                        throw BackendError("mock script: unknown fail_kind '" + kind + "'", false);
                    }
                }
            } else {
                throw BackendError("mock script: entry for (" + instance_id + ", " + agent_key +
                                       ") must be a string or object",
                                   false);
            }
            entries_[{instance_id, agent_index}] = std::move(entry);
        }
    }
}

json MockChatBackend::load_script(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw BackendError("mock script: cannot open " + path.string(), false);
    }
    json script;
    try {
        in >> script;
    } catch (const json::exception& e) {
        throw BackendError("mock script: " + path.string() + ": " + e.what(), false);
    }
    return script;
}

ChatResponse MockChatBackend::complete(const ChatRequest& request) {
    check_request(request);
    std::lock_guard<std::mutex> lock(mutex_);
    ++calls_;
    requests_.push_back({request.instance_id, request.agent_index, request.system_prompt,
                         request.user_prompt});

    std::string text;
    const auto it = entries_.find({request.instance_id, request.agent_index});
    if (it != entries_.end()) {
        Entry& entry = it->second;
        if (entry.failures_served < entry.fail_times) {
            ++entry.failures_served;
            throw BackendError("mock: scripted failure for (" + request.instance_id + ", " +
                                   std::to_string(request.agent_index) + ")",
                               entry.fail_retryable);
        }
        text = entry.text;
    } else if (default_text_) {
        text = *default_text_;
    } else {
        throw BackendError("mock: no scripted response for (" + request.instance_id + ", " +
                               std::to_string(request.agent_index) + ") and no default",
                           false);
    }

    ChatResponse response;
    response.full_text = text;
    const TokenSplit split = split_completion_tokens(text, std::nullopt, std::nullopt);
    response.reasoning_tokens = split.reasoning;
    response.answer_tokens = split.answer;
    response.latency_ms = 0;
    return response;
}

std::uint64_t MockChatBackend::call_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return calls_;
}

std::vector<MockChatBackend::RecordedRequest> MockChatBackend::requests() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return requests_;
}

}  // namespace conclave::backends
