#include "conclave/protocol/engine.hpp"

#include <chrono>

#include "conclave/core/serde.hpp"
#include "conclave/roles/prompts.hpp"

namespace conclave::protocol {

namespace {

backends::ChatResponse complete_with_retry(backends::ChatBackend& backend,
                                           const backends::ChatRequest& request) {
    try {
        return backend.complete(request);
    } catch (const backends::BackendError& first) {
        if (!first.retryable()) throw;
        return backend.complete(request);
    }
}

}  // namespace

core::CollaborationResult run_collaboration(const core::AgentRoster& roster,
                                            const core::TaskInstance& instance,
                                            backends::ChatBackend& backend,
                                            const SamplingParams& sampling) {
    if (roster.size == 0 || roster.experts.size() != roster.size) {
        throw ProtocolError("run_collaboration: roster size " + std::to_string(roster.size) +
                            " does not match its " + std::to_string(roster.experts.size()) +
                            " experts");
    }

    const auto started = std::chrono::steady_clock::now();

    core::CollaborationResult result;
    result.instance_id = instance.instance_id;
    result.roster_fingerprint = core::roster_fingerprint(roster);

    for (std::uint32_t i = 1; i <= roster.size; ++i) {
        const VisibleHistory history = build_history(roster, result.turns, i);
        const roles::AgentPrompts prompts =
            roles::render_agent_prompts(roster.experts[i - 1], instance, history);

        backends::ChatRequest request;
        request.system_prompt = prompts.system_prompt;
        request.user_prompt = prompts.user_prompt;
        request.max_tokens = sampling.max_tokens;
        request.temperature = sampling.temperature;
        request.instance_id = instance.instance_id;
        request.agent_index = i;

        backends::ChatResponse response;
        try {
            response = complete_with_retry(backend, request);
        } catch (const backends::BackendError& e) {
            result.wall_time_ms = static_cast<std::uint64_t>(
                std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - started)
                    .count());
            throw CollaborationAborted("agent " + std::to_string(i) + ": " + e.what(),
                                       std::move(result));
        }

        core::AgentTurn turn;
        turn.agent_index = i;
        turn.full_output = response.full_text;
        turn.final_answer = extract_boxed(response.full_text, instance.options.size());
        turn.reasoning_tokens = response.reasoning_tokens;
        turn.answer_tokens = response.answer_tokens;
        result.turns.push_back(std::move(turn));
    }

    result.system_answer = result.turns.back().final_answer;
    result.correct = result.system_answer && *result.system_answer == instance.gold_index;
    result.wall_time_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                              started)
            .count());
    return result;
}

}  // namespace conclave::protocol
