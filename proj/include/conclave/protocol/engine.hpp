#pragma once

#include <cstdint>
#include <string>

#include "conclave/backends/chat.hpp"
#include "conclave/core/types.hpp"
#include "conclave/protocol/history.hpp"

namespace conclave::protocol {

struct SamplingParams {
    std::uint32_t max_tokens = 4096;
    double temperature = 0.6;
};

/// Raised when a collaboration run dies on a terminal backend error after
/// the per-call retry. Carries the partial transcript so the caller can
/// record the instance as failed instead of silently dropping it.
class CollaborationAborted : public std::runtime_error {
public:
    CollaborationAborted(const std::string& what, core::CollaborationResult partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const core::CollaborationResult& partial() const { return partial_; }

private:
    core::CollaborationResult partial_;
};

/// Runs one collaboration: agents speak strictly in roster order; agent i
/// sees the complete output of agent i-1 and only the final answers of
/// agents 1..i-2; the last agent's answer is the system answer. Extraction
/// failures on non-final agents propagate as UNPARSED rather than aborting.
/// Each backend call gets one automatic retry on a retryable error; a
/// terminal error raises CollaborationAborted with the turns so far.
core::CollaborationResult run_collaboration(const core::AgentRoster& roster,
                                            const core::TaskInstance& instance,
                                            backends::ChatBackend& backend,
                                            const SamplingParams& sampling = {});

}  // namespace conclave::protocol
