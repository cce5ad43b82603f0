#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conclave/analysis/error.hpp"
#include "conclave/backends/chat.hpp"
#include "conclave/core/types.hpp"

namespace conclave::analysis {

/// Occurrence counts of judged-relevant expertise domains per task domain.
/// Every successfully parsed judgment contributes 2-3 increments, so each
/// row total lies in [2k, 3k] for k = queried - dropped in that row.
struct RelevanceMatrix {
    std::map<core::TaskDomain, std::map<core::TaskDomain, std::uint64_t>> counts;
    std::uint64_t samples_per_domain = 0;               // requested N
    std::map<core::TaskDomain, std::uint64_t> queried;  // instances actually judged
    std::map<core::TaskDomain, std::uint64_t> dropped;  // invalid after one retry
};

/// The domain-identification query for one instance.
std::string render_relevance_prompt(const core::TaskInstance& instance);

/// Parses a judged domain list: the first bracketed, comma-separated list
/// in the text, elements optionally quoted. Matching is case-insensitive
/// with aliases for the short labels models tend to emit (fina -> Business,
/// med -> Health, legal -> Law, mathematics -> Math). Returns nullopt
/// unless every element maps to a distinct canonical domain and the list
/// has 2 or 3 entries.
std::optional<std::vector<core::TaskDomain>> parse_relevance_response(std::string_view text);

/// Queries the backend once per (already sampled) instance, retries each
/// invalid response once, and drops it if still invalid (drops are counted
/// per row, never silently ignored). Transport-level retryable errors get
/// one retry; terminal backend errors propagate. Throws AnalysisError when
/// samples_per_domain < 1, instances is empty, any domain exceeds
/// samples_per_domain, or every response was dropped.
RelevanceMatrix build_relevance_matrix(const std::vector<core::TaskInstance>& instances,
                                       backends::ChatBackend& backend,
                                       std::uint64_t samples_per_domain);

}  // namespace conclave::analysis
