#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "conclave/core/types.hpp"

namespace conclave::core {

/// Thrown when a JSON document does not satisfy a type's schema.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Canonical JSON encodings. Keys are emitted in a fixed (alphabetical) order,
// so the compact dump of a value is byte-stable for identical inputs.
nlohmann::json to_json(const ExpertSpec& e);
nlohmann::json to_json(const AgentRoster& r);
nlohmann::json to_json(const TaskInstance& t);
nlohmann::json to_json(const AgentTurn& t);
nlohmann::json to_json(const CollaborationResult& r);

// Decoders validate field presence, types and range; they throw SchemaError
// with a message naming the offending field.
ExpertSpec expert_spec_from_json(const nlohmann::json& j);
AgentRoster roster_from_json(const nlohmann::json& j);
TaskInstance task_instance_from_json(const nlohmann::json& j);
AgentTurn agent_turn_from_json(const nlohmann::json& j);
CollaborationResult collaboration_result_from_json(const nlohmann::json& j);

/// Compact dump with sorted keys; the canonical byte form used for hashing.
std::string canonical_dump(const nlohmann::json& j);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// Content hash of the roster's semantic fields (provenance excluded):
/// stable across field reordering in source files, sensitive to any change
/// of group, paradigm, size or expert texts.
std::string roster_fingerprint(const AgentRoster& r);

}  // namespace conclave::core
