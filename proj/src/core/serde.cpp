#include "conclave/core/serde.hpp"

#include <nlohmann/json.hpp>

namespace conclave::core {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const char* type_name) {
    if (!j.is_object() || !j.contains(key)) {
        throw SchemaError(std::string(type_name) + ": missing field '" + key + "'");
    }
    return j.at(key);
}

std::string require_string(const json& j, const char* key, const char* type_name) {
    const json& v = require(j, key, type_name);
    if (!v.is_string()) {
        throw SchemaError(std::string(type_name) + ": field '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

std::uint64_t require_uint(const json& j, const char* key, const char* type_name) {
    const json& v = require(j, key, type_name);
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < 0)) {
        throw SchemaError(std::string(type_name) + ": field '" + key +
                          "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

}  // namespace

json to_json(const ExpertSpec& e) {
    return json{
        {"expert_group", token(e.expert_group)},
        {"formal_role", e.formal_role},
        {"index", e.index},
        {"paradigm", token(e.paradigm)},
        {"responsibility", e.responsibility},
    };
}

json to_json(const AgentRoster& r) {
    json experts = json::array();
    for (const ExpertSpec& e : r.experts) {
        experts.push_back(json{
            {"formal_role", e.formal_role},
            {"index", e.index},
            {"responsibility", e.responsibility},
        });
    }
    return json{
        {"expert_group", token(r.domain_tag)},
        {"experts", std::move(experts)},
        {"paradigm", token(r.paradigm)},
        {"provenance", token(r.provenance)},
        {"size", r.size},
    };
}

json to_json(const TaskInstance& t) {
    return json{
        {"domain", token(t.domain)},
        {"gold_index", t.gold_index},
        {"instance_id", t.instance_id},
        {"options", t.options},
        {"question", t.question},
    };
}

json to_json(const AgentTurn& t) {
    json j{
        {"agent_index", t.agent_index},
        {"answer_tokens", t.answer_tokens},
        {"full_output", t.full_output},
        {"reasoning_tokens", t.reasoning_tokens},
    };
    j["final_answer"] = t.final_answer ? json(*t.final_answer) : json(nullptr);
    return j;
}

json to_json(const CollaborationResult& r) {
    json turns = json::array();
    for (const AgentTurn& t : r.turns) turns.push_back(to_json(t));
    json j{
        {"correct", r.correct},
        {"instance_id", r.instance_id},
        {"roster_fingerprint", r.roster_fingerprint},
        {"turns", std::move(turns)},
        {"wall_time_ms", r.wall_time_ms},
    };
    j["system_answer"] = r.system_answer ? json(*r.system_answer) : json(nullptr);
    return j;
}

ExpertSpec expert_spec_from_json(const json& j) {
    ExpertSpec e;
    const std::string group = require_string(j, "expert_group", "ExpertSpec");
    const auto g = parse_expert_group(group);
    if (!g) throw SchemaError("ExpertSpec: unknown expert_group '" + group + "'");
    e.expert_group = *g;
    const std::string paradigm = require_string(j, "paradigm", "ExpertSpec");
    const auto p = parse_paradigm(paradigm);
    if (!p) throw SchemaError("ExpertSpec: unknown paradigm '" + paradigm + "'");
    e.paradigm = *p;
    e.formal_role = require_string(j, "formal_role", "ExpertSpec");
    e.responsibility = require_string(j, "responsibility", "ExpertSpec");
    e.index = static_cast<std::uint32_t>(require_uint(j, "index", "ExpertSpec"));
    return e;
}

AgentRoster roster_from_json(const json& j) {
    AgentRoster r;
    const std::string group = require_string(j, "expert_group", "AgentRoster");
    const auto g = parse_expert_group(group);
    if (!g) throw SchemaError("AgentRoster: unknown expert_group '" + group + "'");
    r.domain_tag = *g;
    const std::string paradigm = require_string(j, "paradigm", "AgentRoster");
    const auto p = parse_paradigm(paradigm);
    if (!p) throw SchemaError("AgentRoster: unknown paradigm '" + paradigm + "'");
    r.paradigm = *p;
    r.size = static_cast<std::uint32_t>(require_uint(j, "size", "AgentRoster"));
    if (j.contains("provenance")) {
        const std::string prov = require_string(j, "provenance", "AgentRoster");
        const auto pv = parse_provenance(prov);
        if (!pv) throw SchemaError("AgentRoster: unknown provenance '" + prov + "'");
        r.provenance = *pv;
    }
    const json& experts = require(j, "experts", "AgentRoster");
    if (!experts.is_array()) throw SchemaError("AgentRoster: field 'experts' must be an array");
    for (const json& je : experts) {
        ExpertSpec e;
        e.expert_group = r.domain_tag;
        e.paradigm = r.paradigm;
        e.formal_role = require_string(je, "formal_role", "AgentRoster.experts[]");
        e.responsibility = require_string(je, "responsibility", "AgentRoster.experts[]");
        e.index = static_cast<std::uint32_t>(require_uint(je, "index", "AgentRoster.experts[]"));
        r.experts.push_back(std::move(e));
    }
    return r;
}

TaskInstance task_instance_from_json(const json& j) {
    TaskInstance t;
    t.instance_id = require_string(j, "instance_id", "TaskInstance");
    if (t.instance_id.empty()) throw SchemaError("TaskInstance: instance_id is empty");
    const std::string domain = require_string(j, "domain", "TaskInstance");
    const auto d = parse_task_domain(domain);
    if (!d) throw SchemaError("TaskInstance: unknown domain '" + domain + "'");
    t.domain = *d;
    t.question = require_string(j, "question", "TaskInstance");
    const json& options = require(j, "options", "TaskInstance");
    if (!options.is_array()) throw SchemaError("TaskInstance: field 'options' must be an array");
    for (const json& o : options) {
        if (!o.is_string()) throw SchemaError("TaskInstance: options must be strings");
        t.options.push_back(o.get<std::string>());
    }
    if (t.options.size() < 2 || t.options.size() > kMaxOptions) {
        throw SchemaError("TaskInstance: options length must be in [2, 10], got " +
                          std::to_string(t.options.size()));
    }
    t.gold_index = static_cast<std::uint32_t>(require_uint(j, "gold_index", "TaskInstance"));
    if (t.gold_index >= t.options.size()) {
        throw SchemaError("TaskInstance: gold_index " + std::to_string(t.gold_index) +
                          " out of range for " + std::to_string(t.options.size()) + " options");
    }
    return t;
}

AgentTurn agent_turn_from_json(const json& j) {
    AgentTurn t;
    t.agent_index = static_cast<std::uint32_t>(require_uint(j, "agent_index", "AgentTurn"));
    if (t.agent_index == 0) throw SchemaError("AgentTurn: agent_index is 1-based");
    t.full_output = require_string(j, "full_output", "AgentTurn");
    t.reasoning_tokens = require_uint(j, "reasoning_tokens", "AgentTurn");
    t.answer_tokens = require_uint(j, "answer_tokens", "AgentTurn");
    const json& fa = require(j, "final_answer", "AgentTurn");
    if (!fa.is_null()) {
        if (!fa.is_number_integer() || fa.get<std::int64_t>() < 0) {
            throw SchemaError("AgentTurn: final_answer must be null or a non-negative integer");
        }
        t.final_answer = fa.get<std::uint32_t>();
    }
    return t;
}

CollaborationResult collaboration_result_from_json(const json& j) {
    CollaborationResult r;
    r.instance_id = require_string(j, "instance_id", "CollaborationResult");
    r.roster_fingerprint = require_string(j, "roster_fingerprint", "CollaborationResult");
    const json& turns = require(j, "turns", "CollaborationResult");
    if (!turns.is_array()) {
        throw SchemaError("CollaborationResult: field 'turns' must be an array");
    }
    for (const json& jt : turns) r.turns.push_back(agent_turn_from_json(jt));
    const json& sa = require(j, "system_answer", "CollaborationResult");
    if (!sa.is_null()) {
        if (!sa.is_number_integer() || sa.get<std::int64_t>() < 0) {
            throw SchemaError(
                "CollaborationResult: system_answer must be null or a non-negative integer");
        }
        r.system_answer = sa.get<std::uint32_t>();
    }
    const json& correct = require(j, "correct", "CollaborationResult");
    if (!correct.is_boolean()) {
        throw SchemaError("CollaborationResult: field 'correct' must be a boolean");
    }
    r.correct = correct.get<bool>();
    r.wall_time_ms = require_uint(j, "wall_time_ms", "CollaborationResult");
    return r;
}

std::string canonical_dump(const json& j) {
    // nlohmann objects are backed by std::map, so keys already come out sorted.
    return j.dump();
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

std::string roster_fingerprint(const AgentRoster& r) {
    json j = to_json(r);
    j.erase("provenance");
    return hex64(fnv1a64(canonical_dump(j)));
}

}  // namespace conclave::core
