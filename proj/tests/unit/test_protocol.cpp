#include <doctest/doctest.h>

#include <nlohmann/json.hpp>

#include "conclave/backends/mock.hpp"
#include "conclave/protocol/engine.hpp"
#include "conclave/protocol/history.hpp"

#include "../support/helpers.hpp"

using namespace conclave;

TEST_SUITE_BEGIN("protocol");

namespace {

core::AgentTurn turn(std::uint32_t index, std::string output,
                     std::optional<std::uint32_t> answer) {
    core::AgentTurn t;
    t.agent_index = index;
    t.full_output = std::move(output);
    t.final_answer = answer;
    return t;
}

}  // namespace

TEST_CASE("agent 1 sees an empty history") {
    const auto roster = testsupport::make_roster(core::ExpertGroup::Math,
                                                 core::Paradigm::DiversityDriven, 3);
    const auto history = protocol::build_history(roster, {}, 1);
    CHECK_FALSE(history.predecessor_full.has_value());
    CHECK(history.earlier_finals.empty());
}

TEST_CASE("agent 2 sees only the predecessor's full output") {
    const auto roster = testsupport::make_roster(core::ExpertGroup::Math,
                                                 core::Paradigm::DiversityDriven, 3);
    const auto history =
        protocol::build_history(roster, {turn(1, "full rationale one", 2)}, 2);
    REQUIRE(history.predecessor_full.has_value());
    CHECK(*history.predecessor_full == "full rationale one");
    CHECK(history.earlier_finals.empty());
}

TEST_CASE("agent i sees finals of 1..i-2 and the full text of i-1") {
    const auto roster = testsupport::make_roster(core::ExpertGroup::Law,
                                                 core::Paradigm::StructuredWorkflow, 4);
    const std::vector<core::AgentTurn> turns = {
        turn(1, "rationale one", 0),
        turn(2, "rationale two", std::nullopt),
        turn(3, "rationale three", 3),
    };
    const auto history = protocol::build_history(roster, turns, 4);
    REQUIRE(history.predecessor_full.has_value());
    CHECK(*history.predecessor_full == "rationale three");
    REQUIRE(history.earlier_finals.size() == 2);
    CHECK(history.earlier_finals[0].agent_index == 1);
    CHECK(history.earlier_finals[0].formal_role == roster.experts[0].formal_role);
    CHECK(history.earlier_finals[0].answer == "A");
    CHECK(history.earlier_finals[1].agent_index == 2);
    CHECK(history.earlier_finals[1].answer == protocol::kUnparsed);
}

TEST_CASE("build_history rejects mismatched turn counts") {
    const auto roster = testsupport::make_roster(core::ExpertGroup::Math,
                                                 core::Paradigm::DiversityDriven, 3);
    CHECK_THROWS_AS(protocol::build_history(roster, {}, 3), protocol::ProtocolError);
    CHECK_THROWS_AS(protocol::build_history(roster, {turn(1, "x", 0)}, 1),
                    protocol::ProtocolError);
    CHECK_THROWS_AS(protocol::build_history(roster, {}, 0), protocol::ProtocolError);
    CHECK_THROWS_AS(protocol::build_history(roster, {}, 4), protocol::ProtocolError);
}

TEST_CASE("extract_boxed finds the basic forms") {
    using protocol::extract_boxed;
    CHECK(extract_boxed("My answer is \\boxed{B}", 4) == 1);
    CHECK(extract_boxed("My answer is \\boxed{{B}}", 4) == 1);
    CHECK(extract_boxed("\\boxed{j}", 10) == 9);
    CHECK(extract_boxed("\\boxed{ C }", 4) == 2);
    CHECK(extract_boxed("\\boxed{2}", 4) == 1);  // 1-based numeral
    CHECK(extract_boxed("\\boxed{10}", 10) == 9);
}

TEST_CASE("extract_boxed keeps the last in-range occurrence") {
    using protocol::extract_boxed;
    CHECK(extract_boxed("First \\boxed{A}, then revised to \\boxed{C}", 4) == 2);
    // Out-of-range or garbage boxes are skipped, not fatal.
    CHECK(extract_boxed("\\boxed{C} but also \\boxed{K}", 4) == 2);
    CHECK(extract_boxed("\\boxed{C} and \\boxed{25}", 4) == 2);
    CHECK(extract_boxed("\\boxed{C} trailing \\boxed{}", 4) == 2);
}

TEST_CASE("extract_boxed rejects what it cannot interpret") {
    using protocol::extract_boxed;
    CHECK_FALSE(extract_boxed("no box at all", 4).has_value());
    CHECK_FALSE(extract_boxed("\\boxed{E}", 4).has_value());       // past the options
    CHECK_FALSE(extract_boxed("\\boxed{0}", 4).has_value());       // numerals are 1-based
    CHECK_FALSE(extract_boxed("\\boxed{02}", 4).has_value());      // no leading zeros
    CHECK_FALSE(extract_boxed("\\boxed{AB}", 4).has_value());
    CHECK_FALSE(extract_boxed("\\boxed{B C}", 4).has_value());
    CHECK_FALSE(extract_boxed("\\boxed{-1}", 4).has_value());
    CHECK_FALSE(extract_boxed("\\boxed{", 4).has_value());         // unterminated
}

TEST_CASE("extract_boxed validates the option count") {
    CHECK_THROWS_AS(protocol::extract_boxed("\\boxed{A}", 1), std::invalid_argument);
    CHECK_THROWS_AS(protocol::extract_boxed("\\boxed{A}", 11), std::invalid_argument);
}

TEST_CASE("run_collaboration wires prompts, answers and correctness") {
    const auto roster = testsupport::make_roster(core::ExpertGroup::Math,
                                                 core::Paradigm::DiversityDriven, 3);
    const auto instance = testsupport::make_instance("inst-1", core::TaskDomain::Math, 4, 2);

    nlohmann::json script;
    script["responses"]["inst-1"]["1"] = "I lean towards \\boxed{A}";
    script["responses"]["inst-1"]["2"] = "Reconsidering, \\boxed{C} fits";
    script["responses"]["inst-1"]["3"] = "Agreed. My answer is \\boxed{C}";
    backends::MockChatBackend backend(script);

    const auto result = protocol::run_collaboration(roster, instance, backend);
    CHECK(result.instance_id == "inst-1");
    REQUIRE(result.turns.size() == 3);
    CHECK(result.turns[0].final_answer == 0);
    CHECK(result.turns[2].final_answer == 2);
    CHECK(result.system_answer == 2);
    CHECK(result.correct);

    // Agent 2's user prompt embeds agent 1's complete output; agent 3's
    // embeds agent 1's final letter but not its rationale text.
    const auto requests = backend.requests();
    REQUIRE(requests.size() == 3);
    CHECK(requests[1].user_prompt.find("I lean towards") != std::string::npos);
    CHECK(requests[2].user_prompt.find("Agent 1 (Specialist 1): A") != std::string::npos);
    CHECK(requests[2].user_prompt.find("I lean towards") == std::string::npos);
}

TEST_CASE("an unparseable non-final turn propagates as UNPARSED") {
    const auto roster = testsupport::make_roster(core::ExpertGroup::Math,
                                                 core::Paradigm::DiversityDriven, 3);
    const auto instance = testsupport::make_instance("inst-2", core::TaskDomain::Math, 4, 0);

    nlohmann::json script;
    script["responses"]["inst-2"]["1"] = "I refuse to commit to a letter.";
    script["responses"]["inst-2"]["2"] = "Noted. \\boxed{A}";
    script["responses"]["inst-2"]["3"] = "Final: \\boxed{A}";
    backends::MockChatBackend backend(script);

    const auto result = protocol::run_collaboration(roster, instance, backend);
    CHECK_FALSE(result.turns[0].final_answer.has_value());
    CHECK(result.correct);
    const auto requests = backend.requests();
    CHECK(requests[2].user_prompt.find("Agent 1 (Specialist 1): UNPARSED") != std::string::npos);
}

TEST_CASE("an unparseable final turn leaves the system answer empty and incorrect") {
    const auto roster = testsupport::make_roster(core::ExpertGroup::Math,
                                                 core::Paradigm::DiversityDriven, 3);
    const auto instance = testsupport::make_instance("inst-3", core::TaskDomain::Math, 4, 0);

    nlohmann::json script;
    script["default"] = "\\boxed{A}";
    script["responses"]["inst-3"]["3"] = "I cannot decide.";
    backends::MockChatBackend backend(script);

    const auto result = protocol::run_collaboration(roster, instance, backend);
    CHECK_FALSE(result.system_answer.has_value());
    CHECK_FALSE(result.correct);
}

TEST_CASE("retryable backend failures are retried once per call") {
    const auto roster = testsupport::make_roster(core::ExpertGroup::Math,
                                                 core::Paradigm::DiversityDriven, 3);
    const auto instance = testsupport::make_instance("inst-4", core::TaskDomain::Math, 4, 0);

    nlohmann::json script;
    script["default"] = "\\boxed{A}";
    script["responses"]["inst-4"]["2"] = {
        {"text", "recovered \\boxed{A}"}, {"fail_times", 1}, {"fail_kind", "retryable"}};
    backends::MockChatBackend backend(script);

    const auto result = protocol::run_collaboration(roster, instance, backend);
    CHECK(result.correct);
    CHECK(backend.call_count() == 4);  // 3 turns + 1 retried call
}

TEST_CASE("a terminal backend failure aborts with the partial transcript") {
    const auto roster = testsupport::make_roster(core::ExpertGroup::Math,
                                                 core::Paradigm::DiversityDriven, 3);
    const auto instance = testsupport::make_instance("inst-5", core::TaskDomain::Math, 4, 0);

    nlohmann::json script;
    script["default"] = "\\boxed{A}";
    script["responses"]["inst-5"]["3"] = {
        {"text", "never served"}, {"fail_times", 1}, {"fail_kind", "terminal"}};
    backends::MockChatBackend backend(script);

    try {
        protocol::run_collaboration(roster, instance, backend);
        FAIL("expected CollaborationAborted");
    } catch (const protocol::CollaborationAborted& e) {
        CHECK(e.partial().turns.size() == 2);
        CHECK_FALSE(e.partial().system_answer.has_value());
        CHECK(std::string(e.what()).find("agent 3") != std::string::npos);
    }
}

TEST_CASE("two retryable failures in a row exhaust the retry and abort") {
    const auto roster = testsupport::make_roster(core::ExpertGroup::Math,
                                                 core::Paradigm::DiversityDriven, 3);
    const auto instance = testsupport::make_instance("inst-6", core::TaskDomain::Math, 4, 0);

    nlohmann::json script;
    script["default"] = "\\boxed{A}";
    script["responses"]["inst-6"]["1"] = {
        {"text", "never served"}, {"fail_times", 2}, {"fail_kind", "retryable"}};
    backends::MockChatBackend backend(script);

    CHECK_THROWS_AS(protocol::run_collaboration(roster, instance, backend),
                    protocol::CollaborationAborted);
    CHECK(backend.call_count() == 2);
}

TEST_SUITE_END();
