#include "mocp/case_study.hpp"
#include "mocp/errors.hpp"
#include "mocp/spec_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace mocp;

TEST(SpecIo, ParsesAutomaton) {
    auto a = parse_automaton(R"({
        "name": "B4", "states": ["q"], "initial": "q", "finals": [],
        "transitions": [{"from": "q", "to": "q", "on": "transfer",
                         "frame": [{"comp": "blockCard", "capture": ["card", "card=to"]}]}]
    })");
    ASSERT_EQ(a.transitions.size(), 1u);
    const auto& cap = a.transitions[0].frame[0].capture;
    EXPECT_EQ(cap[0], (Capture{"card", "card"}));
    EXPECT_EQ(cap[1], (Capture{"card", "to"}));
}

TEST(SpecIo, UnknownKeysAreErrors) {
    EXPECT_THROW(parse_automaton(R"({"name": "x", "states": ["q"], "initial": "q", "colour": 1})"), SpecError);
    EXPECT_THROW(parse_scenario(R"({"steps": [{"dance": true}]})"), SpecError);
}

TEST(SpecIo, InvalidJsonIsSpecError) {
    EXPECT_THROW(parse_monitor("{"), SpecError);
    EXPECT_THROW(parse_scenario(R"({"steps": [{"do": "load", "args": {"amount": 1.5}}]})"), SpecError);
}

TEST(SpecIo, ParsesMonitorActions) {
    auto m = parse_monitor(R"json({
        "name": "m", "states": ["s"], "initial": "s",
        "vars": {"n": {"type": "counter"}}, "params": {"k": 2},
        "transitions": [{"from": "s", "to": "s", "on": "channel:go", "guard": "n < k",
                         "do": [{"inc": "n", "by": 2}, {"emit": "x"}, {"compensate": "seq(A, B)"}, {"discard": ["C"]}]}]
    })json");
    const auto& t = m.transitions[0];
    EXPECT_EQ(t.input, MonitorTransition::Input::Channel);
    EXPECT_EQ(t.actions.size(), 4u);
    EXPECT_EQ(std::get<IncVar>(t.actions[0]).by, 2);
    EXPECT_EQ(std::get<EmitCompensate>(t.actions[2]).expr.to_string(), "seq(A, B)");
}

TEST(SpecIo, ParsesScenarioSteps) {
    auto s = parse_scenario(R"({"name": "x", "seed": 3, "steps": [
        {"do": "load", "args": {"user": "u1", "amount": 5}},
        {"inject": "paymentFail", "count": 2},
        {"inject": "courierBFail"},
        {"userCancel": {"user": "u1", "txn": "t1"}},
        {"classify": "trustedFlag", "user": "u1"},
        {"emit": "ping", "payload": {"n": 1}}]})");
    EXPECT_EQ(s.seed, 3);
    ASSERT_EQ(s.steps.size(), 6u);
    EXPECT_EQ(std::get<InjectFault>(s.steps[1]).count, 2);
    EXPECT_EQ(std::get<InjectFault>(s.steps[2]).kind, InjectFault::Kind::CourierBFail);
    EXPECT_EQ(std::get<ClassifyHint>(s.steps[4]).kind, ClassifyHint::Kind::TrustedFlag);
    EXPECT_EQ(std::get<EmitStep>(s.steps[5]).payload.at("n"), Scalar{std::int64_t{1}});
}

TEST(SpecIo, MissingFileIsIoError) {
    EXPECT_THROW(load_automaton("/nonexistent/a.json"), IoError);
}

TEST(SpecIo, DirectoriesExpandInNameOrder) {
    const auto dir = std::filesystem::temp_directory_path() / "mocp_spec_io_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    for (const auto* n : {"b.json", "a.json", "notes.txt"}) std::ofstream(dir / n) << "{}";
    auto paths = expand_spec_paths({dir});
    ASSERT_EQ(paths.size(), 2u);
    EXPECT_EQ(paths[0].filename(), "a.json");
    EXPECT_EQ(paths[1].filename(), "b.json");
    std::filesystem::remove_all(dir);
}

TEST(CaseStudy, EmbeddedFixturesParse) {
    EXPECT_EQ(case_study::strategies().size(), 7u);
    EXPECT_EQ(case_study::monitors().size(), 5u);
    EXPECT_NO_THROW(case_study::audit_monitor());
    for (const auto& n : case_study::scenario_names()) EXPECT_NO_THROW(case_study::scenario(n)) << n;
    EXPECT_THROW(case_study::fixture("nope.json"), SpecError);
}
