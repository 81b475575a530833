#include "helpers.hpp"

#include "mocp/errors.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mocp;
using test::ev;
using test::instr;
using test::tr;

namespace {

std::vector<std::string> actions(const std::vector<CompensationInstruction>& v) {
    std::vector<std::string> out;
    for (const auto& i : v) out.push_back(i.comp_action);
    return out;
}

CompAutomatonSpec shop() {
    CompAutomatonSpec s;
    s.name = "shop";
    s.states = {"idle", "browsing"};
    s.initial = "idle";
    s.transitions = {
        tr("idle", "browsing", "login"),
        tr("browsing", "browsing", "decrementStock", {instr("incrementStock", {{"item", "item"}, {"qty", "qty"}})}),
        tr("browsing", "browsing", "payment", {instr("refund", {{"amount", "amount"}})}),
    };
    return s;
}

}  // namespace

TEST(CompInstance, TransitionWithoutFrameInstallsNothing) {
    CompInstance a(shop());
    auto effect = a.step(ev(1, "login"));
    EXPECT_TRUE(effect.moved);
    EXPECT_EQ(effect.pushed, 0u);
    EXPECT_EQ(a.current(), "browsing");
    EXPECT_TRUE(a.stack().empty());
}

TEST(CompInstance, FramesStackInInstallOrder) {
    CompInstance a(shop());
    a.step(ev(1, "login"));
    a.step(ev(2, "decrementStock", {}, {{"item", "pen"}, {"qty", std::int64_t{2}}}));
    a.step(ev(3, "payment", {}, {{"amount", std::int64_t{300}}}));
    ASSERT_EQ(a.stack().size(), 2u);
    EXPECT_EQ(a.stack()[0].instructions[0].comp_action, "incrementStock");
    EXPECT_EQ(a.stack()[1].instructions[0].comp_action, "refund");
    EXPECT_EQ(a.stack()[1].origin_seq, 3u);
}

TEST(CompInstance, UnmatchedEventLeavesInstanceUnchanged) {
    CompInstance a(shop());
    a.step(ev(1, "login"));
    const auto before = a.serialize();
    EXPECT_TRUE(a.step(ev(2, "logout")).no_change());
    EXPECT_EQ(a.serialize(), before);
}

TEST(CompInstance, ClearStackDropsEverything) {
    CompAutomatonSpec s;
    s.name = "C";
    s.states = {"booking", "shipped"};
    s.initial = "booking";
    s.transitions = {tr("booking", "booking", "book", {instr("cancel")}),
                     tr("booking", "shipped", "ship", {}, TransitionAction::ClearStack)};
    CompInstance a(s);
    a.step(ev(1, "book"));
    a.step(ev(2, "book"));
    auto effect = a.step(ev(3, "ship"));
    EXPECT_TRUE(effect.cleared);
    EXPECT_TRUE(a.stack().empty());
    EXPECT_TRUE(a.activate().empty());
}

TEST(CompInstance, BoxExitPurgesFramesInstalledInside) {
    CompAutomatonSpec s;
    s.name = "boxed";
    s.states = {"start", "in", "work", "out"};
    s.initial = "start";
    s.transitions = {
        tr("start", "in", "enter", {instr("before")}),
        tr("in", "work", "a", {instr("x")}),
        tr("work", "work", "b", {instr("y")}),
        tr("work", "out", "done"),
    };
    s.boxes = {Box{"scope", "in", "out"}};
    s.validate();
    CompInstance a(s);
    a.step(ev(1, "enter"));
    a.step(ev(2, "a"));
    a.step(ev(3, "b"));
    EXPECT_EQ(a.stack().size(), 3u);
    auto effect = a.step(ev(4, "done"));
    EXPECT_EQ(effect.purged, 2u);
    ASSERT_EQ(a.stack().size(), 1u);
    EXPECT_EQ(a.stack()[0].instructions[0].comp_action, "before");
    EXPECT_TRUE(a.box_marks().empty());
}

TEST(CompInstance, NestedBoxesPurgeInnermostFirst) {
    CompAutomatonSpec s;
    s.name = "nested";
    s.states = {"o_in", "i_in", "i_out", "o_out"};
    s.initial = "o_in";
    s.transitions = {
        tr("o_in", "i_in", "a", {instr("outer")}),
        tr("i_in", "i_in", "b", {instr("inner")}),
        tr("i_in", "i_out", "c"),
        tr("i_out", "i_out", "d", {instr("outer2")}),
        tr("i_out", "o_out", "e"),
    };
    s.boxes = {Box{"outer", "o_in", "o_out"}, Box{"inner", "i_in", "i_out"}};
    s.validate();
    CompInstance a(s);
    a.step(ev(1, "a"));
    a.step(ev(2, "b"));
    EXPECT_EQ(a.step(ev(3, "c")).purged, 1u);
    EXPECT_EQ(actions(std::vector<CompensationInstruction>{a.stack()[0].instructions[0]}),
              std::vector<std::string>{"outer"});
    a.step(ev(4, "d"));
    EXPECT_EQ(a.step(ev(5, "e")).purged, 2u);
    EXPECT_TRUE(a.stack().empty());
}

TEST(CompAutomatonSpec, OverlappingBoxesAreMalformed) {
    CompAutomatonSpec s;
    s.name = "bad";
    s.states = {"a", "b", "c", "d"};
    s.initial = "a";
    s.transitions = {tr("a", "b", "x"), tr("b", "c", "x"), tr("c", "d", "x")};
    s.boxes = {Box{"one", "a", "c"}, Box{"two", "b", "d"}};
    EXPECT_THROW(s.validate(), MalformedSpec);
}

TEST(CompAutomatonSpec, ReportsDeterminismViolations) {
    auto s = shop();
    s.transitions.push_back(tr("browsing", "idle", "payment"));
    auto v = s.determinism_violations();
    ASSERT_EQ(v.size(), 1u);
    EXPECT_NE(v[0].find("browsing"), std::string::npos);
    EXPECT_NE(v[0].find("payment"), std::string::npos);
}

TEST(CompInstance, OverlappingGuardsThrowAtRuntime) {
    auto s = shop();
    s.transitions.push_back(CompTransition{"browsing", "browsing", "payment", Guard::parse("payload.amount > 0"), {}, {}});
    s.transitions[2].guard = Guard::parse("payload.amount > 100");
    CompInstance a(s);
    a.step(ev(1, "login"));
    EXPECT_NO_THROW(a.step(ev(2, "payment", {}, {{"amount", std::int64_t{50}}})));
    EXPECT_THROW(a.step(ev(3, "payment", {}, {{"amount", std::int64_t{500}}})), MalformedSpec);
}

TEST(CompInstance, ActivateReturnsFramesNewestFirst) {
    CompAutomatonSpec s;
    s.name = "abc";
    s.states = {"q"};
    s.initial = "q";
    s.transitions = {tr("q", "q", "a", {instr("a_bar")}), tr("q", "q", "b", {instr("b_bar")}),
                     tr("q", "q", "c", {instr("c_bar")})};
    CompInstance x(s);
    x.step(ev(1, "a"));
    x.step(ev(2, "b"));
    x.step(ev(3, "c"));
    EXPECT_EQ(actions(x.activate()), (std::vector<std::string>{"c_bar", "b_bar", "a_bar"}));
    EXPECT_TRUE(x.stack().empty());
    EXPECT_EQ(x.current(), "q");
}

TEST(CompInstance, ActivateEmptyStack) {
    CompInstance x(shop());
    EXPECT_TRUE(x.activate().empty());
}

TEST(CompInstance, InstructionsWithinFrameKeepListedOrder) {
    CompAutomatonSpec s;
    s.name = "xy";
    s.states = {"q"};
    s.initial = "q";
    s.transitions = {tr("q", "q", "t", {instr("x_bar"), instr("y_bar")})};
    CompInstance x(s);
    x.step(ev(1, "t"));
    EXPECT_EQ(actions(x.activate()), (std::vector<std::string>{"x_bar", "y_bar"}));
}

TEST(CompInstance, DeactivatedInstanceIgnoresEvents) {
    CompInstance a(shop());
    a.step(ev(1, "login"));
    a.step(ev(2, "payment", {}, {{"amount", std::int64_t{1}}}));
    a.deactivate();
    EXPECT_FALSE(a.active());
    EXPECT_TRUE(a.stack().empty());
    EXPECT_TRUE(a.step(ev(3, "payment", {}, {{"amount", std::int64_t{1}}})).no_change());
    EXPECT_TRUE(a.stack().empty());
}

TEST(Bind, CopiesPayloadAndSubject) {
    auto e = ev(9, "payment", {{"card", "c1"}}, {{"amount", std::int64_t{5000}}});
    auto i = bind(instr("refund", {{"amount", "amount"}}), e, "B1");
    EXPECT_EQ(i.bound_args, (PayloadMap{{"amount", std::int64_t{5000}}}));
    EXPECT_EQ(i.origin_seq, 9u);
    EXPECT_EQ(i.strategy, "B1");
    EXPECT_EQ(bind(instr("block", {{"card", "card"}}), e, "B4").bound_args, (PayloadMap{{"card", "c1"}}));
}

TEST(Bind, MissingKeyThrows) {
    auto e = ev(1, "payment");
    EXPECT_THROW(bind(instr("refund", {{"balance", "balance"}}), e, "B1"), MissingCaptureKey);
}

TEST(CompInstance, FailedBindLeavesInstanceUntouched) {
    CompInstance a(shop());
    a.step(ev(1, "login"));
    const auto before = a.serialize();
    EXPECT_THROW(a.step(ev(2, "payment")), MissingCaptureKey);
    EXPECT_EQ(a.serialize(), before);
}

// Random single-state automata: every event installs a frame of one to three
// instructions. An independent recorder logs (seq, index) per install; the
// activation must be the recorder reversed frame by frame.
TEST(CompInstanceProperty, ActivationMatchesRecorder) {
    std::mt19937 rng(7);
    for (int round = 0; round < 200; ++round) {
        CompAutomatonSpec s;
        s.name = "rand";
        s.states = {"q"};
        s.initial = "q";
        std::vector<std::size_t> widths;
        for (int k = 0; k < 4; ++k) {
            const std::size_t w = 1 + rng() % 3;
            widths.push_back(w);
            std::vector<InstructionTemplate> frame;
            for (std::size_t j = 0; j < w; ++j) frame.push_back(instr("e" + std::to_string(k) + "_" + std::to_string(j)));
            s.transitions.push_back(tr("q", "q", "e" + std::to_string(k), frame));
        }
        CompInstance a(s);
        std::vector<std::vector<std::pair<std::uint64_t, std::string>>> recorder;
        const int len = static_cast<int>(rng() % 30);
        for (int i = 0; i < len; ++i) {
            const int k = static_cast<int>(rng() % 4);
            const auto seq = static_cast<std::uint64_t>(i + 1);
            a.step(ev(seq, "e" + std::to_string(k)));
            std::vector<std::pair<std::uint64_t, std::string>> rec;
            for (std::size_t j = 0; j < widths[static_cast<std::size_t>(k)]; ++j) {
                rec.emplace_back(seq, "e" + std::to_string(k) + "_" + std::to_string(j));
            }
            recorder.push_back(rec);
        }
        std::vector<std::pair<std::uint64_t, std::string>> expected;
        for (auto it = recorder.rbegin(); it != recorder.rend(); ++it) expected.insert(expected.end(), it->begin(), it->end());
        std::vector<std::pair<std::uint64_t, std::string>> got;
        for (const auto& i : a.activate()) got.emplace_back(i.origin_seq, i.comp_action);
        ASSERT_EQ(got, expected) << "round " << round;
    }
}
