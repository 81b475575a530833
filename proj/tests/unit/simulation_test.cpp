#include "mocp/case_study.hpp"
#include "mocp/errors.hpp"
#include "mocp/simulation.hpp"

#include <gtest/gtest.h>

using namespace mocp;

namespace {

Report run(const std::string& name, std::vector<MonitorSpec> monitors = case_study::monitors()) {
    Simulation sim(case_study::strategies(), std::move(monitors));
    return sim.run(case_study::scenario(name));
}

std::vector<std::string> comp_actions(const Report& r) {
    std::vector<std::string> out;
    for (const auto& e : r.journal.emissions()) out.push_back(e.instruction.strategy + "." + e.instruction.comp_action);
    return out;
}

}  // namespace

TEST(Simulation, HappyPathFiresNoCompensation) {
    auto r = run("happy_path");
    EXPECT_TRUE(r.journal.triggers().empty());
    EXPECT_TRUE(r.journal.emissions().empty());
    EXPECT_TRUE(r.world_final.shipments.contains("t1"));
    EXPECT_EQ(r.world_final.bookings.at("t1"), "A");
    EXPECT_NO_THROW(r.check_consistency());
}

TEST(Simulation, CourierAUnavailableBooksB) {
    auto r = run("courier_a_down");
    EXPECT_EQ(r.world_final.bookings.at("t1"), "B");
    EXPECT_TRUE(r.journal.triggers().empty());
}

TEST(Simulation, GreyCancelRefundsMinusFeeAndCancelsCourier) {
    auto r = run("grey_cancel");
    EXPECT_EQ(comp_actions(r), (std::vector<std::string>{"B2.refundUserFee", "C2.cancelCourierUserFee"}));
    // 10000 deposited, 5000 loaded, 3000 paid from the card; refund 3000 - 200,
    // courier fee 200 from the bank account.
    EXPECT_EQ(r.world_final.bank_accounts.at("u1"), 5000 + (3000 - 200) - 200);
    EXPECT_EQ(r.world_final.charges_by("user"), 400);
    EXPECT_EQ(r.world_final.user_funds(), r.world_final.deposits);
}

TEST(Simulation, ThreePaymentFailsResolveBankErrorPlan) {
    auto r = run("grey_bank_error");
    ASSERT_EQ(r.journal.triggers().size(), 1u);
    EXPECT_EQ(r.journal.triggers()[0].expr.to_string(), "par(B1, C2)");
    std::size_t fails = 0;
    for (const auto& e : r.trace.events()) fails += e.name == "paymentFail";
    EXPECT_EQ(fails, 3u);
}

TEST(Simulation, TwoFailsThenSuccessRaisesNothing) {
    auto r = run("payment_recovers");
    EXPECT_TRUE(r.journal.triggers().empty());
    EXPECT_TRUE(r.world_final.orders.at("t1").paid);
}

TEST(Simulation, EveryNormalEventGetsTwoContinues) {
    for (const auto& name : case_study::scenario_names()) {
        auto r = run(name);
        EXPECT_NO_THROW(r.check_consistency()) << name;
    }
}

TEST(Simulation, ProxyTokenWhenMonitorCompensates) {
    auto r = run("grey_cancel");
    const auto lines = r.handshake_lines();
    std::uint64_t cancel_seq = 0;
    for (const auto& e : r.trace.events()) {
        if (e.name == "cancel") cancel_seq = e.seq;
    }
    std::vector<std::string> for_cancel;
    for (const auto& h : r.journal.handshakes()) {
        if (h.token.for_seq == cancel_seq) for_cancel.emplace_back(token_source_label(h.token));
    }
    EXPECT_EQ(for_cancel, (std::vector<std::string>{"manager-proxy", "manager"}));
}

TEST(Simulation, CompensationEventsGetNoTokens) {
    auto r = run("grey_cancel");
    for (const auto& h : r.journal.handshakes()) {
        EXPECT_EQ(r.trace.find(h.token.for_seq)->phase, Phase::Normal);
    }
}

TEST(Simulation, SameSeedGivesIdenticalReport) {
    for (const auto& name : case_study::scenario_names()) {
        EXPECT_EQ(run(name).text(), run(name).text()) << name;
    }
}

TEST(Simulation, SeedParitySwapsPayAndBook) {
    SimulationConfig odd;
    odd.seed = 1;
    Simulation even_sim(case_study::strategies(), case_study::monitors());
    Simulation odd_sim(case_study::strategies(), case_study::monitors(), odd);
    auto names = [](const Report& r) {
        std::vector<std::string> out;
        for (const auto& e : r.trace.events()) out.push_back(e.name);
        return out;
    };
    auto a = names(even_sim.run(case_study::scenario("happy_path")));
    auto b = names(odd_sim.run(case_study::scenario("happy_path")));
    auto pos = [](const std::vector<std::string>& v, const std::string& n) {
        return std::find(v.begin(), v.end(), n) - v.begin();
    };
    EXPECT_LT(pos(a, "payment"), pos(a, "bookCourierA"));
    EXPECT_GT(pos(b, "payment"), pos(b, "bookCourierA"));
}

TEST(Simulation, RefusedActionBecomesFailEvent) {
    ScenarioScript s;
    s.steps = {DoStep{"createUser", {{"user", "u1"}, {"balance", std::int64_t{100}}}},
               DoStep{"createCard", {{"user", "u1"}, {"card", "c1"}}},
               DoStep{"load", {{"user", "u1"}, {"card", "c1"}, {"amount", std::int64_t{500}}}}};
    Simulation sim(case_study::strategies(), case_study::monitors());
    auto r = sim.run(s);
    const auto& last = r.trace.events().back();
    EXPECT_EQ(last.name, "loadFail");
    EXPECT_EQ(last.subject.at("card"), "c1");
    EXPECT_TRUE(last.payload.contains("reason"));
}

TEST(Simulation, RejectsBundleWithUnknownStrategy) {
    auto monitors = case_study::monitors();
    auto strategies = case_study::strategies();
    strategies.erase(strategies.begin());  // B1
    EXPECT_THROW(Simulation(strategies, monitors), SpecError);
}

TEST(Simulation, RejectsZeroRetries) {
    SimulationConfig c;
    c.retries = 0;
    EXPECT_THROW(Simulation(case_study::strategies(), case_study::monitors(), c), SpecError);
}

TEST(Simulation, SnapshotArgumentsSurviveLaterMutation) {
    auto r = run("snapshot_binding");
    // The refund uses the amount bound at payment time although the card was
    // emptied by a transfer and reloaded before the cancellation.
    ASSERT_FALSE(r.journal.emissions().empty());
    const auto& refund = r.journal.emissions().front().instruction;
    EXPECT_EQ(refund.comp_action, "refundUserFee");
    EXPECT_EQ(refund.bound_args.at("amount"), Scalar{std::int64_t{3000}});
    EXPECT_EQ(r.world_final.withheld.size(), 0u);
    EXPECT_EQ(r.world_final.user_funds(), r.world_final.deposits);
}

TEST(CheckBundle, CaseStudyIsClean) {
    auto check = check_bundle(case_study::strategies(), case_study::monitors(), ActionRegistry::eprocurement());
    EXPECT_TRUE(check.ok());
}
