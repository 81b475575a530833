#include "helpers.hpp"

#include "mocp/errors.hpp"
#include "mocp/guard.hpp"

#include <gtest/gtest.h>

using namespace mocp;
using test::ev;

namespace {

Guard::VarLookup vars(std::map<std::string, Scalar> m) {
    return [m = std::move(m)](const std::string& n) -> std::optional<Scalar> {
        auto it = m.find(n);
        if (it == m.end()) return std::nullopt;
        return it->second;
    };
}

}  // namespace

TEST(Guard, BlankIsAlwaysTrue) {
    auto g = Guard::parse("  ");
    EXPECT_TRUE(g.always_true());
    EXPECT_TRUE(g.evaluate(nullptr));
}

TEST(Guard, ArithmeticAndComparison) {
    auto g = Guard::parse("fails + 1 >= k");
    EXPECT_EQ(g.variables(), (std::set<std::string>{"fails", "k"}));
    EXPECT_FALSE(g.evaluate(nullptr, vars({{"fails", std::int64_t{1}}, {"k", std::int64_t{3}}})));
    EXPECT_TRUE(g.evaluate(nullptr, vars({{"fails", std::int64_t{2}}, {"k", std::int64_t{3}}})));
}

TEST(Guard, EventReferences) {
    auto e = ev(1, "courierCancelled", {{"user", "u1"}}, {{"payer", "user"}}, Phase::DuringCompensation);
    EXPECT_TRUE(Guard::parse("phase == \"DuringCompensation\" && payload.payer == \"user\"").evaluate(&e));
    EXPECT_TRUE(Guard::parse("subject.user == \"u1\"").evaluate(&e));
    EXPECT_TRUE(Guard::parse("event.payer != \"bank\"").evaluate(&e));
    EXPECT_FALSE(Guard::parse("phase == \"Normal\"").evaluate(&e));
}

TEST(Guard, MissingReferenceMakesComparisonFalse) {
    auto e = ev(1, "x");
    EXPECT_FALSE(Guard::parse("payload.amount > 0").evaluate(&e));
    EXPECT_FALSE(Guard::parse("payload.amount == payload.amount").evaluate(&e));
    EXPECT_TRUE(Guard::parse("!(payload.amount > 0)").evaluate(&e));
}

TEST(Guard, PrecedenceAndParentheses) {
    EXPECT_TRUE(Guard::parse("true || false && false").evaluate(nullptr));
    EXPECT_FALSE(Guard::parse("(true || false) && false").evaluate(nullptr));
    EXPECT_TRUE(Guard::parse("10 - 3 - 2 == 5").evaluate(nullptr));
}

TEST(Guard, SyntaxErrorsThrow) {
    EXPECT_THROW(Guard::parse("a >="), SpecError);
    EXPECT_THROW(Guard::parse("(a == 1"), SpecError);
    EXPECT_THROW(Guard::parse("\"open"), SpecError);
    EXPECT_THROW(Guard::parse("a == 1 extra"), SpecError);
}
