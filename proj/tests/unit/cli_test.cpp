#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "mocp");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = mocp::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

const std::string kFixtures = MOCP_FIXTURES_DIR;

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << content;
    return p;
}

}  // namespace

TEST(Cli, ValidateShippedFixtures) {
    auto r = cli({"--mode", "validate", "--automata", kFixtures + "/automata", "--monitors", kFixtures + "/monitors"});
    EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, MatrixHasNineRows) {
    auto r = cli({"--mode", "matrix"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 9);
    EXPECT_NE(r.out.find("(black, userCancel) -> seq(par(B2, C2), B4)\n"), std::string::npos);
}

TEST(Cli, MissingScenarioIsIoError) {
    EXPECT_EQ(cli({"--scenario", "/nonexistent/scenario.json"}).code, 3);
}

TEST(Cli, RunWritesReport) {
    const auto out = std::filesystem::temp_directory_path() / "mocp_cli_report.txt";
    auto r = cli({"--scenario", kFixtures + "/scenarios/grey_cancel.json", "--out", out.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream f(out);
    std::stringstream text;
    text << f.rdbuf();
    EXPECT_NE(text.str().find("COMP|1|B2|refundUserFee|"), std::string::npos);
    EXPECT_NE(text.str().find("WORLD|funds|10000|10000"), std::string::npos);
    std::filesystem::remove(out);
}

TEST(Cli, SpecErrorsExitOne) {
    auto bad = temp_file("mocp_bad_automaton.json", R"({"name": "x", "states": ["q"], "initial": "nowhere"})");
    EXPECT_EQ(cli({"--mode", "validate", "--automata", bad.string()}).code, 1);
    EXPECT_EQ(cli({"--mode", "matrix", "--retries", "0"}).code, 1);
    EXPECT_EQ(cli({"--mode", "dance"}).code, 1);
    EXPECT_EQ(cli({"--mode", "run"}).code, 1);
    std::filesystem::remove(bad);
}

TEST(Cli, NondeterministicAutomatonIsReportedByName) {
    auto bad = temp_file("mocp_nondet.json", R"({"name": "ND", "states": ["q"], "initial": "q",
        "transitions": [{"from": "q", "to": "q", "on": "payment"}, {"from": "q", "to": "q", "on": "payment"}]})");
    auto r = cli({"--mode", "validate", "--automata", bad.string(), "--monitors", kFixtures + "/extra"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("payment"), std::string::npos);
    EXPECT_NE(r.err.find("'q'"), std::string::npos);
    std::filesystem::remove(bad);
}

TEST(Cli, CompensationFaultExitsTwo) {
    // Blocks a card that was never created.
    auto script = temp_file("mocp_fault.json", R"({"steps": [
        {"do": "createUser", "args": {"user": "u1", "balance": 100}},
        {"emit": "load", "subject": {"user": "u1", "card": "ghost"}, "payload": {"amount": 1}},
        {"emit": "cancel", "subject": {"user": "u1", "txn": "t0"}},
        {"classify": "fraudFlag", "user": "u1"},
        {"emit": "cancel", "subject": {"user": "u1", "txn": "t0"}}]})");
    auto r = cli({"--scenario", script.string()});
    EXPECT_EQ(r.code, 2) << r.err;
    std::filesystem::remove(script);
}
