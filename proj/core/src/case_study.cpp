#include "mocp/case_study.hpp"

#include "mocp/errors.hpp"
#include "mocp/spec_io.hpp"

#include <algorithm>

namespace mocp::case_study {

namespace detail {
std::span<const EmbeddedFile> fixture_table();
}

std::span<const EmbeddedFile> embedded_files() { return detail::fixture_table(); }

std::string_view fixture(std::string_view path) {
    for (const auto& f : embedded_files()) {
        if (f.path == path) return f.content;
    }
    throw SpecError("no embedded fixture '" + std::string(path) + "'");
}

namespace {

std::vector<std::string_view> under(std::string_view dir) {
    std::vector<std::string_view> out;
    for (const auto& f : embedded_files()) {
        if (f.path.starts_with(dir) && f.path.size() > dir.size() && f.path[dir.size()] == '/') out.push_back(f.path);
    }
    return out;
}

}  // namespace

std::vector<CompAutomatonSpec> strategies() {
    std::vector<CompAutomatonSpec> out;
    for (auto path : under("automata")) out.push_back(parse_automaton(fixture(path)));
    return out;
}

std::vector<MonitorSpec> monitors(std::int64_t retries) {
    std::vector<MonitorSpec> out;
    for (auto path : under("monitors")) out.push_back(parse_monitor(fixture(path)));
    set_param(out, "k", retries);
    return out;
}

MonitorSpec audit_monitor() { return parse_monitor(fixture("extra/cancellation_audit.json")); }

std::vector<std::string> scenario_names() {
    std::vector<std::string> out;
    for (auto path : under("scenarios")) {
        auto name = path.substr(std::string_view("scenarios/").size());
        name.remove_suffix(std::string_view(".json").size());
        out.emplace_back(name);
    }
    return out;
}

ScenarioScript scenario(std::string_view name) {
    return parse_scenario(fixture("scenarios/" + std::string(name) + ".json"));
}

std::string_view to_string(UserClass c) noexcept {
    switch (c) {
        case UserClass::Grey: return "grey";
        case UserClass::White: return "white";
        case UserClass::Black: return "black";
    }
    return "?";
}

std::string_view to_string(ErrorKind k) noexcept {
    switch (k) {
        case ErrorKind::UserCancel: return "userCancel";
        case ErrorKind::BankError: return "bankError";
        case ErrorKind::CourierError: return "courierError";
    }
    return "?";
}

ScenarioScript canonical_scenario(UserClass user, ErrorKind error, std::int64_t retries) {
    ScenarioScript s;
    s.name = std::string(to_string(user)) + "_" + std::string(to_string(error));
    s.steps.push_back(DoStep{"createUser", {{"user", "u1"}, {"balance", std::int64_t{10000}}}});
    s.steps.push_back(DoStep{"createCard", {{"user", "u1"}, {"card", "c1"}}});
    s.steps.push_back(DoStep{"load", {{"user", "u1"}, {"card", "c1"}, {"amount", std::int64_t{5000}}}});
    if (user == UserClass::Black) s.steps.push_back(ClassifyHint{ClassifyHint::Kind::FraudFlag, "u1"});
    if (user == UserClass::White) s.steps.push_back(ClassifyHint{ClassifyHint::Kind::TrustedFlag, "u1"});

    const DoStep order{"order", {{"user", "u1"}, {"card", "c1"}, {"txn", "t1"}, {"amount", std::int64_t{3000}}}};
    switch (error) {
        case ErrorKind::UserCancel:
            s.steps.push_back(order);
            s.steps.push_back(UserCancel{"u1", "t1"});
            break;
        case ErrorKind::BankError:
            s.steps.push_back(InjectFault{InjectFault::Kind::PaymentFail, retries});
            s.steps.push_back(order);
            break;
        case ErrorKind::CourierError:
            s.steps.push_back(InjectFault{InjectFault::Kind::CourierAFail, 1});
            s.steps.push_back(InjectFault{InjectFault::Kind::CourierBFail, 1});
            s.steps.push_back(order);
            break;
    }
    return s;
}

std::vector<MatrixCell> run_matrix(const std::vector<CompAutomatonSpec>& automata,
                                   const std::vector<MonitorSpec>& monitors, const SimulationConfig& config) {
    std::vector<MatrixCell> cells;
    Simulation sim(automata, monitors, config);
    for (auto user : {UserClass::Grey, UserClass::White, UserClass::Black}) {
        for (auto error : {ErrorKind::UserCancel, ErrorKind::BankError, ErrorKind::CourierError}) {
            auto report = sim.run(canonical_scenario(user, error, config.retries));
            std::vector<TriggerExpr> resolved;
            for (const auto& t : report.journal.triggers()) resolved.push_back(t.expr);
            cells.push_back(MatrixCell{user, error, std::move(resolved), std::move(report)});
        }
    }
    return cells;
}

std::string format_matrix(const std::vector<MatrixCell>& cells) {
    std::string out;
    for (const auto& c : cells) {
        out += "(" + std::string(to_string(c.user)) + ", " + std::string(to_string(c.error)) + ") -> ";
        if (c.resolved.empty()) {
            out += "none";
        } else {
            for (std::size_t i = 0; i < c.resolved.size(); ++i) {
                if (i) out += "; ";
                out += c.resolved[i].to_string();
            }
        }
        out += '\n';
    }
    return out;
}

}  // namespace mocp::case_study
