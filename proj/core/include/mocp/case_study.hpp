#pragma once

#include "mocp/comp_automaton.hpp"
#include "mocp/monitor.hpp"
#include "mocp/scenario.hpp"
#include "mocp/simulation.hpp"
#include "mocp/trigger_expr.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// The e-procurement case study: compensation strategies B1-B4 (payment side)
// and C1-C3 (courier side), the monitors that choose between them, and the
// scenario scripts shipped with the library.
namespace mocp::case_study {

struct EmbeddedFile {
    std::string_view path;  // relative to the fixtures root, e.g. "automata/B1.json"
    std::string_view content;
};

/// Fixture files compiled into the library, sorted by path.
std::span<const EmbeddedFile> embedded_files();

/// Throws SpecError if no embedded file has that path.
std::string_view fixture(std::string_view path);

std::vector<CompAutomatonSpec> strategies();

/// Bank, courier, cancellation, classification and trigger monitors, with the
/// retry threshold `k` set to `retries`.
std::vector<MonitorSpec> monitors(std::int64_t retries = 3);

/// Reacts to a user-paid courier cancellation during compensation by
/// triggering B4. Not part of the default bundle.
MonitorSpec audit_monitor();

std::vector<std::string> scenario_names();
ScenarioScript scenario(std::string_view name);

enum class UserClass { Grey, White, Black };
enum class ErrorKind { UserCancel, BankError, CourierError };

std::string_view to_string(UserClass c) noexcept;
std::string_view to_string(ErrorKind k) noexcept;

/// Set up a user and card, classify the user, then order and hit `error`.
ScenarioScript canonical_scenario(UserClass user, ErrorKind error, std::int64_t retries = 3);

struct MatrixCell {
    UserClass user;
    ErrorKind error;
    std::vector<TriggerExpr> resolved;
    Report report;
};

/// Runs the canonical scenario for every class and error pair.
std::vector<MatrixCell> run_matrix(const std::vector<CompAutomatonSpec>& automata,
                                   const std::vector<MonitorSpec>& monitors, const SimulationConfig& config = {});

/// One line per cell: `(black, userCancel) -> seq(par(B2, C2), B4)`.
std::string format_matrix(const std::vector<MatrixCell>& cells);

}  // namespace mocp::case_study
