#pragma once

#include "mocp/actions.hpp"
#include "mocp/comp_automaton.hpp"
#include "mocp/journal.hpp"
#include "mocp/manager.hpp"
#include "mocp/monitor.hpp"
#include "mocp/scenario.hpp"
#include "mocp/world.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace mocp {

struct SimulationConfig {
    /// Attempts before a payment or courier booking is abandoned.
    std::int64_t retries = 3;
    /// Overrides the scenario seed when set. Parity picks which of payment
    /// and courier booking goes first.
    std::optional<std::int64_t> seed;
    /// Trigger resolutions allowed while answering one system event.
    std::size_t max_triggers_per_event = 1000;
};

struct Report {
    Trace trace;
    WorldState world_final;
    Journal journal;
    std::vector<std::string> unheard_channels;

    std::vector<std::string> handshake_lines() const;
    std::vector<std::string> emission_lines() const;

    /// Journal lines followed by the final world summary.
    std::string text() const;

    /// Every emission's origin seq appears in the trace; every Normal event
    /// got exactly two continues. Throws ProtocolError.
    void check_consistency() const;
};

/// Cross-checks a bundle of specs before running. Errors make a run refuse to start.
struct BundleCheck {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    bool ok() const noexcept { return errors.empty(); }
};

BundleCheck check_bundle(const std::vector<CompAutomatonSpec>& automata, const std::vector<MonitorSpec>& monitors,
                         const ActionRegistry& registry);

/// Deterministic single-threaded run of system, monitor layer and manager.
///
/// Every Normal-phase event blocks the system until two continue tokens for
/// it sit on the continue line: the monitor's (or a manager proxy when a
/// monitor asked to compensate) and the manager's.
class Simulation {
public:
    /// Throws SpecError if check_bundle reports errors.
    Simulation(std::vector<CompAutomatonSpec> automata, std::vector<MonitorSpec> monitors, SimulationConfig config = {},
               ActionRegistry registry = ActionRegistry::eprocurement());

    // The manager keeps a pointer to the journal member.
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    /// Runs the script to completion. Throws Deadlock if a handshake is not
    /// honoured and SpecError for script errors.
    Report run(const ScenarioScript& script);

    const Manager& manager() const noexcept { return manager_; }
    const MonitorLayer& monitors() const noexcept { return monitors_; }
    const WorldState& world() const noexcept { return world_; }

private:
    void run_step(const ScenarioStep& step);
    void run_order(const PayloadMap& args);
    Event make_event(ActionEffect effect, Phase phase);
    void emit(ActionEffect effect);
    Ack execute(const CompensationInstruction& instr);
    std::vector<MonitorOutput> feed(const Event& e);
    void await_continues(std::uint64_t seq);

    std::vector<CompAutomatonSpec> automata_;
    std::vector<MonitorSpec> monitor_specs_;
    SimulationConfig config_;
    ActionRegistry registry_;

    WorldState world_;
    Trace trace_;
    Journal journal_;
    MonitorLayer monitors_;
    Manager manager_;
    std::deque<ContinueToken> continue_line_;
    std::vector<std::string> unheard_;
    std::uint64_t next_seq_ = 1;
    std::int64_t seed_ = 0;
    std::int64_t pending_payment_fails_ = 0;
};

}  // namespace mocp
