#pragma once

#include "mocp/comp_automaton.hpp"
#include "mocp/event.hpp"
#include "mocp/journal.hpp"
#include "mocp/monitor.hpp"
#include "mocp/trigger_expr.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mocp {

struct Batch {
    enum class Mode { Sequential, ParallelOk };

    Mode mode = Mode::Sequential;
    std::vector<CompensationInstruction> instructions;
};

/// Ordered batches produced by resolving one trigger expression.
///
/// `seq` children become consecutive batches. A `par` without nested `seq`
/// becomes one ParallelOk batch, grouped by strategy in name order. A `par`
/// that contains a `seq` is linearized child by child, which any parallel
/// schedule allows. Strategies with nothing to emit contribute no batch.
struct EmissionPlan {
    std::vector<Batch> batches;

    bool empty() const noexcept { return batches.empty(); }
    std::size_t instruction_count() const noexcept;
};

/// System's answer to one compensation instruction.
struct Ack {
    bool ok = true;
    std::string fault;           ///< reason when !ok
    std::optional<Event> event;  ///< compensation-time event the system emitted
};

/// Mediates between the system, the compensating automata (strategies) and
/// the monitor layer.
///
/// Protocol per system event: the monitor layer steps first; the manager
/// steps every active strategy, applies monitor discards, queues compensate
/// triggers, drains them through emission_loop(), and finally issues its
/// continue token(s).
class Manager {
public:
    /// Receives one instruction, executes it, reports completion.
    using Sink = std::function<Ack(const CompensationInstruction&)>;
    /// Hands a compensation-time event to the monitor layer; returns its outputs.
    using Feed = std::function<std::vector<MonitorOutput>(const Event&)>;

    Manager() = default;
    /// Throws SpecError on duplicate names or invalid specs.
    explicit Manager(std::vector<CompAutomatonSpec> strategies, Journal* journal = nullptr);

    const std::map<std::string, CompInstance>& strategies() const noexcept { return strategies_; }
    const CompInstance& strategy(const std::string& name) const;
    const std::deque<TriggerExpr>& pending() const noexcept { return pending_; }
    const std::map<std::uint64_t, int>& continue_ledger() const noexcept { return continue_ledger_; }
    const std::vector<EmissionRecord>& emission_log() const noexcept { return emission_log_; }

    /// Steps every active strategy with `e`.
    void on_event(const Event& e);

    /// Applies discards immediately and queues compensate triggers, in output
    /// order. Returns true if any compensate trigger was among them.
    bool accept(const std::vector<MonitorOutput>& outputs, std::uint64_t seq);

    void enqueue(TriggerExpr expr, std::uint64_t seq = 0);

    /// Activates every strategy named in `expr`; throws UnknownStrategy
    /// before touching any stack if a name does not exist.
    EmissionPlan resolve(const TriggerExpr& expr);

    /// Deactivates the named strategies. Idempotent; throws UnknownStrategy.
    void discard(const std::set<std::string>& names, std::uint64_t seq = 0);

    /// Drains the trigger queue, re-checking it after each plan is emitted.
    ///
    /// Sequential batches feed each compensation-time event back before the
    /// next instruction; ParallelOk batches are sent whole, then their events
    /// are fed. A failed instruction is recorded and skipped. Throws
    /// ProtocolError if the queue is empty on entry or does not drain within
    /// `max_triggers` resolutions.
    void emission_loop(const Sink& sink, const Feed& feed, std::size_t max_triggers = 1000);

    ContinueToken issue_continue(std::uint64_t seq, bool proxy);

private:
    CompInstance& find(const std::string& name);
    void resolve_into(const TriggerExpr& expr, EmissionPlan& plan);
    void feed_event(const Event& e, const Feed& feed);

    std::map<std::string, CompInstance> strategies_;
    std::deque<TriggerExpr> pending_;
    std::deque<std::uint64_t> pending_seqs_;
    std::vector<EmissionRecord> emission_log_;
    std::map<std::uint64_t, int> continue_ledger_;
    std::uint64_t next_batch_ = 1;
    Journal* journal_ = nullptr;
};

}  // namespace mocp
