#pragma once

#include "mocp/event.hpp"
#include "mocp/guard.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mocp {

using StateId = std::string;

/// One argument captured from the triggering event when a frame is installed.
/// `param` names the bound argument, `key` the payload/subject key read.
struct Capture {
    std::string param;
    std::string key;

    friend bool operator==(const Capture&, const Capture&) = default;
};

struct InstructionTemplate {
    std::string comp_action;
    std::vector<Capture> capture;
};

enum class TransitionAction { None, ClearStack };

struct CompTransition {
    StateId source;
    StateId target;
    std::string on;  ///< event name
    Guard guard;
    std::vector<InstructionTemplate> frame;
    TransitionAction action = TransitionAction::None;
};

/// Scope whose compensations are purged when execution reaches `exit`.
struct Box {
    std::string id;
    StateId entry;
    StateId exit;
};

struct CompAutomatonSpec {
    std::string name;
    std::set<StateId> states;
    StateId initial;
    std::set<StateId> finals;
    std::vector<CompTransition> transitions;
    std::vector<Box> boxes;

    /// Structural checks: state references, box nesting, non-empty comp actions.
    /// Throws SpecError (MalformedSpec for nesting problems).
    void validate() const;

    /// Transitions of one state that can match the same event simultaneously:
    /// same event name and either guard missing or both guards textually equal.
    /// Guards that merely overlap on some inputs are caught at runtime by step().
    std::vector<std::string> determinism_violations() const;
};

/// A compensation with its arguments bound at install time.
struct CompensationInstruction {
    std::string comp_action;
    PayloadMap bound_args;
    std::uint64_t origin_seq = 0;
    std::string strategy;

    friend bool operator==(const CompensationInstruction&,
                           const CompensationInstruction&) = default;
};

/// Instructions installed atomically by one transition.
struct Frame {
    std::vector<CompensationInstruction> instructions;
    std::uint64_t origin_seq = 0;

    friend bool operator==(const Frame&, const Frame&) = default;
};

/// Snapshot of `t.capture` from `e`. Throws MissingCaptureKey.
CompensationInstruction bind(const InstructionTemplate& t, const Event& e,
                             const std::string& strategy);

struct StepEffect {
    bool moved = false;
    std::size_t pushed = 0;  ///< instructions in the installed frame, 0 if none
    bool cleared = false;
    std::size_t purged = 0;  ///< frames discarded by box exits

    bool no_change() const noexcept { return !moved; }
    friend bool operator==(const StepEffect&, const StepEffect&) = default;
};

/// Running compensating automaton (one compensation strategy).
class CompInstance {
public:
    struct BoxMark {
        std::string box;
        std::size_t depth;

        friend bool operator==(const BoxMark&, const BoxMark&) = default;
    };

    explicit CompInstance(CompAutomatonSpec spec);

    const CompAutomatonSpec& spec() const noexcept { return spec_; }
    const std::string& name() const noexcept { return spec_.name; }
    const StateId& current() const noexcept { return current_; }
    const std::vector<Frame>& stack() const noexcept { return stack_; }
    const std::vector<BoxMark>& box_marks() const noexcept { return marks_; }
    bool active() const noexcept { return active_; }

    /// Fires the single matching outgoing transition of the current state.
    ///
    /// Order of effects: clear, push frame, purge for a box exit, mark for a
    /// box entry. Unmatched events leave the instance unchanged. Throws
    /// MalformedSpec if two transitions match.
    StepEffect step(const Event& e);

    /// Pops every frame, newest first; instructions within a frame keep their
    /// listed order. Clears box marks and keeps the current state.
    std::vector<CompensationInstruction> activate();

    /// Marks the strategy discarded: inactive with an empty stack.
    void deactivate();

    /// Canonical text form of the whole runtime state.
    std::string serialize() const;

private:
    void enter(const StateId& target, StepEffect& effect);

    CompAutomatonSpec spec_;
    StateId current_;
    std::vector<Frame> stack_;
    std::vector<BoxMark> marks_;
    bool active_ = true;
};

}  // namespace mocp
