#pragma once

#include "mocp/comp_automaton.hpp"
#include "mocp/event.hpp"
#include "mocp/world.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace mocp {

/// World change plus the event it is observed as (seq assigned by the harness).
struct ActionEffect {
    std::string event;
    SubjectMap subject;
    PayloadMap payload;
};

/// Forward actions and the separately programmed compensation code.
class ActionRegistry {
public:
    using Handler = std::function<ActionEffect(WorldState&, const PayloadMap&)>;

    void add_forward(std::string name, Handler h);
    void add_compensating(std::string name, Handler h);

    bool has_forward(const std::string& name) const { return forward_.contains(name); }
    bool has_compensating(const std::string& name) const { return compensating_.contains(name); }
    std::set<std::string> compensating_names() const;

    const Handler& forward(const std::string& name) const;
    const Handler& compensating(const std::string& name) const;

    /// Load/transfer/order actions and their refund, cancel, charge and block compensations.
    static ActionRegistry eprocurement();

private:
    std::map<std::string, Handler> forward_;
    std::map<std::string, Handler> compensating_;
};

/// Runs a forward action. The world is untouched when it throws:
/// ActionRefused (InsufficientFunds, NoCourierAvailable, ...) for refusals,
/// SpecError for unknown actions or malformed arguments.
ActionEffect exec_action(WorldState& w, const ActionRegistry& registry, const std::string& action,
                         const PayloadMap& args);

/// Runs compensation code on its install-time arguments. Throws
/// CompensationFault with the world untouched if it cannot be applied.
ActionEffect exec_compensation(WorldState& w, const ActionRegistry& registry, const CompensationInstruction& instr);

}  // namespace mocp
