#pragma once

#include "mocp/event.hpp"
#include "mocp/guard.hpp"
#include "mocp/trigger_expr.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace mocp {

struct VarDecl {
    enum class Type { Counter, Enum };

    Type type = Type::Counter;
    std::vector<std::string> values;  ///< enum domain, first value is the default init
    Scalar init = std::int64_t{0};
};

struct ChannelEvent {
    std::string name;

    friend bool operator==(const ChannelEvent&, const ChannelEvent&) = default;
};

struct IncVar {
    std::string var;
    std::int64_t by = 1;
};
struct SetVar {
    std::string var;
    Scalar value;
};
struct EmitChannel {
    std::string channel;
};
struct EmitCompensate {
    TriggerExpr expr;
};
struct DiscardStrategies {
    std::set<std::string> names;
};

using MonitorAction = std::variant<IncVar, SetVar, EmitChannel, EmitCompensate, DiscardStrategies>;

struct MonitorTransition {
    enum class Input { SystemEvent, Channel };

    std::string source;
    std::string target;
    Input input = Input::SystemEvent;
    std::string on;  ///< event or channel name
    Guard guard;
    std::vector<MonitorAction> actions;
};

struct MonitorSpec {
    std::string name;
    std::set<std::string> states;
    std::string initial;
    std::map<std::string, VarDecl> vars;
    /// Named integer constants usable in guards, e.g. the retry threshold `k`.
    std::map<std::string, std::int64_t> params;
    std::vector<MonitorTransition> transitions;

    /// Throws SpecError on undeclared states/vars, bad enum values, or more
    /// than one compensate action on a transition.
    void validate() const;

    std::set<std::string> listened_channels() const;
    std::set<std::string> emitted_channels() const;
    std::set<std::string> referenced_strategies() const;
};

/// Output of a monitor step, in the order the actions ran.
struct MonitorOutput {
    using Body = std::variant<ChannelEvent, EmitCompensate, DiscardStrategies>;

    std::string monitor;
    Body body;
};

class MonitorInstance {
public:
    explicit MonitorInstance(MonitorSpec spec);

    const MonitorSpec& spec() const noexcept { return spec_; }
    const std::string& name() const noexcept { return spec_.name; }
    const std::string& current() const noexcept { return current_; }
    const std::map<std::string, Scalar>& vars() const noexcept { return vars_; }
    std::optional<Scalar> var(const std::string& name) const;

    /// First matching transition in document order fires; unmatched input is a no-op.
    std::vector<MonitorOutput> step(const Event& e);
    std::vector<MonitorOutput> step(const ChannelEvent& c);

    bool listens_to(const std::string& channel) const;

private:
    std::vector<MonitorOutput> fire(MonitorTransition::Input kind, const std::string& name, const Event* event);

    MonitorSpec spec_;
    std::string current_;
    std::map<std::string, Scalar> vars_;
};

struct RouteResult {
    /// EmitCompensate and DiscardStrategies outputs in production order.
    std::vector<MonitorOutput> outputs;
    /// Channels that had no listener.
    std::vector<std::string> unheard;
    /// Every channel event delivered, in delivery order.
    std::vector<std::string> delivered;
};

/// Delivers channel events to every listening monitor, breadth first in
/// emission order, until no new channel events appear. Throws
/// ChannelLoopDetected after #monitors x #states deliveries.
RouteResult route_channels(std::vector<ChannelEvent> pending, std::vector<MonitorInstance>& monitors);

/// Channels emitted somewhere but listened to nowhere.
std::vector<std::string> lint_channels(const std::vector<MonitorSpec>& specs);

/// Sets integer parameter `param` on every monitor that declares it.
void set_param(std::vector<MonitorSpec>& specs, const std::string& param, std::int64_t value);

/// All monitors, stepped in registration order on every event.
class MonitorLayer {
public:
    MonitorLayer() = default;
    explicit MonitorLayer(std::vector<MonitorSpec> specs);

    const std::vector<MonitorInstance>& monitors() const noexcept { return monitors_; }
    const MonitorInstance* find(const std::string& name) const;

    /// Direct outputs of every monitor followed by channel-routing outputs.
    RouteResult on_event(const Event& e);

private:
    std::vector<MonitorInstance> monitors_;
};

}  // namespace mocp
