#include "mocp/monitor.hpp"

#include "mocp/errors.hpp"

#include <algorithm>
#include <deque>

namespace mocp {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

bool enum_accepts(const VarDecl& decl, const Scalar& value) {
    const auto* s = std::get_if<std::string>(&value);
    return s && std::find(decl.values.begin(), decl.values.end(), *s) != decl.values.end();
}

}  // namespace

void MonitorSpec::validate() const {
    const auto prefix = "monitor '" + name + "': ";
    if (name.empty()) throw SpecError("monitor without a name");
    if (!states.contains(initial)) throw SpecError(prefix + "initial state '" + initial + "' undeclared");
    for (const auto& [var, decl] : vars) {
        if (params.contains(var)) throw SpecError(prefix + "'" + var + "' is both a var and a param");
        if (decl.type == VarDecl::Type::Enum) {
            if (decl.values.empty()) throw SpecError(prefix + "enum '" + var + "' has no values");
            if (!enum_accepts(decl, decl.init)) throw SpecError(prefix + "enum '" + var + "' init not in domain");
        } else if (!std::holds_alternative<std::int64_t>(decl.init)) {
            throw SpecError(prefix + "counter '" + var + "' needs an integer init");
        }
    }
    auto declared = [&](const std::string& v) { return vars.contains(v) || params.contains(v); };
    for (const auto& t : transitions) {
        const auto where = prefix + t.source + " -> " + t.target + ": ";
        if (!states.contains(t.source) || !states.contains(t.target)) {
            throw SpecError(where + "undeclared state");
        }
        if (t.on.empty()) throw SpecError(where + "no input name");
        for (const auto& v : t.guard.variables()) {
            if (!declared(v)) throw SpecError(where + "guard references undeclared '" + v + "'");
        }
        int compensates = 0;
        for (const auto& action : t.actions) {
            std::visit(overloaded{
                           [&](const IncVar& a) {
                               auto it = vars.find(a.var);
                               if (it == vars.end() || it->second.type != VarDecl::Type::Counter) {
                                   throw SpecError(where + "inc of non-counter '" + a.var + "'");
                               }
                           },
                           [&](const SetVar& a) {
                               auto it = vars.find(a.var);
                               if (it == vars.end()) throw SpecError(where + "set of undeclared '" + a.var + "'");
                               const auto& decl = it->second;
                               const bool ok = decl.type == VarDecl::Type::Enum
                                                   ? enum_accepts(decl, a.value)
                                                   : std::holds_alternative<std::int64_t>(a.value);
                               if (!ok) throw SpecError(where + "bad value for '" + a.var + "'");
                           },
                           [&](const EmitChannel& a) {
                               if (a.channel.empty()) throw SpecError(where + "empty channel name");
                           },
                           [&](const EmitCompensate&) { ++compensates; },
                           [&](const DiscardStrategies& a) {
                               if (a.names.empty()) throw SpecError(where + "empty discard set");
                           },
                       },
                       action);
        }
        if (compensates > 1) throw SpecError(where + "more than one compensate action");
    }
}

std::set<std::string> MonitorSpec::listened_channels() const {
    std::set<std::string> out;
    for (const auto& t : transitions) {
        if (t.input == MonitorTransition::Input::Channel) out.insert(t.on);
    }
    return out;
}

std::set<std::string> MonitorSpec::emitted_channels() const {
    std::set<std::string> out;
    for (const auto& t : transitions) {
        for (const auto& a : t.actions) {
            if (const auto* e = std::get_if<EmitChannel>(&a)) out.insert(e->channel);
        }
    }
    return out;
}

std::set<std::string> MonitorSpec::referenced_strategies() const {
    std::set<std::string> out;
    for (const auto& t : transitions) {
        for (const auto& a : t.actions) {
            if (const auto* c = std::get_if<EmitCompensate>(&a)) out.merge(c->expr.strategy_names());
            if (const auto* d = std::get_if<DiscardStrategies>(&a)) out.insert(d->names.begin(), d->names.end());
        }
    }
    return out;
}

MonitorInstance::MonitorInstance(MonitorSpec spec) : spec_(std::move(spec)), current_(spec_.initial) {
    for (const auto& [name, decl] : spec_.vars) vars_[name] = decl.init;
}

std::optional<Scalar> MonitorInstance::var(const std::string& name) const {
    if (auto it = vars_.find(name); it != vars_.end()) return it->second;
    if (auto it = spec_.params.find(name); it != spec_.params.end()) return Scalar{it->second};
    return std::nullopt;
}

bool MonitorInstance::listens_to(const std::string& channel) const {
    return std::any_of(spec_.transitions.begin(), spec_.transitions.end(), [&](const MonitorTransition& t) {
        return t.input == MonitorTransition::Input::Channel && t.on == channel;
    });
}

std::vector<MonitorOutput> MonitorInstance::step(const Event& e) {
    return fire(MonitorTransition::Input::SystemEvent, e.name, &e);
}

std::vector<MonitorOutput> MonitorInstance::step(const ChannelEvent& c) {
    return fire(MonitorTransition::Input::Channel, c.name, nullptr);
}

std::vector<MonitorOutput> MonitorInstance::fire(MonitorTransition::Input kind, const std::string& name,
                                                 const Event* event) {
    const auto lookup = [this](const std::string& v) { return var(v); };
    const MonitorTransition* fired = nullptr;
    for (const auto& t : spec_.transitions) {
        if (t.source == current_ && t.input == kind && t.on == name && t.guard.evaluate(event, lookup)) {
            fired = &t;
            break;
        }
    }
    std::vector<MonitorOutput> out;
    if (!fired) return out;

    for (const auto& action : fired->actions) {
        std::visit(overloaded{
                       [&](const IncVar& a) { std::get<std::int64_t>(vars_.at(a.var)) += a.by; },
                       [&](const SetVar& a) { vars_.at(a.var) = a.value; },
                       [&](const EmitChannel& a) { out.push_back({spec_.name, ChannelEvent{a.channel}}); },
                       [&](const EmitCompensate& a) { out.push_back({spec_.name, a}); },
                       [&](const DiscardStrategies& a) { out.push_back({spec_.name, a}); },
                   },
                   action);
    }
    current_ = fired->target;
    return out;
}

RouteResult route_channels(std::vector<ChannelEvent> pending, std::vector<MonitorInstance>& monitors) {
    RouteResult result;
    std::size_t states = 0;
    for (const auto& m : monitors) states += m.spec().states.size();
    const std::size_t bound = std::max<std::size_t>(1, monitors.size() * states);

    std::deque<ChannelEvent> queue(pending.begin(), pending.end());
    std::size_t delivered = 0;
    while (!queue.empty()) {
        if (delivered++ >= bound) {
            throw ChannelLoopDetected("channel routing did not settle after " + std::to_string(bound) +
                                      " deliveries (last: '" + queue.front().name + "')");
        }
        const ChannelEvent ch = std::move(queue.front());
        queue.pop_front();
        result.delivered.push_back(ch.name);
        bool heard = false;
        for (auto& m : monitors) {
            if (!m.listens_to(ch.name)) continue;
            heard = true;
            for (auto& out : m.step(ch)) {
                if (auto* next = std::get_if<ChannelEvent>(&out.body)) {
                    queue.push_back(std::move(*next));
                } else {
                    result.outputs.push_back(std::move(out));
                }
            }
        }
        if (!heard) result.unheard.push_back(ch.name);
    }
    return result;
}

std::vector<std::string> lint_channels(const std::vector<MonitorSpec>& specs) {
    std::set<std::string> listened;
    for (const auto& s : specs) listened.merge(s.listened_channels());
    std::vector<std::string> out;
    for (const auto& s : specs) {
        for (const auto& ch : s.emitted_channels()) {
            if (!listened.contains(ch)) {
                out.push_back("monitor '" + s.name + "' emits channel '" + ch + "' that no monitor listens on");
            }
        }
    }
    return out;
}

void set_param(std::vector<MonitorSpec>& specs, const std::string& param, std::int64_t value) {
    for (auto& s : specs) {
        if (auto it = s.params.find(param); it != s.params.end()) it->second = value;
    }
}

MonitorLayer::MonitorLayer(std::vector<MonitorSpec> specs) {
    monitors_.reserve(specs.size());
    for (auto& s : specs) {
        s.validate();
        monitors_.emplace_back(std::move(s));
    }
}

const MonitorInstance* MonitorLayer::find(const std::string& name) const {
    for (const auto& m : monitors_) {
        if (m.name() == name) return &m;
    }
    return nullptr;
}

RouteResult MonitorLayer::on_event(const Event& e) {
    RouteResult result;
    std::vector<ChannelEvent> pending;
    for (auto& m : monitors_) {
        for (auto& out : m.step(e)) {
            if (auto* ch = std::get_if<ChannelEvent>(&out.body)) {
                pending.push_back(std::move(*ch));
            } else {
                result.outputs.push_back(std::move(out));
            }
        }
    }
    auto routed = route_channels(std::move(pending), monitors_);
    for (auto& o : routed.outputs) result.outputs.push_back(std::move(o));
    result.unheard = std::move(routed.unheard);
    result.delivered = std::move(routed.delivered);
    return result;
}

}  // namespace mocp
