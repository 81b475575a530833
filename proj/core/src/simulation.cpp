#include "mocp/simulation.hpp"

#include "mocp/errors.hpp"

#include <algorithm>
#include <array>

namespace mocp {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

constexpr std::array<const char*, 3> kSubjectRoles{"user", "card", "txn"};

/// Event describing a refused forward action.
ActionEffect failure(const std::string& name, const PayloadMap& args, const std::string& reason) {
    ActionEffect fail{name, {}, {}};
    for (const auto& [k, v] : args) {
        const bool role = std::find(kSubjectRoles.begin(), kSubjectRoles.end(), k) != kSubjectRoles.end();
        if (role && std::holds_alternative<std::string>(v)) {
            fail.subject[k] = std::get<std::string>(v);
        } else {
            fail.payload[k] = v;
        }
    }
    fail.payload["reason"] = reason;
    return fail;
}

}  // namespace

std::vector<std::string> Report::handshake_lines() const {
    std::vector<std::string> out;
    for (const auto& h : journal.handshakes()) out.push_back(serialize(h));
    return out;
}

std::vector<std::string> Report::emission_lines() const {
    std::vector<std::string> out;
    for (const auto& r : journal.emissions()) out.push_back(serialize(r));
    return out;
}

std::string Report::text() const {
    std::string out;
    for (const auto& line : journal.lines()) {
        out += line;
        out += '\n';
    }
    for (const auto& line : world_final.summary()) {
        out += line;
        out += '\n';
    }
    return out;
}

void Report::check_consistency() const {
    for (const auto& r : journal.emissions()) {
        if (!trace.find(r.instruction.origin_seq)) {
            throw ProtocolError("emission of " + r.instruction.comp_action + " has origin seq " +
                                std::to_string(r.instruction.origin_seq) + " missing from the trace");
        }
    }
    std::map<std::uint64_t, int> tokens;
    for (const auto& h : journal.handshakes()) ++tokens[h.token.for_seq];
    for (const auto& e : trace.events()) {
        const int expected = e.phase == Phase::Normal ? 2 : 0;
        const int got = tokens.contains(e.seq) ? tokens.at(e.seq) : 0;
        if (got != expected) {
            throw ProtocolError("event " + std::to_string(e.seq) + " got " + std::to_string(got) +
                                " continue tokens, expected " + std::to_string(expected));
        }
    }
}

BundleCheck check_bundle(const std::vector<CompAutomatonSpec>& automata, const std::vector<MonitorSpec>& monitors,
                         const ActionRegistry& registry) {
    BundleCheck check;
    std::set<std::string> strategy_names;
    for (const auto& a : automata) {
        if (!strategy_names.insert(a.name).second) check.errors.push_back("duplicate automaton '" + a.name + "'");
        try {
            a.validate();
        } catch (const SpecError& e) {
            check.errors.emplace_back(e.what());
            continue;
        }
        for (auto& v : a.determinism_violations()) check.errors.push_back(std::move(v));
        for (const auto& t : a.transitions) {
            for (const auto& instr : t.frame) {
                if (!registry.has_compensating(instr.comp_action)) {
                    check.errors.push_back("automaton '" + a.name + "': compensation '" + instr.comp_action +
                                           "' is not registered");
                }
            }
        }
    }
    std::set<std::string> monitor_names;
    for (const auto& m : monitors) {
        if (!monitor_names.insert(m.name).second) check.errors.push_back("duplicate monitor '" + m.name + "'");
        try {
            m.validate();
        } catch (const SpecError& e) {
            check.errors.emplace_back(e.what());
            continue;
        }
        for (const auto& s : m.referenced_strategies()) {
            if (!strategy_names.contains(s)) {
                check.errors.push_back("monitor '" + m.name + "' names unknown strategy '" + s + "'");
            }
        }
    }
    check.warnings = lint_channels(monitors);
    return check;
}

Simulation::Simulation(std::vector<CompAutomatonSpec> automata, std::vector<MonitorSpec> monitors,
                       SimulationConfig config, ActionRegistry registry)
    : automata_(std::move(automata)),
      monitor_specs_(std::move(monitors)),
      config_(config),
      registry_(std::move(registry)) {
    if (config_.retries < 1) throw SpecError("retry threshold must be at least 1");
    const auto check = check_bundle(automata_, monitor_specs_, registry_);
    if (!check.ok()) {
        std::string msg = "invalid specification bundle:";
        for (const auto& e : check.errors) msg += "\n  " + e;
        throw SpecError(msg);
    }
}

Report Simulation::run(const ScenarioScript& script) {
    world_ = WorldState{};
    trace_ = Trace{};
    journal_ = Journal{};
    monitors_ = MonitorLayer(monitor_specs_);
    manager_ = Manager(automata_, &journal_);
    continue_line_.clear();
    unheard_.clear();
    next_seq_ = 1;
    seed_ = config_.seed.value_or(script.seed);
    pending_payment_fails_ = 0;

    for (const auto& step : script.steps) {
        run_step(step);
        world_.check_invariants();
    }
    if (!continue_line_.empty()) {
        throw ProtocolError("stray continue token for event " + std::to_string(continue_line_.front().for_seq));
    }
    return Report{trace_, world_, journal_, unheard_};
}

void Simulation::run_step(const ScenarioStep& step) {
    std::visit(overloaded{
                   [&](const DoStep& s) {
                       if (s.action == "order") {
                           run_order(s.args);
                           return;
                       }
                       try {
                           emit(exec_action(world_, registry_, s.action, s.args));
                       } catch (const ActionRefused& r) {
                           emit(failure(s.action + "Fail", s.args, r.what()));
                       }
                   },
                   [&](const InjectFault& f) {
                       switch (f.kind) {
                           case InjectFault::Kind::PaymentFail:
                               pending_payment_fails_ += f.count;
                               break;
                           case InjectFault::Kind::CourierAFail:
                               world_.courier_available["A"] = false;
                               break;
                           case InjectFault::Kind::CourierBFail:
                               world_.courier_available["B"] = false;
                               break;
                       }
                   },
                   [&](const UserCancel& c) {
                       emit(exec_action(world_, registry_, "cancel", {{"user", c.user}, {"txn", c.txn}}));
                   },
                   [&](const ClassifyHint& h) {
                       const char* action = h.kind == ClassifyHint::Kind::FraudFlag ? "fraudFlag" : "trustedFlag";
                       emit(exec_action(world_, registry_, action, {{"user", h.user}}));
                   },
                   [&](const EmitStep& s) { emit(ActionEffect{s.name, s.subject, s.payload}); },
               },
               step);
}

void Simulation::run_order(const PayloadMap& args) {
    emit(exec_action(world_, registry_, "order", args));
    const std::string txn = std::get<std::string>(args.at("txn"));
    const Order order = world_.orders.at(txn);
    const PayloadMap attempt_args{{"user", order.user}, {"card", order.card}, {"txn", txn}, {"amount", order.amount}};

    struct Branch {
        bool payment;
        std::int64_t attempts = 0;
        bool done = false;
    };
    // Paying and booking run concurrently; interleave them attempt by attempt.
    std::array<Branch, 2> branches{Branch{true}, Branch{false}};
    if (seed_ % 2 != 0) std::swap(branches[0], branches[1]);

    auto attempt = [&](Branch& b) {
        ++b.attempts;
        if (b.payment) {
            if (pending_payment_fails_ > 0) {
                --pending_payment_fails_;
                auto fail = failure("paymentFail", attempt_args, "injected");
                fail.payload["attempt"] = b.attempts;
                emit(std::move(fail));
            } else {
                try {
                    emit(exec_action(world_, registry_, "pay", {{"txn", txn}}));
                    b.done = true;
                    return;
                } catch (const ActionRefused& r) {
                    auto fail = failure("paymentFail", attempt_args, r.what());
                    fail.payload["attempt"] = b.attempts;
                    emit(std::move(fail));
                }
            }
        } else {
            try {
                emit(exec_action(world_, registry_, "bookCourier", {{"txn", txn}}));
                b.done = true;
                return;
            } catch (const ActionRefused& r) {
                auto fail = failure("courierFail", attempt_args, r.what());
                fail.payload["attempt"] = b.attempts;
                emit(std::move(fail));
            }
        }
        if (b.attempts >= config_.retries) b.done = true;
    };

    while (!branches[0].done || !branches[1].done) {
        for (auto& b : branches) {
            if (!b.done) attempt(b);
        }
    }
}

Event Simulation::make_event(ActionEffect effect, Phase phase) {
    Event e{next_seq_++, std::move(effect.event), std::move(effect.subject), std::move(effect.payload), phase};
    trace_.append(e);
    journal_.event(e);
    return e;
}

void Simulation::emit(ActionEffect effect) {
    const Event e = make_event(std::move(effect), Phase::Normal);

    // Monitor path: compensate or continue, never both.
    auto routed = monitors_.on_event(e);
    unheard_.insert(unheard_.end(), routed.unheard.begin(), routed.unheard.end());
    for (const auto& ch : routed.delivered) journal_.channel(e.seq, ch);
    const bool compensate = std::any_of(routed.outputs.begin(), routed.outputs.end(), [](const MonitorOutput& o) {
        return std::holds_alternative<EmitCompensate>(o.body);
    });
    if (!compensate) {
        continue_line_.push_back({e.seq, SignalSource::MonitorSide, false});
        journal_.handshake({continue_line_.back()});
    }

    // Manager path.
    manager_.on_event(e);
    manager_.accept(routed.outputs, e.seq);
    if (!manager_.pending().empty()) {
        try {
            manager_.emission_loop([this](const CompensationInstruction& i) { return execute(i); },
                                   [this](const Event& ce) { return feed(ce); }, config_.max_triggers_per_event);
        } catch (const ProtocolError& err) {
            throw Deadlock(e.seq, err.what());
        }
    }
    if (compensate) {
        continue_line_.push_back(manager_.issue_continue(e.seq, true));
        journal_.handshake({continue_line_.back()});
    }
    continue_line_.push_back(manager_.issue_continue(e.seq, false));
    journal_.handshake({continue_line_.back()});

    await_continues(e.seq);
}

void Simulation::await_continues(std::uint64_t seq) {
    int received = 0;
    while (!continue_line_.empty() && continue_line_.front().for_seq == seq) {
        continue_line_.pop_front();
        ++received;
    }
    if (received != 2) {
        throw Deadlock(seq, "system received " + std::to_string(received) + " continue tokens, needs 2");
    }
}

Ack Simulation::execute(const CompensationInstruction& instr) {
    try {
        auto effect = exec_compensation(world_, registry_, instr);
        return Ack{true, {}, make_event(std::move(effect), Phase::DuringCompensation)};
    } catch (const CompensationFault& f) {
        return Ack{false, f.what(), std::nullopt};
    }
}

std::vector<MonitorOutput> Simulation::feed(const Event& e) {
    auto routed = monitors_.on_event(e);
    unheard_.insert(unheard_.end(), routed.unheard.begin(), routed.unheard.end());
    for (const auto& ch : routed.delivered) journal_.channel(e.seq, ch);
    return std::move(routed.outputs);
}

}  // namespace mocp
