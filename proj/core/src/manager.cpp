#include "mocp/manager.hpp"

#include "mocp/errors.hpp"

namespace mocp {

std::size_t EmissionPlan::instruction_count() const noexcept {
    std::size_t n = 0;
    for (const auto& b : batches) n += b.instructions.size();
    return n;
}

Manager::Manager(std::vector<CompAutomatonSpec> strategies, Journal* journal) : journal_(journal) {
    for (auto& spec : strategies) {
        spec.validate();
        const std::string name = spec.name;
        if (!strategies_.try_emplace(name, std::move(spec)).second) {
            throw SpecError("duplicate compensation strategy '" + name + "'");
        }
    }
}

const CompInstance& Manager::strategy(const std::string& name) const {
    auto it = strategies_.find(name);
    if (it == strategies_.end()) throw UnknownStrategy(name);
    return it->second;
}

CompInstance& Manager::find(const std::string& name) {
    auto it = strategies_.find(name);
    if (it == strategies_.end()) throw UnknownStrategy(name);
    return it->second;
}

void Manager::on_event(const Event& e) {
    for (auto& [name, inst] : strategies_) {
        if (inst.active()) inst.step(e);
    }
}

bool Manager::accept(const std::vector<MonitorOutput>& outputs, std::uint64_t seq) {
    bool compensate = false;
    for (const auto& out : outputs) {
        if (const auto* c = std::get_if<EmitCompensate>(&out.body)) {
            enqueue(c->expr, seq);
            compensate = true;
        } else if (const auto* d = std::get_if<DiscardStrategies>(&out.body)) {
            discard(d->names, seq);
        }
    }
    return compensate;
}

void Manager::enqueue(TriggerExpr expr, std::uint64_t seq) {
    for (const auto& name : expr.strategy_names()) find(name);
    pending_.push_back(std::move(expr));
    pending_seqs_.push_back(seq);
}

EmissionPlan Manager::resolve(const TriggerExpr& expr) {
    for (const auto& name : expr.strategy_names()) find(name);
    EmissionPlan plan;
    resolve_into(expr, plan);
    return plan;
}

void Manager::resolve_into(const TriggerExpr& expr, EmissionPlan& plan) {
    switch (expr.kind()) {
        case TriggerExpr::Kind::Strategy: {
            auto instrs = find(expr.name()).activate();
            if (!instrs.empty()) plan.batches.push_back({Batch::Mode::Sequential, std::move(instrs)});
            return;
        }
        case TriggerExpr::Kind::Seq:
            for (const auto& child : expr.children()) resolve_into(child, plan);
            return;
        case TriggerExpr::Kind::Par:
            if (expr.contains_seq()) {
                for (const auto& child : expr.children()) resolve_into(child, plan);
                return;
            }
            Batch batch{Batch::Mode::ParallelOk, {}};
            for (const auto& name : expr.strategy_names()) {
                for (auto& i : find(name).activate()) batch.instructions.push_back(std::move(i));
            }
            if (!batch.instructions.empty()) plan.batches.push_back(std::move(batch));
            return;
    }
}

void Manager::discard(const std::set<std::string>& names, std::uint64_t seq) {
    for (const auto& name : names) find(name);
    for (const auto& name : names) find(name).deactivate();
    if (journal_ && !names.empty()) journal_->discard({seq, names});
}

void Manager::feed_event(const Event& e, const Feed& feed) {
    const auto outputs = feed ? feed(e) : std::vector<MonitorOutput>{};
    on_event(e);
    accept(outputs, e.seq);
}

void Manager::emission_loop(const Sink& sink, const Feed& feed, std::size_t max_triggers) {
    if (pending_.empty()) throw ProtocolError("emission loop entered with no pending trigger");
    std::size_t resolved = 0;
    while (!pending_.empty()) {
        if (resolved++ >= max_triggers) {
            throw ProtocolError("emission loop did not drain after " + std::to_string(max_triggers) + " triggers");
        }
        const TriggerExpr expr = std::move(pending_.front());
        const std::uint64_t raised_by = pending_seqs_.front();
        pending_.pop_front();
        pending_seqs_.pop_front();
        if (journal_) journal_->trigger({raised_by, expr});

        EmissionPlan plan = resolve(expr);
        for (auto& batch : plan.batches) {
            const std::uint64_t id = next_batch_++;
            std::vector<Event> deferred;
            for (auto& instr : batch.instructions) {
                EmissionRecord record{id, instr};
                emission_log_.push_back(record);
                if (journal_) journal_->emission(std::move(record));
                Ack ack = sink(instr);
                if (!ack.ok && journal_) journal_->fault({id, instr, ack.fault});
                if (!ack.event) continue;
                if (batch.mode == Batch::Mode::Sequential) {
                    feed_event(*ack.event, feed);
                } else {
                    deferred.push_back(std::move(*ack.event));
                }
            }
            for (const auto& e : deferred) feed_event(e, feed);
        }
    }
}

ContinueToken Manager::issue_continue(std::uint64_t seq, bool proxy) {
    ++continue_ledger_[seq];
    return ContinueToken{seq, SignalSource::ManagerSide, proxy};
}

}  // namespace mocp
