#include "mocp/comp_automaton.hpp"

#include "mocp/errors.hpp"
#include "text.hpp"

#include <algorithm>
#include <deque>

namespace mocp {

namespace {

/// States reachable from the box entry without leaving through its exit.
std::set<StateId> box_region(const CompAutomatonSpec& spec, const Box& box) {
    std::set<StateId> region{box.entry, box.exit};
    std::deque<StateId> work{box.entry};
    while (!work.empty()) {
        const StateId s = work.front();
        work.pop_front();
        if (s == box.exit) continue;
        for (const auto& t : spec.transitions) {
            if (t.source == s && region.insert(t.target).second) work.push_back(t.target);
        }
    }
    return region;
}

}  // namespace

void CompAutomatonSpec::validate() const {
    const auto prefix = "automaton '" + name + "': ";
    if (name.empty()) throw SpecError("automaton without a name");
    if (!states.contains(initial)) throw SpecError(prefix + "initial state '" + initial + "' undeclared");
    for (const auto& f : finals) {
        if (!states.contains(f)) throw SpecError(prefix + "final state '" + f + "' undeclared");
    }
    for (const auto& t : transitions) {
        if (!states.contains(t.source) || !states.contains(t.target)) {
            throw SpecError(prefix + "transition " + t.source + " -> " + t.target +
                            " references an undeclared state");
        }
        if (t.on.empty()) throw SpecError(prefix + "transition from '" + t.source + "' has no event");
        if (!t.guard.variables().empty()) {
            throw SpecError(prefix + "guard '" + t.guard.text() + "' references variable '" +
                            *t.guard.variables().begin() + "'; automata have no variables");
        }
        for (const auto& instr : t.frame) {
            if (instr.comp_action.empty()) {
                throw SpecError(prefix + "empty compensation action on " + t.source + " -> " + t.target);
            }
        }
    }
    std::set<std::string> ids;
    std::vector<std::set<StateId>> regions;
    for (const auto& b : boxes) {
        if (!ids.insert(b.id).second) throw SpecError(prefix + "duplicate box '" + b.id + "'");
        if (!states.contains(b.entry) || !states.contains(b.exit)) {
            throw SpecError(prefix + "box '" + b.id + "' references an undeclared state");
        }
        if (b.entry == b.exit) throw SpecError(prefix + "box '" + b.id + "' has entry == exit");
        regions.push_back(box_region(*this, b));
    }
    for (std::size_t i = 0; i < regions.size(); ++i) {
        for (std::size_t j = i + 1; j < regions.size(); ++j) {
            const auto& a = regions[i];
            const auto& b = regions[j];
            const bool disjoint = std::none_of(a.begin(), a.end(), [&](const auto& s) { return b.contains(s); });
            const bool a_in_b = std::includes(b.begin(), b.end(), a.begin(), a.end());
            const bool b_in_a = std::includes(a.begin(), a.end(), b.begin(), b.end());
            if (!disjoint && !a_in_b && !b_in_a) {
                throw MalformedSpec(prefix + "boxes '" + boxes[i].id + "' and '" + boxes[j].id +
                                    "' partially overlap");
            }
        }
    }
}

std::vector<std::string> CompAutomatonSpec::determinism_violations() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        for (std::size_t j = i + 1; j < transitions.size(); ++j) {
            const auto& a = transitions[i];
            const auto& b = transitions[j];
            if (a.source != b.source || a.on != b.on) continue;
            const bool overlap = a.guard.always_true() || b.guard.always_true() ||
                                 a.guard.text() == b.guard.text();
            if (overlap) {
                out.push_back("automaton '" + name + "': state '" + a.source + "' has two transitions on event '" +
                              a.on + "' (to '" + a.target + "' and '" + b.target + "')");
            }
        }
    }
    return out;
}

CompensationInstruction bind(const InstructionTemplate& t, const Event& e, const std::string& strategy) {
    CompensationInstruction out;
    out.comp_action = t.comp_action;
    out.origin_seq = e.seq;
    out.strategy = strategy;
    for (const auto& c : t.capture) {
        auto value = e.lookup(c.key);
        if (!value) throw MissingCaptureKey(c.key);
        out.bound_args[c.param] = std::move(*value);
    }
    return out;
}

CompInstance::CompInstance(CompAutomatonSpec spec) : spec_(std::move(spec)), current_(spec_.initial) {
    for (const auto& b : spec_.boxes) {
        if (b.entry == current_) marks_.push_back({b.id, 0});
    }
}

StepEffect CompInstance::step(const Event& e) {
    StepEffect effect;
    if (!active_) return effect;

    const CompTransition* fired = nullptr;
    for (const auto& t : spec_.transitions) {
        if (t.source != current_ || t.on != e.name) continue;
        if (!t.guard.evaluate(&e)) continue;
        if (fired) {
            throw MalformedSpec("automaton '" + spec_.name + "': state '" + current_ +
                                "' has two transitions enabled on event '" + e.name + "'");
        }
        fired = &t;
    }
    if (!fired) return effect;

    // Bind before mutating so a capture error leaves the instance untouched.
    Frame frame{{}, e.seq};
    for (const auto& tmpl : fired->frame) frame.instructions.push_back(mocp::bind(tmpl, e, spec_.name));

    effect.moved = true;
    if (fired->action == TransitionAction::ClearStack) {
        stack_.clear();
        for (auto& m : marks_) m.depth = 0;
        effect.cleared = true;
    }
    if (!frame.instructions.empty()) {
        effect.pushed = frame.instructions.size();
        stack_.push_back(std::move(frame));
    }
    enter(fired->target, effect);
    return effect;
}

void CompInstance::enter(const StateId& target, StepEffect& effect) {
    current_ = target;
    for (const auto& b : spec_.boxes) {
        if (b.exit != target) continue;
        auto it = std::find_if(marks_.rbegin(), marks_.rend(), [&](const BoxMark& m) { return m.box == b.id; });
        if (it == marks_.rend()) continue;
        const std::size_t depth = it->depth;
        // Nested boxes still open above this one close with it.
        marks_.erase(std::prev(it.base()), marks_.end());
        if (stack_.size() > depth) {
            effect.purged += stack_.size() - depth;
            stack_.resize(depth);
        }
    }
    for (const auto& b : spec_.boxes) {
        if (b.entry != target) continue;
        const bool open = std::any_of(marks_.begin(), marks_.end(), [&](const BoxMark& m) { return m.box == b.id; });
        if (!open) marks_.push_back({b.id, stack_.size()});
    }
}

std::vector<CompensationInstruction> CompInstance::activate() {
    std::vector<CompensationInstruction> out;
    if (!active_) return out;
    for (auto frame = stack_.rbegin(); frame != stack_.rend(); ++frame) {
        for (auto& instr : frame->instructions) out.push_back(std::move(instr));
    }
    stack_.clear();
    marks_.clear();
    return out;
}

void CompInstance::deactivate() {
    active_ = false;
    stack_.clear();
    marks_.clear();
}

std::string CompInstance::serialize() const {
    std::string out = "instance|" + detail::escape_field(spec_.name) + "|" + detail::escape_field(current_) + "|" +
                      (active_ ? "active" : "inactive") + "\n";
    for (const auto& f : stack_) {
        out += "frame|" + std::to_string(f.origin_seq) + "\n";
        for (const auto& i : f.instructions) {
            out += "  instr|" + detail::escape_field(i.comp_action) + "|" + detail::format_pairs(i.bound_args) + "|" +
                   std::to_string(i.origin_seq) + "|" + detail::escape_field(i.strategy) + "\n";
        }
    }
    for (const auto& m : marks_) out += "mark|" + detail::escape_field(m.box) + "|" + std::to_string(m.depth) + "\n";
    return out;
}

}  // namespace mocp
