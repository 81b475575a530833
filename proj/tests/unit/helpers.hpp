#pragma once

#include "mocp/comp_automaton.hpp"
#include "mocp/event.hpp"

#include <cstdint>
#include <string>

namespace mocp::test {

inline Event ev(std::uint64_t seq, std::string name, SubjectMap subject = {}, PayloadMap payload = {},
                Phase phase = Phase::Normal) {
    return Event{seq, std::move(name), std::move(subject), std::move(payload), phase};
}

inline InstructionTemplate instr(std::string comp, std::vector<Capture> capture = {}) {
    return InstructionTemplate{std::move(comp), std::move(capture)};
}

inline CompTransition tr(std::string from, std::string to, std::string on, std::vector<InstructionTemplate> frame = {},
                         TransitionAction action = TransitionAction::None) {
    return CompTransition{std::move(from), std::move(to), std::move(on), Guard{}, std::move(frame), action};
}

}  // namespace mocp::test
