#pragma once

#include "mocp/comp_automaton.hpp"
#include "mocp/monitor.hpp"
#include "mocp/scenario.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mocp {

// JSON documents for automata, monitors and scenarios. Parse functions throw
// SpecError for malformed or unknown content; load functions also throw
// IoError when the file cannot be read.
//
// Automaton:
//   {"name", "states", "initial", "finals",
//    "transitions": [{"from", "to", "on", "guard"?, "frame"?, "action"?}],
//    "boxes": [{"id", "entry", "exit"}]}
//   frame entries: {"comp": "refundUserFee", "capture": ["user", "card=to"]}
//   action: "clear"
//
// Monitor:
//   {"name", "states", "initial", "vars"?, "params"?,
//    "transitions": [{"from", "to", "on": "event:NAME" | "channel:NAME", "guard"?, "do"?}]}
//   do entries: {"inc": VAR, "by"?}, {"set": VAR, "value": V}, {"emit": CHANNEL},
//               {"compensate": "seq(B2, B4)"}, {"discard": [NAMES]}
//
// Scenario:
//   {"name"?, "seed"?, "steps": [...]}
//   steps: {"do": ACTION, "args": {...}}, {"inject": "paymentFail", "count"?},
//          {"inject": "courierAFail" | "courierBFail"},
//          {"userCancel": {"user", "txn"}}, {"classify": "fraudFlag" | "trustedFlag", "user"},
//          {"emit": NAME, "subject"?, "payload"?}

CompAutomatonSpec parse_automaton(std::string_view json_text);
MonitorSpec parse_monitor(std::string_view json_text);
ScenarioScript parse_scenario(std::string_view json_text);

std::string read_file(const std::filesystem::path& path);

CompAutomatonSpec load_automaton(const std::filesystem::path& path);
MonitorSpec load_monitor(const std::filesystem::path& path);
ScenarioScript load_scenario(const std::filesystem::path& path);

/// Files as given; directories expand to their `*.json` entries in name order.
std::vector<std::filesystem::path> expand_spec_paths(const std::vector<std::filesystem::path>& paths);

}  // namespace mocp
