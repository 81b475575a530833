#include "mocp/spec_io.hpp"

#include "mocp/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace mocp {

namespace {

using nlohmann::json;

json parse_json(std::string_view text, const char* what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw SpecError(std::string(what) + ": " + e.what());
    }
}

void expect_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw SpecError(where + ": expected an object");
}

void allow_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
    for (const auto& [key, _] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw SpecError(where + ": unknown key '" + key + "'");
        }
    }
}

const json& require(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw SpecError(where + ": missing '" + key + "'");
    return *it;
}

std::string str(const json& j, const std::string& where) {
    if (!j.is_string()) throw SpecError(where + ": expected a string");
    return j.get<std::string>();
}

std::string str_field(const json& j, const char* key, const std::string& where) {
    return str(require(j, key, where), where + "." + key);
}

std::set<std::string> str_set(const json& j, const std::string& where) {
    if (!j.is_array()) throw SpecError(where + ": expected an array of strings");
    std::set<std::string> out;
    for (const auto& v : j) out.insert(str(v, where));
    return out;
}

Scalar scalar(const json& j, const std::string& where) {
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_string()) return j.get<std::string>();
    throw SpecError(where + ": expected an integer, boolean or string");
}

PayloadMap scalar_map(const json& j, const std::string& where) {
    expect_object(j, where);
    PayloadMap out;
    for (const auto& [k, v] : j.items()) out[k] = scalar(v, where + "." + k);
    return out;
}

Guard guard_field(const json& t, const std::string& where) {
    auto it = t.find("guard");
    if (it == t.end()) return Guard{};
    return Guard::parse(str(*it, where + ".guard"));
}

Capture capture(const json& j, const std::string& where) {
    const std::string text = str(j, where);
    const auto eq = text.find('=');
    if (eq == std::string::npos) return Capture{text, text};
    Capture c{text.substr(0, eq), text.substr(eq + 1)};
    if (c.param.empty() || c.key.empty()) throw SpecError(where + ": bad capture '" + text + "'");
    return c;
}

InstructionTemplate instruction(const json& j, const std::string& where) {
    expect_object(j, where);
    allow_keys(j, {"comp", "capture"}, where);
    InstructionTemplate t;
    t.comp_action = str_field(j, "comp", where);
    if (auto it = j.find("capture"); it != j.end()) {
        if (!it->is_array()) throw SpecError(where + ".capture: expected an array");
        for (const auto& c : *it) t.capture.push_back(capture(c, where + ".capture"));
    }
    return t;
}

MonitorAction monitor_action(const json& j, const std::string& where) {
    expect_object(j, where);
    if (j.contains("inc")) {
        allow_keys(j, {"inc", "by"}, where);
        IncVar a{str(j["inc"], where + ".inc"), 1};
        if (auto it = j.find("by"); it != j.end()) {
            if (!it->is_number_integer()) throw SpecError(where + ".by: expected an integer");
            a.by = it->get<std::int64_t>();
        }
        return a;
    }
    if (j.contains("set")) {
        allow_keys(j, {"set", "value"}, where);
        return SetVar{str(j["set"], where + ".set"), scalar(require(j, "value", where), where + ".value")};
    }
    if (j.contains("emit")) {
        allow_keys(j, {"emit"}, where);
        return EmitChannel{str(j["emit"], where + ".emit")};
    }
    if (j.contains("compensate")) {
        allow_keys(j, {"compensate"}, where);
        return EmitCompensate{TriggerExpr::parse(str(j["compensate"], where + ".compensate"))};
    }
    if (j.contains("discard")) {
        allow_keys(j, {"discard"}, where);
        return DiscardStrategies{str_set(j["discard"], where + ".discard")};
    }
    throw SpecError(where + ": unknown monitor action");
}

VarDecl var_decl(const json& j, const std::string& where) {
    expect_object(j, where);
    allow_keys(j, {"type", "values", "init"}, where);
    VarDecl d;
    const auto type = str_field(j, "type", where);
    if (type == "counter") {
        d.type = VarDecl::Type::Counter;
        d.init = std::int64_t{0};
    } else if (type == "enum") {
        d.type = VarDecl::Type::Enum;
        const auto& values = require(j, "values", where);
        if (!values.is_array()) throw SpecError(where + ".values: expected an array");
        for (const auto& v : values) d.values.push_back(str(v, where + ".values"));
        if (d.values.empty()) throw SpecError(where + ".values: empty enum");
        d.init = d.values.front();
    } else {
        throw SpecError(where + ": unknown var type '" + type + "'");
    }
    if (auto it = j.find("init"); it != j.end()) d.init = scalar(*it, where + ".init");
    return d;
}

ScenarioStep scenario_step(const json& j, const std::string& where) {
    expect_object(j, where);
    if (j.contains("do")) {
        allow_keys(j, {"do", "args"}, where);
        DoStep s{str(j["do"], where + ".do"), {}};
        if (auto it = j.find("args"); it != j.end()) s.args = scalar_map(*it, where + ".args");
        return s;
    }
    if (j.contains("inject")) {
        allow_keys(j, {"inject", "count"}, where);
        const auto kind = str(j["inject"], where + ".inject");
        InjectFault f;
        if (kind == "paymentFail") {
            f.kind = InjectFault::Kind::PaymentFail;
        } else if (kind == "courierAFail") {
            f.kind = InjectFault::Kind::CourierAFail;
        } else if (kind == "courierBFail") {
            f.kind = InjectFault::Kind::CourierBFail;
        } else {
            throw SpecError(where + ": unknown fault '" + kind + "'");
        }
        if (auto it = j.find("count"); it != j.end()) {
            if (!it->is_number_integer() || it->get<std::int64_t>() < 1) {
                throw SpecError(where + ".count: expected a positive integer");
            }
            f.count = it->get<std::int64_t>();
        }
        return f;
    }
    if (j.contains("userCancel")) {
        allow_keys(j, {"userCancel"}, where);
        const auto& c = j["userCancel"];
        expect_object(c, where + ".userCancel");
        return UserCancel{str_field(c, "user", where), str_field(c, "txn", where)};
    }
    if (j.contains("classify")) {
        allow_keys(j, {"classify", "user"}, where);
        const auto kind = str(j["classify"], where + ".classify");
        ClassifyHint h;
        if (kind == "fraudFlag") {
            h.kind = ClassifyHint::Kind::FraudFlag;
        } else if (kind == "trustedFlag") {
            h.kind = ClassifyHint::Kind::TrustedFlag;
        } else {
            throw SpecError(where + ": unknown classification hint '" + kind + "'");
        }
        h.user = str_field(j, "user", where);
        return h;
    }
    if (j.contains("emit")) {
        allow_keys(j, {"emit", "subject", "payload"}, where);
        EmitStep s;
        s.name = str(j["emit"], where + ".emit");
        if (s.name.empty()) throw SpecError(where + ": empty event name");
        if (auto it = j.find("subject"); it != j.end()) {
            expect_object(*it, where + ".subject");
            for (const auto& [k, v] : it->items()) s.subject[k] = str(v, where + ".subject." + k);
        }
        if (auto it = j.find("payload"); it != j.end()) s.payload = scalar_map(*it, where + ".payload");
        return s;
    }
    throw SpecError(where + ": unknown step");
}

}  // namespace

CompAutomatonSpec parse_automaton(std::string_view json_text) {
    const json j = parse_json(json_text, "automaton");
    expect_object(j, "automaton");
    allow_keys(j, {"name", "states", "initial", "finals", "transitions", "boxes"}, "automaton");
    CompAutomatonSpec spec;
    spec.name = str_field(j, "name", "automaton");
    const std::string where = "automaton '" + spec.name + "'";
    spec.states = str_set(require(j, "states", where), where + ".states");
    spec.initial = str_field(j, "initial", where);
    if (auto it = j.find("finals"); it != j.end()) spec.finals = str_set(*it, where + ".finals");
    const auto& transitions = require(j, "transitions", where);
    if (!transitions.is_array()) throw SpecError(where + ".transitions: expected an array");
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        const auto& t = transitions[i];
        const auto tw = where + ".transitions[" + std::to_string(i) + "]";
        expect_object(t, tw);
        allow_keys(t, {"from", "to", "on", "guard", "frame", "action"}, tw);
        CompTransition ct;
        ct.source = str_field(t, "from", tw);
        ct.target = str_field(t, "to", tw);
        ct.on = str_field(t, "on", tw);
        ct.guard = guard_field(t, tw);
        if (auto it = t.find("frame"); it != t.end()) {
            if (!it->is_array()) throw SpecError(tw + ".frame: expected an array");
            for (const auto& instr : *it) ct.frame.push_back(instruction(instr, tw + ".frame"));
        }
        if (auto it = t.find("action"); it != t.end()) {
            const auto action = str(*it, tw + ".action");
            if (action == "clear") {
                ct.action = TransitionAction::ClearStack;
            } else if (action != "none") {
                throw SpecError(tw + ": unknown action '" + action + "'");
            }
        }
        spec.transitions.push_back(std::move(ct));
    }
    if (auto it = j.find("boxes"); it != j.end()) {
        if (!it->is_array()) throw SpecError(where + ".boxes: expected an array");
        for (const auto& b : *it) {
            expect_object(b, where + ".boxes");
            allow_keys(b, {"id", "entry", "exit"}, where + ".boxes");
            spec.boxes.push_back(
                Box{str_field(b, "id", where), str_field(b, "entry", where), str_field(b, "exit", where)});
        }
    }
    spec.validate();
    return spec;
}

MonitorSpec parse_monitor(std::string_view json_text) {
    const json j = parse_json(json_text, "monitor");
    expect_object(j, "monitor");
    allow_keys(j, {"name", "states", "initial", "vars", "params", "transitions"}, "monitor");
    MonitorSpec spec;
    spec.name = str_field(j, "name", "monitor");
    const std::string where = "monitor '" + spec.name + "'";
    spec.states = str_set(require(j, "states", where), where + ".states");
    spec.initial = str_field(j, "initial", where);
    if (auto it = j.find("vars"); it != j.end()) {
        expect_object(*it, where + ".vars");
        for (const auto& [name, decl] : it->items()) spec.vars[name] = var_decl(decl, where + ".vars." + name);
    }
    if (auto it = j.find("params"); it != j.end()) {
        expect_object(*it, where + ".params");
        for (const auto& [name, value] : it->items()) {
            if (!value.is_number_integer()) throw SpecError(where + ".params." + name + ": expected an integer");
            spec.params[name] = value.get<std::int64_t>();
        }
    }
    const auto& transitions = require(j, "transitions", where);
    if (!transitions.is_array()) throw SpecError(where + ".transitions: expected an array");
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        const auto& t = transitions[i];
        const auto tw = where + ".transitions[" + std::to_string(i) + "]";
        expect_object(t, tw);
        allow_keys(t, {"from", "to", "on", "guard", "do"}, tw);
        MonitorTransition mt;
        mt.source = str_field(t, "from", tw);
        mt.target = str_field(t, "to", tw);
        const auto on = str_field(t, "on", tw);
        if (on.starts_with("event:")) {
            mt.input = MonitorTransition::Input::SystemEvent;
            mt.on = on.substr(6);
        } else if (on.starts_with("channel:")) {
            mt.input = MonitorTransition::Input::Channel;
            mt.on = on.substr(8);
        } else {
            throw SpecError(tw + ".on: expected 'event:NAME' or 'channel:NAME'");
        }
        mt.guard = guard_field(t, tw);
        if (auto it = t.find("do"); it != t.end()) {
            if (!it->is_array()) throw SpecError(tw + ".do: expected an array");
            for (const auto& a : *it) mt.actions.push_back(monitor_action(a, tw + ".do"));
        }
        spec.transitions.push_back(std::move(mt));
    }
    spec.validate();
    return spec;
}

ScenarioScript parse_scenario(std::string_view json_text) {
    const json j = parse_json(json_text, "scenario");
    expect_object(j, "scenario");
    allow_keys(j, {"name", "seed", "steps"}, "scenario");
    ScenarioScript script;
    if (auto it = j.find("name"); it != j.end()) script.name = str(*it, "scenario.name");
    if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_integer()) throw SpecError("scenario.seed: expected an integer");
        script.seed = it->get<std::int64_t>();
    }
    const auto& steps = require(j, "steps", "scenario");
    if (!steps.is_array()) throw SpecError("scenario.steps: expected an array");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        script.steps.push_back(scenario_step(steps[i], "scenario.steps[" + std::to_string(i) + "]"));
    }
    return script;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read '" + path.string() + "'");
    return buf.str();
}

CompAutomatonSpec load_automaton(const std::filesystem::path& path) {
    try {
        return parse_automaton(read_file(path));
    } catch (const SpecError& e) {
        throw SpecError(path.string() + ": " + e.what());
    }
}

MonitorSpec load_monitor(const std::filesystem::path& path) {
    try {
        return parse_monitor(read_file(path));
    } catch (const SpecError& e) {
        throw SpecError(path.string() + ": " + e.what());
    }
}

ScenarioScript load_scenario(const std::filesystem::path& path) {
    try {
        return parse_scenario(read_file(path));
    } catch (const SpecError& e) {
        throw SpecError(path.string() + ": " + e.what());
    }
}

std::vector<std::filesystem::path> expand_spec_paths(const std::vector<std::filesystem::path>& paths) {
    std::vector<std::filesystem::path> out;
    for (const auto& p : paths) {
        std::error_code ec;
        if (std::filesystem::is_directory(p, ec)) {
            std::vector<std::filesystem::path> found;
            for (const auto& entry : std::filesystem::directory_iterator(p, ec)) {
                if (entry.path().extension() == ".json") found.push_back(entry.path());
            }
            if (ec) throw IoError("cannot list '" + p.string() + "'");
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(p);
        }
    }
    return out;
}

}  // namespace mocp
