#include "cli.hpp"

#include "mocp/case_study.hpp"
#include "mocp/errors.hpp"
#include "mocp/simulation.hpp"
#include "mocp/spec_io.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>

namespace mocp::cli {

namespace {

struct Bundle {
    std::vector<CompAutomatonSpec> automata;
    std::vector<MonitorSpec> monitors;
};

void require_exists(const std::vector<std::filesystem::path>& paths) {
    for (const auto& p : paths) {
        if (!std::filesystem::exists(p)) throw IoError("cannot open '" + p.string() + "'");
    }
}

Bundle load_bundle(const CliConfig& config) {
    Bundle b;
    if (config.automata.empty()) {
        b.automata = case_study::strategies();
    } else {
        require_exists(config.automata);
        for (const auto& p : expand_spec_paths(config.automata)) b.automata.push_back(load_automaton(p));
    }
    if (config.monitors.empty()) {
        b.monitors = case_study::monitors(config.retries);
    } else {
        require_exists(config.monitors);
        for (const auto& p : expand_spec_paths(config.monitors)) b.monitors.push_back(load_monitor(p));
        set_param(b.monitors, "k", config.retries);
    }
    spdlog::debug("loaded {} automata, {} monitors", b.automata.size(), b.monitors.size());
    return b;
}

void write_output(const CliConfig& config, const std::string& text, std::ostream& out) {
    if (!config.out) {
        out << text;
        return;
    }
    std::ofstream f(*config.out, std::ios::binary);
    if (!f) throw IoError("cannot write '" + config.out->string() + "'");
    f << text;
    if (!f.flush()) throw IoError("cannot write '" + config.out->string() + "'");
}

int validate(const CliConfig& config, std::ostream& out, std::ostream& err) {
    const auto bundle = load_bundle(config);
    const auto check = check_bundle(bundle.automata, bundle.monitors, ActionRegistry::eprocurement());
    for (const auto& w : check.warnings) err << "warning: " << w << '\n';
    for (const auto& e : check.errors) err << "error: " << e << '\n';
    if (config.scenario) {
        require_exists({*config.scenario});
        load_scenario(*config.scenario);
    }
    if (!check.ok()) return kSpecError;
    out << "ok: " << bundle.automata.size() << " automata, " << bundle.monitors.size() << " monitors\n";
    return kOk;
}

int run(const CliConfig& config, std::ostream& out) {
    if (!config.scenario) throw SpecError("run mode needs --scenario");
    require_exists({*config.scenario});
    const auto script = load_scenario(*config.scenario);
    auto bundle = load_bundle(config);

    SimulationConfig sim_config;
    sim_config.retries = config.retries;
    sim_config.seed = config.seed;
    Simulation sim(std::move(bundle.automata), std::move(bundle.monitors), sim_config);
    const auto report = sim.run(script);
    report.check_consistency();
    write_output(config, report.text(), out);

    for (const auto& ch : report.unheard_channels) spdlog::info("channel '{}' had no listener", ch);
    if (!report.journal.faults().empty()) {
        spdlog::error("{} compensation instruction(s) failed", report.journal.faults().size());
        return kRuntimeFault;
    }
    spdlog::info("{} events, {} compensations", report.trace.events().size(), report.journal.emissions().size());
    return kOk;
}

int matrix(const CliConfig& config, std::ostream& out) {
    const auto bundle = load_bundle(config);
    SimulationConfig sim_config;
    sim_config.retries = config.retries;
    sim_config.seed = config.seed;
    const auto cells = case_study::run_matrix(bundle.automata, bundle.monitors, sim_config);
    write_output(config, case_study::format_matrix(cells), out);
    for (const auto& c : cells) {
        if (!c.report.journal.faults().empty()) return kRuntimeFault;
    }
    return kOk;
}

void configure_logging() {
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("MOCP_LOG")) {
        const std::string v(level);
        if (v == "debug") spdlog::set_level(spdlog::level::debug);
        if (v == "info") spdlog::set_level(spdlog::level::info);
    }
}

}  // namespace

int execute(const CliConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.retries < 1) throw SpecError("--retries must be at least 1");
        switch (config.mode) {
            case Mode::Validate: return validate(config, out, err);
            case Mode::Run: return run(config, out);
            case Mode::Matrix: return matrix(config, out);
        }
        return kSpecError;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << '\n';
        return kIoError;
    } catch (const SpecError& e) {
        err << "spec error: " << e.what() << '\n';
        return kSpecError;
    } catch (const MissingCaptureKey& e) {
        err << "spec error: " << e.what() << '\n';
        return kSpecError;
    } catch (const UnknownStrategy& e) {
        err << "spec error: " << e.what() << '\n';
        return kSpecError;
    } catch (const ChannelLoopDetected& e) {
        err << "spec error: " << e.what() << '\n';
        return kSpecError;
    } catch (const Error& e) {
        err << "runtime fault: " << e.what() << '\n';
        return kRuntimeFault;
    }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    configure_logging();

    CliConfig config;
    std::string scenario;
    std::string out_path;
    std::vector<std::string> automata;
    std::vector<std::string> monitors;
    std::int64_t seed = 0;

    CLI::App app{"Run compensation scenarios against automata and monitor specs", "mocp"};
    app.add_option("--mode", config.mode, "run, validate or matrix")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Mode>{{"run", Mode::Run}, {"validate", Mode::Validate}, {"matrix", Mode::Matrix}}));
    app.add_option("--scenario", scenario, "Scenario script (JSON)");
    app.add_option("--automata", automata, "Automaton spec files or directories (default: built-in case study)");
    app.add_option("--monitors", monitors, "Monitor spec files or directories (default: built-in case study)");
    app.add_option("--retries", config.retries, "Attempts before bank or courier errors are raised");
    auto* seed_opt = app.add_option("--seed", seed, "Overrides the scenario seed");
    app.add_option("--out", out_path, "Write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kSpecError;
    }

    if (!scenario.empty()) config.scenario = scenario;
    if (!out_path.empty()) config.out = out_path;
    if (seed_opt->count() > 0) config.seed = seed;
    config.automata.assign(automata.begin(), automata.end());
    config.monitors.assign(monitors.begin(), monitors.end());
    return execute(config, out, err);
}

}  // namespace mocp::cli
