#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mocp::cli {

enum class Mode { Run, Validate, Matrix };

enum ExitCode : int {
    kOk = 0,
    kSpecError = 1,
    kRuntimeFault = 2,
    kIoError = 3,
};

struct CliConfig {
    std::optional<std::filesystem::path> scenario;
    /// Empty means the built-in case-study strategies.
    std::vector<std::filesystem::path> automata;
    /// Empty means the built-in case-study monitors.
    std::vector<std::filesystem::path> monitors;
    std::int64_t retries = 3;
    std::optional<std::int64_t> seed;
    std::optional<std::filesystem::path> out;
    Mode mode = Mode::Run;
};

/// Executes one command. Reports go to `out` unless the config names a file.
int execute(const CliConfig& config, std::ostream& out, std::ostream& err);

/// Parses arguments and executes. Usage errors exit with kSpecError.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mocp::cli
