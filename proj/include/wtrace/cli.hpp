#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wtrace::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUnexpected = 1,
    kValidationFailure = 2,
    kToleranceBreach = 3,
};

struct Options {
    std::string subcommand;
    /// Empty means every key takes its default.
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> refine;
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand: writes `<out>/<subcommand>.json` plus CSV data and
/// returns the exit code. Progress and failures go to `log`.
int run(const Options& opt, std::ostream& log);

/// Argument parsing front end used by the executable.
int main(int argc, char** argv);

}  // namespace wtrace::cli
