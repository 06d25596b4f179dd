// commands.hpp: subcommands of the rfspec tool

#pragma once

#include "config.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rfspec::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_config = 2,
    exit_tolerance = 3,
    exit_io = 4,
};

struct Invocation {
    std::string command;  // spectrum | fit | sweep | wigner | oracle-check
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
};

// Loads the config, dispatches and maps exceptions to exit codes.
int run(const Invocation& inv, std::ostream& log, std::ostream& err);

// argv front end (CLI11).
int main_entry(int argc, char** argv);

int cmd_spectrum(const RunConfig& cfg, std::uint64_t seed, std::ostream& log);
int cmd_fit(const RunConfig& cfg, std::uint64_t seed, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, std::uint64_t seed, std::ostream& log);
int cmd_wigner(const RunConfig& cfg, std::uint64_t seed, std::ostream& log);
int cmd_oracle_check(const RunConfig& cfg, std::uint64_t seed, std::ostream& log);

struct CheckResult {
    std::string name;
    double deviation{0.0};
    double tolerance{0.0};
    bool passed{false};
    double seconds{0.0};
};

// Oracle-versus-analytic comparisons run by oracle-check.
std::vector<CheckResult> run_oracle_checks(const OracleCheckSection& settings, std::ostream& log);

}  // namespace rfspec::cli
