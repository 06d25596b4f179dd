// config.hpp: run configuration for the rfspec tool
//
// A config is one JSON object with optional sections:
//
// {
//   "model":    { "gamma": 0.5 | {"re":..,"im":..} | [..], "gamma_pd": 0.05,
//                 "gamma_xd": 0.05, "Gamma_det": 0.05 | [..], "kappa": 0 | [..],
//                 "drive_scale": 1 },
//   "state":    { "kind": "vacuum" | "fock" | "superposition" | "occupations" | "coherent",
//                 "n": 2, "amplitudes": [1, [0, 1]], "values": [..],
//                 "alpha": 3 | {"re":..,"im":..}, "cutoff": 40, "diagonal": true },
//   "grid":     { "lo": -6, "hi": 2, "step": 0.00125 },
//   "spectrum": { "model": "full" | "narrow" | "semiclassical" | "oracle",
//                 "component": "total" | "elastic" | "inelastic" | "sharp" | "broad",
//                 "D": 2.5 },
//   "oracle":   { "epsilon0": 0.02, "cutoff": 14, "dt": 0, "t_stationary": 0,
//                 "average_periods": 1 },
//   "noise":    { "percent_of_max": 1, "seed": 7, "realizations": 50 },
//   "fit":      { "input": "spec.csv", "model": "narrow", "n_max": 1, "threshold": 0.01,
//                 "truth": [0.5, 0.5] },
//   "sweep":    { "gamma": [..] | {"start":..,"stop":..,"step":..}, "model": "narrow",
//                 "n_max": 1, "threshold": 0.01 },
//   "wigner":   { "points": 101, "half_width": 0, "phase_time": 0 },
//   "oracle_check": { "spectrum_tolerance": 0.02, "correlation_tolerance": 1e-3,
//                 "spectrum_epsilon0": 0.02, "weak_epsilon0": 0.002, "cutoff": 14 },
//   "output":   { "dir": "out", "prefix": "run" }
// }
//
// Unknown keys anywhere are rejected. Lists in gamma, kappa and Gamma_det
// expand to their cartesian product.

#pragma once

#include "rfspec/lindblad_oracle.hpp"
#include "rfspec/model.hpp"
#include "rfspec/readout.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rfspec::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelVariant {
    ModelParams params;
    std::string tag;  // "" for a single variant, else e.g. "_kappa-0.5"
};

struct GridSpec {
    std::optional<double> lo;
    std::optional<double> hi;
    std::optional<double> step;
};

struct SpectrumSection {
    std::string model{"full"};
    std::string component{"total"};
    std::optional<double> D;
};

struct OracleSection {
    double epsilon0{0.02};
    std::optional<std::size_t> cutoff;
    OracleOptions options;
};

struct FitSection {
    std::string input;
    FitModel model{FitModel::narrow};
    std::optional<std::size_t> n_max;
    double threshold{0.01};
    std::optional<Occupations> truth;
};

struct SweepSection {
    std::vector<double> gamma;
    SweepOptions options;
};

struct WignerSection {
    int points{101};
    double half_width{0.0};  // 0: 4 + |gamma|
    double phase_time{0.0};
};

struct OracleCheckSection {
    double spectrum_tolerance{0.02};
    double correlation_tolerance{1e-3};
    double spectrum_epsilon0{0.02};
    double weak_epsilon0{0.002};
    std::size_t cutoff{14};
};

struct RunConfig {
    nlohmann::json raw;
    std::vector<ModelVariant> variants;
    std::optional<PhononState> state;
    GridSpec grid;
    SpectrumSection spectrum;
    OracleSection oracle;
    NoiseSpec noise;
    FitSection fit;
    SweepSection sweep;
    WignerSection wigner;
    OracleCheckSection check;
    std::filesystem::path out_dir{"."};
    std::string prefix{"rfspec"};
    std::filesystem::path base_dir{"."};  // directory of the config file
};

// Throws ConfigError with a path-qualified message.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = ".");

// Reads and parses; unreadable file -> rfspec::IoError, bad JSON -> ConfigError.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace rfspec::cli
