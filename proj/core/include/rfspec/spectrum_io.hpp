// spectrum_io.hpp: CSV and JSON serialization of spectra and parameters
//
// CSV layout:
//   # rfspec <kind>
//   # manifest_hash: <16 hex digits>
//   # seed: <u64>
//   # config: <compact JSON>
//   # <further key: value lines>
//   <column header>
//   <rows, 17 significant digits>

#pragma once

#include "rfspec/analytic_spectrum.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rfspec {

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data) noexcept;
std::string hex64(std::uint64_t v);

// What produced an output file: the full config document and the seed.
struct RunStamp {
    nlohmann::json config = nlohmann::json::object();
    std::uint64_t seed{0};

    // fnv1a64 over the compact config dump, a newline and the decimal seed.
    std::string hash() const;
};

nlohmann::json params_to_json(const ModelParams& p);
ModelParams params_from_json(const nlohmann::json& j);  // throws ParseError

nlohmann::json spectrum_to_json(const Spectrum& s, const RunStamp& stamp);

// Format with 17 significant digits (round-trip exact for doubles).
std::string format_double(double v);

// Writes "# key: value" header lines then a CSV body. Throws IoError.
void write_table_csv(const std::filesystem::path& path, std::string_view kind,
                     const RunStamp& stamp,
                     const std::vector<std::pair<std::string, std::string>>& extra_header,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows);

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& s,
                        const RunStamp& stamp);

// Reads a file produced by write_spectrum_csv. Header lines other than
// provenance and params are kept in metadata. Throws IoError / ParseError.
Spectrum read_spectrum_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace rfspec
