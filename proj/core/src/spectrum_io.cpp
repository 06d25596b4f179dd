#include "rfspec/spectrum_io.hpp"

#include "rfspec/errors.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rfspec {

std::uint64_t fnv1a64(std::string_view data) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string RunStamp::hash() const {
    return hex64(fnv1a64(config.dump() + "\n" + std::to_string(seed)));
}

nlohmann::json params_to_json(const ModelParams& p) {
    return {{"gamma_re", p.gamma.real()}, {"gamma_im", p.gamma.imag()},
            {"gamma_pd", p.gamma_pd},     {"gamma_xd", p.gamma_xd},
            {"Gamma_det", p.Gamma_det},   {"kappa", p.kappa},
            {"drive_scale", p.drive_scale}};
}

ModelParams params_from_json(const nlohmann::json& j) {
    try {
        ModelParams p;
        p.gamma = cplx(j.at("gamma_re").get<double>(), j.value("gamma_im", 0.0));
        p.gamma_pd = j.at("gamma_pd").get<double>();
        p.gamma_xd = j.at("gamma_xd").get<double>();
        p.Gamma_det = j.at("Gamma_det").get<double>();
        p.kappa = j.at("kappa").get<double>();
        p.drive_scale = j.value("drive_scale", 1.0);
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model parameters: ") + e.what());
    }
}

nlohmann::json spectrum_to_json(const Spectrum& s, const RunStamp& stamp) {
    nlohmann::json meta = nlohmann::json::object();
    for (const auto& [k, v] : s.metadata) meta[k] = v;
    return {{"kind", "spectrum"},
            {"provenance", to_string(s.provenance)},
            {"params", params_to_json(s.params)},
            {"metadata", meta},
            {"points", s.size()},
            {"max_value", s.values.empty() ? 0.0 : s.max_value()},
            {"manifest_hash", stamp.hash()},
            {"seed", stamp.seed},
            {"config", stamp.config}};
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_table_csv(const std::filesystem::path& path, std::string_view kind,
                     const RunStamp& stamp,
                     const std::vector<std::pair<std::string, std::string>>& extra_header,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << "# rfspec " << kind << '\n';
    out << "# manifest_hash: " << stamp.hash() << '\n';
    out << "# seed: " << stamp.seed << '\n';
    out << "# config: " << stamp.config.dump() << '\n';
    for (const auto& [k, v] : extra_header) out << "# " << k << ": " << v << '\n';
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
        out << '\n';
    }
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& s,
                        const RunStamp& stamp) {
    std::vector<std::pair<std::string, std::string>> header{
        {"provenance", to_string(s.provenance)}, {"params", params_to_json(s.params).dump()}};
    for (const auto& [k, v] : s.metadata) header.emplace_back("meta." + k, v);
    std::vector<std::vector<double>> rows;
    rows.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) rows.push_back({s.grid[i], s.values[i]});
    write_table_csv(path, "spectrum", stamp, header, {"x", "S"}, rows);
}

namespace {

double parse_number(const std::string& text, const std::filesystem::path& path, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
        throw ParseError(path.string() + ":" + std::to_string(line) + ": bad number '" + text + "'");
    }
    return v;
}

}  // namespace

Spectrum read_spectrum_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

    Spectrum s;
    bool have_params = false;
    bool have_columns = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(": ");
            if (colon == std::string::npos) continue;
            const std::string key = line.substr(2, colon - 2);
            const std::string value = line.substr(colon + 2);
            if (key == "provenance") {
                s.provenance = provenance_from_string(value);
            } else if (key == "params") {
                try {
                    s.params = params_from_json(nlohmann::json::parse(value));
                } catch (const nlohmann::json::exception& e) {
                    throw ParseError(path.string() + ": params header: " + e.what());
                }
                have_params = true;
            } else if (key.rfind("meta.", 0) == 0) {
                s.metadata[key.substr(5)] = value;
            } else {
                s.metadata[key] = value;
            }
            continue;
        }
        if (!have_columns) {
            if (line != "x,S") {
                throw ParseError(path.string() + ":" + std::to_string(lineno) +
                                 ": expected column header 'x,S'");
            }
            have_columns = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": expected two columns");
        }
        s.grid.push_back(parse_number(line.substr(0, comma), path, lineno));
        s.values.push_back(parse_number(line.substr(comma + 1), path, lineno));
    }
    if (!have_columns) throw ParseError(path.string() + ": missing 'x,S' column header");
    if (!have_params) throw ParseError(path.string() + ": missing params header");
    if (s.grid.empty()) throw ParseError(path.string() + ": no data rows");
    try {
        s.validate();
    } catch (const InvalidInput& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return s;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace rfspec
