#include "config.hpp"

#include "rfspec/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>

namespace rfspec::cli {

namespace {

using nlohmann::json;

class Section {
public:
    Section(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
        if (!doc_.is_object()) fail("", "must be an object");
    }

    void allow(std::initializer_list<const char*> keys) const {
        std::set<std::string> ok(keys.begin(), keys.end());
        for (const auto& [k, v] : doc_.items()) {
            if (!ok.count(k)) fail(k, "unknown key");
        }
    }

    bool has(const char* key) const { return doc_.contains(key) && !doc_.at(key).is_null(); }
    const json& at(const char* key) const { return doc_.at(key); }

    double number(const char* key, double fallback) const {
        if (!has(key)) return fallback;
        return to_number(doc_.at(key), key);
    }
    double to_number(const json& v, const std::string& key) const {
        if (!v.is_number()) fail(key, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(key, "must be finite");
        return d;
    }
    std::size_t index(const char* key) const {
        const json& v = doc_.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0) fail(key, "expected an integer >= 0");
        return static_cast<std::size_t>(v.get<long long>());
    }
    std::uint64_t u64(const char* key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        const json& v = doc_.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            fail(key, "expected an unsigned integer");
        }
        return v.get<std::uint64_t>();
    }
    std::string text(const char* key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        if (!doc_.at(key).is_string()) fail(key, "expected a string");
        return doc_.at(key).get<std::string>();
    }
    bool flag(const char* key, bool fallback) const {
        if (!has(key)) return fallback;
        if (!doc_.at(key).is_boolean()) fail(key, "expected true or false");
        return doc_.at(key).get<bool>();
    }

    cplx complex_value(const json& v, const std::string& key) const {
        if (v.is_number()) return {to_number(v, key), 0.0};
        if (v.is_object()) {
            Section s(v, path_ + "." + key);
            s.allow({"re", "im"});
            return {s.number("re", 0.0), s.number("im", 0.0)};
        }
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
            return {to_number(v[0], key), to_number(v[1], key)};
        }
        fail(key, "expected a number, [re, im] or {\"re\", \"im\"}");
    }

    std::vector<double> number_list(const char* key) const {
        const json& v = doc_.at(key);
        std::vector<double> out;
        if (v.is_number()) {
            out.push_back(to_number(v, key));
        } else if (v.is_array() && !v.empty()) {
            for (const auto& e : v) out.push_back(to_number(e, key));
        } else {
            fail(key, "expected a number or a nonempty list of numbers");
        }
        return out;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        const std::string where = key.empty() ? path_ : path_ + "." + key;
        throw ConfigError(where + ": " + what);
    }

    const std::string& path() const { return path_; }

private:
    const json& doc_;
    std::string path_;
};

std::string format_tag(const char* name, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "_%s%g", name, v);
    return buf;
}

std::vector<ModelVariant> parse_model(const Section& s) {
    s.allow({"gamma", "gamma_pd", "gamma_xd", "Gamma_det", "kappa", "drive_scale"});
    ModelParams base;
    base.gamma_pd = s.number("gamma_pd", base.gamma_pd);
    base.gamma_xd = s.number("gamma_xd", base.gamma_xd);
    base.drive_scale = s.number("drive_scale", base.drive_scale);

    std::vector<cplx> gammas{cplx{0.0, 0.0}};
    if (s.has("gamma")) {
        const json& g = s.at("gamma");
        gammas.clear();
        // a plain array is a list of couplings; complex entries use {"re", "im"}
        if (g.is_array()) {
            if (g.empty()) s.fail("gamma", "empty list");
            for (const auto& e : g) {
                if (e.is_array()) s.fail("gamma", "list entries must be numbers or {\"re\", \"im\"}");
                gammas.push_back(s.complex_value(e, "gamma"));
            }
        } else {
            gammas.push_back(s.complex_value(g, "gamma"));
        }
    }
    const std::vector<double> kappas = s.has("kappa") ? s.number_list("kappa")
                                                      : std::vector<double>{0.0};
    const std::vector<double> widths = s.has("Gamma_det") ? s.number_list("Gamma_det")
                                                          : std::vector<double>{base.Gamma_det};

    std::vector<ModelVariant> out;
    for (const cplx& g : gammas) {
        for (double k : kappas) {
            for (double w : widths) {
                ModelVariant v;
                v.params = base;
                v.params.gamma = g;
                v.params.kappa = k;
                v.params.Gamma_det = w;
                if (gammas.size() > 1) v.tag += format_tag("gamma", std::abs(g));
                if (kappas.size() > 1) v.tag += format_tag("kappa", k);
                if (widths.size() > 1) v.tag += format_tag("Gamma", w);
                try {
                    v.params.validate();
                } catch (const InvalidInput& e) {
                    s.fail("", e.what());
                }
                out.push_back(v);
            }
        }
    }
    return out;
}

PhononState parse_state(const Section& s) {
    const std::string kind = s.text("kind", "");
    try {
        if (kind == "vacuum") {
            s.allow({"kind"});
            Occupations occ(1);
            occ << 1.0;
            return PhononState::from_occupations(occ);
        }
        if (kind == "fock") {
            s.allow({"kind", "n"});
            const std::size_t n = s.index("n");
            Occupations occ = Occupations::Zero(static_cast<Eigen::Index>(n + 1));
            occ(static_cast<Eigen::Index>(n)) = 1.0;
            return PhononState::from_occupations(occ);
        }
        if (kind == "superposition") {
            s.allow({"kind", "amplitudes"});
            if (!s.has("amplitudes") || !s.at("amplitudes").is_array()) {
                s.fail("amplitudes", "expected a list");
            }
            std::vector<cplx> amps;
            for (const auto& a : s.at("amplitudes")) amps.push_back(s.complex_value(a, "amplitudes"));
            return fock_superposition_state(amps);
        }
        if (kind == "occupations") {
            s.allow({"kind", "values"});
            const std::vector<double> v = s.number_list("values");
            const Occupations occ = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
            return PhononState::from_occupations(occ);
        }
        if (kind == "coherent") {
            s.allow({"kind", "alpha", "cutoff", "diagonal"});
            if (!s.has("alpha")) s.fail("alpha", "required");
            const cplx alpha = s.complex_value(s.at("alpha"), "alpha");
            const std::size_t cutoff = s.has("cutoff") ? s.index("cutoff") : default_coherent_cutoff(alpha);
            if (s.flag("diagonal", true)) {
                return PhononState::from_occupations(coherent_state_occupations(alpha, cutoff));
            }
            return coherent_state(alpha, cutoff);
        }
    } catch (const rfspec::Error& e) {
        s.fail("", e.what());
    }
    s.fail("kind", "expected vacuum, fock, superposition, occupations or coherent");
}

std::vector<double> parse_gamma_grid(const Section& s) {
    const json& g = s.at("gamma");
    if (g.is_object()) {
        Section r(g, s.path() + ".gamma");
        r.allow({"start", "stop", "step"});
        const double a = r.number("start", NAN), b = r.number("stop", NAN), h = r.number("step", NAN);
        if (!(h > 0.0) || !(b >= a)) r.fail("", "need start <= stop and step > 0");
        std::vector<double> out;
        const auto n = static_cast<long>(std::floor((b - a) / h + 1e-9));
        for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * h);
        return out;
    }
    return s.number_list("gamma");
}

}  // namespace

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    cfg.raw = doc;
    cfg.base_dir = base_dir;
    Section root(doc, "config");
    root.allow({"model", "state", "grid", "spectrum", "oracle", "noise", "fit", "sweep", "wigner",
                "oracle_check", "output"});

    cfg.variants = parse_model(Section(doc.contains("model") ? doc.at("model") : json::object(), "model"));

    if (root.has("state")) cfg.state = parse_state(Section(doc.at("state"), "state"));

    if (root.has("grid")) {
        Section s(doc.at("grid"), "grid");
        s.allow({"lo", "hi", "step"});
        if (s.has("lo")) cfg.grid.lo = s.number("lo", 0.0);
        if (s.has("hi")) cfg.grid.hi = s.number("hi", 0.0);
        if (s.has("step")) cfg.grid.step = s.number("step", 0.0);
        if (cfg.grid.lo && cfg.grid.hi && !(*cfg.grid.hi > *cfg.grid.lo)) s.fail("hi", "must exceed lo");
        if (cfg.grid.step && !(*cfg.grid.step > 0.0)) s.fail("step", "must be > 0");
    }

    if (root.has("spectrum")) {
        Section s(doc.at("spectrum"), "spectrum");
        s.allow({"model", "component", "D"});
        cfg.spectrum.model = s.text("model", "full");
        cfg.spectrum.component = s.text("component", "total");
        if (s.has("D")) cfg.spectrum.D = s.number("D", 0.0);
        static const std::set<std::string> models{"full", "narrow", "semiclassical", "oracle"};
        if (!models.count(cfg.spectrum.model)) s.fail("model", "expected full, narrow, semiclassical or oracle");
        const auto& c = cfg.spectrum.component;
        const bool ok = c == "total" || (cfg.spectrum.model == "full" && (c == "elastic" || c == "inelastic")) ||
                        (cfg.spectrum.model == "narrow" && (c == "sharp" || c == "broad"));
        if (!ok) s.fail("component", "'" + c + "' is not available for model " + cfg.spectrum.model);
        if (cfg.spectrum.model == "semiclassical" && (!cfg.spectrum.D || *cfg.spectrum.D < 0.0)) {
            s.fail("D", "semiclassical spectra need D >= 0");
        }
    }

    if (root.has("oracle")) {
        Section s(doc.at("oracle"), "oracle");
        s.allow({"epsilon0", "cutoff", "dt", "t_stationary", "average_periods"});
        cfg.oracle.epsilon0 = s.number("epsilon0", 0.02);
        if (!(cfg.oracle.epsilon0 > 0.0)) s.fail("epsilon0", "must be > 0");
        if (s.has("cutoff")) cfg.oracle.cutoff = s.index("cutoff");
        cfg.oracle.options.dt = s.number("dt", 0.0);
        cfg.oracle.options.t_stationary = s.number("t_stationary", 0.0);
        cfg.oracle.options.average_periods = static_cast<int>(s.number("average_periods", 1));
        if (cfg.oracle.options.average_periods < 1) s.fail("average_periods", "must be >= 1");
    }

    if (root.has("noise")) {
        Section s(doc.at("noise"), "noise");
        s.allow({"percent_of_max", "seed", "realizations"});
        cfg.noise.percent_of_max = s.number("percent_of_max", 0.0);
        cfg.noise.seed = s.u64("seed", 0);
        cfg.noise.realizations = static_cast<int>(s.number("realizations", 50));
        if (cfg.noise.percent_of_max < 0.0) s.fail("percent_of_max", "must be >= 0");
        if (cfg.noise.realizations < 1) s.fail("realizations", "must be >= 1");
    }

    if (root.has("fit")) {
        Section s(doc.at("fit"), "fit");
        s.allow({"input", "model", "n_max", "threshold", "truth"});
        cfg.fit.input = s.text("input", "");
        try {
            cfg.fit.model = fit_model_from_string(s.text("model", "narrow"));
        } catch (const rfspec::Error& e) {
            s.fail("model", e.what());
        }
        if (s.has("n_max")) cfg.fit.n_max = s.index("n_max");
        cfg.fit.threshold = s.number("threshold", 0.01);
        if (!(cfg.fit.threshold > 0.0 && cfg.fit.threshold < 1.0)) s.fail("threshold", "must lie in (0, 1)");
        if (s.has("truth")) {
            const std::vector<double> t = s.number_list("truth");
            cfg.fit.truth = Eigen::Map<const Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size()));
        }
    }

    if (root.has("sweep")) {
        Section s(doc.at("sweep"), "sweep");
        s.allow({"gamma", "model", "n_max", "threshold"});
        if (!s.has("gamma")) s.fail("gamma", "required");
        cfg.sweep.gamma = parse_gamma_grid(s);
        try {
            cfg.sweep.options.model = fit_model_from_string(s.text("model", "narrow"));
        } catch (const rfspec::Error& e) {
            s.fail("model", e.what());
        }
        if (s.has("n_max")) cfg.sweep.options.n_max = s.index("n_max");
        cfg.sweep.options.nmax_threshold = s.number("threshold", 0.01);
    }

    if (root.has("wigner")) {
        Section s(doc.at("wigner"), "wigner");
        s.allow({"points", "half_width", "phase_time"});
        cfg.wigner.points = static_cast<int>(s.number("points", 101));
        cfg.wigner.half_width = s.number("half_width", 0.0);
        cfg.wigner.phase_time = s.number("phase_time", 0.0);
        if (cfg.wigner.points < 2) s.fail("points", "must be >= 2");
        if (cfg.wigner.half_width < 0.0) s.fail("half_width", "must be >= 0");
    }

    if (root.has("oracle_check")) {
        Section s(doc.at("oracle_check"), "oracle_check");
        s.allow({"spectrum_tolerance", "correlation_tolerance", "spectrum_epsilon0", "weak_epsilon0", "cutoff"});
        cfg.check.spectrum_tolerance = s.number("spectrum_tolerance", cfg.check.spectrum_tolerance);
        cfg.check.correlation_tolerance = s.number("correlation_tolerance", cfg.check.correlation_tolerance);
        cfg.check.spectrum_epsilon0 = s.number("spectrum_epsilon0", cfg.check.spectrum_epsilon0);
        cfg.check.weak_epsilon0 = s.number("weak_epsilon0", cfg.check.weak_epsilon0);
        if (s.has("cutoff")) cfg.check.cutoff = s.index("cutoff");
    }

    if (root.has("output")) {
        Section s(doc.at("output"), "output");
        s.allow({"dir", "prefix"});
        cfg.out_dir = s.text("dir", ".");
        cfg.prefix = s.text("prefix", "rfspec");
        if (cfg.prefix.empty() || cfg.prefix.find('/') != std::string::npos) {
            s.fail("prefix", "must be a nonempty file name stem");
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(doc, path.parent_path());
}

}  // namespace rfspec::cli
