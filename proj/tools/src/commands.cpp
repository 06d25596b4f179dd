#include "commands.hpp"

#include "rfspec/analytic_spectrum.hpp"
#include "rfspec/errors.hpp"
#include "rfspec/franck_condon.hpp"
#include "rfspec/lindblad_oracle.hpp"
#include "rfspec/readout.hpp"
#include "rfspec/rng.hpp"
#include "rfspec/semiclassical.hpp"
#include "rfspec/spectrum_io.hpp"
#include "rfspec/wigner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

namespace rfspec::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* tool_version = "0.3.0";

struct Outputs {
    const RunConfig& cfg;
    RunStamp stamp;
    std::string command;

    fs::path file(const std::string& stem, const std::string& ext) const {
        return cfg.out_dir / (cfg.prefix + stem + ext);
    }

    json manifest(const std::vector<fs::path>& files) const {
        json f = json::array();
        for (const auto& p : files) f.push_back(p.filename().string());
        return {{"tool", "rfspec"},        {"version", tool_version},
                {"command", command},      {"manifest_hash", stamp.hash()},
                {"seed", stamp.seed},      {"config", stamp.config},
                {"outputs", f}};
    }
};

const PhononState& require_state(const RunConfig& cfg, const char* command) {
    if (!cfg.state) throw ConfigError(std::string("config: '") + command + "' needs a state section");
    return *cfg.state;
}

std::vector<double> resolve_grid(const RunConfig& cfg, const ModelParams& params, std::size_t n_occ) {
    std::vector<double> base;
    if (cfg.spectrum.model == "semiclassical") {
        const double D = cfg.spectrum.D.value_or(0.0);
        const double span = std::ceil(D + 6.0 * std::sqrt(D) + 4.0);
        const double wide = params.Gamma_det + params.coherence_rate();
        base = uniform_grid(-span - 5.0 * wide, span + 5.0 * wide, params.Gamma_det / 40.0);
    } else {
        base = default_grid(params, n_occ);
    }
    if (!cfg.grid.lo && !cfg.grid.hi && !cfg.grid.step) return base;
    const double lo = cfg.grid.lo.value_or(base.front());
    const double hi = cfg.grid.hi.value_or(base.back());
    const double step = cfg.grid.step.value_or(params.Gamma_det / 40.0);
    if (!(hi > lo)) throw ConfigError("grid: hi must exceed lo");
    return uniform_grid(lo, hi, step);
}

Spectrum compute_spectrum(const RunConfig& cfg, const ModelParams& params,
                          const std::vector<double>& grid) {
    const std::string& model = cfg.spectrum.model;
    const std::string& part = cfg.spectrum.component;
    if (model == "semiclassical") return rf_spectrum_semiclassical(params, *cfg.spectrum.D, grid);
    const PhononState& state = require_state(cfg, "spectrum");
    const Occupations occ = state.occupations();
    if (model == "full") {
        if (part == "elastic") return rf_spectrum_elastic(params, occ, grid);
        if (part == "inelastic") return rf_spectrum_inelastic(params, occ, grid);
        return rf_spectrum_full(params, occ, grid);
    }
    if (model == "narrow") {
        if (part == "sharp") return rf_spectrum_narrow_sharp(params, occ, grid);
        if (part == "broad") return rf_spectrum_narrow_broad(params, occ, grid);
        return rf_spectrum_narrow(params, occ, grid);
    }
    const std::size_t cutoff =
        cfg.oracle.cutoff.value_or(fock_cutoff(params, state.max_occupied()));
    const TruncatedSystem sys(params, cutoff, cfg.oracle.epsilon0);
    return spectrum_numeric(sys, state, grid, cfg.oracle.options);
}

fs::path resolve_input(const RunConfig& cfg, const std::string& input) {
    fs::path p(input);
    if (p.is_relative() && !fs::exists(p) && fs::exists(cfg.base_dir / p)) return cfg.base_dir / p;
    return p;
}

json occupations_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(std::isfinite(v(i)) ? json(v(i)) : json("inf"));
    }
    return a;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int cmd_spectrum(const RunConfig& cfg, std::uint64_t seed, std::ostream& log) {
    Outputs out{cfg, {cfg.raw, seed}, "spectrum"};
    const std::size_t n_occ = cfg.state ? cfg.state->max_occupied() : 0;
    for (std::size_t vi = 0; vi < cfg.variants.size(); ++vi) {
        const ModelVariant& v = cfg.variants[vi];
        const std::vector<double> grid = resolve_grid(cfg, v.params, n_occ);
        Spectrum s = compute_spectrum(cfg, v.params, grid);
        if (cfg.noise.percent_of_max > 0.0) {
            s = add_noise(s, cfg.noise.percent_of_max, derive_seed(seed, vi, 0));
        }
        s.metadata["component"] = cfg.spectrum.component;
        const fs::path csv = out.file(v.tag, ".csv");
        const fs::path man = out.file(v.tag, ".json");
        write_spectrum_csv(csv, s, out.stamp);
        json m = out.manifest({csv});
        m["spectrum"] = spectrum_to_json(s, out.stamp);
        m["spectrum"].erase("config");
        write_json(man, m);
        log << "wrote " << csv.string() << " (" << s.size() << " points, "
            << to_string(s.provenance) << ")\n";
    }
    return exit_ok;
}

int cmd_fit(const RunConfig& cfg, std::uint64_t seed, std::ostream& log) {
    if (cfg.fit.input.empty()) throw ConfigError("fit.input: required");
    Outputs out{cfg, {cfg.raw, seed}, "fit"};
    const Spectrum spec = read_spectrum_csv(resolve_input(cfg, cfg.fit.input));
    const ModelParams params = cfg.raw.contains("model") ? cfg.variants.front().params : spec.params;
    ModelParams fit_params = params;
    if (spec.provenance == Provenance::oracle) fit_params.drive_scale = spec.params.drive_scale;

    const std::size_t n_max = cfg.fit.n_max ? *cfg.fit.n_max
                                            : detect_nmax(spec, params.kappa_index(), cfg.fit.threshold);
    ReadoutResult res = fit_occupations(spec, fit_params, cfg.fit.model, n_max, seed);
    if (cfg.fit.truth) attach_truth(res, *cfg.fit.truth);

    std::vector<std::vector<double>> rows;
    for (Eigen::Index i = 0; i < res.fitted_occupations.size(); ++i) {
        rows.push_back({static_cast<double>(i), res.fitted_occupations(i), res.param_sigma(i)});
    }
    const fs::path csv = out.file("_fit", ".csv");
    const fs::path man = out.file("_fit", ".json");
    write_table_csv(csv, "fit", out.stamp, {{"model", to_string(res.model)}, {"n_max", std::to_string(n_max)}},
                    {"n", "occupation", "sigma"}, rows);
    json m = out.manifest({csv});
    json r = {{"fitted_occupations", occupations_json(res.fitted_occupations)},
              {"param_sigma", occupations_json(res.param_sigma)},
              {"n_max", res.n_max},
              {"model", to_string(res.model)},
              {"residual_norm", res.residual_norm},
              {"seed", res.seed},
              {"degenerate", res.degenerate},
              {"iterations", res.iterations},
              {"restarted", res.restarted},
              {"params", params_to_json(fit_params)}};
    if (res.delta_read) {
        r["delta_read"] = *res.delta_read;
        r["delta_read_sigma"] = std::isfinite(res.delta_read_sigma) ? json(res.delta_read_sigma) : json("inf");
    }
    m["result"] = r;
    write_json(man, m);
    log << "n_max = " << n_max << ", occupations =";
    for (Eigen::Index i = 0; i < res.fitted_occupations.size(); ++i) log << ' ' << res.fitted_occupations(i);
    if (res.delta_read) log << ", delta_read = " << *res.delta_read;
    log << "\nwrote " << csv.string() << '\n';
    return exit_ok;
}

int cmd_sweep(const RunConfig& cfg, std::uint64_t seed, std::ostream& log) {
    if (cfg.sweep.gamma.empty()) throw ConfigError("sweep.gamma: required");
    const PhononState& state = require_state(cfg, "sweep");
    Outputs out{cfg, {cfg.raw, seed}, "sweep"};
    NoiseSpec noise = cfg.noise;
    noise.seed = seed;
    for (const ModelVariant& v : cfg.variants) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<SweepRow> rows = sweep_gamma(state, v.params, cfg.sweep.gamma, noise, cfg.sweep.options);
        std::vector<std::vector<double>> table;
        int fails = 0;
        for (const SweepRow& r : rows) {
            table.push_back({r.gamma, r.mean_delta_read, r.mean_sigma, static_cast<double>(r.n_fail)});
            fails += r.n_fail;
        }
        const fs::path csv = out.file(v.tag + "_sweep", ".csv");
        const fs::path man = out.file(v.tag + "_sweep", ".json");
        write_table_csv(csv, "sweep", out.stamp,
                        {{"model", to_string(cfg.sweep.options.model)},
                         {"params", params_to_json(v.params).dump()}},
                        {"gamma", "mean_delta_read", "mean_sigma", "n_fail"}, table);
        json m = out.manifest({csv});
        m["params"] = params_to_json(v.params);
        m["rows"] = rows.size();
        m["n_fail"] = fails;
        m["seconds"] = seconds_since(t0);
        write_json(man, m);
        log << "wrote " << csv.string() << " (" << rows.size() << " couplings, " << fails
            << " failed fits)\n";
    }
    return exit_ok;
}

int cmd_wigner(const RunConfig& cfg, std::uint64_t seed, std::ostream& log) {
    const PhononState& state = require_state(cfg, "wigner");
    Outputs out{cfg, {cfg.raw, seed}, "wigner"};
    for (const ModelVariant& v : cfg.variants) {
        const double half = cfg.wigner.half_width > 0.0 ? cfg.wigner.half_width : 4.0 + std::abs(v.params.gamma);
        std::vector<double> axis(static_cast<std::size_t>(cfg.wigner.points));
        for (int i = 0; i < cfg.wigner.points; ++i) {
            axis[static_cast<std::size_t>(i)] = -half + 2.0 * half * i / (cfg.wigner.points - 1);
        }
        const WignerGrid w = wigner_excited(v.params, state, cfg.wigner.phase_time, axis, axis);

        std::vector<std::string> cols;
        for (std::size_t r = 0; r < w.re_axis.size(); ++r) cols.push_back("c" + std::to_string(r));
        std::vector<std::vector<double>> rows(w.im_axis.size());
        for (std::size_t i = 0; i < w.im_axis.size(); ++i) {
            for (std::size_t r = 0; r < w.re_axis.size(); ++r) {
                rows[i].push_back(w.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)));
            }
        }
        const fs::path mat = out.file(v.tag + "_wigner", ".csv");
        const fs::path ax = out.file(v.tag + "_wigner_axes", ".csv");
        const fs::path man = out.file(v.tag + "_wigner", ".json");
        const std::vector<std::pair<std::string, std::string>> hdr{
            {"layout", "row i = im_axis[i], column r = re_axis[r]"},
            {"params", params_to_json(v.params).dump()}};
        write_table_csv(mat, "wigner", out.stamp, hdr, cols, rows);
        std::vector<std::vector<double>> axes;
        for (std::size_t i = 0; i < axis.size(); ++i) axes.push_back({static_cast<double>(i), w.re_axis[i], w.im_axis[i]});
        write_table_csv(ax, "wigner-axes", out.stamp, {}, {"index", "re", "im"}, axes);

        json m = out.manifest({mat, ax});
        m["params"] = params_to_json(v.params);
        m["phase_time"] = cfg.wigner.phase_time;
        m["min"] = w.min_value();
        m["max"] = w.max_value();
        m["integral"] = w.integral();
        write_json(man, m);
        log << "wrote " << mat.string() << " (min " << w.min_value() << ", max " << w.max_value() << ")\n";
    }
    return exit_ok;
}

std::vector<CheckResult> run_oracle_checks(const OracleCheckSection& settings, std::ostream& log) {
    std::vector<CheckResult> results;
    const std::vector<cplx> plus{1.0, 1.0};
    const PhononState superposition = fock_superposition_state(plus);
    Occupations vac(1);
    vac << 1.0;
    const PhononState vacuum = PhononState::from_occupations(vac);

    // Shape of the spectrum after peak normalization.
    {
        const auto t0 = std::chrono::steady_clock::now();
        ModelParams p;
        p.gamma = 0.5;
        p.gamma_pd = p.gamma_xd = p.Gamma_det = 0.05;
        p.kappa = 0.0;
        const TruncatedSystem sys(p, settings.cutoff, settings.spectrum_epsilon0);
        p.drive_scale = sys.drive_scale();
        const std::vector<double> grid = default_grid(p, 1);
        const Spectrum a = rf_spectrum_full(p, superposition.occupations(), grid);
        const Spectrum o = spectrum_numeric(sys, superposition, grid);
        const double am = a.max_value(), om = o.max_value();
        double dev = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            dev = std::max(dev, std::abs(a.values[i] / am - o.values[i] / om));
        }
        results.push_back({"spectrum_peak_normalized", dev, settings.spectrum_tolerance,
                           dev <= settings.spectrum_tolerance, seconds_since(t0)});
    }

    auto correlation_check = [&](const std::string& name, const PhononState& st, double kappa) {
        const auto t0 = std::chrono::steady_clock::now();
        ModelParams p;
        p.gamma = 0.8;
        p.gamma_pd = p.gamma_xd = 0.2;
        p.kappa = kappa;
        const TruncatedSystem sys(p, settings.cutoff, settings.weak_epsilon0);
        p.drive_scale = sys.drive_scale();
        const std::vector<double> taus{0.0, 1.0, 5.0};
        const auto o = time_avg_correlation_numeric(sys, sys.ground_state_embedding(st), 2.0 * std::numbers::pi, taus);
        const LineDecomposition lines = decompose_lines(p, st.occupations());
        const double scale = std::abs(lines.correlation(0.0));
        double dev = 0.0;
        for (std::size_t i = 0; i < taus.size(); ++i) {
            dev = std::max(dev, std::abs(o[i] - lines.correlation(taus[i])) / scale);
        }
        results.push_back({name, dev, settings.correlation_tolerance,
                           dev <= settings.correlation_tolerance, seconds_since(t0)});
    };
    correlation_check("correlation_vacuum_detuned", vacuum, 0.5);
    correlation_check("correlation_superposition", superposition, 0.0);

    // Excited-state block at a full phonon period after stationarity.
    {
        const auto t0 = std::chrono::steady_clock::now();
        ModelParams p;
        p.gamma = 0.8;
        p.gamma_pd = p.gamma_xd = 0.2;
        p.kappa = 0.5;
        const TruncatedSystem sys(p, settings.cutoff, settings.weak_epsilon0);
        p.drive_scale = sys.drive_scale();
        const double period = 2.0 * std::numbers::pi;
        const double t = period * std::ceil(20.0 / p.gamma_xd / period);
        const Trajectory tr = propagate(sys, sys.ground_state_embedding(superposition), t, sys.default_dt());
        const FCTable table(p.gamma, settings.cutoff);
        const Eigen::MatrixXcd oracle_x =
            table.entries() * sys.block(tr.states.back(), 1, 1) * table.entries().adjoint();
        const Eigen::MatrixXcd analytic = excited_state_dm(p, superposition, t, settings.cutoff);
        const double dev = (oracle_x - analytic).cwiseAbs().maxCoeff() / analytic.cwiseAbs().maxCoeff();
        results.push_back({"excited_state_block", dev, settings.correlation_tolerance,
                           dev <= settings.correlation_tolerance, seconds_since(t0)});
    }

    for (const auto& r : results) {
        log << (r.passed ? "PASS " : "FAIL ") << r.name << ": deviation " << r.deviation
            << " (tolerance " << r.tolerance << ", " << r.seconds << " s)\n";
    }
    return results;
}

int cmd_oracle_check(const RunConfig& cfg, std::uint64_t seed, std::ostream& log) {
    Outputs out{cfg, {cfg.raw, seed}, "oracle-check"};
    const std::vector<CheckResult> results = run_oracle_checks(cfg.check, log);
    bool all = true;
    json checks = json::array();
    for (const auto& r : results) {
        all = all && r.passed;
        checks.push_back({{"name", r.name},
                          {"deviation", r.deviation},
                          {"tolerance", r.tolerance},
                          {"passed", r.passed},
                          {"seconds", r.seconds}});
    }
    const fs::path report = out.file("_oracle_check", ".json");
    json m = out.manifest({});
    m["checks"] = checks;
    m["passed"] = all;
    write_json(report, m);
    log << "wrote " << report.string() << '\n';
    return all ? exit_ok : exit_tolerance;
}

int run(const Invocation& inv, std::ostream& log, std::ostream& err) {
    try {
        RunConfig cfg = load_config(inv.config);
        if (inv.out) cfg.out_dir = *inv.out;
        const std::uint64_t seed = inv.seed.value_or(cfg.noise.seed);
        std::error_code ec;
        fs::create_directories(cfg.out_dir, ec);
        if (ec) throw IoError("cannot create output directory '" + cfg.out_dir.string() + "': " + ec.message());

        if (inv.command == "spectrum") return cmd_spectrum(cfg, seed, log);
        if (inv.command == "fit") return cmd_fit(cfg, seed, log);
        if (inv.command == "sweep") return cmd_sweep(cfg, seed, log);
        if (inv.command == "wigner") return cmd_wigner(cfg, seed, log);
        if (inv.command == "oracle-check") return cmd_oracle_check(cfg, seed, log);
        err << "error: unknown command '" << inv.command << "'\n";
        return exit_config;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return exit_io;
    } catch (const InvalidInput& e) {
        err << "invalid input: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

}  // namespace rfspec::cli
