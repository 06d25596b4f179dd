#include "rfspec/readout.hpp"

#include "rfspec/errors.hpp"
#include "rfspec/franck_condon.hpp"
#include "rfspec/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace rfspec {

std::string to_string(FitModel m) { return m == FitModel::narrow ? "narrow" : "full"; }

FitModel fit_model_from_string(const std::string& s) {
    if (s == "narrow") return FitModel::narrow;
    if (s == "full") return FitModel::full;
    throw ParseError("unknown fit model '" + s + "' (expected narrow or full)");
}

Spectrum add_noise(const Spectrum& spec, double percent_of_max, std::uint64_t stream_seed) {
    if (spec.grid.empty()) throw InvalidInput("add_noise: empty spectrum");
    if (!(percent_of_max >= 0.0)) throw InvalidInput("add_noise: percent must be >= 0");
    Spectrum out = spec;
    if (percent_of_max > 0.0) {
        const double sd = percent_of_max / 100.0 * spec.max_value();
        NormalStream rng(stream_seed);
        for (double& v : out.values) v += sd * rng.normal();
    }
    out.provenance = Provenance::measured_noise;
    out.metadata["noise_percent"] = std::to_string(percent_of_max);
    return out;
}

Spectrum add_noise(const Spectrum& spec, const NoiseSpec& noise) {
    return add_noise(spec, noise.percent_of_max, derive_seed(noise.seed, 0, 0));
}

std::size_t detect_nmax(const Spectrum& spec, int kappa, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw InvalidInput("detect_nmax: threshold must lie in (0, 1)");
    }
    if (spec.grid.size() < 3) throw EmptySpectrum("detect_nmax: too few samples");
    const double global = spec.max_value();
    if (!(global > 0.0)) throw EmptySpectrum("detect_nmax: spectrum has no positive value");

    const auto& x = spec.grid;
    const double step = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    const double w = std::min(0.3, std::max(3.0 * spec.params.Gamma_det, 5.0 * step));

    std::size_t best = 0;
    for (long N = 0;; ++N) {
        const double center = kappa + static_cast<double>(N);
        if (center - w > x.back()) break;
        const auto lo = std::lower_bound(x.begin(), x.end(), center - w);
        const auto hi = std::upper_bound(x.begin(), x.end(), center + w);
        if (hi - lo < 3) continue;
        const std::size_t a = static_cast<std::size_t>(lo - x.begin());
        const std::size_t b = static_cast<std::size_t>(hi - x.begin());  // exclusive
        std::size_t arg = a;
        for (std::size_t i = a; i < b; ++i) {
            if (spec.values[i] > spec.values[arg]) arg = i;
        }
        const bool interior = arg > a && arg + 1 < b;
        if (interior && spec.values[arg] >= threshold * global) best = static_cast<std::size_t>(N);
    }
    return best;
}

Eigen::MatrixXd basis_spectra(const ModelParams& params, FitModel model, std::size_t n_max,
                              const std::vector<double>& grid) {
    params.validate();
    const auto M = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd B(M, static_cast<Eigen::Index>(n_max + 1));
    if (model == FitModel::narrow) {
        for (std::size_t p = 0; p <= n_max; ++p) {
            Occupations e = Occupations::Zero(static_cast<Eigen::Index>(p + 1));
            e(static_cast<Eigen::Index>(p)) = 1.0;
            const Spectrum s = rf_spectrum_narrow(params, e, grid);
            B.col(static_cast<Eigen::Index>(p)) = Eigen::Map<const Eigen::VectorXd>(s.values.data(), M);
        }
        return B;
    }
    const FCTable table(params.gamma, fock_cutoff(params, n_max));
    for (std::size_t p = 0; p <= n_max; ++p) {
        const LineDecomposition lines = decompose_fock(params, table, p);
        for (Eigen::Index i = 0; i < M; ++i) {
            B(i, static_cast<Eigen::Index>(p)) = lines.spectrum_at(grid[static_cast<std::size_t>(i)]);
        }
    }
    return B;
}

namespace {

struct LmOutcome {
    Eigen::VectorXd u;
    double rss{0.0};
    int iterations{0};
    int accepted{0};
};

// Levenberg-Marquardt on r(u) = B (u.^2) - y.
LmOutcome levenberg_marquardt(const Eigen::MatrixXd& B, const Eigen::VectorXd& y,
                              Eigen::VectorXd u) {
    auto residual = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return B * v.cwiseProduct(v) - y;
    };
    LmOutcome out;
    Eigen::VectorXd r = residual(u);
    double rss = r.squaredNorm();
    double lambda = 1e-3;
    const Eigen::MatrixXd BtB = B.transpose() * B;

    // Optimality in w: interior weights have zero gradient, weights at zero a
    // nonnegative one. A weight near zero moves slowly in u, so a tiny
    // residual change alone does not mean convergence.
    const Eigen::VectorXd tol = 1e-9 * y.norm() * B.colwise().norm().transpose();
    auto optimal_in_w = [&](const Eigen::VectorXd& v, const Eigen::VectorXd& res) {
        const Eigen::VectorXd gw = B.transpose() * res;
        const double w_total = v.squaredNorm();
        for (Eigen::Index k = 0; k < v.size(); ++k) {
            const bool at_zero = v(k) * v(k) <= 1e-10 * w_total;
            if (gw(k) < -tol(k) || (!at_zero && gw(k) > tol(k))) return false;
        }
        return true;
    };

    for (int it = 0; it < 500; ++it) {
        out.iterations = it + 1;
        // J = B diag(2u): J^T J = diag(2u) B^T B diag(2u), J^T r = diag(2u) B^T r
        const Eigen::VectorXd two_u = 2.0 * u;
        const Eigen::MatrixXd A = two_u.asDiagonal() * BtB * two_u.asDiagonal();
        const Eigen::VectorXd g = two_u.cwiseProduct(B.transpose() * r);
        if (g.cwiseAbs().maxCoeff() == 0.0) break;  // stationary

        // a floor well above round-off keeps a near-zero u_k from taking huge steps
        const double diag_floor = 1e-4 * std::max(A.diagonal().maxCoeff(), 1e-300);
        bool accepted = false;
        while (lambda < 1e20) {
            Eigen::MatrixXd damped = A;
            for (Eigen::Index k = 0; k < A.rows(); ++k) {
                damped(k, k) += lambda * std::max(A(k, k), diag_floor);
            }
            const Eigen::VectorXd step = damped.ldlt().solve(-g);
            const Eigen::VectorXd trial = u + step;
            const Eigen::VectorXd r_trial = residual(trial);
            const double rss_trial = r_trial.squaredNorm();
            if (std::isfinite(rss_trial) && rss_trial < rss) {
                const double change = (rss - rss_trial) / rss;
                u = trial;
                r = r_trial;
                rss = rss_trial;
                lambda = std::max(lambda / 10.0, 1e-15);
                accepted = true;
                ++out.accepted;
                if (rss == 0.0 || (change < 1e-12 && optimal_in_w(u, r))) {
                    out.u = u;
                    out.rss = rss;
                    return out;
                }
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) break;
    }
    out.u = u;
    out.rss = rss;
    return out;
}

}  // namespace

ReadoutResult fit_basis(const std::vector<double>& y_in, const Eigen::MatrixXd& basis,
                        std::uint64_t seed) {
    const Eigen::Index M = basis.rows();
    const Eigen::Index P = basis.cols();
    if (M == 0 || P == 0 || static_cast<std::size_t>(M) != y_in.size()) {
        throw InvalidInput("fit: basis and data sizes disagree");
    }
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(y_in.data(), M);
    if (!y.allFinite() || !basis.allFinite()) throw InvalidInput("fit: non-finite input");

    ReadoutResult res;
    res.seed = seed;
    res.n_max = static_cast<std::size_t>(P - 1);

    // weights without model sensitivity stay at zero
    const Eigen::VectorXd col_norm = basis.colwise().norm();
    const double norm_max = col_norm.maxCoeff();
    std::vector<Eigen::Index> active;
    for (Eigen::Index p = 0; p < P; ++p) {
        if (col_norm(p) > 1e-12 * norm_max) active.push_back(p);
    }
    if (active.empty()) throw EmptySpectrum("fit: every basis spectrum vanishes");
    res.degenerate = static_cast<Eigen::Index>(active.size()) < P;

    const auto A = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd Ba(M, A);
    for (Eigen::Index k = 0; k < A; ++k) Ba.col(k) = basis.col(active[static_cast<std::size_t>(k)]);

    LmOutcome lm = levenberg_marquardt(Ba, y, Eigen::VectorXd::Zero(A));
    if (lm.accepted == 0) {
        NormalStream rng(derive_seed(seed, 0x6a17, 0));
        const double scale =
            std::sqrt(std::max(y.cwiseAbs().maxCoeff(), 1e-300) / Ba.cwiseAbs().maxCoeff());
        Eigen::VectorXd u0(A);
        for (Eigen::Index k = 0; k < A; ++k) u0(k) = 1e-3 * rng.uniform() * scale;
        const int first = lm.iterations;
        lm = levenberg_marquardt(Ba, y, u0);
        lm.iterations += first;
        res.restarted = true;
    }
    res.iterations = lm.iterations;
    res.residual_norm = std::sqrt(lm.rss);

    Eigen::VectorXd w = Eigen::VectorXd::Zero(P);
    for (Eigen::Index k = 0; k < A; ++k) w(active[static_cast<std::size_t>(k)]) = lm.u(k) * lm.u(k);
    const double total = w.sum();
    if (!(total > 0.0)) throw EmptySpectrum("fit: all fitted weights vanish");
    res.fitted_occupations = w / total;

    // linearized covariance of the weights (the model is linear in w)
    res.param_sigma = Eigen::VectorXd::Constant(P, std::numeric_limits<double>::infinity());
    res.occupation_cov = Eigen::MatrixXd::Constant(P, P, std::numeric_limits<double>::infinity());
    if (M > A) {
        const double s2 = lm.rss / static_cast<double>(M - A);
        const Eigen::MatrixXd normal = Ba.transpose() * Ba;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
        lu.setThreshold(1e-13);
        if (lu.rank() == A) {
            const Eigen::MatrixXd cov_w = s2 * lu.inverse();
            // rho_i = w_i / W: d rho_i / d w_j = (delta_ij - rho_i) / W
            Eigen::MatrixXd G(A, A);
            for (Eigen::Index i = 0; i < A; ++i) {
                const double rho_i = res.fitted_occupations(active[static_cast<std::size_t>(i)]);
                for (Eigen::Index j = 0; j < A; ++j) G(i, j) = ((i == j ? 1.0 : 0.0) - rho_i) / total;
            }
            const Eigen::MatrixXd cov_rho = G * cov_w * G.transpose();
            res.occupation_cov.setZero();
            for (Eigen::Index k = 0; k < A; ++k) {
                const Eigen::Index pk = active[static_cast<std::size_t>(k)];
                res.param_sigma(pk) = std::sqrt(std::max(0.0, cov_rho(k, k)));
                for (Eigen::Index l = 0; l < A; ++l) {
                    res.occupation_cov(pk, active[static_cast<std::size_t>(l)]) = cov_rho(k, l);
                }
            }
        } else {
            res.degenerate = true;
        }
    }
    return res;
}

ReadoutResult fit_occupations(const Spectrum& spec, const ModelParams& params, FitModel model,
                              std::size_t n_max, std::uint64_t seed) {
    if (spec.grid.empty()) throw EmptySpectrum("fit: empty spectrum");
    const Eigen::MatrixXd B = basis_spectra(params, model, n_max, spec.grid);
    ReadoutResult res = fit_basis(spec.values, B, seed);
    res.model = model;
    return res;
}

double readout_error(const Occupations& truth, const Occupations& fitted) {
    const Eigen::Index n = std::max(truth.size(), fitted.size());
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = i < truth.size() ? truth(i) : 0.0;
        const double b = i < fitted.size() ? fitted(i) : 0.0;
        s += std::abs(a - b);
    }
    return 0.5 * s;
}

void attach_truth(ReadoutResult& result, const Occupations& truth) {
    result.delta_read = readout_error(truth, result.fitted_occupations);
    if (!result.occupation_cov.allFinite()) {
        result.delta_read_sigma = std::numeric_limits<double>::infinity();
        return;
    }
    // d delta_read / d rho_i = sign(rho_i - true_i) / 2
    const Eigen::Index P = result.fitted_occupations.size();
    Eigen::VectorXd g(P);
    for (Eigen::Index i = 0; i < P; ++i) {
        const double t = i < truth.size() ? truth(i) : 0.0;
        g(i) = result.fitted_occupations(i) >= t ? 0.5 : -0.5;
    }
    result.delta_read_sigma = std::sqrt(std::max(0.0, g.dot(result.occupation_cov * g)));
}

std::vector<SweepRow> sweep_gamma(const PhononState& state, const ModelParams& base,
                                  const std::vector<double>& gamma_grid, const NoiseSpec& noise,
                                  const SweepOptions& opts) {
    if (gamma_grid.empty()) throw InvalidInput("sweep_gamma: empty gamma grid");
    if (noise.realizations < 1) throw InvalidInput("sweep_gamma: realizations must be >= 1");
    const Occupations truth = state.occupations();
    require_normalized(truth);
    const std::size_t n_occ = max_occupied_index(truth);
    const int kappa = base.kappa_index();
    const int runs = noise.percent_of_max > 0.0 ? noise.realizations : 1;

    std::vector<SweepRow> rows;
    rows.reserve(gamma_grid.size());
    for (std::size_t gi = 0; gi < gamma_grid.size(); ++gi) {
        ModelParams params = base;
        params.gamma = cplx(gamma_grid[gi], 0.0);
        SweepRow row;
        row.gamma = gamma_grid[gi];
        row.n_runs = runs;

        const std::vector<double> grid = default_grid(params, n_occ);
        const Spectrum clean = rf_spectrum_full(params, truth, grid);
        std::map<std::size_t, Eigen::MatrixXd> bases;  // by n_max

        double sum_dr = 0.0;
        double sum_sigma = 0.0;
        int ok = 0;
        for (int r = 0; r < runs; ++r) {
            const std::uint64_t stream = derive_seed(noise.seed, gi, static_cast<std::uint64_t>(r));
            try {
                const Spectrum measured = add_noise(clean, noise.percent_of_max, stream);
                const std::size_t n_max =
                    opts.n_max ? *opts.n_max : detect_nmax(measured, kappa, opts.nmax_threshold);
                auto it = bases.find(n_max);
                if (it == bases.end()) {
                    it = bases.emplace(n_max, basis_spectra(params, opts.model, n_max, grid)).first;
                }
                ReadoutResult res = fit_basis(measured.values, it->second, stream);
                attach_truth(res, truth);
                if (!std::isfinite(*res.delta_read)) throw Error("non-finite readout error");
                sum_dr += *res.delta_read;
                sum_sigma += res.delta_read_sigma;
                ++ok;
            } catch (const Error&) {
                ++row.n_fail;
            }
        }
        if (ok > 0) {
            row.mean_delta_read = sum_dr / ok;
            row.mean_sigma = sum_sigma / ok;
        } else {
            row.mean_delta_read = std::numeric_limits<double>::quiet_NaN();
            row.mean_sigma = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace rfspec
