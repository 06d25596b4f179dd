#include "rfspec/lindblad_oracle.hpp"

#include "rfspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace rfspec {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr cplx I{0.0, 1.0};

void check_rates(const ModelParams& p) {
    if (!(p.gamma_pd >= 0.0) || !(p.gamma_xd >= 0.0)) {
        throw InvalidInput("TruncatedSystem: rates must be >= 0");
    }
    if (!std::isfinite(std::abs(p.gamma)) || !std::isfinite(p.kappa)) {
        throw InvalidInput("TruncatedSystem: gamma and kappa must be finite");
    }
}

std::size_t steps_for(double duration, double dt) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(duration / dt - 1e-9)));
}

// One RK4 step in place; k1..k4 and tmp are scratch.
struct Rk4 {
    const Generator& gen;
    Eigen::MatrixXcd k1, k2, k3, k4, tmp;

    void step(Eigen::MatrixXcd& rho, double h) {
        gen.apply(rho, k1);
        tmp = rho + (0.5 * h) * k1;
        gen.apply(tmp, k2);
        tmp = rho + (0.5 * h) * k2;
        gen.apply(tmp, k3);
        tmp = rho + h * k3;
        gen.apply(tmp, k4);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
};

double resolve_dt(const TruncatedSystem& sys, const OracleOptions& opts) {
    const double dt = opts.dt > 0.0 ? opts.dt : sys.default_dt();
    if (dt > sys.max_dt()) {
        throw StepSizeError("oracle: dt = " + std::to_string(dt) + " exceeds the limit " +
                                std::to_string(sys.max_dt()),
                            sys.default_dt());
    }
    return dt;
}

double resolve_t_stationary(const TruncatedSystem& sys, const OracleOptions& opts) {
    if (opts.t_stationary > 0.0) return opts.t_stationary;
    if (!(sys.params().gamma_xd > 0.0)) {
        throw InvalidInput("oracle: gamma_xd = 0 needs an explicit stationarity time");
    }
    return 20.0 / sys.params().gamma_xd;
}

void evolve(const Generator& gen, Eigen::MatrixXcd& rho, double duration, double dt) {
    if (duration <= 0.0) return;
    const std::size_t n = steps_for(duration, dt);
    const double h = duration / static_cast<double>(n);
    Rk4 rk{gen, {}, {}, {}, {}, {}};
    for (std::size_t s = 0; s < n; ++s) rk.step(rho, h);
}

// Propagates op = X rho with the generator and records the envelope
// e^{i kappa tau} Tr(X^dag op) at each sorted tau.
std::vector<cplx> correlate(const TruncatedSystem& sys, const Generator& gen,
                            const Eigen::MatrixXcd& rho, const std::vector<double>& tau_grid,
                            double dt) {
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
        if (!(tau_grid[i] >= 0.0) || (i > 0 && tau_grid[i] < tau_grid[i - 1])) {
            throw InvalidInput("correlation: tau grid must be sorted and >= 0");
        }
    }
    const Eigen::MatrixXcd X = sys.lowering();
    Eigen::MatrixXcd op = X * rho;
    std::vector<cplx> out;
    out.reserve(tau_grid.size());
    double tau = 0.0;
    for (double target : tau_grid) {
        evolve(gen, op, target - tau, dt);
        tau = target;
        // Tr(X^dag op) = sum_n op(G n, X n)
        const Eigen::Index n = static_cast<Eigen::Index>(sys.phonon_cutoff() + 1);
        const cplx tr = op.block(0, n, n, n).trace();
        out.push_back(std::exp(I * (sys.params().kappa * target)) * tr);
    }
    return out;
}

}  // namespace

TruncatedSystem::TruncatedSystem(const ModelParams& params, std::size_t phonon_cutoff,
                                 double epsilon0)
    : params_(params), cutoff_(phonon_cutoff), epsilon0_(epsilon0) {
    check_rates(params_);
    if (!(epsilon0 >= 0.0) || !std::isfinite(epsilon0)) {
        throw InvalidInput("TruncatedSystem: epsilon0 must be >= 0");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(cutoff_ + 1);
    const cplx g = params_.gamma;
    const double shift = std::norm(g) - params_.kappa;

    std::vector<Eigen::Triplet<cplx>> t;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double dk = static_cast<double>(k);
        t.emplace_back(k, k, dk);                  // G block: b^dag b
        t.emplace_back(n + k, n + k, dk + shift);  // X block
        if (k + 1 < n) {
            const double s = std::sqrt(dk + 1.0);  // <k+1| b^dag |k>
            t.emplace_back(n + k + 1, n + k, g * s);
            t.emplace_back(n + k, n + k + 1, std::conj(g) * s);
        }
        if (epsilon0_ > 0.0) {
            t.emplace_back(k, n + k, 0.5 * epsilon0_);
            t.emplace_back(n + k, k, 0.5 * epsilon0_);
        }
    }
    hamiltonian_.resize(2 * n, 2 * n);
    hamiltonian_.setFromTriplets(t.begin(), t.end());
    hamiltonian_.makeCompressed();
}

Eigen::MatrixXcd TruncatedSystem::lowering() const {
    const Eigen::Index n = static_cast<Eigen::Index>(cutoff_ + 1);
    Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    X.block(0, n, n, n).setIdentity();
    return X;
}

Eigen::MatrixXcd TruncatedSystem::ground_state_embedding(const PhononState& rho_g) const {
    if (rho_g.cutoff() > cutoff_) {
        throw InvalidInput("TruncatedSystem: phonon state exceeds the cutoff " +
                           std::to_string(cutoff_));
    }
    const Eigen::Index m = static_cast<Eigen::Index>(rho_g.cutoff() + 1);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dimension(), dimension());
    rho.block(0, 0, m, m) = rho_g.matrix();
    return rho;
}

Eigen::MatrixXcd TruncatedSystem::block(const Eigen::MatrixXcd& rho, int a, int b) const {
    const Eigen::Index n = static_cast<Eigen::Index>(cutoff_ + 1);
    return rho.block(a * n, b * n, n, n);
}

double TruncatedSystem::default_dt() const noexcept {
    const double scale = std::max({1.0, params_.gamma_pd, params_.gamma_xd, std::norm(params_.gamma)});
    return 0.01 / scale;
}

Generator::Generator(const TruncatedSystem& sys)
    : sys_(&sys),
      n_(static_cast<Eigen::Index>(sys.phonon_cutoff() + 1)),
      gamma_xd_(sys.params().gamma_xd),
      gamma_pd_(sys.params().gamma_pd) {}

void Generator::apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
    const auto& H = sys_->hamiltonian_sparse();
    out.noalias() = H * rho;
    out.noalias() -= rho * H;
    out *= -I;

    const Eigen::Index n = n_;
    const double coh = 0.5 * (gamma_pd_ + gamma_xd_);
    // decay: X rho X^dag feeds the ground block, anticommutator with P_X
    out.block(0, 0, n, n) += gamma_xd_ * rho.block(n, n, n, n);
    out.block(n, n, n, n) -= gamma_xd_ * rho.block(n, n, n, n);
    // both channels damp the optical coherences at (gamma_pd + gamma_xd)/2
    out.block(0, n, n, n) -= coh * rho.block(0, n, n, n);
    out.block(n, 0, n, n) -= coh * rho.block(n, 0, n, n);
}

Eigen::MatrixXcd Generator::apply(const Eigen::MatrixXcd& rho) const {
    Eigen::MatrixXcd out(rho.rows(), rho.cols());
    apply(rho, out);
    return out;
}

Eigen::MatrixXcd Generator::dense_superoperator() const {
    const Eigen::Index d = 2 * n_;
    Eigen::MatrixXcd L(d * d, d * d);
    Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(d, d);
    Eigen::MatrixXcd image(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) {
            basis(r, c) = 1.0;
            apply(basis, image);
            L.col(c * d + r) = Eigen::Map<const Eigen::VectorXcd>(image.data(), d * d);
            basis(r, c) = 0.0;
        }
    }
    return L;
}

Trajectory propagate(const TruncatedSystem& sys, const Eigen::MatrixXcd& rho0, double duration,
                     double dt, std::size_t sample_every) {
    if (!(dt > 0.0)) throw InvalidInput("propagate: dt must be > 0");
    if (dt > sys.max_dt()) {
        throw StepSizeError("propagate: dt = " + std::to_string(dt) + " exceeds the limit " +
                                std::to_string(sys.max_dt()) + "; use dt = " +
                                std::to_string(sys.default_dt()),
                            sys.default_dt());
    }
    if (!(duration >= 0.0)) throw InvalidInput("propagate: duration must be >= 0");
    if (rho0.rows() != sys.dimension() || rho0.cols() != sys.dimension()) {
        throw InvalidInput("propagate: rho0 has the wrong dimension");
    }

    const Generator gen(sys);
    const std::size_t n = duration > 0.0 ? steps_for(duration, dt) : 0;
    const double h = n > 0 ? duration / static_cast<double>(n) : dt;

    Trajectory traj;
    traj.report.dt = h;
    const cplx trace0 = rho0.trace();
    auto record = [&](double t, const Eigen::MatrixXcd& rho) {
        const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm, Eigen::EigenvaluesOnly);
        const double lo = eig.eigenvalues().minCoeff();
        traj.report.min_eigenvalue = std::min(traj.report.min_eigenvalue, lo);
        if (lo < -1e-8) traj.report.positivity_flagged = true;
        traj.times.push_back(t);
        traj.states.push_back(rho);
    };

    Eigen::MatrixXcd rho = rho0;
    traj.report.min_eigenvalue = 0.0;
    record(0.0, rho);
    Rk4 rk{gen, {}, {}, {}, {}, {}};
    for (std::size_t s = 1; s <= n; ++s) {
        rk.step(rho, h);
        traj.report.max_trace_defect =
            std::max(traj.report.max_trace_defect, std::abs(rho.trace() - trace0));
        traj.report.max_hermiticity_defect = std::max(
            traj.report.max_hermiticity_defect, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
        if (s == n || (sample_every > 0 && s % sample_every == 0)) {
            record(static_cast<double>(s) * h, rho);
        }
    }
    traj.report.steps = n;
    return traj;
}

std::vector<cplx> correlation_numeric(const TruncatedSystem& sys, const Eigen::MatrixXcd& rho0,
                                      double t, const std::vector<double>& tau_grid,
                                      const OracleOptions& opts) {
    if (!(t >= 0.0)) throw InvalidInput("correlation_numeric: t must be >= 0");
    const double dt = resolve_dt(sys, opts);
    const Generator gen(sys);
    Eigen::MatrixXcd rho = rho0;
    evolve(gen, rho, t, dt);
    return correlate(sys, gen, rho, tau_grid, dt);
}

namespace {

Eigen::MatrixXcd average_state(const Generator& gen, const Eigen::MatrixXcd& rho0, double t_start, double window,
                               double dt) {
    Eigen::MatrixXcd rho = rho0;
    evolve(gen, rho, t_start, dt);
    const std::size_t n = steps_for(window, dt);
    const double h = window / static_cast<double>(n);
    Rk4 rk{gen, {}, {}, {}, {}, {}};
    // trapezoid; spectrally accurate for the periodic part
    Eigen::MatrixXcd acc = 0.5 * rho;
    for (std::size_t s = 1; s <= n; ++s) {
        rk.step(rho, h);
        acc += (s == n ? 0.5 : 1.0) * rho;
    }
    return acc / static_cast<double>(n);
}

}  // namespace

Eigen::MatrixXcd time_averaged_state(const TruncatedSystem& sys, const Eigen::MatrixXcd& rho0,
                                     const OracleOptions& opts) {
    if (opts.average_periods < 1) throw InvalidInput("oracle: average_periods must be >= 1");
    const double dt = resolve_dt(sys, opts);
    const double t_stat = resolve_t_stationary(sys, opts);
    const Generator gen(sys);
    return average_state(gen, rho0, t_stat, two_pi * opts.average_periods, dt);
}

std::vector<cplx> time_avg_correlation_numeric(const TruncatedSystem& sys,
                                               const Eigen::MatrixXcd& rho0, double T_window,
                                               const std::vector<double>& tau_grid,
                                               const OracleOptions& opts) {
    if (!(T_window > 0.0)) throw InvalidInput("time_avg_correlation_numeric: T_window must be > 0");
    const double dt = resolve_dt(sys, opts);
    const double t_stat = resolve_t_stationary(sys, opts);
    const Generator gen(sys);
    const Eigen::MatrixXcd avg = average_state(gen, rho0, t_stat, T_window, dt);
    return correlate(sys, gen, avg, tau_grid, dt);
}

Spectrum spectrum_numeric(const TruncatedSystem& sys, const PhononState& rho_g,
                          const std::vector<double>& grid, const OracleOptions& opts) {
    if (grid.empty()) throw InvalidInput("spectrum_numeric: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw InvalidInput("spectrum_numeric: grid must be strictly increasing");
        }
    }
    const double gam = sys.params().Gamma_det;
    if (!(gam > 0.0)) throw InvalidInput("spectrum_numeric: Gamma_det must be > 0");
    if (!(opts.tau_decay > 0.0 && opts.tau_decay < 1.0)) {
        throw InvalidInput("spectrum_numeric: tau_decay must lie in (0, 1)");
    }
    if (opts.average_periods < 1) throw InvalidInput("oracle: average_periods must be >= 1");

    const double dt_req = resolve_dt(sys, opts);
    const double t_stat = resolve_t_stationary(sys, opts);
    const double tau_max = -std::log(opts.tau_decay) / gam;
    const std::size_t n_tau = steps_for(tau_max, dt_req);
    const double h = tau_max / static_cast<double>(n_tau);

    const double fastest = (grid.back() - grid.front()) + 1.0;
    const double h_limit = two_pi / (20.0 * fastest);
    if (h > h_limit) {
        throw StepSizeError("spectrum_numeric: tau step " + std::to_string(h) +
                                " gives fewer than 20 points per oscillation; use dt <= " +
                                std::to_string(h_limit),
                            h_limit);
    }

    const Generator gen(sys);
    const Eigen::MatrixXcd avg = average_state(gen, sys.ground_state_embedding(rho_g),
                                               t_stat, two_pi * opts.average_periods, dt_req);

    // G(tau_j) on the uniform lattice
    const Eigen::Index n = static_cast<Eigen::Index>(sys.phonon_cutoff() + 1);
    std::vector<cplx> g(n_tau + 1);
    Eigen::MatrixXcd op = sys.lowering() * avg;
    Rk4 rk{gen, {}, {}, {}, {}, {}};
    const double kappa = sys.params().kappa;
    for (std::size_t j = 0; j <= n_tau; ++j) {
        if (j > 0) rk.step(op, h);
        const double tau = static_cast<double>(j) * h;
        g[j] = std::exp(I * (kappa * tau)) * op.block(0, n, n, n).trace();
    }

    Spectrum s;
    s.grid = grid;
    s.values.resize(grid.size());
    s.params = sys.params();
    s.params.drive_scale = sys.drive_scale();
    s.provenance = Provenance::oracle;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const cplx w = std::exp(-cplx(gam, grid[i]) * h);
        cplx z{1.0, 0.0};
        cplx acc = 0.5 * g[0];
        for (std::size_t j = 1; j <= n_tau; ++j) {
            z *= w;
            acc += (j == n_tau ? 0.5 : 1.0) * g[j] * z;
        }
        s.values[i] = gam * (acc * h).real();
    }
    s.metadata["epsilon0"] = std::to_string(sys.epsilon0());
    s.metadata["phonon_cutoff"] = std::to_string(sys.phonon_cutoff());
    s.metadata["t_stationary"] = std::to_string(t_stat);
    s.metadata["tau_max"] = std::to_string(tau_max);
    s.metadata["dt"] = std::to_string(h);
    return s;
}

}  // namespace rfspec
