// lindblad_oracle.hpp: brute-force master-equation reference for the spectra
//
// Two-level emitter (G, X) times a truncated phonon mode, written in the frame
// rotating at the laser frequency so the generator is time-independent:
//   H = (|gamma|^2 - kappa) P_X + b^dag b + P_X (gamma b^dag + gamma^* b)
//       + (eps0 / 2) (X + X^dag),          X = |G><X|
// plus excited-state decay (rate gamma_xd, jump X) and pure dephasing
// (rate gamma_pd, jump sqrt(gamma_pd) P_X). Basis index = tls * (K + 1) + n
// with tls 0 = G, 1 = X. Phonons stay in the lab frame.
//
// The weak-drive analytic results carry drive_scale = eps0^2 / 4.

#pragma once

#include "rfspec/analytic_spectrum.hpp"
#include "rfspec/model.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <vector>

namespace rfspec {

class TruncatedSystem {
public:
    // Rates may be zero here (pure Hamiltonian checks); drive_scale and
    // Gamma_det of params are ignored by the dynamics.
    TruncatedSystem(const ModelParams& params, std::size_t phonon_cutoff, double epsilon0 = 0.02);

    const ModelParams& params() const noexcept { return params_; }
    std::size_t phonon_cutoff() const noexcept { return cutoff_; }
    Eigen::Index dimension() const noexcept { return static_cast<Eigen::Index>(2 * (cutoff_ + 1)); }
    double epsilon0() const noexcept { return epsilon0_; }

    // drive_scale implied by eps0.
    double drive_scale() const noexcept { return 0.25 * epsilon0_ * epsilon0_; }

    Eigen::MatrixXcd hamiltonian() const { return Eigen::MatrixXcd(hamiltonian_); }
    const Eigen::SparseMatrix<cplx>& hamiltonian_sparse() const noexcept { return hamiltonian_; }

    // X = |G><X| (identity on phonons).
    Eigen::MatrixXcd lowering() const;

    // |G><G| (x) rho_G, zero-padded to the phonon cutoff.
    Eigen::MatrixXcd ground_state_embedding(const PhononState& rho_g) const;

    // Phonon block <a| rho |b> for tls indices a, b in {0, 1}.
    Eigen::MatrixXcd block(const Eigen::MatrixXcd& rho, int a, int b) const;

    // 0.01 / max(1, gamma_pd, gamma_xd, |gamma|^2) and twice that as the hard limit.
    double default_dt() const noexcept;
    double max_dt() const noexcept { return 2.0 * default_dt(); }

private:
    ModelParams params_;
    std::size_t cutoff_;
    double epsilon0_;
    Eigen::SparseMatrix<cplx> hamiltonian_;
};

class Generator {
public:
    explicit Generator(const TruncatedSystem& sys);

    // d rho / dt; also valid for non-Hermitian operands such as X rho.
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
    void apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const;

    // Matrix of the generator on column-major vec(rho).
    Eigen::MatrixXcd dense_superoperator() const;

private:
    const TruncatedSystem* sys_;
    Eigen::Index n_;  // phonon block size
    double gamma_xd_;
    double gamma_pd_;
};

struct PropagationReport {
    std::size_t steps{0};
    double dt{0.0};
    double max_trace_defect{0.0};        // max |Tr rho - Tr rho0|
    double max_hermiticity_defect{0.0};  // max |rho - rho^dag|
    double min_eigenvalue{0.0};          // smallest eigenvalue seen at samples
    bool positivity_flagged{false};      // min_eigenvalue < -1e-8
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::MatrixXcd> states;
    PropagationReport report;
};

// Fixed-step RK4 from time 0 to duration. The step is duration / ceil(duration / dt).
// Stores the initial state and every sample_every-th step (the final state
// is always stored). Throws StepSizeError when dt > sys.max_dt().
Trajectory propagate(const TruncatedSystem& sys, const Eigen::MatrixXcd& rho0, double duration,
                     double dt, std::size_t sample_every = 0);

struct OracleOptions {
    double dt{0.0};            // 0: sys.default_dt()
    double t_stationary{0.0};  // 0: 20 / gamma_xd
    int average_periods{1};    // phonon periods in the time average
    double tau_decay{1e-8};    // tau_max where exp(-Gamma tau) drops to this
};

// G(t + tau, t) envelope (frame rotating at the ZPL) for sorted tau >= 0,
// starting from rho0 at the switch-on time 0.
std::vector<cplx> correlation_numeric(const TruncatedSystem& sys, const Eigen::MatrixXcd& rho0,
                                      double t, const std::vector<double>& tau_grid,
                                      const OracleOptions& opts = {});

// Time average of G over [t_start, t_start + T_window]; t_start defaults to
// the stationarity time. The generator does not depend on t, so the average
// is taken on rho before the tau propagation.
std::vector<cplx> time_avg_correlation_numeric(const TruncatedSystem& sys,
                                               const Eigen::MatrixXcd& rho0, double T_window,
                                               const std::vector<double>& tau_grid,
                                               const OracleOptions& opts = {});

// Time-averaged state over a window of whole phonon periods, after propagating
// to the stationarity time.
Eigen::MatrixXcd time_averaged_state(const TruncatedSystem& sys, const Eigen::MatrixXcd& rho0,
                                     const OracleOptions& opts = {});

// S(x) = Gamma Re int_0^tau_max e^{-(Gamma + i x) tau} G(tau) dtau by composite
// trapezoid on the RK4 lattice. Throws StepSizeError with fewer than 20 steps
// per period of the fastest oscillation on the grid.
Spectrum spectrum_numeric(const TruncatedSystem& sys, const PhononState& rho_g,
                          const std::vector<double>& grid, const OracleOptions& opts = {});

}  // namespace rfspec
