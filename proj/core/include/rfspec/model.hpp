// model.hpp: parameter and phonon-state types
//
// Unit convention: every frequency and rate is measured in units of the phonon
// frequency, which is therefore exactly 1. Spectra are reported as detunings
// x = (Omega - omega_ZPL) / omega from the zero-phonon line.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rfspec {

using cplx = std::complex<double>;

// Diagonal of a phonon density matrix, index = Fock number.
using Occupations = Eigen::VectorXd;

struct ModelParams {
    cplx gamma{0.0, 0.0};      // dimensionless phonon coupling g/omega
    double gamma_pd{0.0};      // pure dephasing rate
    double gamma_xd{0.05};     // excited-state decay rate
    double Gamma_det{0.05};    // spectrometer resolution
    double kappa{0.0};         // laser detuning from the ZPL
    double drive_scale{1.0};   // |E0|^2 / (4 hbar^2)

    // Throws InvalidInput unless gamma_pd >= 0 and gamma_xd, Gamma_det,
    // drive_scale > 0 (all finite).
    void validate() const;

    // Decay rate of the optical coherence, (gamma_pd + gamma_xd) / 2.
    double coherence_rate() const noexcept { return 0.5 * (gamma_pd + gamma_xd); }

    bool kappa_is_integer(double tol = 1e-12) const noexcept;
    int kappa_index() const;  // throws InvalidInput when kappa is not integral
};

// Initial phonon density matrix rho^G in the Fock basis {|0>, ..., |cutoff>}.
class PhononState {
public:
    // Validates Hermiticity (1e-12), unit trace (1e-12) and eigenvalues >= -1e-10.
    explicit PhononState(Eigen::MatrixXcd matrix);

    // Diagonal state; occupations must be nonnegative and sum to one.
    static PhononState from_occupations(const Occupations& occupations);

    const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
    std::size_t cutoff() const noexcept { return static_cast<std::size_t>(matrix_.rows()) - 1; }
    Occupations occupations() const;

    // Largest Fock index whose occupation or coherence exceeds tol.
    std::size_t max_occupied(double tol = 1e-14) const;

private:
    Eigen::MatrixXcd matrix_;
};

// |psi><psi| / <psi|psi> for psi = sum_n amplitudes[n] |n>.
PhononState fock_superposition_state(std::span<const cplx> amplitudes);

// Poisson occupations exp(-|alpha|^2) |alpha|^{2i} / i! for i <= cutoff,
// renormalized. Throws TruncationError when the retained mass is below
// 1 - 1e-10.
Occupations coherent_state_occupations(cplx alpha, std::size_t cutoff);

// Pure coherent state |alpha><alpha| on the same truncation policy.
PhononState coherent_state(cplx alpha, std::size_t cutoff);

// |alpha|^2 + 10 |alpha| + 10, rounded up.
std::size_t default_coherent_cutoff(cplx alpha);

// Throws InvalidInput when entries are negative beyond -tol or the sum is
// not 1 within tol.
void require_normalized(const Occupations& occupations, double tol = 1e-10);

// Largest index with occupation above tol (0 for the vacuum).
std::size_t max_occupied_index(const Occupations& occupations, double tol = 1e-14);

}  // namespace rfspec
