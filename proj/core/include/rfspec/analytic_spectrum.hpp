// analytic_spectrum.hpp: second-order resonance-fluorescence spectra
//
// All spectra are functions of the detuning x = (Omega - omega_ZPL)/omega.
// The time-averaged correlation function is returned as its envelope in the
// frame rotating at omega_ZPL.

#pragma once

#include "rfspec/franck_condon.hpp"
#include "rfspec/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rfspec {

enum class Provenance { full, narrow, semiclassical, oracle, measured_noise };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);  // throws ParseError

struct Spectrum {
    std::vector<double> grid;    // strictly increasing detunings
    std::vector<double> values;  // intensities, arbitrary units
    ModelParams params;
    Provenance provenance{Provenance::full};
    std::map<std::string, std::string> metadata;

    std::size_t size() const noexcept { return grid.size(); }
    double max_value() const;

    // Throws InvalidInput when the grid is not strictly increasing, sizes
    // differ, a value is not finite, or an analytic spectrum dips below -1e-12.
    void validate() const;
};

struct PeakWeights {
    int kappa{0};
    int k_min{0};
    int k_max{0};
    std::vector<double> weights;  // weights[k - k_min]

    double at(int k) const { return weights.at(static_cast<std::size_t>(k - k_min)); }
};

// Fock cutoff for the quadruple sums:
//   n_occ_max + ceil(|kappa|) + ceil(10 |gamma|^2 + 15).
std::size_t fock_cutoff(const ModelParams& params, std::size_t n_occ_max);

// Collapsed form of the time-averaged correlation function:
//   G(tau) = sum_N elastic[N] e^{i(N+kappa)tau} + sum_N inelastic[N] e^{iN tau} e^{-c tau}
// with c = (gamma_pd + gamma_xd)/2. Elastic amplitudes are real and >= 0.
struct LineDecomposition {
    ModelParams params;
    std::size_t cutoff{0};
    std::map<int, double> elastic;   // N -> amplitude of the line at x = N + kappa
    std::map<int, cplx> inelastic;   // N -> phi_N, line at x = N

    // Adds another decomposition with identical params (weights add linearly).
    void accumulate(const LineDecomposition& other, double weight);

    cplx correlation(double tau) const;
    double spectrum_at(double x) const;
    double elastic_at(double x) const;
    double inelastic_at(double x) const;
};

// Decomposition for a diagonal initial state. Explicit cutoff overrides the
// default policy; it must cover every occupied index.
LineDecomposition decompose_lines(const ModelParams& params, const Occupations& occupations,
                                  std::optional<std::size_t> cutoff = std::nullopt);

// Same for the single Fock state |p> using a precomputed table.
LineDecomposition decompose_fock(const ModelParams& params, const FCTable& table, std::size_t p);

// Envelope of the time-averaged correlation function at delay tau >= 0.
cplx avg_correlation(const ModelParams& params, const Occupations& occupations, double tau);

// Full spectrum: elastic Gamma-Lorentzians at x = N + kappa plus
// dephasing-induced inelastic lines at x = N (real kappa allowed).
Spectrum rf_spectrum_full(const ModelParams& params, const Occupations& occupations,
                          const std::vector<double>& grid);

// Elastic part only, the inelastic part only; their sum is rf_spectrum_full.
Spectrum rf_spectrum_elastic(const ModelParams& params, const Occupations& occupations,
                             const std::vector<double>& grid);
Spectrum rf_spectrum_inelastic(const ModelParams& params, const Occupations& occupations,
                               const std::vector<double>& grid);

// Weak-dissipation spectrum for integer kappa with resonant Franck-Condon
// products only. Sets metadata "narrow_validity" to "violated" when
// gamma_pd + gamma_xd > 0.1.
Spectrum rf_spectrum_narrow(const ModelParams& params, const Occupations& occupations,
                            const std::vector<double>& grid);

// Sharp and broad components of the narrow spectrum, separately.
Spectrum rf_spectrum_narrow_sharp(const ModelParams& params, const Occupations& occupations,
                                  const std::vector<double>& grid);
Spectrum rf_spectrum_narrow_broad(const ModelParams& params, const Occupations& occupations,
                                  const std::vector<double>& grid);

// A_k = sum_{i,f: k = kappa + i - f} |M_{i+kappa}^f M_{i+kappa}^i|^2 rho_ii.
PeakWeights peak_weights(const Occupations& occupations, cplx gamma, int kappa, int k_min,
                         int k_max);

// gamma_pd / (gamma_pd + gamma_xd).
double background_area_ratio(double gamma_pd, double gamma_xd);

// Excited-state phonon density matrix <m|_X rho |n>_X at time phase_time
// after switch-on (phase factor exp(-i (p-q) phase_time)).
Eigen::MatrixXcd excited_state_dm(const ModelParams& params, const PhononState& rho_g,
                                  double phase_time = 0.0,
                                  std::optional<std::size_t> cutoff = std::nullopt);

// Default detuning grid: covers every line with appreciable weight plus
// 5 broad widths on each side, sampled with at least 40 points per Gamma.
std::vector<double> default_grid(const ModelParams& params, std::size_t n_occ_max);

std::vector<double> uniform_grid(double lo, double hi, double step);

}  // namespace rfspec
