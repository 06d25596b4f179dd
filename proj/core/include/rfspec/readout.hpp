// readout.hpp: phonon occupations from measured spectra
//
// Spectra are linear in the occupations, so each model is represented by a
// basis matrix whose column p is the spectrum of the Fock state |p>. Fits
// run on nonnegative weights w = u^2 and are normalized afterwards.

#pragma once

#include "rfspec/analytic_spectrum.hpp"
#include "rfspec/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rfspec {

enum class FitModel { narrow, full };

std::string to_string(FitModel m);
FitModel fit_model_from_string(const std::string& s);  // throws ParseError

struct NoiseSpec {
    double percent_of_max{0.0};
    std::uint64_t seed{0};
    int realizations{50};
};

struct ReadoutResult {
    Occupations fitted_occupations;  // normalized, >= 0
    std::optional<double> delta_read;  // set when the true occupations are known
    Eigen::VectorXd param_sigma;       // per occupation; +inf for degenerate directions
    Eigen::MatrixXd occupation_cov;    // linearized covariance of the normalized occupations
    double delta_read_sigma{0.0};      // linearized sigma of delta_read (needs the truth)
    std::size_t n_max{0};
    FitModel model{FitModel::narrow};
    double residual_norm{0.0};
    std::uint64_t seed{0};
    bool degenerate{false};  // some weight had no model sensitivity
    int iterations{0};
    bool restarted{false};
};

// Independent Gaussian noise with sd = percent/100 * max(values). Not clamped.
Spectrum add_noise(const Spectrum& spec, double percent_of_max, std::uint64_t stream_seed);
Spectrum add_noise(const Spectrum& spec, const NoiseSpec& noise);

// Largest N >= 0 whose window |x - (kappa + N)| <= w holds an interior maximum
// of at least threshold * global max; w = min(0.3, max(3 Gamma, 5 grid steps)).
// Throws EmptySpectrum when the spectrum has no positive value.
std::size_t detect_nmax(const Spectrum& spec, int kappa, double threshold = 0.01);

// Column p (0..n_max) = spectrum of |p> on grid under the chosen model.
Eigen::MatrixXd basis_spectra(const ModelParams& params, FitModel model, std::size_t n_max,
                              const std::vector<double>& grid);

// Damped Gauss-Newton fit of y ~ B (u.^2), started at u = 0 with one
// seed-jittered restart from the stationary point.
ReadoutResult fit_basis(const std::vector<double>& y, const Eigen::MatrixXd& basis,
                        std::uint64_t seed = 0);

ReadoutResult fit_occupations(const Spectrum& spec, const ModelParams& params, FitModel model,
                              std::size_t n_max, std::uint64_t seed = 0);

// Fills delta_read and delta_read_sigma from the true occupations.
void attach_truth(ReadoutResult& result, const Occupations& truth);

// 0.5 * sum |a_i - b_i|, the shorter vector zero-padded.
double readout_error(const Occupations& truth, const Occupations& fitted);

struct SweepOptions {
    FitModel model{FitModel::narrow};
    std::optional<std::size_t> n_max;  // unset: detect per spectrum
    double nmax_threshold{0.01};
};

struct SweepRow {
    double gamma{0.0};
    double mean_delta_read{0.0};
    double mean_sigma{0.0};
    int n_fail{0};
    int n_runs{0};
};

// One basis computation per gamma; noise realizations derive their streams
// from (noise.seed, gamma index, realization). With zero noise a single fit
// is run. The state must be diagonal for a meaningful delta_read.
std::vector<SweepRow> sweep_gamma(const PhononState& state, const ModelParams& base,
                                  const std::vector<double>& gamma_grid, const NoiseSpec& noise,
                                  const SweepOptions& opts);

}  // namespace rfspec
