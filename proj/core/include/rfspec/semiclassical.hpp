// semiclassical.hpp: peak weights for a coherent phonon state with large amplitude
//
// With |alpha| -> infinity at fixed D = |alpha gamma| the weights approach a
// squared Poisson distribution mirrored at the zero-phonon line.

#pragma once

#include "rfspec/analytic_spectrum.hpp"

namespace rfspec {

// A_k = (D^{|k|+|kappa|} / (|k|! |kappa|!))^2 for k in [k_min, k_max].
PeakWeights semiclassical_weights(double D, int kappa, int k_min, int k_max);

// Weight of peak k for Poisson occupations with mean |alpha|^2, using the
// leading small-coupling Franck-Condon magnitudes; the series over the
// initial Fock index is summed until terms drop below 1e-16 of the total.
double semiclassical_weight_exact(double alpha_abs, double gamma_abs, int kappa, int k);

// Semiclassical spectrum: narrow sharp-plus-broad lineshape with the
// squared-Poisson weights (drive_scale / c^2 prefactor as in the narrow model).
Spectrum rf_spectrum_semiclassical(const ModelParams& params, double D,
                                   const std::vector<double>& grid);

}  // namespace rfspec
