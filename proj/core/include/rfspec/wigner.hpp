// wigner.hpp: phase-space portraits of phonon density matrices
//
// W(alpha) = sum_{m,n} rho_mn (-1)^m (2/pi) <n| D(2 alpha) |m>, built from the
// Franck-Condon engine instead of a Fourier transform. Values are raw (not
// rescaled), so |W| <= (2/pi) Tr rho.

#pragma once

#include "rfspec/model.hpp"

#include <Eigen/Dense>

#include <vector>

namespace rfspec {

struct WignerGrid {
    std::vector<double> re_axis;
    std::vector<double> im_axis;
    Eigen::MatrixXd values;  // values(i_im, i_re)

    // Trapezoid estimate of the integral over the plane.
    double integral() const;
    double max_value() const { return values.maxCoeff(); }
    double min_value() const { return values.minCoeff(); }
};

// 101 points over [-4 - |gamma|, 4 + |gamma|].
std::vector<double> default_wigner_axis(double gamma_abs, int points = 101);

// Wigner function of a Hermitian matrix (trace need not be 1). Throws
// InvalidInput for non-Hermitian input or empty axes.
WignerGrid wigner_of_matrix(const Eigen::MatrixXcd& rho, const std::vector<double>& re_axis,
                            const std::vector<double>& im_axis);

// Same with the Fock basis displaced to be centered at `center`:
// kernel <n| D(2 (alpha - center)) |m>.
WignerGrid wigner_of_matrix(const Eigen::MatrixXcd& rho, const std::vector<double>& re_axis,
                            const std::vector<double>& im_axis, cplx center);

// Excited-state Wigner function on the lab phase plane: the excited-state
// density matrix in its displaced eigenbasis, drawn around -gamma.
WignerGrid wigner_excited(const ModelParams& params, const PhononState& rho_g, double phase_time,
                          const std::vector<double>& re_axis, const std::vector<double>& im_axis);
WignerGrid wigner_excited(const ModelParams& params, const PhononState& rho_g,
                          double phase_time = 0.0);

}  // namespace rfspec
