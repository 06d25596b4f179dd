#include "rfspec/wigner.hpp"

#include "rfspec/analytic_spectrum.hpp"
#include "rfspec/errors.hpp"
#include "rfspec/franck_condon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rfspec {

double WignerGrid::integral() const {
    auto weights = [](const std::vector<double>& axis) {
        std::vector<double> w(axis.size(), 0.0);
        for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
            const double h = 0.5 * (axis[i + 1] - axis[i]);
            w[i] += h;
            w[i + 1] += h;
        }
        return w;
    };
    const auto wr = weights(re_axis);
    const auto wi = weights(im_axis);
    double s = 0.0;
    for (std::size_t i = 0; i < im_axis.size(); ++i) {
        for (std::size_t r = 0; r < re_axis.size(); ++r) {
            s += wi[i] * wr[r] *
                 values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r));
        }
    }
    return s;
}

std::vector<double> default_wigner_axis(double gamma_abs, int points) {
    if (points < 2) throw InvalidInput("default_wigner_axis: need at least 2 points");
    const double half = 4.0 + gamma_abs;
    std::vector<double> axis(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        axis[static_cast<std::size_t>(i)] = -half + 2.0 * half * i / (points - 1);
    }
    return axis;
}

WignerGrid wigner_of_matrix(const Eigen::MatrixXcd& rho, const std::vector<double>& re_axis,
                            const std::vector<double>& im_axis, cplx center) {
    if (rho.rows() == 0 || rho.rows() != rho.cols()) {
        throw InvalidInput("wigner: density matrix must be square and nonempty");
    }
    if (re_axis.empty() || im_axis.empty()) throw InvalidInput("wigner: empty axis");
    const double scale = std::max(1e-300, rho.cwiseAbs().maxCoeff());
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw InvalidInput("wigner: density matrix is not Hermitian");
    }

    // the kernel table only needs to reach the last non-negligible row/column
    Eigen::Index top = 0;
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        if (rho.row(i).cwiseAbs().maxCoeff() > 1e-15 * scale) top = i;
    }
    const Eigen::Index dim = top + 1;

    WignerGrid w;
    w.re_axis = re_axis;
    w.im_axis = im_axis;
    w.values.resize(static_cast<Eigen::Index>(im_axis.size()),
                    static_cast<Eigen::Index>(re_axis.size()));

    const double two_over_pi = 2.0 / std::numbers::pi;
    double max_residue = 0.0;
    for (std::size_t i = 0; i < im_axis.size(); ++i) {
        for (std::size_t r = 0; r < re_axis.size(); ++r) {
            const cplx alpha(re_axis[r], im_axis[i]);
            const FCTable kernel(2.0 * (alpha - center), static_cast<std::size_t>(top));
            cplx acc{0.0, 0.0};
            for (Eigen::Index m = 0; m < dim; ++m) {
                const double parity = (m % 2 == 0) ? 1.0 : -1.0;
                for (Eigen::Index n = 0; n < dim; ++n) {
                    acc += parity * rho(m, n) *
                           kernel(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
                }
            }
            acc *= two_over_pi;
            max_residue = std::max(max_residue, std::abs(acc.imag()));
            w.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) = acc.real();
        }
    }
    if (max_residue > 1e-10 * std::max(1.0, scale * static_cast<double>(dim))) {
        throw InvalidInput("wigner: imaginary residue " + std::to_string(max_residue));
    }
    return w;
}

WignerGrid wigner_of_matrix(const Eigen::MatrixXcd& rho, const std::vector<double>& re_axis,
                            const std::vector<double>& im_axis) {
    return wigner_of_matrix(rho, re_axis, im_axis, cplx{0.0, 0.0});
}

WignerGrid wigner_excited(const ModelParams& params, const PhononState& rho_g, double phase_time,
                          const std::vector<double>& re_axis, const std::vector<double>& im_axis) {
    Eigen::MatrixXcd dm = excited_state_dm(params, rho_g, phase_time);
    dm = 0.5 * (dm + dm.adjoint()).eval();
    return wigner_of_matrix(dm, re_axis, im_axis, -params.gamma);
}

WignerGrid wigner_excited(const ModelParams& params, const PhononState& rho_g, double phase_time) {
    const auto axis = default_wigner_axis(std::abs(params.gamma));
    return wigner_excited(params, rho_g, phase_time, axis, axis);
}

}  // namespace rfspec
