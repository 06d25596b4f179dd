// Independent reference computations used by unit, property and acceptance tests.

#pragma once

#include "rfspec/model.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <map>
#include <vector>

namespace rfspec::ref {

// exp(gamma b^dag - gamma^* b) on a dim-dimensional Fock truncation.
inline Eigen::MatrixXcd dense_displacement(cplx gamma, int dim) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    const Eigen::MatrixXcd gen = gamma * a.adjoint() - std::conj(gamma) * a;
    return gen.exp();
}

// A_k by direct summation over (i, f) with matrix elements of the dense
// displacement operator.
inline std::map<int, double> brute_peak_weights(const Occupations& occ, cplx gamma, int kappa,
                                                int dim) {
    const Eigen::MatrixXcd D = dense_displacement(gamma, dim);
    std::map<int, double> out;
    for (int i = 0; i < occ.size(); ++i) {
        const int j = i + kappa;
        if (j < 0 || j >= dim) continue;
        for (int f = 0; f < dim; ++f) {
            const double w = std::norm(D(j, f)) * std::norm(D(j, i)) * occ(i);
            out[kappa + i - f] += w;
        }
    }
    return out;
}

// Envelope of the time-averaged correlation as the literal quadruple sum over
// Fock indices (m, n, q, p), without the factorization used by the library.
inline cplx brute_correlation(const ModelParams& p, const Occupations& occ, double tau, int dim) {
    const Eigen::MatrixXcd T = dense_displacement(p.gamma, dim);
    const double c = p.coherence_rate();
    const cplx I(0.0, 1.0);
    cplx g = 0.0;
    for (int pp = 0; pp < occ.size(); ++pp) {
        if (occ(pp) == 0.0) continue;
        for (int m = 0; m < dim; ++m) {
            for (int n = 0; n < dim; ++n) {
                for (int q = 0; q < dim; ++q) {
                    const cplx fc = T(n, m) * std::conj(T(n, pp)) * std::conj(T(q, m)) * T(q, pp);
                    if (std::abs(fc) < 1e-300) continue;
                    const cplx den = cplx(c, p.kappa - n + pp) * cplx(c, -(p.kappa - q + pp));
                    cplx term = std::exp(I * ((pp - m + p.kappa) * tau));
                    term += p.gamma_pd * std::exp(I * (static_cast<double>(n - m) * tau)) *
                            std::exp(-c * tau) / cplx(p.gamma_xd, q - n);
                    g += p.drive_scale * occ(pp) * fc * term / den;
                }
            }
        }
    }
    return g;
}

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

// Pole position x0 of a single line y = (p x + q) / ((x - x0)^2 + w^2), from the
// linear least-squares problem y x^2 = -a y x - b y + p x + q with a = -2 x0.
inline double lorentzian_center(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd A(n, 4);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double xi = x[static_cast<std::size_t>(i)], yi = y[static_cast<std::size_t>(i)];
        A.row(i) << -yi * xi, -yi, xi, 1.0;
        rhs(i) = yi * xi * xi;
    }
    const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(rhs);
    return -0.5 * sol(0);
}

}  // namespace rfspec::ref
