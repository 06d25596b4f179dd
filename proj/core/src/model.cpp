#include "rfspec/model.hpp"

#include "rfspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rfspec {

void ModelParams::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(gamma.real()) || !finite(gamma.imag()) || !finite(kappa)) {
        throw InvalidInput("ModelParams: gamma and kappa must be finite");
    }
    if (!finite(gamma_pd) || gamma_pd < 0.0) {
        throw InvalidInput("ModelParams: gamma_pd must be >= 0");
    }
    if (!finite(gamma_xd) || gamma_xd <= 0.0) {
        throw InvalidInput("ModelParams: gamma_xd must be > 0");
    }
    if (!finite(Gamma_det) || Gamma_det <= 0.0) {
        throw InvalidInput("ModelParams: Gamma_det must be > 0");
    }
    if (!finite(drive_scale) || drive_scale <= 0.0) {
        throw InvalidInput("ModelParams: drive_scale must be > 0");
    }
}

bool ModelParams::kappa_is_integer(double tol) const noexcept {
    return std::abs(kappa - std::round(kappa)) <= tol;
}

int ModelParams::kappa_index() const {
    if (!kappa_is_integer()) {
        throw InvalidInput("kappa must be an integer here, got " + std::to_string(kappa));
    }
    return static_cast<int>(std::lround(kappa));
}

PhononState::PhononState(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
        throw InvalidInput("PhononState: matrix must be square and nonempty");
    }
    const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12) {
        throw InvalidInput("PhononState: matrix is not Hermitian (defect " +
                           std::to_string(herm) + ")");
    }
    const double trace = matrix_.trace().real();
    if (std::abs(trace - 1.0) > 1e-12) {
        throw InvalidInput("PhononState: trace must be 1, got " + std::to_string(trace));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(matrix_, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) {
        throw InvalidInput("PhononState: matrix is not positive semidefinite");
    }
}

PhononState PhononState::from_occupations(const Occupations& occupations) {
    require_normalized(occupations, 1e-12);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(occupations.size(), occupations.size());
    m.diagonal() = occupations.cast<cplx>();
    return PhononState(std::move(m));
}

Occupations PhononState::occupations() const {
    return matrix_.diagonal().real();
}

std::size_t PhononState::max_occupied(double tol) const {
    std::size_t best = 0;
    for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
            if (std::abs(matrix_(i, j)) > tol) {
                best = std::max<std::size_t>(best, static_cast<std::size_t>(std::max(i, j)));
            }
        }
    }
    return best;
}

PhononState fock_superposition_state(std::span<const cplx> amplitudes) {
    if (amplitudes.empty()) {
        throw InvalidInput("fock_superposition_state: empty amplitude vector");
    }
    Eigen::VectorXcd psi(static_cast<Eigen::Index>(amplitudes.size()));
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        psi(static_cast<Eigen::Index>(i)) = amplitudes[i];
    }
    const double norm = psi.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw InvalidInput("fock_superposition_state: all amplitudes are zero");
    }
    psi /= norm;
    Eigen::MatrixXcd rho = psi * psi.adjoint();
    // Exact Hermiticity and unit trace despite round-off in the outer product.
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return PhononState(std::move(rho));
}

std::size_t default_coherent_cutoff(cplx alpha) {
    const double n = std::norm(alpha);
    return static_cast<std::size_t>(std::ceil(n + 10.0 * std::sqrt(n) + 10.0));
}

Occupations coherent_state_occupations(cplx alpha, std::size_t cutoff) {
    const double n = std::norm(alpha);
    Occupations occ(static_cast<Eigen::Index>(cutoff + 1));
    for (std::size_t i = 0; i <= cutoff; ++i) {
        const double di = static_cast<double>(i);
        // log-space keeps large |alpha| and i finite
        const double log_p = (n > 0.0 ? di * std::log(n) : (i == 0 ? 0.0 : -INFINITY)) -
                             n - std::lgamma(di + 1.0);
        occ(static_cast<Eigen::Index>(i)) = std::exp(log_p);
    }
    const double mass = occ.sum();
    if (mass < 1.0 - 1e-10) {
        throw TruncationError("coherent_state_occupations: cutoff " + std::to_string(cutoff) +
                              " retains mass " + std::to_string(mass) +
                              "; use at least " +
                              std::to_string(default_coherent_cutoff(alpha)));
    }
    return occ / mass;
}

PhononState coherent_state(cplx alpha, std::size_t cutoff) {
    const Occupations occ = coherent_state_occupations(alpha, cutoff);
    const double phase = std::arg(alpha);
    std::vector<cplx> amps(cutoff + 1);
    for (std::size_t i = 0; i <= cutoff; ++i) {
        amps[i] = std::polar(std::sqrt(occ(static_cast<Eigen::Index>(i))),
                             phase * static_cast<double>(i));
    }
    return fock_superposition_state(amps);
}

void require_normalized(const Occupations& occupations, double tol) {
    if (occupations.size() == 0) {
        throw InvalidInput("occupations: empty vector");
    }
    if (!occupations.allFinite()) {
        throw InvalidInput("occupations: non-finite entry");
    }
    if (occupations.minCoeff() < -tol) {
        throw InvalidInput("occupations: negative entry");
    }
    const double s = occupations.sum();
    if (std::abs(s - 1.0) > tol) {
        throw InvalidInput("occupations: not normalized (sum = " + std::to_string(s) + ")");
    }
}

std::size_t max_occupied_index(const Occupations& occupations, double tol) {
    std::size_t best = 0;
    for (Eigen::Index i = 0; i < occupations.size(); ++i) {
        if (occupations(i) > tol) best = static_cast<std::size_t>(i);
    }
    return best;
}

}  // namespace rfspec
