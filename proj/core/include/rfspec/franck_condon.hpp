// franck_condon.hpp: displaced-oscillator overlaps M_m^n(gamma) = <m| D(gamma) |n>

#pragma once

#include "rfspec/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace rfspec {

// Generalized Laguerre polynomial L_degree^{(alpha)}(x), three-term upward
// recurrence in the degree.
double laguerre(int degree, double alpha, double x);

// <m| D(gamma) |n> with D(gamma) = exp(gamma b^dagger - gamma^* b).
// Factorial ratios are formed in log space, so indices well beyond 170 work.
cplx fc_factor(std::size_t m, std::size_t n, cplx gamma);

// Leading small-coupling magnitude
//   |gamma|^{|m-n|} / |m-n|! * sqrt(max(m,n)! / min(m,n)!).
double fc_weak_coupling(std::size_t m, std::size_t n, double gamma_abs);

// Dense table of fc_factor(m, n, gamma) for 0 <= m, n <= cutoff.
class FCTable {
public:
    FCTable(cplx gamma, std::size_t cutoff);

    cplx gamma() const noexcept { return gamma_; }
    std::size_t cutoff() const noexcept { return cutoff_; }

    // M_m^n, row m (bra), column n (ket).
    cplx operator()(std::size_t m, std::size_t n) const {
        return entries_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    }
    const Eigen::MatrixXcd& entries() const noexcept { return entries_; }

private:
    cplx gamma_;
    std::size_t cutoff_;
    Eigen::MatrixXcd entries_;
};

inline FCTable fc_table(cplx gamma, std::size_t cutoff) { return FCTable(gamma, cutoff); }

// Couplings gamma in (0, gamma_max] at which the resonant factor
// M_{i+kappa}^i vanishes, i.e. the positive roots of
// L_{min(i+kappa, i)}^{(|kappa|)}(gamma^2). Sorted ascending.
// Throws InvalidTransition when i + kappa < 0.
std::vector<double> blind_gammas(int i, int kappa, double gamma_max);

}  // namespace rfspec
