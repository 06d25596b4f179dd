#include "rfspec/franck_condon.hpp"

#include "rfspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rfspec {

double laguerre(int degree, double alpha, double x) {
    if (degree < 0) return 0.0;
    double prev = 1.0;
    if (degree == 0) return prev;
    double curr = 1.0 + alpha - x;
    for (int k = 1; k < degree; ++k) {
        const double dk = k;
        const double next = ((2.0 * dk + 1.0 + alpha - x) * curr - (dk + alpha) * prev) / (dk + 1.0);
        prev = curr;
        curr = next;
    }
    return curr;
}

cplx fc_factor(std::size_t m, std::size_t n, cplx gamma) {
    const double g2 = std::norm(gamma);
    const std::size_t lo = std::min(m, n);
    const std::size_t hi = std::max(m, n);
    const std::size_t d = hi - lo;

    const double lag = laguerre(static_cast<int>(lo), static_cast<double>(d), g2);
    if (lag == 0.0) return {0.0, 0.0};
    if (d > 0 && g2 == 0.0) return {0.0, 0.0};

    // exp(-|g|^2/2) |g|^d sqrt(lo!/hi!) in log space
    double log_mag = -0.5 * g2 + 0.5 * (std::lgamma(lo + 1.0) - std::lgamma(hi + 1.0));
    if (d > 0) log_mag += static_cast<double>(d) * 0.5 * std::log(g2);
    const double mag = std::exp(log_mag) * lag;

    // m >= n: gamma^{m-n};  m < n: (-gamma^*)^{n-m}
    const double phase = (m >= n ? 1.0 : -1.0) * static_cast<double>(d) * std::arg(gamma);
    const double sign = (m < n && (d % 2 == 1)) ? -1.0 : 1.0;
    const double r = sign * mag;
    return {r * std::cos(phase), r * std::sin(phase)};
}

double fc_weak_coupling(std::size_t m, std::size_t n, double gamma_abs) {
    const std::size_t lo = std::min(m, n);
    const std::size_t hi = std::max(m, n);
    const double d = static_cast<double>(hi - lo);
    if (d == 0.0) return 1.0;
    if (gamma_abs == 0.0) return 0.0;
    const double log_v = d * std::log(gamma_abs) - std::lgamma(d + 1.0) +
                         0.5 * (std::lgamma(hi + 1.0) - std::lgamma(lo + 1.0));
    return std::exp(log_v);
}

FCTable::FCTable(cplx gamma, std::size_t cutoff)
    : gamma_(gamma), cutoff_(cutoff),
      entries_(static_cast<Eigen::Index>(cutoff + 1), static_cast<Eigen::Index>(cutoff + 1)) {
    for (std::size_t m = 0; m <= cutoff; ++m) {
        for (std::size_t n = 0; n <= cutoff; ++n) {
            entries_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) =
                fc_factor(m, n, gamma);
        }
    }
}

std::vector<double> blind_gammas(int i, int kappa, double gamma_max) {
    if (i < 0) {
        throw InvalidTransition("blind_gammas: initial Fock index must be >= 0");
    }
    if (i + kappa < 0) {
        throw InvalidTransition("blind_gammas: i + kappa = " + std::to_string(i + kappa) +
                                " is not a Fock state");
    }
    if (!(gamma_max > 0.0)) {
        throw InvalidInput("blind_gammas: gamma_max must be > 0");
    }
    const int degree = std::min(i + kappa, i);
    const double alpha = std::abs(kappa);
    std::vector<double> roots;
    if (degree == 0) return roots;

    auto f = [&](double x) { return laguerre(degree, alpha, x); };
    const double x_max = gamma_max * gamma_max;
    constexpr double step = 1e-3;

    double x_prev = 0.0;
    double f_prev = f(0.0);  // L_d^{(a)}(0) > 0, never a root
    for (long k = 1;; ++k) {
        const double x = std::min(static_cast<double>(k) * step, x_max);
        const double fx = f(x);
        if (fx == 0.0) {
            roots.push_back(std::sqrt(x));
        } else if ((f_prev < 0.0) != (fx < 0.0) && f_prev != 0.0) {
            double a = x_prev;
            double b = x;
            double fa = f_prev;
            while (b - a > 1e-15 * std::max(1.0, b)) {
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) break;
                const double fm = f(mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(std::sqrt(0.5 * (a + b)));
        }
        x_prev = x;
        f_prev = fx;
        if (x >= x_max) break;
    }
    return roots;
}

}  // namespace rfspec
