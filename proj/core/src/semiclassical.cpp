#include "rfspec/semiclassical.hpp"

#include "rfspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace rfspec {

namespace {

double log_factorial(double n) { return std::lgamma(n + 1.0); }

// log(max(a,b)! / min(a,b)!)
double log_ratio(long a, long b) {
    return log_factorial(static_cast<double>(std::max(a, b))) -
           log_factorial(static_cast<double>(std::min(a, b)));
}

}  // namespace

PeakWeights semiclassical_weights(double D, int kappa, int k_min, int k_max) {
    if (!(D >= 0.0) || !std::isfinite(D)) throw InvalidInput("semiclassical_weights: D must be >= 0");
    if (k_max < k_min) throw InvalidInput("semiclassical_weights: empty k range");
    PeakWeights out;
    out.kappa = kappa;
    out.k_min = k_min;
    out.k_max = k_max;
    out.weights.reserve(static_cast<std::size_t>(k_max - k_min + 1));
    const double kap = std::abs(kappa);
    for (int k = k_min; k <= k_max; ++k) {
        const double ak = std::abs(k);
        const double power = ak + kap;
        double a = 0.0;
        if (power == 0.0) {
            a = 1.0;
        } else if (D > 0.0) {
            a = std::exp(2.0 * (power * std::log(D) - log_factorial(ak) - log_factorial(kap)));
        }
        out.weights.push_back(a);
    }
    return out;
}

double semiclassical_weight_exact(double alpha_abs, double gamma_abs, int kappa, int k) {
    if (!(alpha_abs >= 0.0) || !(gamma_abs >= 0.0)) {
        throw InvalidInput("semiclassical_weight_exact: amplitudes must be >= 0");
    }
    const double power = std::abs(k) + std::abs(kappa);
    if (power > 0.0 && gamma_abs == 0.0) return 0.0;
    const double log_pref =
        (power > 0.0 ? 2.0 * power * std::log(gamma_abs) : 0.0) -
        2.0 * (log_factorial(std::abs(k)) + log_factorial(std::abs(kappa)));

    const double n = alpha_abs * alpha_abs;
    auto log_term = [&](long i) {
        const long up = i + kappa;
        const long fin = up - k;
        double v = log_ratio(up, fin) + log_ratio(up, i) - log_factorial(static_cast<double>(i)) - n;
        if (i > 0) v += static_cast<double>(i) * std::log(n);
        return v;
    };

    const long i_first = std::max<long>({0L, -static_cast<long>(kappa),
                                         static_cast<long>(k) - kappa});
    if (n == 0.0) {
        return i_first == 0 ? std::exp(log_pref + log_term(0)) : 0.0;
    }

    // terms are Poisson-like around i ~ |alpha|^2; reference the sum there
    const long i_peak = std::max(i_first, static_cast<long>(std::llround(n)));
    const double ref = log_term(i_peak);
    double sum = 0.0;
    for (long i = i_first;; ++i) {
        const double t = std::exp(log_term(i) - ref);
        sum += t;
        if (i > i_peak && t < 1e-16 * sum) break;
    }
    return std::exp(log_pref + ref) * sum;
}

Spectrum rf_spectrum_semiclassical(const ModelParams& params, double D,
                                   const std::vector<double>& grid) {
    params.validate();
    if (grid.empty()) throw InvalidInput("spectrum: empty grid");
    const int kappa = params.kappa_index();
    const double c = params.coherence_rate();
    const double gam = params.Gamma_det;
    const double wide = gam + c;
    const double prefactor = params.drive_scale / (c * c);
    const double broad_ratio = params.gamma_pd / params.gamma_xd;

    // |k| beyond D + 12 sqrt(D) + 20 carries negligible weight
    const int k_span = static_cast<int>(std::ceil(D + 12.0 * std::sqrt(D) + 20.0));
    const PeakWeights w = semiclassical_weights(D, kappa, -k_span, k_span);

    Spectrum s;
    s.grid = grid;
    s.values.assign(grid.size(), 0.0);
    s.params = params;
    s.provenance = Provenance::semiclassical;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double v = 0.0;
        for (int k = -k_span; k <= k_span; ++k) {
            const double a = w.at(k);
            if (a == 0.0) continue;
            const double dx = grid[g] - k;
            v += a * (gam * gam / (gam * gam + dx * dx) +
                      broad_ratio * gam * wide / (wide * wide + dx * dx));
        }
        s.values[g] = prefactor * v;
    }
    s.metadata["D"] = std::to_string(D);
    s.validate();
    return s;
}

}  // namespace rfspec
