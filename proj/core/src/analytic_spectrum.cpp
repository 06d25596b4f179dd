#include "rfspec/analytic_spectrum.hpp"

#include "rfspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rfspec {

namespace {

constexpr cplx I{0.0, 1.0};

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw InvalidInput("spectrum: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw InvalidInput("spectrum: grid must be strictly increasing");
        }
    }
}

Spectrum make_spectrum(const ModelParams& params, const std::vector<double>& grid,
                       Provenance provenance) {
    Spectrum s;
    s.grid = grid;
    s.values.assign(grid.size(), 0.0);
    s.params = params;
    s.provenance = provenance;
    return s;
}

double lorentz(double gamma, double dx) { return gamma * gamma / (gamma * gamma + dx * dx); }

}  // namespace

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::full: return "full";
        case Provenance::narrow: return "narrow";
        case Provenance::semiclassical: return "semiclassical";
        case Provenance::oracle: return "oracle";
        case Provenance::measured_noise: return "measured+noise";
    }
    return "full";
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "full") return Provenance::full;
    if (s == "narrow") return Provenance::narrow;
    if (s == "semiclassical") return Provenance::semiclassical;
    if (s == "oracle") return Provenance::oracle;
    if (s == "measured+noise") return Provenance::measured_noise;
    throw ParseError("unknown provenance tag '" + s + "'");
}

double Spectrum::max_value() const {
    if (values.empty()) throw EmptySpectrum("spectrum has no samples");
    return *std::max_element(values.begin(), values.end());
}

void Spectrum::validate() const {
    require_grid(grid);
    if (grid.size() != values.size()) {
        throw InvalidInput("spectrum: grid and values differ in length");
    }
    const bool analytic = provenance != Provenance::measured_noise;
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidInput("spectrum: non-finite value");
        if (analytic && v < -1e-12) {
            throw InvalidInput("spectrum: analytic spectrum has negative value " +
                               std::to_string(v));
        }
    }
}

std::size_t fock_cutoff(const ModelParams& params, std::size_t n_occ_max) {
    const double g2 = std::norm(params.gamma);
    return n_occ_max + static_cast<std::size_t>(std::ceil(std::abs(params.kappa))) +
           static_cast<std::size_t>(std::ceil(10.0 * g2 + 15.0));
}

void LineDecomposition::accumulate(const LineDecomposition& other, double weight) {
    for (const auto& [n, a] : other.elastic) elastic[n] += weight * a;
    for (const auto& [n, phi] : other.inelastic) inelastic[n] += weight * phi;
    cutoff = std::max(cutoff, other.cutoff);
}

cplx LineDecomposition::correlation(double tau) const {
    const double kappa = params.kappa;
    const double c = params.coherence_rate();
    cplx g{0.0, 0.0};
    for (const auto& [n, a] : elastic) g += a * std::exp(I * ((n + kappa) * tau));
    const double decay = std::exp(-c * tau);
    for (const auto& [n, phi] : inelastic) g += phi * std::exp(I * (n * tau)) * decay;
    return g;
}

double LineDecomposition::elastic_at(double x) const {
    const double gam = params.Gamma_det;
    double s = 0.0;
    for (const auto& [n, a] : elastic) s += a * lorentz(gam, x - n - params.kappa);
    return s;
}

double LineDecomposition::inelastic_at(double x) const {
    const double gam = params.Gamma_det;
    const double w = gam + params.coherence_rate();
    double s = 0.0;
    for (const auto& [n, phi] : inelastic) {
        const double dx = x - n;
        // Gamma Re[phi / (w + i dx)]
        s += gam * (phi.real() * w + phi.imag() * dx) / (w * w + dx * dx);
    }
    return s;
}

double LineDecomposition::spectrum_at(double x) const { return elastic_at(x) + inelastic_at(x); }

LineDecomposition decompose_fock(const ModelParams& params, const FCTable& table, std::size_t p) {
    const std::size_t K = table.cutoff();
    if (p > K) throw InvalidInput("decompose_fock: Fock index exceeds table cutoff");
    const double c = params.coherence_rate();
    const double kappa = params.kappa;
    const double drive = params.drive_scale;
    const double gpd = params.gamma_pd;
    const double gxd = params.gamma_xd;
    const auto& T = table.entries();

    LineDecomposition out;
    out.params = params;
    out.cutoff = K;

    Eigen::VectorXcd u(idx(K + 1));
    Eigen::VectorXcd s(idx(K + 1));
    for (std::size_t m = 0; m <= K; ++m) {
        for (std::size_t n = 0; n <= K; ++n) {
            const double detune = kappa - static_cast<double>(n) + static_cast<double>(p);
            u(idx(n)) = T(idx(n), idx(m)) * std::conj(T(idx(n), idx(p))) / cplx(c, detune);
        }
        const cplx a = u.sum();
        const int N_el = static_cast<int>(p) - static_cast<int>(m);
        out.elastic[N_el] += drive * std::norm(a);

        if (gpd > 0.0) {
            for (std::size_t n = 0; n <= K; ++n) {
                cplx acc{0.0, 0.0};
                for (std::size_t q = 0; q <= K; ++q) {
                    acc += std::conj(u(idx(q))) /
                           cplx(gxd, static_cast<double>(q) - static_cast<double>(n));
                }
                s(idx(n)) = acc;
            }
            for (std::size_t n = 0; n <= K; ++n) {
                const int N_in = static_cast<int>(n) - static_cast<int>(m);
                out.inelastic[N_in] += drive * gpd * u(idx(n)) * s(idx(n));
            }
        }
    }
    return out;
}

LineDecomposition decompose_lines(const ModelParams& params, const Occupations& occupations,
                                  std::optional<std::size_t> cutoff) {
    params.validate();
    require_normalized(occupations);
    const std::size_t n_occ = max_occupied_index(occupations);
    const std::size_t K = cutoff.value_or(fock_cutoff(params, n_occ));
    if (K < n_occ) throw InvalidInput("decompose_lines: cutoff below occupied Fock states");
    const FCTable table(params.gamma, K);

    LineDecomposition out;
    out.params = params;
    out.cutoff = K;
    for (Eigen::Index p = 0; p < occupations.size(); ++p) {
        const double w = occupations(p);
        if (w <= 0.0) continue;
        out.accumulate(decompose_fock(params, table, static_cast<std::size_t>(p)), w);
    }
    return out;
}

cplx avg_correlation(const ModelParams& params, const Occupations& occupations, double tau) {
    if (!(tau >= 0.0)) throw InvalidInput("avg_correlation: tau must be >= 0");
    return decompose_lines(params, occupations).correlation(tau);
}

namespace {

template <typename Eval>
Spectrum evaluate(const ModelParams& params, const Occupations& occupations,
                  const std::vector<double>& grid, Eval eval) {
    require_grid(grid);
    const LineDecomposition lines = decompose_lines(params, occupations);
    Spectrum s = make_spectrum(params, grid, Provenance::full);
    for (std::size_t i = 0; i < grid.size(); ++i) s.values[i] = eval(lines, grid[i]);
    s.metadata["fock_cutoff"] = std::to_string(lines.cutoff);
    return s;
}

}  // namespace

Spectrum rf_spectrum_full(const ModelParams& params, const Occupations& occupations,
                          const std::vector<double>& grid) {
    return evaluate(params, occupations, grid,
                    [](const LineDecomposition& l, double x) { return l.spectrum_at(x); });
}

Spectrum rf_spectrum_elastic(const ModelParams& params, const Occupations& occupations,
                             const std::vector<double>& grid) {
    return evaluate(params, occupations, grid,
                    [](const LineDecomposition& l, double x) { return l.elastic_at(x); });
}

Spectrum rf_spectrum_inelastic(const ModelParams& params, const Occupations& occupations,
                               const std::vector<double>& grid) {
    return evaluate(params, occupations, grid,
                    [](const LineDecomposition& l, double x) { return l.inelastic_at(x); });
}

namespace {

enum class NarrowPart { sharp, broad, both };

Spectrum narrow_impl(const ModelParams& params, const Occupations& occupations,
                     const std::vector<double>& grid, NarrowPart part) {
    params.validate();
    require_normalized(occupations);
    require_grid(grid);
    const int kappa = params.kappa_index();
    const std::size_t n_occ = max_occupied_index(occupations);
    const std::size_t K = fock_cutoff(params, n_occ);
    const FCTable table(params.gamma, K);

    const double c = params.coherence_rate();
    const double gam = params.Gamma_det;
    const double wide = gam + c;
    const double prefactor = params.drive_scale / (c * c);
    const double broad_ratio = params.gamma_pd / params.gamma_xd;

    // (position, weight) of every resonant line
    std::vector<std::pair<double, double>> lines;
    for (Eigen::Index i = 0; i < occupations.size(); ++i) {
        const double rho = occupations(i);
        if (rho <= 0.0) continue;
        const long j = static_cast<long>(i) + kappa;
        if (j < 0 || j > static_cast<long>(K)) continue;
        const double up = std::norm(table(static_cast<std::size_t>(j), static_cast<std::size_t>(i)));
        if (up == 0.0) continue;
        for (std::size_t f = 0; f <= K; ++f) {
            const double w = prefactor * rho * up *
                             std::norm(table(static_cast<std::size_t>(j), f));
            if (w == 0.0) continue;
            lines.emplace_back(static_cast<double>(kappa + i) - static_cast<double>(f), w);
        }
    }

    Spectrum s = make_spectrum(params, grid, Provenance::narrow);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double v = 0.0;
        for (const auto& [pos, w] : lines) {
            const double dx = grid[g] - pos;
            if (part != NarrowPart::broad) v += w * lorentz(gam, dx);
            if (part != NarrowPart::sharp) {
                v += w * broad_ratio * gam * wide / (wide * wide + dx * dx);
            }
        }
        s.values[g] = v;
    }
    s.metadata["fock_cutoff"] = std::to_string(K);
    s.metadata["narrow_validity"] =
        (params.gamma_pd + params.gamma_xd) > 0.1 ? "violated" : "ok";
    return s;
}

}  // namespace

Spectrum rf_spectrum_narrow(const ModelParams& params, const Occupations& occupations,
                            const std::vector<double>& grid) {
    return narrow_impl(params, occupations, grid, NarrowPart::both);
}

Spectrum rf_spectrum_narrow_sharp(const ModelParams& params, const Occupations& occupations,
                                  const std::vector<double>& grid) {
    return narrow_impl(params, occupations, grid, NarrowPart::sharp);
}

Spectrum rf_spectrum_narrow_broad(const ModelParams& params, const Occupations& occupations,
                                  const std::vector<double>& grid) {
    return narrow_impl(params, occupations, grid, NarrowPart::broad);
}

PeakWeights peak_weights(const Occupations& occupations, cplx gamma, int kappa, int k_min,
                         int k_max) {
    require_normalized(occupations);
    if (k_max < k_min) throw InvalidInput("peak_weights: empty k range");
    PeakWeights out;
    out.kappa = kappa;
    out.k_min = k_min;
    out.k_max = k_max;
    out.weights.assign(static_cast<std::size_t>(k_max - k_min + 1), 0.0);

    for (Eigen::Index i = 0; i < occupations.size(); ++i) {
        const double rho = occupations(i);
        if (rho <= 0.0) continue;
        const long j = static_cast<long>(i) + kappa;
        if (j < 0) continue;  // no negative Fock states
        const double up = std::norm(fc_factor(static_cast<std::size_t>(j),
                                              static_cast<std::size_t>(i), gamma));
        for (int k = k_min; k <= k_max; ++k) {
            const long f = j - k;
            if (f < 0) continue;
            const double down = std::norm(fc_factor(static_cast<std::size_t>(j),
                                                    static_cast<std::size_t>(f), gamma));
            out.weights[static_cast<std::size_t>(k - k_min)] += up * down * rho;
        }
    }
    return out;
}

double background_area_ratio(double gamma_pd, double gamma_xd) {
    if (!(gamma_xd > 0.0)) throw InvalidInput("background_area_ratio: gamma_xd must be > 0");
    if (gamma_pd < 0.0) throw InvalidInput("background_area_ratio: gamma_pd must be >= 0");
    return gamma_pd / (gamma_pd + gamma_xd);
}

Eigen::MatrixXcd excited_state_dm(const ModelParams& params, const PhononState& rho_g,
                                  double phase_time, std::optional<std::size_t> cutoff) {
    params.validate();
    if (phase_time < 0.0) throw InvalidInput("excited_state_dm: phase_time must be >= 0");
    const Eigen::MatrixXcd& rho = rho_g.matrix();
    const std::size_t n_occ = rho_g.max_occupied();
    const std::size_t K = cutoff.value_or(fock_cutoff(params, n_occ));
    if (K < n_occ) throw InvalidInput("excited_state_dm: cutoff below occupied Fock states");
    const FCTable table(params.gamma, K);
    const auto& T = table.entries();

    const double c = params.coherence_rate();
    const double gxd = params.gamma_xd;
    const double kappa = params.kappa;

    std::vector<std::pair<std::size_t, std::size_t>> support;
    for (std::size_t p = 0; p <= n_occ; ++p) {
        for (std::size_t q = 0; q <= n_occ; ++q) {
            if (std::abs(rho(idx(p), idx(q))) > 0.0) support.emplace_back(p, q);
        }
    }

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(idx(K + 1), idx(K + 1));
    for (std::size_t m = 0; m <= K; ++m) {
        for (std::size_t n = 0; n <= K; ++n) {
            cplx acc{0.0, 0.0};
            for (const auto& [p, q] : support) {
                const double dm = static_cast<double>(m), dn = static_cast<double>(n);
                const double dp = static_cast<double>(p), dq = static_cast<double>(q);
                const double delta = dm - dn - dp + dq;
                const cplx phase = std::exp(-I * ((dp - dq) * phase_time));
                const cplx ratio = cplx(2.0 * c, delta) / cplx(gxd, delta);
                const cplx left = 1.0 / cplx(c, kappa + dq - dn);
                const cplx right = 1.0 / cplx(c, -(kappa + dp - dm));
                acc += T(idx(m), idx(p)) * std::conj(T(idx(n), idx(q))) * rho(idx(p), idx(q)) *
                       phase * ratio * left * right;
            }
            out(idx(m), idx(n)) = params.drive_scale * acc;
        }
    }
    return out;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
    if (!(hi > lo) || !(step > 0.0)) throw InvalidInput("uniform_grid: need lo < hi, step > 0");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + static_cast<double>(i) * step;
    return g;
}

std::vector<double> default_grid(const ModelParams& params, std::size_t n_occ_max) {
    params.validate();
    const double g_abs = std::abs(params.gamma);
    const double wide = params.Gamma_det + params.coherence_rate();
    const double emission = std::ceil(g_abs * g_abs + 4.0 * g_abs + 3.0);
    const double lo = std::min(0.0, params.kappa) - emission - 5.0 * wide;
    const double hi = std::max(0.0, params.kappa) + static_cast<double>(n_occ_max) + 0.5 +
                      5.0 * wide;
    return uniform_grid(lo, hi, params.Gamma_det / 40.0);
}

}  // namespace rfspec
