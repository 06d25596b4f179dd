#include "rfspec/rng.hpp"

#include <cmath>
#include <numbers>

namespace rfspec {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ a);
    return splitmix64(s ^ b);
}

double NormalStream::uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

// std::normal_distribution is implementation-defined; Box-Muller keeps
// streams identical across standard libraries.
double NormalStream::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

}  // namespace rfspec
