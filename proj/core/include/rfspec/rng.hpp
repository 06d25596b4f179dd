// rng.hpp: seeded random streams for noise realizations
//
// Algorithm (reproducible from this description alone):
//   stream seed  = splitmix64 chain over (master, a, b): s = sm(master); s = sm(s ^ a); s = sm(s ^ b)
//   engine       = std::mt19937_64 seeded with the stream seed
//   uniform      = (engine() >> 11) * 2^-53, in [0, 1)
//   normal       = Box-Muller on (1 - u1, u2), both outputs used in order

#pragma once

#include <cstdint>
#include <random>

namespace rfspec {

// One step of the splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept;

class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double uniform() noexcept;
    double normal() noexcept;

private:
    std::mt19937_64 engine_;
    double spare_{0.0};
    bool has_spare_{false};
};

}  // namespace rfspec
