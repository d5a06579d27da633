#pragma once

#include <cstdint>
#include <random>

namespace kerrtda {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// seed ⊕ hash(stream): independent, reproducible sub-streams for cells and
// ensemble members.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return seed ^ splitmix64(stream);
}

// Owned, explicitly seeded generator. The real conversion is done here rather
// than through std::uniform_real_distribution so streams are bit-identical
// across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    // Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace kerrtda
