#ifndef NLBV_RNG_HPP
#define NLBV_RNG_HPP

#include <cstdint>

#include "nlbv/grid.hpp"

namespace nlbv {

/// splitmix64: small, seedable, identical output on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform01() { return double(next() >> 11) * 0x1.0p-53; }
    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + int(next() % std::uint64_t(hi - lo + 1));
    }

    DiscreteSet random_set(const GridDomain& grid, double density) {
        DiscreteSet s(grid);
        for (int i = 0; i < grid.size(); ++i)
            if (uniform01() < density) s.set(i, true);
        return s;
    }
    /// Random function with values on the lattice {0, 1/levels, ..., 1}.
    DiscreteFunction random_levels(const GridDomain& grid, int levels) {
        Eigen::ArrayXd v(grid.size());
        for (int i = 0; i < grid.size(); ++i)
            v[i] = double(uniform_int(0, levels)) / levels;
        return DiscreteFunction(grid, std::move(v));
    }

private:
    std::uint64_t state_;
};

} // namespace nlbv

#endif
