#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lorentzfe/sampled.hpp"
#include "lorentzfe/young.hpp"

namespace lorentzfe {

/// Seeded source for test corpora. Doubles are built from raw mt19937_64
/// bits so that a seed gives the same corpus on every standard library.
class CorpusRng {
public:
    explicit CorpusRng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }

private:
    std::mt19937_64 eng_;
};

/// Nonnegative scalar functions cycling through six shapes: uniform noise,
/// indicator of a sub-box, few-level steps, power profile, sparse spikes and
/// a mixture of the previous.
std::vector<SampledFn> random_corpus(const GridPtr& grid, std::size_t count, std::uint64_t seed);

/// Random sub-boxes of the grid's domain, realized as cell sets.
std::vector<CellSet> random_sets(const Grid& grid, std::size_t count, std::uint64_t seed);

/// Signed scalar functions (values in [-1, 1] with a random shape), used as
/// operator-norm probes.
std::vector<SampledFn> random_signed(const GridPtr& grid, std::size_t count, std::uint64_t seed);

/// Nonnegative functions rescaled so that the Orlicz modular of each is at
/// most 1 (a random fraction of the largest admissible scale).
std::vector<SampledFn> random_modular_unit(const GridPtr& grid, std::size_t count, std::uint64_t seed,
                                           const YoungFn& big_psi);

}  // namespace lorentzfe
