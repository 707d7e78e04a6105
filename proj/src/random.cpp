#include "lorentzfe/random.hpp"

#include <algorithm>
#include <cmath>

#include "lorentzfe/norms.hpp"

namespace lorentzfe {

namespace {

Box random_box(const Domain& d, CorpusRng& rng) {
    const Box& b = d.boxes()[rng.index(d.boxes().size())];
    Box out{b.lo, b.hi};
    for (std::size_t a = 0; a < b.dim(); ++a) {
        double x = rng.uniform(b.lo[a], b.hi[a]);
        double y = rng.uniform(b.lo[a], b.hi[a]);
        if (x > y) std::swap(x, y);
        // keep at least a tenth of the axis so the set is never empty
        const double minw = 0.1 * (b.hi[a] - b.lo[a]);
        if (y - x < minw) {
            y = std::min(b.hi[a], x + minw);
            x = y - minw;
        }
        out.lo[a] = x;
        out.hi[a] = y;
    }
    return out;
}

std::vector<double> shape(const Grid& g, std::size_t family, CorpusRng& rng) {
    const std::size_t n = g.size();
    std::vector<double> v(n, 0.0);
    std::vector<double> x(g.dim());
    switch (family % 6) {
    case 0:
        for (auto& e : v) e = rng.uniform();
        break;
    case 1: {
        const Box b = random_box(g.domain(), rng);
        const double h = rng.uniform(0.5, 3.0);
        for (std::size_t i = 0; i < n; ++i) {
            g.midpoint(i, x);
            if (b.contains(x)) v[i] = h;
        }
        if (std::all_of(v.begin(), v.end(), [](double e) { return e == 0.0; })) v[rng.index(n)] = h;
        break;
    }
    case 2: {
        const std::size_t levels = 2 + rng.index(4);
        std::vector<double> heights(levels);
        for (auto& h : heights) h = std::round(rng.uniform(0.0, 8.0)) / 4.0;
        for (auto& e : v) e = heights[rng.index(levels)];
        break;
    }
    case 3: {
        const double p = rng.uniform(-0.45, 2.0);
        const double c = rng.uniform(0.2, 2.0);
        for (std::size_t i = 0; i < n; ++i) {
            g.midpoint(i, x);
            const Box& b = g.domain().boxes()[0];
            const double t = (x[0] - b.lo[0]) / (b.hi[0] - b.lo[0]);
            v[i] = c * std::pow(t, p);
        }
        break;
    }
    case 4: {
        const std::size_t spikes = 1 + rng.index(8);
        for (std::size_t k = 0; k < spikes; ++k) v[rng.index(n)] = rng.uniform(1.0, 10.0);
        break;
    }
    default: {
        auto a = shape(g, 1, rng);
        auto b = shape(g, 3, rng);
        const double w = rng.uniform();
        for (std::size_t i = 0; i < n; ++i) v[i] = w * a[i] + (1.0 - w) * b[i];
        break;
    }
    }
    return v;
}

}  // namespace

std::vector<SampledFn> random_corpus(const GridPtr& grid, std::size_t count, std::uint64_t seed) {
    CorpusRng rng(seed);
    std::vector<SampledFn> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.emplace_back(grid, 1, shape(*grid, k, rng));
    return out;
}

std::vector<CellSet> random_sets(const Grid& grid, std::size_t count, std::uint64_t seed) {
    CorpusRng rng(seed);
    std::vector<CellSet> out;
    out.reserve(count);
    while (out.size() < count) {
        auto e = cells_in(grid, Domain({random_box(grid.domain(), rng)}));
        if (!e.cells.empty()) out.push_back(std::move(e));
    }
    return out;
}

std::vector<SampledFn> random_signed(const GridPtr& grid, std::size_t count, std::uint64_t seed) {
    CorpusRng rng(seed);
    std::vector<SampledFn> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        auto v = shape(*grid, k, rng);
        const double top = *std::max_element(v.begin(), v.end());
        for (auto& e : v) {
            e = (top > 0.0 ? e / top : 0.0);
            if (rng.uniform() < 0.5) e = -e;
        }
        if (std::all_of(v.begin(), v.end(), [](double e) { return e == 0.0; })) v[0] = 1.0;
        out.emplace_back(grid, 1, std::move(v));
    }
    return out;
}

std::vector<SampledFn> random_modular_unit(const GridPtr& grid, std::size_t count, std::uint64_t seed,
                                           const YoungFn& big_psi) {
    auto fs = random_corpus(grid, count, seed);
    CorpusRng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<SampledFn> out;
    out.reserve(count);
    for (auto& f : fs) {
        const double lux = luxemburg_norm(f, big_psi).value;
        const double frac = rng.uniform(0.25, 1.0);
        // the bisection midpoint may sit just below the true norm
        out.push_back(lux > 0.0 ? f * (frac / (lux * (1.0 + 1e-9))) : f);
    }
    return out;
}

}  // namespace lorentzfe
