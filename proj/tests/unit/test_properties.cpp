#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lorentzfe/norms.hpp"
#include "lorentzfe/random.hpp"
#include "lorentzfe/solver.hpp"

using namespace lorentzfe;

namespace {

GridPtr unit_grid(std::size_t m) { return make_grid(Domain::interval(0.0, 1.0), m); }

SampledFn permuted(const SampledFn& f, CorpusRng& rng) {
    std::vector<double> v(f.values().begin(), f.values().end());
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.index(i)]);
    return SampledFn(f.grid_ptr(), 1, std::move(v));
}

}  // namespace

TEST_CASE("equimeasurable functions have identical norms on every route") {
    CorpusRng rng(2024);
    const auto corpus = random_corpus(unit_grid(256), 36, 77);
    for (double m : {1.5, 2.0, 3.0}) {
        const TauFn tau = derive_tau(make_power_young(m));
        for (const auto& f : corpus) {
            const SampledFn g = permuted(f, rng);
            for (Route r : kLorentzRoutes) CHECK(lorentz_norm(f, tau, r).value == lorentz_norm(g, tau, r).value);
        }
    }
}

TEST_CASE("weighted rearrangement functional is subadditive") {
    CorpusRng rng(31);
    const auto corpus = random_corpus(unit_grid(256), 60, 8);
    for (double m : {1.5, 2.0, 3.0}) {
        const TauFn tau = derive_tau(make_power_young(m));
        for (int trial = 0; trial < 60; ++trial) {
            const auto& f = corpus[rng.index(corpus.size())];
            const auto& g = corpus[rng.index(corpus.size())];
            const double lhs = lorentz_norm(f + g, tau, Route::rearrangement_weight).value;
            const double rhs = lorentz_norm(f, tau, Route::rearrangement_weight).value +
                               lorentz_norm(g, tau, Route::rearrangement_weight).value;
            CHECK(lhs <= rhs + 1e-10);
        }
    }
}

TEST_CASE("homogeneity and monotonicity on random scalings") {
    CorpusRng rng(5);
    const auto corpus = random_corpus(unit_grid(128), 40, 6);
    const TauFn tau = derive_tau(make_power_young(2.5));
    for (const auto& f : corpus) {
        const double lam = rng.uniform(0.0, 10.0);
        const double a = lorentz_value(f, tau);
        CHECK(lorentz_value(f * lam, tau) == doctest::Approx(lam * a).epsilon(1e-12));
        CHECK(lorentz_value(f * -1.0, tau) == a);
        const SampledFn g = f * 0.5 + f.abs() * 0.25;  // 0 <= g <= f
        CHECK(lorentz_value(g, tau) <= a);
    }
}

TEST_CASE("distribution route converges at order >= 1 for f(x) = x") {
    const TauFn tau = derive_tau(make_power_young(2.0));
    const double oracle = 2.0 * std::sqrt(2.0) / 3.0;
    double prev = 0.0;
    for (std::size_t m : {256u, 1024u, 4096u}) {
        const SampledFn f = SampledFn::from_midpoints(unit_grid(m), [](double x) { return x; });
        const double err = std::abs(lorentz_value(f, tau) - oracle);
        if (prev > 0.0) CHECK(std::log2(prev / err) / 2.0 >= 1.0);
        prev = err;
    }
}

TEST_CASE("operator norm stays under 2 alpha on random probes") {
    const GridPtr g = unit_grid(1024);
    const TauFn tau = derive_tau(make_power_young(2.0));
    const ProblemInstance inst{"two_branch",
                               g,
                               {PiecewiseMap({Branch::affine(0, 1, 0, 0.5)}), PiecewiseMap({Branch::affine(0, 1, 0.5, 0.5)})},
                               {SampledFn::constant(g, 0.125), SampledFn::constant(g, 0.125)},
                               SampledFn::constant(g, 1.0),
                               1,
                               1,
                               0.25};
    const TransferOperator P(inst);
    for (const auto& phi : random_signed(g, 40, 12))
        CHECK(lorentz_value(P.apply(phi), tau) <= (2 * inst.alpha + 0.02) * lorentz_value(phi, tau));
}

TEST_CASE("serial and parallel solves produce identical traces") {
    const GridPtr g = unit_grid(512);
    const ProblemInstance inst{"doubling",
                               g,
                               {PiecewiseMap({Branch::affine(0, 0.5, 0, 2), Branch::affine(0.5, 1, -1, 2)})},
                               {SampledFn::constant(g, 0.25)},
                               SampledFn::from_midpoints(g, [](double x) { return std::cos(5 * x); }),
                               2,
                               1,
                               0.25};
    SolveOptions s;
    s.exec = Exec::serial;
    SolveOptions p;
    p.exec = Exec::parallel;
    const Solution a = solve_elementary(inst, s);
    const Solution b = solve_elementary(inst, p);
    CHECK(a.phi == b.phi);
    REQUIRE(a.trace.rows.size() == b.trace.rows.size());
    for (std::size_t m = 0; m < a.trace.rows.size(); ++m) CHECK(a.trace.rows[m].residual == b.trace.rows[m].residual);
    // residual-certificate consistency
    for (const auto& r : a.trace.rows) CHECK(r.residual <= (1 + 2 * inst.alpha) * r.term_norm + 1e-12);
}

TEST_CASE("random Young parameters pass the shape and delta2 audits") {
    CorpusRng rng(99);
    const auto grid = log_grid(1e-6, 1e6, 3);
    for (int i = 0; i < 20; ++i) {
        const double m = rng.uniform(1.2, 5.0);
        const YoungFn p = make_power_young(m);
        CHECK(check_young_shape(p, grid).verdict == Verdict::pass);
        CHECK(check_delta2(p, grid, *p.delta2_const()).verdict == Verdict::pass);
        const TauFn tau = derive_tau(p);
        for (double s : grid) CHECK(tau.inverse(tau(s)) == doctest::Approx(s).epsilon(1e-10));
    }
}
