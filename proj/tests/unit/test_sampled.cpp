#include <doctest.h>

#include <cmath>
#include <numeric>

#include "lorentzfe/sampled.hpp"

using namespace lorentzfe;

namespace {
GridPtr unit_grid(std::size_t m) { return make_grid(Domain::interval(0.0, 1.0), m); }
}  // namespace

TEST_CASE("domain validation") {
    CHECK(Domain::intervals({{0, 1}, {2, 3.5}}).measure() == 2.5);
    CHECK_THROWS_AS(Domain::intervals({{0, 1}, {0.5, 2}}), InputError);
    CHECK_THROWS_AS(Domain::interval(1.0, 1.0), InputError);
    CHECK_THROWS_AS(Domain({Box{{0}, {1}}, Box{{2, 0}, {3, 1}}}), InputError);
    const Domain sq({Box{{0, 0}, {1, 2}}});
    CHECK(sq.dim() == 2);
    CHECK(sq.measure() == 2.0);
}

TEST_CASE("grid geometry and half-open lookup") {
    const GridPtr g = make_grid(Domain::intervals({{0, 1}, {2, 4}}), 4);
    CHECK(g->size() == 8);
    CHECK(g->cell_measure(0) == 0.25);
    CHECK(g->cell_measure(5) == 0.5);
    CHECK(g->total_measure() == 3.0);
    CHECK(g->midpoint1(4) == 2.25);
    const double at_edge = 0.25;
    CHECK(*g->locate(std::span<const double>(&at_edge, 1)) == 1);
    const double gap = 1.5;
    CHECK_FALSE(g->locate(std::span<const double>(&gap, 1)).has_value());
    const auto c = g->locate_clamped(std::span<const double>(&gap, 1));
    CHECK(c.distance == 0.5);
    const double far = 5.0;
    const auto c2 = g->locate_clamped(std::span<const double>(&far, 1));
    CHECK(c2.cell == 7);
    CHECK(c2.distance == 1.0);

    const GridPtr g2 = make_grid(Domain({Box{{0, 0}, {1, 1}}}), 4);
    std::vector<double> x(2);
    g2->midpoint(5, x);  // first axis fastest: (1, 1)
    CHECK(x[0] == 0.375);
    CHECK(x[1] == 0.375);
    CHECK(*g2->locate(x) == 5);
}

TEST_CASE("sampled function arithmetic") {
    const GridPtr g = unit_grid(16);
    const SampledFn f = SampledFn::from_midpoints(g, [](double x) { return x; });
    const SampledFn one = SampledFn::constant(g, 1.0);
    CHECK((f + one)[3] == f[3] + 1.0);
    CHECK((2.0 * f)[5] == 2.0 * f[5]);
    CHECK((f - f) == SampledFn::zeros(g));
    CHECK(f.max_abs_diff(one) == doctest::Approx(1.0 - 1.0 / 32));
    CHECK_THROWS_AS(SampledFn(g, 1, std::vector<double>(15, 0.0)), InputError);
    CHECK_THROWS_AS(SampledFn(g, 1, std::vector<double>(16, std::nan(""))), InputError);
    CHECK_THROWS_AS(f + SampledFn::zeros(unit_grid(32)), InputError);

    const SampledFn v = f.embed(3, 1);
    CHECK(v.target_dim() == 3);
    CHECK(v.value(4, 0) == 0.0);
    CHECK(v.value(4, 1) == f[4]);
    CHECK(v.component(1) == f);
}

TEST_CASE("pointwise norm") {
    const GridPtr g = unit_grid(16);
    const double c[] = {3.0, 4.0};
    const SampledFn f = SampledFn::constant(g, c);
    CHECK(pointwise_norm(f) == SampledFn::constant(g, 5.0));
    CHECK(pointwise_norm(SampledFn::zeros(g, 2)) == SampledFn::zeros(g));
    std::vector<double> xy;
    for (std::size_t i = 0; i < g->size(); ++i) {
        xy.push_back(g->midpoint1(i));
        xy.push_back(1.0 - g->midpoint1(i));
    }
    const SampledFn n = pointwise_norm(SampledFn(g, 2, xy));
    for (std::size_t i = 0; i < g->size(); ++i) {
        const double x = g->midpoint1(i);
        CHECK(n[i] == std::sqrt(x * x + (1 - x) * (1 - x)));
    }
    CHECK(pointwise_norm(SampledFn(g, 2, xy), Exec::serial) == n);
}

TEST_CASE("distribution of an indicator and of zero") {
    const GridPtr g = make_grid(Domain::interval(0.0, 2.0), 16);
    const SampledFn chi = SampledFn::from_midpoints(g, [](double x) { return x < 1.0 ? 1.0 : 0.0; });
    const StepDistribution d = distribution(chi);
    CHECK(d(0.0) == 1.0);
    CHECK(d(0.999) == 1.0);
    CHECK(d(1.0) == 0.0);
    CHECK(d(7.0) == 0.0);
    const StepDistribution z = distribution(SampledFn::zeros(g));
    CHECK(z(0.0) == 0.0);
    CHECK(z.thresholds.size() == 1);
}

TEST_CASE("distribution of x on (0, 1) approximates 1 - s") {
    const GridPtr g = unit_grid(1024);
    const StepDistribution d = distribution(SampledFn::from_midpoints(g, [](double x) { return x; }));
    double worst = 0.0;
    for (int k = 0; k <= 1000; ++k) {
        const double s = k / 1000.0;
        worst = std::max(worst, std::abs(d(s) - (1.0 - s)));
    }
    CHECK(worst <= 1.0 / 1000);
    CHECK(d.thresholds.size() == 1025);
}

TEST_CASE("rearrangement") {
    const GridPtr g = unit_grid(16);
    const SampledFn chi = SampledFn::from_midpoints(g, [](double x) { return x > 0.75 ? 2.0 : 0.0; });
    const Rearrangement r = rearrangement(chi);
    CHECK(r.values == std::vector<double>{2.0, 0.0});
    CHECK(r.breakpoints == std::vector<double>{0.0, 0.25, 1.0});
    CHECK(r(0.1) == 2.0);
    CHECK(r(0.25) == 0.0);
    CHECK(r.integral(1.0) == 0.5);

    const Rearrangement z = rearrangement(SampledFn::zeros(g));
    CHECK(z(0.5) == 0.0);

    const GridPtr g2 = unit_grid(1024);
    const SampledFn f = SampledFn::from_midpoints(g2, [](double x) { return x; });
    const Rearrangement fr = rearrangement(f);
    for (int k = 0; k < 100; ++k) {
        const double t = k / 100.0;
        CHECK(std::abs(fr(t) - (1.0 - t)) <= 1.0 / 1024);
    }
    // equimeasurability is exact
    CHECK(fr.distribution() == distribution(f));
    CHECK(fr.integral(1.0) == doctest::Approx(integrate(f)).epsilon(1e-14));
}

TEST_CASE("cell sets and integrals") {
    const GridPtr g = unit_grid(16);
    const CellSet e = cells_in(*g, Domain::interval(0.0, 0.5));
    CHECK(e.cells.size() == 8);
    CHECK(e.measure == 0.5);
    const SampledFn f = SampledFn::from_midpoints(g, [](double x) { return x; });
    CHECK(integrate(f, e) == doctest::Approx(0.125));
    CHECK(integrate(f) == doctest::Approx(0.5));
}
