#include <doctest.h>

#include <cmath>

#include "lorentzfe/maps.hpp"

using namespace lorentzfe;

namespace {

PiecewiseMap doubling() { return PiecewiseMap({Branch::affine(0, 0.5, 0, 2), Branch::affine(0.5, 1, -1, 2)}); }

PiecewiseMap tent3() {
    return PiecewiseMap({Branch::affine(0, 1.0 / 3, 0, 3), Branch::affine(1.0 / 3, 2.0 / 3, 2, -3),
                         Branch::affine(2.0 / 3, 1, -2, 3)});
}

}  // namespace

TEST_CASE("branch validation") {
    CHECK_THROWS_AS(PiecewiseMap({}), InputError);
    CHECK_THROWS_AS(PiecewiseMap({Branch::affine(0, 1, 0, 0)}), InputError);
    CHECK_THROWS_AS(PiecewiseMap({Branch::affine(0, 0.6, 0, 1), Branch::affine(0.5, 1, 0, 1)}), InputError);
    const Branch wiggle{0, 1, [](double x) { return std::sin(10 * x); }, [](double x) { return 10 * std::cos(10 * x); }, "expr"};
    CHECK_THROWS_AS(PiecewiseMap({wiggle}), InputError);
    CHECK_THROWS_AS(Branch::mobius(0, 1, 1, 0, 1, -0.5), InputError);  // pole at 1/2
    CHECK_THROWS_AS(Branch::mobius(0, 1, 2, 4, 1, 2), InputError);     // ad - bc = 0
}

TEST_CASE("evaluation and branch lookup") {
    const PiecewiseMap f = doubling();
    CHECK(*f(0.25) == 0.5);
    CHECK(*f(0.75) == 0.5);
    CHECK(*f(0.5) == 0.0);
    CHECK_FALSE(f(1.0).has_value());
    CHECK(*f.derivative(0.9) == 2.0);
    const PiecewiseMap m({Branch::mobius(0, 1, 1, 0, 1, 1)});  // x / (x + 1)
    CHECK(*m(0.5) == doctest::Approx(1.0 / 3));
    CHECK(*m.derivative(0.0) == 1.0);
}

TEST_CASE("Banach indicatrix") {
    const Domain omega = Domain::interval(0, 1);
    const auto r = banach_indicatrix(doubling(), omega, 0.3);
    CHECK(r.count == 2);
    CHECK_FALSE(r.ambiguous);
    REQUIRE(r.preimages.size() == 2);
    CHECK(r.preimages[0] == doctest::Approx(0.15));
    CHECK(r.preimages[1] == doctest::Approx(0.65));

    CHECK(banach_indicatrix(tent3(), omega, 0.5).count == 3);
    CHECK(banach_indicatrix(PiecewiseMap::identity(0, 1), omega, 0.4).count == 1);

    const PiecewiseMap half({Branch::affine(0, 1, 0, 0.5)});
    CHECK(banach_indicatrix(half, omega, 0.25).count == 1);
    CHECK(banach_indicatrix(half, omega, 0.75).count == 0);

    // y on an endpoint image is flagged
    const auto edge = banach_indicatrix(doubling(), omega, 0.0);
    CHECK(edge.ambiguous);

    // restricting E cuts the count
    CHECK(banach_indicatrix(doubling(), Domain::interval(0, 0.5), 0.3).count == 1);
}

TEST_CASE("tensor maps") {
    const TensorMap t(std::vector<PiecewiseMap>{doubling(), PiecewiseMap({Branch::affine(0, 1, 0, 0.5)})});
    std::vector<double> y(2);
    const std::vector<double> x{0.75, 0.5};
    REQUIRE(t.apply(x, y));
    CHECK(y[0] == 0.5);
    CHECK(y[1] == 0.25);
    CHECK(*t.jacobian(x) == 1.0);
    const std::vector<double> out{1.5, 0.5};
    CHECK_FALSE(t.apply(out, y));
}

TEST_CASE("change of variables corpus") {
    const Domain omega = Domain::interval(0, 1);
    const GridPtr g = make_grid(omega, 4096);
    const SampledFn one = SampledFn::constant(g, 1.0);
    const SampledFn chi = SampledFn::from_midpoints(g, [](double y) { return y < 0.5 ? 1.0 : 0.0; });
    const SampledFn id = SampledFn::from_midpoints(g, [](double y) { return y; });
    const PiecewiseMap maps[] = {PiecewiseMap::identity(0, 1), doubling(), PiecewiseMap({Branch::affine(0, 1, 0, 0.5)}),
                                 tent3()};
    for (const auto& f : maps)
        for (const SampledFn* h : {&one, &chi, &id}) {
            const auto r = change_of_variables_check(f, *h, omega);
            CHECK(r.verdict == Verdict::pass);
            CHECK(r.relative_gap <= 1e-3);
        }
    // frozen: integral of H(F(x)) |F'| for F = 2x mod 1, H = 1 is 2
    CHECK(change_of_variables_check(doubling(), one, omega).lhs == 2.0);
    CHECK_THROWS_AS(change_of_variables_check(doubling(), one * -1.0, omega), InputError);
}

TEST_CASE("change of variables detects a wrong derivative") {
    const Branch lying{0, 1, [](double x) { return 0.5 * x; }, [](double) { return 1.0; }, "expr"};
    const Domain omega = Domain::interval(0, 1);
    const GridPtr g = make_grid(omega, 256);
    const auto r = change_of_variables_check(PiecewiseMap({lying}), SampledFn::constant(g, 1.0), omega);
    CHECK(r.verdict == Verdict::fail);
    CHECK(r.lhs == doctest::Approx(1.0));
    CHECK(r.rhs == doctest::Approx(0.5));
}
