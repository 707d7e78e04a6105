#include <doctest.h>

#include <cmath>

#include "lorentzfe/solver.hpp"

using namespace lorentzfe;

namespace {

const double kSqrt2 = std::sqrt(2.0);

ProblemInstance doubling(double alpha = 0.25, std::size_t m = 4096) {
    const GridPtr g = make_grid(Domain::interval(0, 1), m);
    return ProblemInstance{"doubling",
                           g,
                           {PiecewiseMap({Branch::affine(0, 0.5, 0, 2), Branch::affine(0.5, 1, -1, 2)})},
                           {SampledFn::constant(g, 0.25)},
                           SampledFn::constant(g, 1.0),
                           2,
                           1,
                           alpha};
}

}  // namespace

TEST_CASE("doubling trace, frozen") {
    SolveOptions o;
    o.tol = 1e-8;
    const Solution s = solve_elementary(doubling(), o);
    CHECK(s.trace.stop == StopReason::tolerance);
    REQUIRE(s.trace.rows.size() == 30);
    const TraceRow& r0 = s.trace.rows[0];
    CHECK(r0.term_norm == kSqrt2);
    CHECK(r0.partial_norm == 0.0);
    CHECK(r0.tail_bound == 2.0 * kSqrt2);
    CHECK(r0.residual == kSqrt2);
    const TraceRow& r1 = s.trace.rows[1];
    CHECK(r1.term_norm == kSqrt2 / 4);
    CHECK(r1.partial_norm == kSqrt2);
    CHECK(r1.residual == kSqrt2 / 4);  // ||P h0|| when phi = h0
    CHECK(s.trace.rows.back().m == 29);
    CHECK(s.trace.rows.back().tail_bound <= 1e-8);
    CHECK(s.phi.max_abs_diff(SampledFn::constant(s.phi.grid_ptr(), 4.0 / 3.0)) <= 1e-15);
    for (std::size_t m = 1; m < s.trace.rows.size(); ++m) {
        CHECK(s.trace.rows[m].tail_bound < s.trace.rows[m - 1].tail_bound);
        CHECK(s.trace.rows[m].term_norm <= s.trace.rows[m - 1].term_norm * 0.5 * (1 + 1e-12));
    }
}

TEST_CASE("default tolerance is relative to h0") {
    const Solution s = solve_elementary(doubling());
    CHECK(s.tol == doctest::Approx(1e-8 * kSqrt2));
    CHECK(s.trace.rows.back().m == 28);
}

TEST_CASE("zero forcing gives the zero solution at step 0") {
    ProblemInstance z = doubling();
    z.h0 = SampledFn::zeros(z.grid);
    const Solution s = solve_elementary(z);
    CHECK(s.trace.rows.size() == 1);
    CHECK(s.phi == SampledFn::zeros(z.grid));
    CHECK(residual(s.phi, z).value == 0.0);
}

TEST_CASE("audit gate and force") {
    const ProblemInstance bad = doubling(0.2);
    CHECK_THROWS_AS(solve_elementary(bad), AuditRefused);
    SolveOptions o;
    o.force = true;
    const Solution s = solve_elementary(bad, o);
    CHECK(s.trace.forced);
    CHECK(certificate(s, bad).get("verdict") == "FAIL");
}

TEST_CASE("divergence is detected") {
    // g = 1 gives P 1 = 1: terms never shrink
    ProblemInstance d = doubling(0.25, 64);
    d.coeffs = {SampledFn::constant(d.grid, 1.0)};
    SolveOptions o;
    o.force = true;
    CHECK_THROWS_AS(solve_elementary(d, o), DivergenceError);
}

TEST_CASE("max_steps stop") {
    SolveOptions o;
    o.tol = 0.0;
    o.max_steps = 5;
    const Solution s = solve_elementary(doubling(), o);
    CHECK(s.trace.stop == StopReason::max_steps);
    CHECK(s.trace.rows.size() == 6);
}

TEST_CASE("residual oracles") {
    const ProblemInstance d = doubling();
    CHECK(residual(SampledFn::constant(d.grid, 4.0 / 3.0), d).value <= 1e-12);
    CHECK(residual(d.h0, d).value == doctest::Approx(kSqrt2 / 4).epsilon(1e-15));
}

TEST_CASE("tail norm equals the closed form") {
    const ProblemInstance d = doubling();
    for (std::size_t m : {0u, 1u, 5u, 20u}) {
        const double exact = kSqrt2 * (4.0 / 3.0) * std::pow(4.0, -static_cast<double>(m));
        CHECK(tail_norm(d, m) == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("uniqueness probe") {
    const ProblemInstance d = doubling();
    const std::vector<SampledFn> starts{SampledFn::zeros(d.grid), d.h0, d.h0 * 10.0};
    const auto r = uniqueness_probe(d, starts, 20);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.distances.size() == 3);
    CHECK(r.max_distance <= 1e-9);
    const auto single = uniqueness_probe(d, std::vector<SampledFn>{d.h0}, 20);
    CHECK(single.verdict == Verdict::pass);
    CHECK(single.distances.empty());
    const auto twin = uniqueness_probe(d, std::vector<SampledFn>{d.h0, d.h0}, 3);
    CHECK(twin.max_distance == 0.0);
}

TEST_CASE("vector run reproduces the scalar trace") {
    const ProblemInstance d = doubling();
    const ProblemInstance v = d.with_h0(d.h0.embed(3, 0));
    SolveOptions o;
    o.tol = 1e-8;
    const Solution a = solve_elementary(d, o);
    const Solution b = solve_elementary(v, o);
    REQUIRE(a.trace.rows.size() == b.trace.rows.size());
    for (std::size_t m = 0; m < a.trace.rows.size(); ++m) {
        CHECK(a.trace.rows[m].term_norm == b.trace.rows[m].term_norm);
        CHECK(a.trace.rows[m].partial_norm == b.trace.rows[m].partial_norm);
        CHECK(a.trace.rows[m].residual == b.trace.rows[m].residual);
    }
    CHECK(b.phi.component(0) == a.phi);
}
