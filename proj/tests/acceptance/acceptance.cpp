// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include "config.hpp"
#include "lorentzfe/norms.hpp"
#include "lorentzfe/random.hpp"
#include "lorentzfe/solver.hpp"

namespace fs = std::filesystem;
using namespace lorentzfe;

namespace {

const fs::path kDir = LFE_INSTANCE_DIR;
const double kSqrt2 = std::sqrt(2.0);

lfe::LoadedInstance load(const char* name, std::optional<std::size_t> grid = std::nullopt) {
    return lfe::load_instance(kDir / name, {grid, std::nullopt, std::nullopt});
}

struct Outcome {
    bool ok = true;
    std::ostringstream detail;
    void require(bool cond, const std::string& what) {
        if (!cond && ok) detail << "first failure: " << what << "; ";
        ok = ok && cond;
    }
};

// ||phi* - S_m|| against sqrt(2) (4/3) 4^-m and the bound 2^(1-m) sqrt(2)
Outcome tail_bound_soundness() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto li = load("doubling.yaml", 4096);
    const TauFn tau = derive_tau(li.inst.psi);
    const TransferOperator P(li.inst);
    // terms P^k h0, k = 0..60; the tail sum of k >= m is accumulated backwards
    std::vector<SampledFn> terms{li.inst.h0};
    for (int k = 1; k <= 60; ++k) terms.push_back(P.apply(terms.back()));
    std::vector<double> tails(21);
    SampledFn acc = SampledFn::zeros(li.inst.grid);
    for (int k = 60; k >= 0; --k) {
        acc = acc + terms[static_cast<std::size_t>(k)];
        if (k <= 20) tails[static_cast<std::size_t>(k)] = lorentz_value(acc, tau);
    }
    double worst_rel = 0.0;
    for (int m = 0; m <= 20; ++m) {
        const double exact = kSqrt2 * (4.0 / 3.0) * std::pow(4.0, -m);
        const double bound = std::pow(2.0, 1 - m) * kSqrt2;
        const double got = tails[static_cast<std::size_t>(m)];
        worst_rel = std::max(worst_rel, std::abs(got - exact) / exact);
        o.require(got <= bound, "m=" + std::to_string(m) + " exceeds the tail bound");
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(worst_rel <= 1e-6, "relative error " + format_double(worst_rel));
    o.require(secs < 1.0, "runtime " + format_double(secs) + " s");
    o.detail << "max_rel_err=" << format_double(worst_rel) << " runtime_s=" << format_double(secs);
    return o;
}

Outcome fixed_point_oracle() {
    Outcome o;
    for (const char* name : {"doubling.yaml", "two_branch.yaml"}) {
        const auto li = load(name);
        SolveOptions so;
        so.tol = 1e-8;
        const Solution s = solve_elementary(li.inst, so);
        const double res = residual(s.phi, li.inst).value;
        const double err = s.phi.max_abs_diff(SampledFn::constant(li.inst.grid, 4.0 / 3.0));
        const std::size_t m = s.trace.rows.back().m;
        o.require(s.trace.stop == StopReason::tolerance && m <= 30, std::string(name) + " steps " + std::to_string(m));
        o.require(res <= 1e-10, std::string(name) + " residual " + format_double(res));
        o.require(err <= 1e-12, std::string(name) + " distance to 4/3 " + format_double(err));
        o.detail << li.inst.name << ":m=" << m << ",residual=" << format_double(res) << " ";
    }
    return o;
}

Outcome norm_route_agreement() {
    Outcome o;
    const TauFn tau = derive_tau(make_power_young(2.0));
    const double oracle = 2.0 * kSqrt2 / 3.0;
    auto err = [&](std::size_t m, Route r) {
        const auto li = load("identity_norm.yaml", m);
        return std::abs(lorentz_norm(li.inst.h0, tau, r).value - oracle) / oracle;
    };
    for (Route r : kLorentzRoutes) {
        const double e4096 = err(4096, r);
        o.require(e4096 <= 1e-3, std::string(to_string(r)) + " at M=4096: " + format_double(e4096));
        const double e512 = err(512, r);
        const double e2048 = err(2048, r);
        const double e8192 = err(8192, r);
        const double p1 = std::log(e512 / e2048) / std::log(4.0);
        const double p2 = std::log(e2048 / e8192) / std::log(4.0);
        o.require(p1 >= 1.0 && p2 >= 1.0, std::string(to_string(r)) + " order " + format_double(std::min(p1, p2)));
        o.detail << to_string(r) << ":err4096=" << format_double(e4096) << ",order=" << format_double(std::min(p1, p2)) << " ";
    }
    return o;
}

Outcome axiom_suite_corpus() {
    Outcome o;
    const GridPtr g = make_grid(Domain::interval(0.0, 1.0), 1024);
    const auto corpus = random_corpus(g, 200, 20240601);
    const auto sets = random_sets(*g, 20, 20240602);
    for (double m : {1.5, 2.0, 3.0}) {
        const AxiomReport r = axiom_suite(derive_tau(make_power_young(m)), corpus, sets);
        o.require(r.verdict == Verdict::pass, "psi_" + format_double(m) + " verdict " + std::string(to_string(r.verdict)));
        o.require(r.min_triangle_slack >= -1e-10, "psi_" + format_double(m) + " slack " + format_double(r.min_triangle_slack));
        o.detail << "psi_" << format_double(m) << ":min_slack=" << format_double(r.min_triangle_slack) << " ";
    }
    return o;
}

Outcome change_of_variables() {
    Outcome o;
    const auto li = load("cov_corpus.yaml", 4096);
    double worst = 0.0;
    std::size_t count = 0;
    for (const auto& f : li.inst.maps)
        for (const auto& [text, h] : li.cov_h) {
            const auto r = change_of_variables_check(f.axes().front(), h, li.inst.grid->domain(), 4096);
            worst = std::max(worst, r.relative_gap);
            o.require(r.relative_gap <= 1e-3, "H=" + text + " gap " + format_double(r.relative_gap));
            ++count;
        }
    o.require(count == 12, "expected 12 pairs");
    o.detail << "pairs=" << count << " max_rel_gap=" << format_double(worst);
    return o;
}

Outcome audit_arithmetic() {
    Outcome o;
    auto li = load("doubling.yaml");
    const AuditReport pass = audit_contraction(li.inst);
    o.require(pass.verdict == Verdict::pass, "alpha=1/4 should PASS");
    o.require(pass.multiplicity == std::vector<int>{2}, "estimated K != 2");
    o.require(pass.overlap.L == 1, "estimated L != 1");
    li.inst.alpha = 0.2;
    const AuditReport fail = audit_contraction(li.inst);
    o.require(fail.verdict == Verdict::fail && !fail.contraction_ok, "alpha=0.2 should FAIL the contraction condition");
    o.require(fail.worst_cell < li.inst.grid->size(), "no witness cell");
    o.detail << "K_est=" << pass.multiplicity[0] << " L_est=" << pass.overlap.L << " witness_cell=" << fail.worst_cell
             << " witness_x=" << format_double(fail.worst_x);
    return o;
}

Outcome operator_norm_bound() {
    Outcome o;
    std::size_t tested = 0;
    for (const auto& e : fs::directory_iterator(kDir)) {
        if (e.path().extension() != ".yaml") continue;
        const auto li = lfe::load_instance(e.path(), {std::size_t{4096}, std::nullopt, std::nullopt});
        if (audit_contraction(li.inst).verdict != Verdict::pass) continue;
        const TauFn tau = derive_tau(li.inst.psi);
        const TransferOperator P(li.inst);
        double worst = 0.0;
        for (const auto& phi : random_signed(li.inst.grid, 100, 4242)) {
            const SampledFn x = li.inst.h0.is_scalar() ? phi : phi.embed(li.inst.h0.target_dim(), 0);
            worst = std::max(worst, lorentz_value(P.apply(x), tau) / lorentz_value(x, tau));
        }
        o.require(worst <= 2 * li.inst.alpha + 0.02, li.inst.name + " ratio " + format_double(worst));
        o.detail << li.inst.name << ":" << format_double(worst) << " ";
        ++tested;
    }
    o.require(tested >= 2, "fewer than two PASS instances");
    return o;
}

Outcome uniqueness() {
    Outcome o;
    for (const char* name : {"doubling.yaml", "two_branch.yaml"}) {
        const auto li = load(name);
        const std::vector<SampledFn> starts{SampledFn::zeros(li.inst.grid), li.inst.h0, li.inst.h0 * 10.0};
        const auto r = uniqueness_probe(li.inst, starts, 20);
        o.require(r.max_distance <= 1e-9 && r.verdict == Verdict::pass, std::string(name) + " distance " + format_double(r.max_distance));
        o.detail << li.inst.name << ":max_distance=" << format_double(r.max_distance) << " ";
    }
    return o;
}

Outcome vector_lift() {
    Outcome o;
    const auto sc = load("doubling.yaml");
    const auto vc = load("vector_doubling.yaml");
    o.require(vc.inst.h0.target_dim() == 3, "vector instance is not 3-dimensional");
    SolveOptions so;
    so.tol = 1e-8;
    const Solution a = solve_elementary(sc.inst, so);
    const Solution b = solve_elementary(vc.inst, so);
    o.require(a.trace.rows.size() == b.trace.rows.size(), "trace lengths differ");
    auto line = [](const TraceRow& r) {
        return format_double(r.term_norm) + "," + format_double(r.partial_norm) + "," + format_double(r.tail_bound) + "," +
               format_double(r.residual);
    };
    for (std::size_t m = 0; m < std::min(a.trace.rows.size(), b.trace.rows.size()); ++m)
        o.require(line(a.trace.rows[m]) == line(b.trace.rows[m]), "row " + std::to_string(m) + " differs");
    o.detail << "rows=" << a.trace.rows.size();
    return o;
}

Outcome bridge() {
    Outcome o;
    const YoungFn big_psi = make_scaled_power_young(1.0, 2.0);
    const YoungFn psi = make_power_young(2.0);
    const auto hs = random_modular_unit(make_grid(Domain::interval(0.0, 1.0), 4096), 50, 20240610, big_psi);
    double worst = INFINITY;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const BridgeReport r = check_orlicz_lorentz_bridge(hs[i], big_psi, psi);
        o.require(r.modular_gate, "h" + std::to_string(i) + " modular " + format_double(r.modular));
        worst = std::min(worst, r.slack);
        o.require(r.slack >= -1e-9, "h" + std::to_string(i) + " slack " + format_double(r.slack));
        failures += r.slack >= -1e-9 ? 0 : 1;
    }
    o.detail << "functions=" << hs.size() << " failing=" << failures << " min_slack=" << format_double(worst);
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"tail-bound soundness", tail_bound_soundness},
        {"fixed-point oracle", fixed_point_oracle},
        {"norm-route agreement", norm_route_agreement},
        {"axiom suite", axiom_suite_corpus},
        {"change of variables", change_of_variables},
        {"contraction audit arithmetic", audit_arithmetic},
        {"operator norm bound", operator_norm_bound},
        {"uniqueness probe", uniqueness},
        {"vector-valued lift", vector_lift},
        {"Orlicz-Lorentz bridge", bridge},
    };
    int failed = 0;
    int n = 0;
    for (const auto& [name, fn] : criteria) {
        ++n;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail << "exception: " << e.what();
        }
        std::printf("%s %2d %s: %s\n", o.ok ? "PASS" : "FAIL", n, name, o.detail.str().c_str());
        failed += o.ok ? 0 : 1;
    }
    std::printf("%d/%d criteria passed\n", n - failed, n);
    return failed == 0 ? 0 : 1;
}
