#include "lorentzfe/solver.hpp"

#include <algorithm>
#include <cmath>

namespace lorentzfe {

namespace {

double a_priori_tail(double alpha, std::size_t m, double h0_norm) {
    return std::pow(2.0 * alpha, static_cast<double>(m)) / (1.0 - 2.0 * alpha) * h0_norm;
}

}  // namespace

Solution solve_elementary(const ProblemInstance& inst, const SolveOptions& opts) {
    AuditReport audit = audit_contraction(inst);
    if (audit.verdict == Verdict::fail && !opts.force) throw AuditRefused(std::move(audit));

    const TauFn tau = derive_tau(inst.psi);
    const TransferOperator P(inst);
    const Exec ex = opts.exec;
    const double h0_norm = lorentz_value(inst.h0, tau, ex);
    const double tol = opts.tol.value_or(1e-8 * h0_norm);
    if (!(tol >= 0.0)) throw InputError("solve: tol must be nonnegative");

    Solution sol{SampledFn::zeros(inst.grid, inst.h0.target_dim()), {}, std::move(audit), tol};
    sol.trace.forced = sol.audit.verdict == Verdict::fail;

    SampledFn term = inst.h0;      // P^m h0
    SampledFn& partial = sol.phi;  // S_m
    double term_norm = h0_norm;
    int growth = 0;
    for (std::size_t m = 0;; ++m) {
        TraceRow row;
        row.m = m;
        row.term_norm = term_norm;
        row.partial_norm = lorentz_value(partial, tau, ex);
        row.tail_bound = a_priori_tail(inst.alpha, m, h0_norm);
        row.residual = lorentz_value(partial - P.apply(partial, ex) - inst.h0, tau, ex);
        sol.trace.rows.push_back(row);
        if (row.tail_bound <= tol) {
            sol.trace.stop = StopReason::tolerance;
            break;
        }
        if (m >= opts.max_steps) {
            sol.trace.stop = StopReason::max_steps;
            break;
        }
        partial = partial + term;
        SampledFn next = P.apply(term, ex);
        const double next_norm = lorentz_value(next, tau, ex);
        if (term_norm > 0.0 && next_norm > (2.0 * inst.alpha + 0.05) * term_norm) {
            if (++growth >= 3)
                throw DivergenceError("term norms grew by more than 2 alpha + 0.05 for 3 consecutive steps (m = " +
                                      std::to_string(m + 1) + ")");
        } else {
            growth = 0;
        }
        term = std::move(next);
        term_norm = next_norm;
    }
    return sol;
}

NormValue residual(const SampledFn& phi, const ProblemInstance& inst, Exec exec) {
    const TauFn tau = derive_tau(inst.psi);
    if (!phi.compatible(inst.h0)) throw InputError("residual: phi must match h0's grid and dimension");
    const SampledFn r = phi - apply_P(phi, inst, exec) - inst.h0;
    return NormValue{lorentz_value(r, tau, exec), Route::distribution, tau.label()};
}

double tail_norm(const ProblemInstance& inst, std::size_t m, Exec exec) {
    const TauFn tau = derive_tau(inst.psi);
    const TransferOperator P(inst);
    SampledFn term = inst.h0;
    for (std::size_t k = 0; k < m; ++k) term = P.apply(term, exec);
    SampledFn sum = term;
    for (int k = 0; k < 10000; ++k) {
        term = P.apply(term, exec);
        const double t = lorentz_value(term, tau, exec);
        sum = sum + term;
        if (t <= 1e-17 * lorentz_value(sum, tau, exec)) break;
    }
    return lorentz_value(sum, tau, exec);
}

UniquenessReport uniqueness_probe(const ProblemInstance& inst, std::span<const SampledFn> starts, std::size_t steps,
                                  Exec exec) {
    const TauFn tau = derive_tau(inst.psi);
    const TransferOperator P(inst);
    UniquenessReport rep;
    double biggest = 0.0;
    std::vector<SampledFn> xs;
    for (const auto& s : starts) {
        if (!s.compatible(inst.h0)) throw InputError("uniqueness_probe: start must match h0's grid and dimension");
        biggest = std::max(biggest, lorentz_value(s, tau, exec));
        xs.push_back(s);
    }
    for (std::size_t k = 0; k < steps; ++k)
        for (auto& x : xs) x = P.apply(x, exec) + inst.h0;
    rep.bound = 2.0 * std::pow(2.0 * inst.alpha, static_cast<double>(steps)) / (1.0 - 2.0 * inst.alpha) * biggest + 1e-12;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            const double d = lorentz_value(xs[i] - xs[j], tau, exec);
            rep.distances.push_back(d);
            rep.max_distance = std::max(rep.max_distance, d);
        }
    rep.verdict = rep.max_distance <= rep.bound ? Verdict::pass : Verdict::fail;
    return rep;
}

Report UniquenessReport::to_report() const {
    Report r;
    r.add("check", "uniqueness_probe").add("verdict", verdict);
    r.add("pairs", distances.size()).add("max_distance", max_distance).add("bound", bound);
    return r;
}

Report certificate(const Solution& s, const ProblemInstance& inst) {
    const TraceRow& last = s.trace.rows.back();
    Report r;
    r.add("instance", inst.name).add("psi", inst.psi.label()).add("alpha", inst.alpha);
    r.add("audit", s.audit.verdict).add("forced", s.trace.forced);
    r.add("tol", s.tol).add("steps", last.m);
    r.add("stop_reason", s.trace.stop == StopReason::tolerance ? "tolerance" : "max_steps");
    r.add("tail_bound", last.tail_bound).add("residual", last.residual).add("solution_norm", last.partial_norm);
    const bool ok = s.trace.stop == StopReason::tolerance && !s.trace.forced;
    r.add("verdict", ok ? Verdict::pass : Verdict::fail);
    return r;
}

}  // namespace lorentzfe
