#include "lorentzfe/operator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace lorentzfe {

void ProblemInstance::validate() const {
    if (!grid) throw InputError("instance '" + name + "': no grid");
    if (maps.empty()) throw InputError("instance '" + name + "': at least one map is required");
    if (coeffs.size() != maps.size())
        throw InputError("instance '" + name + "': " + std::to_string(maps.size()) + " maps but " +
                         std::to_string(coeffs.size()) + " coefficients");
    for (std::size_t n = 0; n < maps.size(); ++n) {
        if (maps[n].dim() != grid->dim())
            throw InputError("instance '" + name + "': map " + std::to_string(n + 1) + " has dimension " +
                             std::to_string(maps[n].dim()) + ", domain has " + std::to_string(grid->dim()));
        if (!coeffs[n].is_scalar() || !coeffs[n].grid().same_shape(*grid))
            throw InputError("instance '" + name + "': coefficient " + std::to_string(n + 1) +
                             " must be scalar on the instance grid");
    }
    if (!h0.grid().same_shape(*grid)) throw InputError("instance '" + name + "': h0 is on a different grid");
    if (!(alpha >= 0.0 && alpha < 0.5)) throw InputError("instance '" + name + "': alpha must lie in [0, 1/2)");
    if (K < 1) throw InputError("instance '" + name + "': K must be >= 1");
    if (L < 1 || static_cast<std::size_t>(L) > maps.size())
        throw InputError("instance '" + name + "': L must lie in 1..N");
}

ProblemInstance ProblemInstance::with_h0(SampledFn h) const {
    if (!h.grid().same_shape(*grid)) throw InputError("with_h0: grid mismatch");
    ProblemInstance out = *this;
    out.h0 = std::move(h);
    return out;
}

// ---------------------------------------------------------------------------

TransferOperator::TransferOperator(const ProblemInstance& inst) : grid_(inst.grid) {
    inst.validate();
    const Grid& g = *grid_;
    const std::size_t cells = g.size();
    table_.cells = cells;
    table_.terms = inst.N();
    table_.target.resize(cells * inst.N());
    table_.weight.resize(cells * inst.N());
    std::vector<double> x(g.dim());
    std::vector<double> y(g.dim());
    std::size_t outside = 0;
    for (std::size_t n = 0; n < inst.N(); ++n) {
        for (std::size_t i = 0; i < cells; ++i) {
            const std::size_t k = n * cells + i;
            table_.weight[k] = inst.coeffs[n][i];
            g.midpoint(i, x);
            if (!inst.maps[n].apply(x, y)) {
                // f_n undefined at this midpoint: no branch covers it
                ++outside;
                table_.target[k] = i;
                table_.weight[k] = 0.0;
                continue;
            }
            const auto c = g.locate_clamped(y);
            if (c.distance > 0.0) ++clamped_;
            if (c.distance > 1e-12) ++outside;
            table_.target[k] = c.cell;
        }
    }
    if (static_cast<double>(outside) > 1e-3 * static_cast<double>(cells * inst.N()))
        throw InputError("instance '" + inst.name + "': " + std::to_string(outside) + " of " +
                         std::to_string(cells * inst.N()) + " mapped midpoints leave the domain (maps must be self-maps)");
}

SampledFn TransferOperator::apply(const SampledFn& phi, Exec exec) const {
    if (!phi.grid().same_shape(*grid_)) throw InputError("apply_P: phi is on a different grid");
    std::vector<double> out(phi.values().size());
    kernels::transfer(exec, table_, phi.values(), phi.target_dim(), out);
    return SampledFn(phi.grid_ptr(), phi.target_dim(), std::move(out));
}

SampledFn apply_P(const SampledFn& phi, const ProblemInstance& inst, Exec exec) {
    return TransferOperator(inst).apply(phi, exec);
}

// ---------------------------------------------------------------------------

int estimate_multiplicity(const PiecewiseMap& f, const Domain& omega, std::size_t probes) {
    if (omega.dim() != 1) throw InputError("estimate_multiplicity: 1-D domain expected");
    if (probes == 0) throw InputError("estimate_multiplicity: probes must be positive");
    int best = 0;
    for (const auto& box : omega.boxes()) {
        const double lo = box.lo[0];
        const double step = (box.hi[0] - lo) / static_cast<double>(probes);
        for (std::size_t j = 0; j < probes; ++j) {
            double y = lo + (static_cast<double>(j) + 0.5) * step;
            auto r = banach_indicatrix(f, omega, y);
            // endpoint images form a null set: step off them
            for (int t = 1; r.ambiguous && t <= 8; ++t) {
                y = lo + (static_cast<double>(j) + 0.5 + 0.0371 * t) * step;
                r = banach_indicatrix(f, omega, y);
            }
            if (!r.ambiguous) best = std::max(best, r.count);
        }
    }
    return best;
}

namespace {

Domain axis_domain(const Domain& omega, std::size_t a) {
    const Box& b = omega.boxes().front();
    return Domain::interval(b.lo[a], b.hi[a]);
}

void require_single_box(const Domain& omega, const char* what) {
    if (omega.dim() > 1 && omega.boxes().size() != 1)
        throw InputError(std::string(what) + ": k > 1 needs a single-box domain");
}

using Intervals = std::vector<std::pair<double, double>>;

Intervals merge(Intervals v) {
    std::sort(v.begin(), v.end());
    Intervals out;
    for (const auto& p : v) {
        if (!(p.second > p.first)) continue;
        if (!out.empty() && p.first <= out.back().second)
            out.back().second = std::max(out.back().second, p.second);
        else
            out.push_back(p);
    }
    return out;
}

Intervals intersect(const Intervals& a, const Intervals& b) {
    Intervals out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        const double lo = std::max(a[i].first, b[j].first);
        const double hi = std::min(a[i].second, b[j].second);
        if (hi > lo) out.emplace_back(lo, hi);
        (a[i].second < b[j].second) ? ++i : ++j;
    }
    return out;
}

double length(const Intervals& v) {
    double s = 0.0;
    for (const auto& p : v) s += p.second - p.first;
    return s;
}

}  // namespace

int estimate_multiplicity(const TensorMap& f, const Domain& omega, std::size_t probes) {
    if (f.dim() != omega.dim()) throw InputError("estimate_multiplicity: map and domain dimensions differ");
    if (f.dim() == 1) return estimate_multiplicity(f.axes().front(), omega, probes);
    require_single_box(omega, "estimate_multiplicity");
    int k = 1;
    for (std::size_t a = 0; a < f.dim(); ++a) k *= estimate_multiplicity(f.axes()[a], axis_domain(omega, a), probes);
    return k;
}

OverlapEstimate estimate_overlap_L(const std::vector<TensorMap>& maps, const Domain& omega) {
    OverlapEstimate est;
    if (maps.empty()) return est;
    require_single_box(omega, "estimate_overlap_L");
    const std::size_t k = omega.dim();
    // images[n][a]: union of branch images of map n along axis a
    std::vector<std::vector<Intervals>> images(maps.size(), std::vector<Intervals>(k));
    for (std::size_t n = 0; n < maps.size(); ++n) {
        if (maps[n].dim() != k) throw InputError("estimate_overlap_L: map dimension mismatch");
        for (std::size_t a = 0; a < k; ++a) {
            const Domain d = k == 1 ? omega : axis_domain(omega, a);
            images[n][a] = merge(maps[n].axes()[a].image_pieces(d));
        }
    }
    const double null_level = 1e-14 * omega.measure();
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t, const std::vector<Intervals>&)> grow = [&](std::size_t next,
                                                                               const std::vector<Intervals>& cur) {
        for (std::size_t n = next; n < maps.size(); ++n) {
            std::vector<Intervals> inter(k);
            double m = 1.0;
            for (std::size_t a = 0; a < k; ++a) {
                inter[a] = intersect(cur[a], images[n][a]);
                m *= length(inter[a]);
            }
            chosen.push_back(n);
            est.table.push_back(OverlapEntry{chosen, m});
            if (m > null_level) {
                est.L = std::max(est.L, static_cast<int>(chosen.size()));
                grow(n + 1, inter);
            }
            chosen.pop_back();
        }
    };
    for (std::size_t n = 0; n < maps.size(); ++n) {
        chosen = {n};
        grow(n + 1, images[n]);
    }
    return est;
}

// ---------------------------------------------------------------------------

AuditReport audit_contraction(const ProblemInstance& inst) {
    inst.validate();
    const Grid& g = *inst.grid;
    const double KL = static_cast<double>(inst.K) * static_cast<double>(inst.L);
    const double N = static_cast<double>(inst.N());
    AuditReport rep;
    rep.worst_ratio = 0.0;
    std::vector<double> x(g.dim());
    for (std::size_t n = 0; n < inst.N(); ++n) {
        double bound = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            g.midpoint(i, x);
            const double gn = std::abs(inst.coeffs[n][i]);
            const auto jac = inst.maps[n].jacobian(x);
            const double J = jac ? std::abs(*jac) : 0.0;
            const double allowed = inst.alpha * std::min(J / KL, 1.0 / N);
            double ratio = 0.0;
            if (gn > 0.0) ratio = J > 0.0 ? gn * std::max(KL / J, N) : std::numeric_limits<double>::infinity();
            bound = std::max(bound, ratio);
            if (ratio > rep.worst_ratio) {
                rep.worst_ratio = ratio;
                rep.worst_map = n;
                rep.worst_cell = i;
                rep.worst_x = x[0];
            }
            if (gn > allowed + 1e-12) rep.contraction_ok = false;
        }
        rep.map_bound.push_back(bound);
        rep.multiplicity.push_back(estimate_multiplicity(inst.maps[n], g.domain()));
    }
    rep.overlap = estimate_overlap_L(inst.maps, g.domain());
    const int kmax = *std::max_element(rep.multiplicity.begin(), rep.multiplicity.end());
    rep.K_ok = inst.K >= kmax;
    rep.L_ok = inst.L >= rep.overlap.L;
    rep.verdict = (rep.contraction_ok && rep.K_ok && rep.L_ok) ? Verdict::pass : Verdict::fail;
    return rep;
}

Report AuditReport::to_report() const {
    Report r;
    r.add("check", "contraction_audit").add("verdict", verdict);
    r.add("contraction", contraction_ok ? "PASS" : "FAIL");
    r.add("K_declared_ok", K_ok).add("L_declared_ok", L_ok);
    for (std::size_t n = 0; n < multiplicity.size(); ++n) {
        const std::string k = "map" + std::to_string(n + 1);
        r.add(k + ".multiplicity", multiplicity[n]).add(k + ".ess_sup_ratio", map_bound[n]);
    }
    r.add("L_estimate", overlap.L);
    for (const auto& e : overlap.table) {
        std::string key = "overlap";
        for (std::size_t n : e.maps) key += "." + std::to_string(n + 1);
        r.add(key, e.measure);
    }
    r.add("smallest_feasible_alpha", worst_ratio);
    r.add("witness_map", worst_map + 1).add("witness_cell", worst_cell).add("witness_x", worst_x);
    r.add("note", "midpoint sampling: FAIL is authoritative, PASS is evidence at grid resolution");
    return r;
}

}  // namespace lorentzfe
