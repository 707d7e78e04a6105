#include "lorentzfe/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lorentzfe/errors.hpp"

namespace lorentzfe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

boost::math::quadrature::tanh_sinh<double>& integrator() {
    thread_local boost::math::quadrature::tanh_sinh<double> ts;
    return ts;
}

double checked_tau_inverse(const TauFn& tau, double s) {
    const double v = tau.inverse(s);
    if (!std::isfinite(v) || v < 0.0)
        throw NumericalError("tau^-1 evaluation failed at s = " + format_double(s) + " for " + tau.label());
    return v;
}

/// integral over [a, b] of (tau^-1)'(s) ds by tanh-sinh quadrature.
double weight_mass(const TauFn& tau, double a, double b) {
    if (!(b > a)) return 0.0;
    auto w = [&tau](double s) { return tau.inverse_deriv(s); };
    return integrator().integrate(w, a, b, 1e-13);
}

double norm_distribution(const SampledFn& f, const TauFn& tau) {
    const auto d = distribution(f);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < d.thresholds.size(); ++i)
        sum += checked_tau_inverse(tau, d.plateau_measures[i]) * (d.thresholds[i + 1] - d.thresholds[i]);
    return sum;
}

double norm_rearrangement_tau(const SampledFn& f, const TauFn& tau) {
    const auto r = rearrangement(f);
    double sum = 0.0;
    double prev = 0.0;  // tau^-1(breakpoints[0]) = tau^-1(0)
    for (std::size_t j = 0; j < r.values.size(); ++j) {
        if (r.values[j] == 0.0) break;
        const double next = checked_tau_inverse(tau, r.breakpoints[j + 1]);
        sum += r.values[j] * (next - prev);
        prev = next;
    }
    return sum;
}

double norm_rearrangement_weight(const SampledFn& f, const TauFn& tau) {
    const auto r = rearrangement(f);
    double sum = 0.0;
    for (std::size_t j = 0; j < r.values.size(); ++j) {
        if (r.values[j] == 0.0) break;
        sum += r.values[j] * weight_mass(tau, r.breakpoints[j], r.breakpoints[j + 1]);
    }
    return sum;
}

double scalar_norm(const SampledFn& f, const TauFn& tau, Route route) {
    switch (route) {
    case Route::distribution: return norm_distribution(f, tau);
    case Route::rearrangement_tau: return norm_rearrangement_tau(f, tau);
    case Route::rearrangement_weight: return norm_rearrangement_weight(f, tau);
    case Route::luxemburg: break;
    }
    throw InputError("lorentz_norm: route must be one of distribution, rearrangement_tau, rearrangement_weight");
}

std::string cell_note(const char* what, std::size_t i, std::size_t j) {
    std::ostringstream os;
    os << what << " f=" << i << " g=" << j;
    return os.str();
}

}  // namespace

std::string_view to_string(Route r) {
    switch (r) {
    case Route::distribution: return "distribution";
    case Route::rearrangement_tau: return "rearrangement_tau";
    case Route::rearrangement_weight: return "rearrangement_weight";
    case Route::luxemburg: return "luxemburg";
    }
    return "unknown";
}

std::optional<Route> parse_route(std::string_view name) {
    for (Route r : {Route::distribution, Route::rearrangement_tau, Route::rearrangement_weight, Route::luxemburg})
        if (name == to_string(r)) return r;
    return std::nullopt;
}

NormValue lorentz_norm(const SampledFn& f, const TauFn& tau, Route route) {
    if (!f.is_scalar()) throw InputError("lorentz_norm: scalar function expected; use lorentz_norm_vector");
    return NormValue{scalar_norm(f, tau, route), route, tau.label()};
}

NormValue lorentz_norm_vector(const SampledFn& f, const TauFn& tau, Exec exec) {
    return NormValue{norm_distribution(pointwise_norm(f, exec), tau), Route::distribution, tau.label()};
}

double lorentz_value(const SampledFn& f, const TauFn& tau, Exec exec) {
    if (f.is_scalar()) return norm_distribution(f, tau);
    return norm_distribution(pointwise_norm(f, exec), tau);
}

std::vector<double> lorentz_values(std::span<const SampledFn> fs, const TauFn& tau, Route route, Exec exec) {
    std::vector<double> out(fs.size());
    const auto n = static_cast<std::ptrdiff_t>(fs.size());
    if (exec == Exec::parallel) {
        // exceptions must not escape the parallel region
        std::vector<std::string> errors(fs.size());
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                const auto& f = fs[static_cast<std::size_t>(i)];
                out[static_cast<std::size_t>(i)] =
                    f.is_scalar() ? scalar_norm(f, tau, route) : scalar_norm(pointwise_norm(f, Exec::serial), tau, route);
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(i)] = e.what();
            }
        }
        for (const auto& e : errors)
            if (!e.empty()) throw NumericalError(e);
    } else {
        for (std::size_t i = 0; i < fs.size(); ++i)
            out[i] = fs[i].is_scalar() ? scalar_norm(fs[i], tau, route)
                                       : scalar_norm(pointwise_norm(fs[i], Exec::serial), tau, route);
    }
    return out;
}

// ---------------------------------------------------------------------------

double orlicz_modular(const SampledFn& u, const YoungFn& big_psi, double scale) {
    if (!u.is_scalar()) throw InputError("orlicz_modular: scalar function expected");
    const Grid& g = u.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = std::abs(u[i]);
        if (a == 0.0) continue;
        s += big_psi(a / scale) * g.cell_measure(i);
    }
    return s;
}

NormValue luxemburg_norm(const SampledFn& u, const YoungFn& big_psi) {
    if (!u.is_scalar()) throw InputError("luxemburg_norm: scalar function expected");
    double top = 0.0;
    for (double v : u.values()) top = std::max(top, std::abs(v));
    if (top == 0.0) return NormValue{0.0, Route::luxemburg, big_psi.label()};

    auto fits = [&](double t) { return orlicz_modular(u, big_psi, t) <= 1.0; };
    double hi = top;
    int guard = 0;
    while (!fits(hi)) {
        hi *= 2.0;
        if (++guard > 60) throw NumericalError("luxemburg_norm: modular stays above 1 after 60 doublings");
    }
    double lo = hi;
    guard = 0;
    while (fits(lo)) {
        lo *= 0.5;
        if (++guard > 60) throw NumericalError("luxemburg_norm: modular stays below 1 after 60 halvings");
    }
    // invariant: modular(lo) > 1 >= modular(hi)
    while ((hi - lo) > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (fits(mid))
            hi = mid;
        else
            lo = mid;
    }
    return NormValue{0.5 * (lo + hi), Route::luxemburg, big_psi.label()};
}

double p5_analytic_bound(const TauFn& tau, double measure) {
    if (measure <= 0.0) return 0.0;
    if (const auto& pw = tau.source().power_law()) {
        const double q = 1.0 / pw->exponent;
        if (q >= 1.0) return kInf;
        // integral_0^a (c s)^(-q) ds = c^-q a^(1-q) / (1-q)
        return std::pow(pw->coef, -q) * std::pow(measure, 1.0 - q) / (1.0 - q);
    }
    try {
        double err = 0.0;
        const double v =
            integrator().integrate([&tau](double s) { return 1.0 / tau.inverse(s); }, 0.0, measure, 1e-10, &err);
        if (!std::isfinite(v) || err > 1e-6 * std::abs(v)) return kInf;
        return v;
    } catch (const std::exception&) {
        return kInf;
    }
}

// ---------------------------------------------------------------------------

NormalizationIntegral bridge_normalization_integral(const TauFn& tau) {
    const YoungFn& psi = tau.source();
    auto integrand = [&](double u) {
        const double t = std::exp(u);
        const double d = psi.right_deriv(t);
        if (!(d > 0.0)) return kInf;
        return tau.right_deriv_inverse(1.0 / d) * t;
    };
    NormalizationIntegral out;
    const double ln10 = std::log(10.0);
    double total = 0.0;
    for (int j = 1; j <= 12; ++j) {
        double add = 0.0;
        for (double lo : {-static_cast<double>(j), static_cast<double>(j - 1)}) {
            try {
                add += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, lo * ln10,
                                                                                      (lo + 1.0) * ln10, 10, 1e-10);
            } catch (const std::exception&) {
                add = kInf;
            }
        }
        total += add;
        out.window_values.push_back(total);
    }
    out.value = total;
    const auto& w = out.window_values;
    bool shrinking = std::isfinite(total);
    for (std::size_t j = w.size() - 4; j < w.size() && shrinking; ++j) {
        const double inc = w[j] - w[j - 1];
        const double prev = w[j - 1] - w[j - 2];
        if (!(inc < prev)) shrinking = false;
    }
    const double last_inc = w.back() - w[w.size() - 2];
    out.divergent = !(shrinking && last_inc <= 1e-6 * std::abs(total));
    return out;
}

BridgeReport check_orlicz_lorentz_bridge(const SampledFn& h, const YoungFn& big_psi, const YoungFn& psi) {
    const TauFn tau = derive_tau(psi);
    BridgeReport rep;
    const SampledFn mag = h.is_scalar() ? h : pointwise_norm(h);
    rep.modular = orlicz_modular(mag, big_psi);
    rep.modular_gate = rep.modular <= 1.0;
    rep.normalization = bridge_normalization_integral(tau);
    if (!rep.modular_gate) {
        rep.verdict = Verdict::inconclusive;
        return rep;
    }
    rep.lorentz = lorentz_norm(mag, tau).value;
    rep.orlicz = luxemburg_norm(mag, big_psi).value;
    rep.slack = 2.0 * *rep.orlicz - *rep.lorentz;
    rep.verdict = rep.slack >= -1e-9 ? Verdict::pass : Verdict::fail;
    return rep;
}

Report BridgeReport::to_report() const {
    Report r;
    r.add("check", "orlicz_lorentz_bridge").add("verdict", verdict);
    r.add("modular", modular).add("modular_gate", modular_gate ? "PASS" : "FAIL");
    r.add("normalization_integral", normalization.value);
    r.add("normalization_status", normalization.divergent ? "DIVERGENT" : "CONVERGED");
    if (lorentz) r.add("lorentz_norm", *lorentz);
    if (orlicz) r.add("orlicz_norm", *orlicz);
    if (lorentz && orlicz) r.add("slack", slack);
    return r;
}

// ---------------------------------------------------------------------------

namespace {

SampledFn cellwise_min(const SampledFn& a, const SampledFn& b) {
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[i] = std::min(a[i], b[i]);
    return SampledFn(a.grid_ptr(), 1, std::move(v));
}

SampledFn truncate(const SampledFn& f, double level) {
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = std::min(f[i], level);
    return SampledFn(f.grid_ptr(), 1, std::move(v));
}

SampledFn indicator(const GridPtr& g, const CellSet& e) {
    std::vector<double> v(g->size(), 0.0);
    for (std::size_t i : e.cells) v[i] = 1.0;
    return SampledFn(g, 1, std::move(v));
}

struct CheckBuilder {
    AxiomCheck check;
    explicit CheckBuilder(std::string name) { check.name = std::move(name); }
    void fail(const std::string& w) {
        if (check.verdict != Verdict::fail) check.witness = w;
        check.verdict = Verdict::fail;
    }
};

}  // namespace

const AxiomCheck* AxiomReport::find(std::string_view name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

AxiomReport axiom_suite(const TauFn& tau, std::span<const SampledFn> corpus, std::span<const CellSet> sets,
                        const AxiomOptions& opts) {
    if (corpus.empty()) throw InputError("axiom_suite: empty corpus");
    const GridPtr& grid = corpus.front().grid_ptr();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& f = corpus[i];
        if (!f.is_scalar() || !f.compatible(corpus.front()))
            throw InputError("axiom_suite: corpus entry " + std::to_string(i) + " is not scalar on the common grid");
        for (double v : f.values())
            if (v < 0.0) throw InputError("axiom_suite: corpus entry " + std::to_string(i) + " has a negative value");
    }
    const std::size_t n = corpus.size();
    const Exec ex = opts.exec;
    AxiomReport rep;
    rep.corpus_size = n;
    const auto rho = lorentz_values(corpus, tau, Route::distribution, ex);

    // (P1) zero iff, homogeneity, triangle
    CheckBuilder p1("P1");
    if (lorentz_value(SampledFn::zeros(grid), tau) != 0.0) p1.fail("rho(0) != 0");
    for (std::size_t i = 0; i < n; ++i) {
        const bool zero = std::all_of(corpus[i].values().begin(), corpus[i].values().end(), [](double v) { return v == 0.0; });
        if ((rho[i] == 0.0) != zero) p1.fail("zero-iff violated for f=" + std::to_string(i));
    }
    constexpr double kLambdas[] = {0.0, 0.5, 2.0, 3.75};
    std::vector<SampledFn> scaled;
    std::vector<std::pair<std::size_t, double>> scaled_src;
    for (std::size_t i = 0; i < n; ++i)
        for (double lam : kLambdas) {
            scaled.push_back(corpus[i] * lam);
            scaled_src.emplace_back(i, lam);
        }
    const auto rho_scaled = lorentz_values(scaled, tau, Route::distribution, ex);
    for (std::size_t k = 0; k < scaled.size(); ++k) {
        const auto [i, lam] = scaled_src[k];
        const double expect = lam * rho[i];
        const double err = expect > 0.0 ? std::abs(rho_scaled[k] - expect) / expect : std::abs(rho_scaled[k]);
        rep.max_homogeneity_error = std::max(rep.max_homogeneity_error, err);
        if (err > 1e-10) p1.fail("homogeneity f=" + std::to_string(i) + " lambda=" + format_double(lam));
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        pairs.emplace_back(i, (i + 1) % n);
        pairs.emplace_back(i, (7 * i + 3) % n);
    }
    std::vector<SampledFn> sums;
    for (const auto& [i, j] : pairs) sums.push_back(corpus[i] + corpus[j]);
    const auto rho_sums = lorentz_values(sums, tau, Route::distribution, ex);
    rep.min_triangle_slack = kInf;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs[k];
        const double slack = rho[i] + rho[j] - rho_sums[k];
        rep.min_triangle_slack = std::min(rep.min_triangle_slack, slack);
        if (slack < -1e-10) p1.fail(cell_note("triangle", i, j) + " slack=" + format_double(slack));
    }
    rep.checks.push_back(p1.check);

    // (P2) monotonicity: min(f, g) <= f
    CheckBuilder p2("P2");
    std::vector<SampledFn> mins;
    for (const auto& [i, j] : pairs) mins.push_back(cellwise_min(corpus[i], corpus[j]));
    const auto rho_mins = lorentz_values(mins, tau, Route::distribution, ex);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs[k];
        const double bound = std::min(rho[i], rho[j]);
        if (rho_mins[k] > bound + 1e-10 * std::max(1.0, bound))
            p2.fail(cell_note("min(f,g) exceeds", i, j) + " by " + format_double(rho_mins[k] - bound));
    }
    rep.checks.push_back(p2.check);

    // (P3) monotone convergence along truncations and scalings
    CheckBuilder p3("P3");
    const std::size_t levels = std::max<std::size_t>(opts.truncation_levels, 2);
    std::vector<SampledFn> seq;
    for (std::size_t i = 0; i < n; ++i) {
        const double top = *std::max_element(corpus[i].values().begin(), corpus[i].values().end());
        for (std::size_t k = 1; k <= levels; ++k) {
            const double level = (k == levels) ? top : top * static_cast<double>(k) / static_cast<double>(levels);
            seq.push_back(truncate(corpus[i], level));
        }
        for (std::size_t k = 1; k <= levels; ++k) seq.push_back(corpus[i] * (1.0 - std::ldexp(1.0, -static_cast<int>(k))));
    }
    const auto rho_seq = lorentz_values(seq, tau, Route::distribution, ex);
    for (std::size_t i = 0; i < n; ++i) {
        const double* tr = rho_seq.data() + i * 2 * levels;
        const double* sc = tr + levels;
        for (std::size_t k = 1; k < levels; ++k) {
            if (tr[k] < tr[k - 1] * (1.0 - 1e-12) || sc[k] < sc[k - 1] * (1.0 - 1e-12))
                p3.fail("rho(f_k) decreases for f=" + std::to_string(i) + " k=" + std::to_string(k));
        }
        if (std::abs(tr[levels - 1] - rho[i]) > 1e-12 * std::max(1.0, rho[i]))
            p3.fail("truncation sup != rho(f) for f=" + std::to_string(i));
        const double gap = rho[i] - sc[levels - 1];
        if (gap > std::ldexp(1.0, -static_cast<int>(levels)) * rho[i] * (1.0 + 1e-10) + 1e-12)
            p3.fail("scaled sequence does not approach rho(f) for f=" + std::to_string(i));
    }
    rep.checks.push_back(p3.check);

    // (P4) rho(chi_E) finite, equal to tau^-1(mu(E))
    CheckBuilder p4("P4");
    for (std::size_t s = 0; s < sets.size(); ++s) {
        const double v = lorentz_value(indicator(grid, sets[s]), tau);
        const double expect = tau.inverse(sets[s].measure);
        if (!std::isfinite(v) || std::abs(v - expect) > 1e-12 * std::max(1.0, expect))
            p4.fail("rho(chi_E) for E=" + std::to_string(s) + " is " + format_double(v));
    }
    rep.checks.push_back(p4.check);

    // (P5) integral_E f <= C(E) rho(f)
    CheckBuilder p5("P5");
    for (std::size_t s = 0; s < sets.size(); ++s) {
        SetConstant c;
        c.set_index = s;
        c.measure = sets[s].measure;
        c.analytic_bound = p5_analytic_bound(tau, c.measure);
        std::size_t worst = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (rho[i] == 0.0) continue;
            const double ratio = integrate(corpus[i], sets[s]) / rho[i];
            if (ratio > c.estimated) {
                c.estimated = ratio;
                worst = i;
            }
        }
        const bool ok = std::isfinite(c.estimated) &&
                        (!std::isfinite(c.analytic_bound) || c.estimated <= c.analytic_bound * (1.0 + 1e-10));
        c.verdict = ok ? Verdict::pass : Verdict::fail;
        if (!ok) p5.fail("E=" + std::to_string(s) + " f=" + std::to_string(worst) + " ratio " + format_double(c.estimated));
        rep.constants.push_back(c);
    }
    rep.checks.push_back(p5.check);

    // subadditivity of f -> integral f*(s) (tau^-1)'(s) ds
    rep.min_weight_triangle_slack = kInf;
    if (opts.check_weight_route) {
        CheckBuilder sub("subadditivity_weight");
        std::vector<SampledFn> trio;
        for (std::size_t i = 0; i < n; ++i) {
            trio.push_back(corpus[i]);
            trio.push_back(corpus[(i + 1) % n]);
            trio.push_back(sums[2 * i]);
        }
        const auto w = lorentz_values(trio, tau, Route::rearrangement_weight, ex);
        for (std::size_t i = 0; i < n; ++i) {
            const double slack = w[3 * i] + w[3 * i + 1] - w[3 * i + 2];
            rep.min_weight_triangle_slack = std::min(rep.min_weight_triangle_slack, slack);
            if (slack < -1e-10) sub.fail(cell_note("weighted triangle", i, (i + 1) % n) + " slack=" + format_double(slack));
        }
        rep.checks.push_back(sub.check);
    }

    for (const auto& c : rep.checks) rep.verdict = combine(rep.verdict, c.verdict);
    return rep;
}

Report AxiomReport::to_report() const {
    Report r;
    r.add("check", "axiom_suite").add("verdict", verdict).add("corpus_size", corpus_size);
    for (const auto& c : checks) {
        r.add(c.name, c.verdict);
        if (!c.witness.empty()) r.add(c.name + ".witness", c.witness);
    }
    r.add("min_triangle_slack", min_triangle_slack);
    r.add("min_weight_triangle_slack", min_weight_triangle_slack);
    r.add("max_homogeneity_error", max_homogeneity_error);
    for (const auto& c : constants) {
        const std::string k = "P5.set" + std::to_string(c.set_index);
        r.add(k + ".measure", c.measure).add(k + ".estimated_C", c.estimated).add(k + ".analytic_bound", c.analytic_bound);
    }
    return r;
}

// ---------------------------------------------------------------------------

FatouReport fatou_check(std::span<const SampledFn> seq, const TauFn& tau, const std::optional<SampledFn>& limit) {
    if (seq.empty()) throw InputError("fatou_check: empty sequence");
    for (const auto& f : seq)
        if (!f.compatible(seq.front())) throw InputError("fatou_check: sequence mixes grids or target dimensions");
    SampledFn lim = limit ? *limit : seq.back();
    if (!limit && seq.size() >= 2 && !(seq[seq.size() - 1] == seq[seq.size() - 2]))
        throw InputError("fatou_check: sequence is not eventually constant and no limit was supplied");
    if (!lim.compatible(seq.front())) throw InputError("fatou_check: limit is on a different grid");

    const std::size_t n = seq.size();
    double prev = kInf;
    for (std::size_t k = n / 2; k < n; ++k) {
        const double d = seq[k].max_abs_diff(lim);
        if (d > prev * (1.0 + 1e-12)) {
            std::size_t worst = 0;
            double big = -1.0;
            for (std::size_t i = 0; i < seq[k].size(); ++i) {
                for (std::size_t c = 0; c < seq[k].target_dim(); ++c) {
                    const double e = std::abs(seq[k].value(i, c) - lim.value(i, c));
                    if (e > big) {
                        big = e;
                        worst = i;
                    }
                }
            }
            throw InputError("fatou_check: non-convergent cell " + std::to_string(worst) + " (term " + std::to_string(k) + ")");
        }
        prev = d;
    }

    FatouReport rep;
    rep.norms = lorentz_values(seq, tau, Route::distribution);
    rep.limit_norm = lorentz_value(lim, tau);
    double tail_min = kInf;
    rep.liminf_surrogate = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        tail_min = std::min(tail_min, rep.norms[k]);
        rep.liminf_surrogate = std::max(rep.liminf_surrogate, tail_min);
    }
    rep.tail_gap = lorentz_value(lim - seq.back(), tau);
    rep.verdict = rep.limit_norm <= rep.liminf_surrogate + rep.tail_gap + 1e-10 ? Verdict::pass : Verdict::fail;
    return rep;
}

Report FatouReport::to_report() const {
    Report r;
    r.add("check", "fatou").add("verdict", verdict);
    r.add("terms", norms.size()).add("limit_norm", limit_norm);
    r.add("liminf_surrogate", liminf_surrogate).add("tail_gap", tail_gap);
    r.add("note", "liminf replaced by max_n min_{k>=n} over the supplied finite sequence");
    return r;
}

}  // namespace lorentzfe
