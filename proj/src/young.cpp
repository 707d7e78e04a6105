#include "lorentzfe/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lorentzfe/detail/bisect.hpp"
#include "lorentzfe/errors.hpp"

namespace lorentzfe {

namespace {

constexpr double kConvexSlack = 1e-9;
constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string fmt_label(const std::string& prefix, double v) { return prefix + format_double(v); }

}  // namespace

YoungFn::YoungFn(std::string label, Scalar eval, Scalar right_deriv, Scalar inverse,
                 std::optional<double> delta2_const, std::optional<PowerLaw> power)
    : label_(std::move(label)),
      eval_(std::move(eval)),
      deriv_(std::move(right_deriv)),
      inverse_(std::move(inverse)),
      delta2_(delta2_const),
      power_(power) {
    if (!eval_ || !deriv_) throw InputError("YoungFn '" + label_ + "': eval and right_deriv are required");
    if (delta2_ && !(*delta2_ > 1.0)) throw InputError("YoungFn '" + label_ + "': delta2 constant must be > 1");
}

double YoungFn::inverse(double v) const {
    if (inverse_) return inverse_(v);
    return detail::monotone_inverse(eval_, v);
}

YoungFn make_scaled_power_young(double coef, double exponent) {
    if (!(exponent >= 1.0) || !std::isfinite(exponent))
        throw InputError("scaled power Young function needs a finite exponent >= 1");
    if (!(coef > 0.0) || !std::isfinite(coef)) throw InputError("scaled power Young function needs coef > 0");
    const double c = coef;
    const double p = exponent;
    return YoungFn(
        fmt_label("power[" + format_double(c) + "]^", p),
        [c, p](double t) { return c * std::pow(t, p); },
        [c, p](double t) {
            if (p == 1.0) return c;
            return c * p * std::pow(t, p - 1.0);
        },
        [c, p](double v) { return std::pow(v / c, 1.0 / p); },
        p > 1.0 ? std::optional<double>(std::pow(2.0, p)) : std::nullopt,
        PowerLaw{c, p});
}

YoungFn make_power_young(double m) {
    if (!(m > 1.0) || !std::isfinite(m))
        throw InputError("power Young function psi_m(t) = m t^m needs finite m > 1, got " + format_double(m));
    return YoungFn(
        fmt_label("psi_", m),
        [m](double t) { return m * std::pow(t, m); },
        [m](double t) { return m * m * std::pow(t, m - 1.0); },
        [m](double v) { return std::pow(v / m, 1.0 / m); },
        std::pow(2.0, m),
        PowerLaw{m, m});
}

YoungFn make_young(const std::string& family, double param, double coef) {
    if (family == "power") return make_power_young(param);
    if (family == "scaled-power") return make_scaled_power_young(coef, param);
    if (family == "poly23") {
        return YoungFn("poly23", [](double t) { return t * t + t * t * t; },
                       [](double t) { return 2.0 * t + 3.0 * t * t; }, {}, 8.0);
    }
    throw InputError("unknown Young function family '" + family + "' (expected power, scaled-power or poly23)");
}

// ---------------------------------------------------------------------------

double TauFn::operator()(double t) const {
    if (t == 0.0) return 0.0;
    if (const auto& pw = source_.power_law()) return std::pow(t, pw->exponent) / pw->coef;
    return 1.0 / source_(1.0 / t);
}

double TauFn::inverse(double s) const {
    if (s == 0.0) return 0.0;
    if (const auto& pw = source_.power_law()) return std::pow(pw->coef * s, 1.0 / pw->exponent);
    // tau(t) = s  <=>  psi(1/t) = 1/s
    return 1.0 / source_.inverse(1.0 / s);
}

double TauFn::right_deriv(double t) const {
    if (const auto& pw = source_.power_law()) {
        const double p = pw->exponent;
        if (p == 1.0) return 1.0 / pw->coef;
        return p * std::pow(t, p - 1.0) / pw->coef;
    }
    const double h = std::max(1e-8, 1e-8 * t);
    return ((*this)(t + h) - (*this)(t)) / h;
}

double TauFn::inverse_deriv(double s) const {
    if (const auto& pw = source_.power_law()) {
        // tau^-1(s) = (c s)^(1/p)
        const double q = 1.0 / pw->exponent;
        return q * std::pow(pw->coef, q) * std::pow(s, q - 1.0);
    }
    return 1.0 / right_deriv(inverse(s));
}

double TauFn::right_deriv_inverse(double u) const {
    if (const auto& pw = source_.power_law()) {
        const double p = pw->exponent;
        if (p == 1.0) throw NumericalError("tau'_r is constant for exponent 1; no inverse");
        return std::pow(u * pw->coef / p, 1.0 / (p - 1.0));
    }
    return detail::monotone_inverse([this](double t) { return t == 0.0 ? 0.0 : right_deriv(t); }, u);
}

YoungFn TauFn::as_young() const {
    std::optional<PowerLaw> pw;
    if (const auto& src = source_.power_law()) pw = PowerLaw{1.0 / src->coef, src->exponent};
    TauFn self = *this;
    return YoungFn(
        "tau(" + source_.label() + ")", [self](double t) { return self(t); },
        [self](double t) { return self.right_deriv(t); }, [self](double s) { return self.inverse(s); },
        source_.delta2_const(), pw);
}

TauFn derive_tau(const YoungFn& psi) {
    for (double t : log_grid(1e-8, 1e8, 4)) {
        const double v = psi(1.0 / t);
        if (!(v > 0.0) || std::isinf(v)) {
            std::ostringstream os;
            os << "tau undefined for '" << psi.label() << "': psi(1/t) = " << format_double(v)
               << " at t = " << format_double(t);
            throw NumericalError(os.str());
        }
    }
    return TauFn(psi);
}

// ---------------------------------------------------------------------------

std::vector<double> log_grid(double lo, double hi, std::size_t per_decade) {
    if (!(lo > 0.0) || !(hi > lo) || per_decade == 0) throw InputError("log_grid: need 0 < lo < hi, per_decade > 0");
    const double l0 = std::log10(lo);
    const double l1 = std::log10(hi);
    const auto n = static_cast<std::size_t>(std::ceil((l1 - l0) * static_cast<double>(per_decade)));
    std::vector<double> out;
    out.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double e = l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(n);
        out.push_back(std::pow(10.0, e));
    }
    return out;
}

Delta2Report check_delta2(const YoungFn& psi, std::span<const double> grid, double d) {
    if (!(d > 1.0) || !std::isfinite(d)) throw InputError("check_delta2: d must lie in (1, inf)");
    Delta2Report rep;
    rep.d = d;
    for (double t : grid) {
        if (!(t > 0.0)) continue;
        const double a = psi(t);
        const double b = psi(2.0 * t);
        if (a == 0.0) {
            if (b > 0.0) {
                rep.verdict = Verdict::fail;
                rep.max_ratio = std::numeric_limits<double>::infinity();
                rep.argmax_t = t;
                rep.witness = t;
                return rep;
            }
            continue;
        }
        const double ratio = b / a;
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.argmax_t = t;
        }
        if (ratio > d * (1.0 + 1e-12) && !rep.witness) rep.witness = t;
    }
    rep.verdict = rep.witness ? Verdict::fail : Verdict::pass;
    return rep;
}

Report Delta2Report::to_report() const {
    Report r;
    r.add("check", "delta2").add("verdict", verdict).add("d", d).add("max_ratio", max_ratio).add("argmax_t", argmax_t);
    if (witness) r.add("witness_t", *witness);
    return r;
}

namespace {

LimitSequence judge_decay(std::vector<double> vals) {
    LimitSequence seq;
    bool strictly = true;
    bool any_drop = false;
    for (std::size_t i = 1; i < vals.size(); ++i) {
        if (!(vals[i] < vals[i - 1])) strictly = false;
        if (vals[i] < vals[i - 1] * (1.0 - 1e-12)) any_drop = true;
    }
    const double first = vals.front();
    const double last = vals.back();
    if (!any_drop || !(last < first * (1.0 - 1e-12))) {
        seq.verdict = Verdict::fail;
    } else if (strictly && (last < 1e-6 || last <= 1e-5 * first)) {
        seq.verdict = Verdict::pass;
    } else {
        seq.verdict = Verdict::inconclusive;
    }
    seq.values = std::move(vals);
    return seq;
}

}  // namespace

ConditionNReport check_condition_N(const YoungFn& psi) {
    std::vector<double> zero, inf;
    for (int j = 1; j <= 12; ++j) {
        const double small = std::pow(10.0, -j);
        const double big = std::pow(10.0, j);
        zero.push_back(psi(small) / small);
        inf.push_back(big / psi(big));
    }
    ConditionNReport rep;
    rep.at_zero = judge_decay(std::move(zero));
    rep.at_infinity = judge_decay(std::move(inf));
    rep.verdict = combine(rep.at_zero.verdict, rep.at_infinity.verdict);
    return rep;
}

Report ConditionNReport::to_report() const {
    Report r;
    r.add("check", "condition_N").add("verdict", verdict);
    r.add("at_zero", at_zero.verdict).add("at_zero_last", at_zero.values.back());
    r.add("at_infinity", at_infinity.verdict).add("at_infinity_last", at_infinity.values.back());
    r.add("evidence", "numerical");
    return r;
}

YoungShapeReport check_young_shape(const YoungFn& psi, std::span<const double> grid) {
    YoungShapeReport rep;
    auto note = [&](const std::string& what) {
        if (rep.witness.empty()) rep.witness = what;
    };
    if (psi(0.0) != 0.0) {
        rep.zero_at_origin = false;
        note("psi(0) = " + format_double(psi(0.0)));
    }
    std::vector<double> ts(grid.begin(), grid.end());
    std::sort(ts.begin(), ts.end());
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double a = psi(ts[i - 1]);
        const double b = psi(ts[i]);
        if (b < a) {
            rep.nondecreasing = false;
            note("decrease at t = " + format_double(ts[i]));
        }
        const double mid = psi(0.5 * (ts[i - 1] + ts[i]));
        const double chord = 0.5 * (a + b);
        if (mid > chord + kConvexSlack + 4.0 * kEps * std::abs(chord)) {
            rep.midpoint_convex = false;
            note("midpoint convexity fails on [" + format_double(ts[i - 1]) + ", " + format_double(ts[i]) + "]");
        }
        if (ts.size() > 2 && i + 1 < ts.size()) {
            const double c = psi(ts[i + 1]);
            const double m2 = psi(0.5 * (ts[i - 1] + ts[i + 1]));
            const double ch2 = 0.5 * (a + c);
            if (m2 > ch2 + kConvexSlack + 4.0 * kEps * std::abs(ch2)) {
                rep.midpoint_convex = false;
                note("midpoint convexity fails on [" + format_double(ts[i - 1]) + ", " + format_double(ts[i + 1]) + "]");
            }
        }
        const double da = psi.right_deriv(ts[i - 1]);
        const double db = psi.right_deriv(ts[i]);
        if (db < da * (1.0 - 1e-12)) {
            rep.derivative_nondecreasing = false;
            note("right derivative decreases at t = " + format_double(ts[i]));
        }
    }
    for (double t : ts) {
        const double v = psi(t);
        if (!(v > 0.0) || std::isinf(v)) continue;
        const double back = psi(psi.inverse(v));
        rep.max_inverse_error = std::max(rep.max_inverse_error, std::abs(back - v) / v);
    }
    if (rep.max_inverse_error > 1e-10) note("inverse round trip error " + format_double(rep.max_inverse_error));
    const bool ok = rep.zero_at_origin && rep.nondecreasing && rep.midpoint_convex && rep.derivative_nondecreasing &&
                    rep.max_inverse_error <= 1e-10;
    rep.verdict = ok ? Verdict::pass : Verdict::fail;
    return rep;
}

Report YoungShapeReport::to_report() const {
    Report r;
    r.add("check", "young_shape").add("verdict", verdict);
    r.add("zero_at_origin", zero_at_origin).add("nondecreasing", nondecreasing);
    r.add("midpoint_convex", midpoint_convex).add("derivative_nondecreasing", derivative_nondecreasing);
    r.add("max_inverse_error", max_inverse_error);
    if (!witness.empty()) r.add("witness", witness);
    return r;
}

}  // namespace lorentzfe
