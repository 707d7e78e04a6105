#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lorentzfe/report.hpp"

namespace lorentzfe {

/// psi(t) = coef * t^exponent. Carried alongside the evaluators so that the
/// derived tau-transform can use exact closed forms.
struct PowerLaw {
    double coef;
    double exponent;
};

/// A Young function given by closed-form evaluators.
///
/// `eval` and `right_deriv` are mandatory. `inverse` is optional; without it
/// the inverse is computed by monotone bisection on `eval`. Instances are
/// immutable and safe to share between threads.
class YoungFn {
public:
    using Scalar = std::function<double(double)>;

    YoungFn(std::string label, Scalar eval, Scalar right_deriv, Scalar inverse = {},
            std::optional<double> delta2_const = std::nullopt,
            std::optional<PowerLaw> power = std::nullopt);

    double operator()(double t) const { return eval_(t); }
    double right_deriv(double t) const { return deriv_(t); }
    double inverse(double v) const;

    bool has_closed_inverse() const { return static_cast<bool>(inverse_); }
    const std::optional<double>& delta2_const() const { return delta2_; }
    const std::optional<PowerLaw>& power_law() const { return power_; }
    const std::string& label() const { return label_; }

private:
    std::string label_;
    Scalar eval_;
    Scalar deriv_;
    Scalar inverse_;
    std::optional<double> delta2_;
    std::optional<PowerLaw> power_;
};

/// psi_m(t) = m t^m, the family used for the classical Lorentz spaces.
/// Throws InputError unless m > 1 (condition (N) fails at 0 for m = 1).
YoungFn make_power_young(double m);

/// Psi(t) = coef * t^exponent for exponent >= 1, coef > 0. Used for Orlicz
/// (Luxemburg) norms, e.g. Psi(t) = t^2 is make_scaled_power_young(1, 2).
YoungFn make_scaled_power_young(double coef, double exponent);

/// Resolves a family name ("power", "scaled-power", "poly23") and parameters
/// to a Young function. "poly23" is t^2 + t^3 and exists to exercise the
/// fallback (non-closed-form) paths. Throws InputError on unknown names.
YoungFn make_young(const std::string& family, double param, double coef = 1.0);

/// tau(t) = 1 / psi(1/t), tau(0) = 0.
class TauFn {
public:
    double operator()(double t) const;
    double inverse(double s) const;
    /// Right derivative tau'_r. Closed form for power laws, otherwise a forward
    /// difference with step max(1e-8, 1e-8 t).
    double right_deriv(double t) const;
    /// (tau^-1)'(s) for s > 0: closed form for power laws, otherwise
    /// 1 / tau'_r(tau^-1(s)).
    double inverse_deriv(double s) const;
    /// Inverse of tau'_r, i.e. (tau'_r)^-1(u).
    double right_deriv_inverse(double u) const;

    bool has_closed_form() const { return source_.power_law().has_value(); }
    const YoungFn& source() const { return source_; }
    const std::string& label() const { return source_.label(); }

    /// tau viewed as a Young function, for running the psi audits on it.
    YoungFn as_young() const;

private:
    friend TauFn derive_tau(const YoungFn& psi);
    explicit TauFn(YoungFn psi) : source_(std::move(psi)) {}

    YoungFn source_;
};

/// Builds tau from psi. Throws NumericalError if psi(1/t) is 0 or infinite at
/// a sampled interior t in [1e-8, 1e8].
TauFn derive_tau(const YoungFn& psi);

/// Logarithmically spaced samples covering [lo, hi], `per_decade` per decade.
std::vector<double> log_grid(double lo, double hi, std::size_t per_decade);

struct Delta2Report {
    Verdict verdict = Verdict::pass;
    double d = 0.0;
    double max_ratio = 0.0;
    double argmax_t = 0.0;
    std::optional<double> witness;  // sample that violates the bound
    Report to_report() const;
};

/// psi(2t) <= d psi(t) on every grid point (relative tolerance 1e-12).
Delta2Report check_delta2(const YoungFn& psi, std::span<const double> grid, double d);

struct LimitSequence {
    std::vector<double> values;  // j = 1..12
    Verdict verdict = Verdict::pass;
};

struct ConditionNReport {
    Verdict verdict = Verdict::pass;
    LimitSequence at_zero;      // psi(t)/t at t = 10^-j
    LimitSequence at_infinity;  // t/psi(t) at t = 10^j
    Report to_report() const;
};

/// Numerical evidence for lim psi(t)/t = lim t/psi(t) = 0 (never a proof).
///
/// Each sequence is PASS when strictly decreasing and either ending below
/// 1e-6 or having decayed by at least five orders of magnitude across the
/// schedule; FAIL when it does not decay at all; INCONCLUSIVE otherwise.
ConditionNReport check_condition_N(const YoungFn& psi);

struct YoungShapeReport {
    Verdict verdict = Verdict::pass;
    bool zero_at_origin = true;
    bool nondecreasing = true;
    bool midpoint_convex = true;
    bool derivative_nondecreasing = true;
    double max_inverse_error = 0.0;
    std::string witness;
    Report to_report() const;
};

/// Checks the YoungFn invariants on `grid`: psi(0) = 0, monotonicity,
/// midpoint convexity (absolute slack 1e-9), inverse round trip (relative
/// 1e-10) and monotone right derivative.
YoungShapeReport check_young_shape(const YoungFn& psi, std::span<const double> grid);

}  // namespace lorentzfe
