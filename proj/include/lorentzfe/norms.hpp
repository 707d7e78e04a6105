#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lorentzfe/kernels.hpp"
#include "lorentzfe/report.hpp"
#include "lorentzfe/sampled.hpp"
#include "lorentzfe/young.hpp"

namespace lorentzfe {

/// How a norm was evaluated.
///  - distribution:          sum_i tau^-1(mu_i) (s_{i+1} - s_i) over the step distribution
///  - rearrangement_tau:     integral of f*(tau(s)) ds, breakpoints at tau^-1 of f*'s jumps
///  - rearrangement_weight:  integral of f*(s) (tau^-1)'(s) ds, weight integrated per block
///  - luxemburg:             Orlicz (Luxemburg) norm
enum class Route { distribution, rearrangement_tau, rearrangement_weight, luxemburg };

std::string_view to_string(Route r);
std::optional<Route> parse_route(std::string_view name);

inline constexpr Route kLorentzRoutes[] = {Route::distribution, Route::rearrangement_tau,
                                           Route::rearrangement_weight};

struct NormValue {
    double value = 0.0;
    Route route = Route::distribution;
    std::string psi_label;
};

/// ||f||_{L^{psi,1}} for scalar f. Throws InputError for vector-valued f
/// (use lorentz_norm_vector) and NumericalError if tau^-1 cannot be evaluated.
NormValue lorentz_norm(const SampledFn& f, const TauFn& tau, Route route = Route::distribution);

/// ||f||_{L^{psi,1}(V)} = || ||f||_V ||, distribution route.
NormValue lorentz_norm_vector(const SampledFn& f, const TauFn& tau, Exec exec = Exec::parallel);

/// Norm of f whatever its target dimension (lifted when d > 1), as a plain
/// double. This is the rho used by the solver and the property suites.
double lorentz_value(const SampledFn& f, const TauFn& tau, Exec exec = Exec::parallel);

/// Norms of many functions; the parallel policy fans out over functions.
std::vector<double> lorentz_values(std::span<const SampledFn> fs, const TauFn& tau, Route route,
                                   Exec exec = Exec::parallel);

/// integral over Omega of Psi(|u| / scale) (u scalar), exact cell sum.
double orlicz_modular(const SampledFn& u, const YoungFn& big_psi, double scale = 1.0);

/// Luxemburg norm inf{t > 0 : modular(u / t) <= 1} by bisection to relative
/// bracket width 1e-10. Throws NumericalError if no bracket is found within
/// 60 doublings/halvings.
NormValue luxemburg_norm(const SampledFn& u, const YoungFn& big_psi);

/// integral over [0, measure] of ds / tau^-1(s): the constant bounding
/// integral_E f <= C rho(f) for mu(E) = measure. Infinity when divergent.
double p5_analytic_bound(const TauFn& tau, double measure);

// ---------------------------------------------------------------------------

/// Truncated evaluation of integral_0^inf (tau'_r)^-1(1 / psi'(t)) dt over
/// symmetric decade windows [10^-J, 10^J], J = 1..12.
struct NormalizationIntegral {
    std::vector<double> window_values;
    double value = 0.0;  // last window
    bool divergent = false;
};

NormalizationIntegral bridge_normalization_integral(const TauFn& tau);

struct BridgeReport {
    double modular = 0.0;
    bool modular_gate = false;  // modular <= 1
    NormalizationIntegral normalization;
    std::optional<double> lorentz;  // ||h||_{L^{psi,1}}
    std::optional<double> orlicz;   // ||h||_{L^Psi}
    double slack = 0.0;             // 2 orlicz - lorentz
    Verdict verdict = Verdict::inconclusive;
    Report to_report() const;
};

/// Orlicz-Lorentz bridge verifier for a user-supplied Psi. When the modular
/// gate fails no inequality is claimed and the verdict is INCONCLUSIVE.
BridgeReport check_orlicz_lorentz_bridge(const SampledFn& h, const YoungFn& big_psi, const YoungFn& psi);

// ---------------------------------------------------------------------------

struct AxiomCheck {
    std::string name;
    Verdict verdict = Verdict::pass;
    std::string witness;
};

struct SetConstant {
    std::size_t set_index = 0;
    double measure = 0.0;
    double estimated = 0.0;       // max over corpus of integral_E f / rho(f)
    double analytic_bound = 0.0;  // p5_analytic_bound(tau, measure)
    Verdict verdict = Verdict::pass;
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;  // P1..P5, subadditivity_weight
    std::vector<SetConstant> constants;
    double min_triangle_slack = 0.0;
    double min_weight_triangle_slack = 0.0;
    double max_homogeneity_error = 0.0;
    std::size_t corpus_size = 0;
    Verdict verdict = Verdict::pass;

    const AxiomCheck* find(std::string_view name) const;
    Report to_report() const;
};

struct AxiomOptions {
    std::size_t truncation_levels = 8;
    bool check_weight_route = true;
    Exec exec = Exec::parallel;
};

/// Banach-function-norm axioms (P1)-(P5) for rho = distribution-route
/// Lorentz norm, plus subadditivity of the weighted-rearrangement route,
/// evaluated on a corpus of nonnegative scalar functions sharing one grid.
AxiomReport axiom_suite(const TauFn& tau, std::span<const SampledFn> corpus, std::span<const CellSet> sets,
                        const AxiomOptions& opts = {});

// ---------------------------------------------------------------------------

struct FatouReport {
    std::vector<double> norms;
    double limit_norm = 0.0;
    double liminf_surrogate = 0.0;  // max_n min_{k >= n} rho(f_k)
    double tail_gap = 0.0;          // rho(lim - f_last)
    Verdict verdict = Verdict::pass;
    Report to_report() const;
};

/// Finite-sequence surrogate of rho(lim f_n) <= liminf rho(f_n).
///
/// `limit` may be omitted only for sequences whose last two terms coincide.
/// The sequence is rejected (InputError) unless max_cell |f_n - lim| is
/// nonincreasing over its second half. PASS iff
/// rho(lim) <= liminf_surrogate + tail_gap + 1e-10.
FatouReport fatou_check(std::span<const SampledFn> seq, const TauFn& tau,
                        const std::optional<SampledFn>& limit = std::nullopt);

}  // namespace lorentzfe
