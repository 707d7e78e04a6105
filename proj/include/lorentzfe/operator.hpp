#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lorentzfe/kernels.hpp"
#include "lorentzfe/maps.hpp"
#include "lorentzfe/report.hpp"
#include "lorentzfe/sampled.hpp"
#include "lorentzfe/young.hpp"

namespace lorentzfe {

/// Data of phi = sum_n g_n (phi o f_n) + h0 on a sampled domain.
struct ProblemInstance {
    std::string name = "instance";
    GridPtr grid;
    std::vector<TensorMap> maps;     // f_1 .. f_N
    std::vector<SampledFn> coeffs;   // g_1 .. g_N, scalar, on grid
    SampledFn h0;                    // scalar or R^d valued
    int K = 1;                       // declared multiplicity bound
    int L = 1;                       // declared overlap order
    double alpha = 0.0;              // contraction constant, [0, 1/2)
    YoungFn psi = make_power_young(2.0);

    std::size_t N() const { return maps.size(); }
    /// Throws InputError on inconsistent sizes, grids or constants.
    void validate() const;
    /// Same instance with h0 replaced (grid must match).
    ProblemInstance with_h0(SampledFn h) const;
};

/// P phi = sum_n g_n (phi o f_n), realized as a cell table: the midpoint of
/// cell i is mapped by f_n and looked up under the half-open convention.
class TransferOperator {
public:
    explicit TransferOperator(const ProblemInstance& inst);

    SampledFn apply(const SampledFn& phi, Exec exec = Exec::parallel) const;

    const kernels::TransferTable& table() const { return table_; }
    /// Midpoints that fell outside the domain (within 1e-12) or were clamped.
    std::size_t clamped() const { return clamped_; }

private:
    GridPtr grid_;
    kernels::TransferTable table_;
    std::size_t clamped_ = 0;
};

/// One-shot P phi. Rejects instances whose maps send more than 0.1% of the
/// midpoints farther than 1e-12 outside the domain.
SampledFn apply_P(const SampledFn& phi, const ProblemInstance& inst, Exec exec = Exec::parallel);

/// Essential multiplicity of a 1-D branch map over `omega`, probed at
/// `probes` evenly spaced interior points per box. For tensor maps the
/// per-axis estimates multiply (single-box domains only).
int estimate_multiplicity(const PiecewiseMap& f, const Domain& omega, std::size_t probes = 4096);
int estimate_multiplicity(const TensorMap& f, const Domain& omega, std::size_t probes = 4096);

struct OverlapEntry {
    std::vector<std::size_t> maps;  // 0-based, increasing
    double measure = 0.0;
};

struct OverlapEstimate {
    int L = 1;
    std::vector<OverlapEntry> table;  // every examined subset of size >= 2
};

/// Largest l such that the images of some l maps intersect in positive
/// measure, by exact interval arithmetic on branch images.
OverlapEstimate estimate_overlap_L(const std::vector<TensorMap>& maps, const Domain& omega);

struct AuditReport {
    std::vector<int> multiplicity;   // per map
    OverlapEstimate overlap;
    std::vector<double> map_bound;   // ess sup of |g_n| max{KL/|J|, N} per map
    double worst_ratio = 0.0;        // smallest alpha the grid allows
    std::size_t worst_map = 0;
    std::size_t worst_cell = 0;
    double worst_x = 0.0;            // first coordinate of the witness midpoint
    bool contraction_ok = true;
    bool K_ok = true;
    bool L_ok = true;
    Verdict verdict = Verdict::pass;
    Report to_report() const;
};

/// Checks |g_n(x)| <= alpha min{|J_n(x)| / (K L), 1/N} + 1e-12 at every cell
/// midpoint, plus the declared K and L against their estimates. A PASS is
/// evidence at grid resolution, a FAIL is authoritative.
AuditReport audit_contraction(const ProblemInstance& inst);

}  // namespace lorentzfe
