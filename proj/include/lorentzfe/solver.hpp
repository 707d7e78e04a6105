#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lorentzfe/norms.hpp"
#include "lorentzfe/operator.hpp"

namespace lorentzfe {

/// Term norms grew faster than 2 alpha + 0.05 for three consecutive steps.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// solve was asked to run on an instance whose contraction audit failed.
class AuditRefused : public std::runtime_error {
public:
    explicit AuditRefused(AuditReport r)
        : std::runtime_error("contraction audit failed; rerun with force to override"), report(std::move(r)) {}
    AuditReport report;
};

struct TraceRow {
    std::size_t m = 0;
    double term_norm = 0.0;     // ||P^m h0||
    double partial_norm = 0.0;  // ||S_m||, S_m = sum_{n<m} P^n h0
    double tail_bound = 0.0;    // (2 alpha)^m / (1 - 2 alpha) ||h0||
    double residual = 0.0;      // ||S_m - P S_m - h0||
};

enum class StopReason { tolerance, max_steps };

struct IterationTrace {
    std::vector<TraceRow> rows;
    StopReason stop = StopReason::max_steps;
    bool forced = false;  // audit failed and was overridden
};

struct SolveOptions {
    std::optional<double> tol;  // default 1e-8 ||h0||
    std::size_t max_steps = 200;
    bool force = false;
    Exec exec = Exec::parallel;
};

struct Solution {
    SampledFn phi;
    IterationTrace trace;
    AuditReport audit;
    double tol = 0.0;
};

/// Neumann series S_m = sum_{n<m} P^n h0, stopped as soon as the a-priori
/// tail bound drops to tol. All norms use the distribution route.
Solution solve_elementary(const ProblemInstance& inst, const SolveOptions& opts = {});

/// ||phi - P phi - h0||.
NormValue residual(const SampledFn& phi, const ProblemInstance& inst, Exec exec = Exec::parallel);

/// ||sum_{k>=m} P^k h0||, summed until terms fall below 1e-17 of the total.
/// Compared with the a-priori bound this avoids the cancellation in phi* - S_m.
double tail_norm(const ProblemInstance& inst, std::size_t m, Exec exec = Exec::parallel);

struct UniquenessReport {
    std::vector<double> distances;  // pairwise, (i, j) with i < j, row-major
    double max_distance = 0.0;
    double bound = 0.0;
    Verdict verdict = Verdict::pass;
    Report to_report() const;
};

/// Picard iteration x <- P x + h0 from every start; PASS iff all pairwise
/// distances are <= 2 (2 alpha)^steps / (1 - 2 alpha) max ||start|| + 1e-12.
UniquenessReport uniqueness_probe(const ProblemInstance& inst, std::span<const SampledFn> starts, std::size_t steps,
                                  Exec exec = Exec::parallel);

Report certificate(const Solution& s, const ProblemInstance& inst);

}  // namespace lorentzfe
