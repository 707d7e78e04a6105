#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lorentzfe/report.hpp"
#include "lorentzfe/sampled.hpp"

namespace lorentzfe {

/// One strictly monotone C^1 piece of a map, defined on [lo, hi).
struct Branch {
    double lo;
    double hi;
    std::function<double(double)> map;
    std::function<double(double)> deriv;
    std::string form;  // "affine", "mobius", "expr", ...

    static Branch affine(double lo, double hi, double offset, double slope);
    /// (a x + b) / (c x + d); the denominator must not vanish on [lo, hi].
    static Branch mobius(double lo, double hi, double a, double b, double c, double d);

    bool increasing() const { return map(hi) > map(lo); }
    /// Closed image interval [min, max] of the branch on [a, b] within [lo, hi].
    std::pair<double, double> image(double a, double b) const;
};

/// Finite union of strictly monotone C^1 branches on the real line. Branch
/// intervals are pairwise disjoint and sorted.
class PiecewiseMap {
public:
    explicit PiecewiseMap(std::vector<Branch> branches);

    static PiecewiseMap identity(double lo, double hi);

    const std::vector<Branch>& branches() const { return branches_; }

    /// Index of the branch whose interval contains x.
    std::optional<std::size_t> branch_at(double x) const;
    /// F(x) and F'(x); nullopt outside every branch.
    std::optional<double> operator()(double x) const;
    std::optional<double> derivative(double x) const;

    /// Images of the branch pieces cut to the boxes of a 1-D domain.
    std::vector<std::pair<double, double>> image_pieces(const Domain& e) const;

private:
    std::vector<Branch> branches_;
};

/// Tensor-product self-map of R^k: one PiecewiseMap per axis.
/// J(x) = prod_a F_a'(x_a).
class TensorMap {
public:
    TensorMap(PiecewiseMap single);  // NOLINT: k = 1 maps convert implicitly
    explicit TensorMap(std::vector<PiecewiseMap> axes);

    std::size_t dim() const { return axes_.size(); }
    const std::vector<PiecewiseMap>& axes() const { return axes_; }

    /// Writes F(x) into out; false if x is outside a branch on some axis.
    bool apply(std::span<const double> x, std::span<double> out) const;
    /// Jacobian determinant; nullopt outside the branches.
    std::optional<double> jacobian(std::span<const double> x) const;

private:
    std::vector<PiecewiseMap> axes_;
};

struct IndicatrixResult {
    int count = 0;
    bool ambiguous = false;  // y hit a branch-endpoint image (null set)
    std::vector<double> preimages;
};

/// N_F(y, E) = card(F^-1(y) intersect E) for 1-D maps, preimages located by
/// monotone bisection on each branch piece.
IndicatrixResult banach_indicatrix(const PiecewiseMap& f, const Domain& e, double y);

struct ChangeOfVariablesReport {
    double lhs = 0.0;  // integral over E of (H o F) |J_F|
    double rhs = 0.0;  // integral of H N_F(., E)
    double relative_gap = 0.0;
    double tolerance = 0.0;
    std::size_t ambiguous_probes = 0;
    Verdict verdict = Verdict::pass;
    Report to_report() const;
};

/// Evaluates both sides of the change-of-variables formula. The left side is
/// a midpoint rule on `cells` uniform cells per box of E, with H looked up by
/// cell (0 outside H's grid); the right side is the cell sum of H times the
/// indicatrix at H's cell midpoints. Throws InputError if H has a negative
/// cell or the map is not 1-D.
ChangeOfVariablesReport change_of_variables_check(const PiecewiseMap& f, const SampledFn& h, const Domain& e,
                                                  std::size_t cells = 4096, double tol = 1e-3);

}  // namespace lorentzfe
