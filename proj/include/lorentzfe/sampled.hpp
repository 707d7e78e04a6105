#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include "lorentzfe/errors.hpp"
#include "lorentzfe/kernels.hpp"

namespace lorentzfe {

/// Half-open axis-aligned box [lo, hi) in R^k.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t dim() const { return lo.size(); }
    double volume() const;
    bool contains(std::span<const double> x) const;
};

/// Finite union of pairwise disjoint boxes of a common dimension.
class Domain {
public:
    explicit Domain(std::vector<Box> boxes);

    static Domain interval(double lo, double hi);
    static Domain intervals(const std::vector<std::pair<double, double>>& pieces);

    std::size_t dim() const { return dim_; }
    const std::vector<Box>& boxes() const { return boxes_; }
    double measure() const { return measure_; }
    bool contains(std::span<const double> x) const;

private:
    std::vector<Box> boxes_;
    std::size_t dim_ = 0;
    double measure_ = 0.0;
};

/// Uniform cell partition of a Domain: every box split into M cells per axis.
/// Cells are numbered box by box; inside a box the first axis runs fastest.
class Grid {
public:
    Grid(Domain domain, std::size_t cells_per_axis);

    const Domain& domain() const { return domain_; }
    std::size_t dim() const { return domain_.dim(); }
    std::size_t cells_per_axis() const { return m_; }
    std::size_t size() const { return size_; }

    double cell_measure(std::size_t cell) const { return box_cell_measure_[cell / cells_per_box_]; }
    /// Sum of all cell measures (accumulated in cell order).
    double total_measure() const { return total_; }

    void midpoint(std::size_t cell, std::span<double> out) const;
    double midpoint1(std::size_t cell) const;  // k = 1 only
    void cell_bounds(std::size_t cell, std::span<double> lo, std::span<double> hi) const;

    /// Cell containing x under the half-open convention, if any.
    std::optional<std::size_t> locate(std::span<const double> x) const;

    struct Clamped {
        std::size_t cell;
        double distance;  // Euclidean distance from x to the domain (0 if inside)
    };
    /// Cell containing x, or the nearest boundary cell of the nearest box.
    Clamped locate_clamped(std::span<const double> x) const;

    /// Same geometry (domain boxes and M) as `other`.
    bool same_shape(const Grid& other) const;

private:
    std::size_t cell_in_box(std::size_t box, std::span<const double> x) const;

    Domain domain_;
    std::size_t m_;
    std::size_t cells_per_box_;
    std::size_t size_;
    std::vector<double> box_cell_measure_;
    double total_ = 0.0;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(Domain domain, std::size_t cells_per_axis);

/// Piecewise-constant function on a Grid with values in R^d (d = 1: scalar).
/// Values are stored cell-major: value(cell, c) = values()[cell * d + c].
/// Immutable after construction.
class SampledFn {
public:
    SampledFn(GridPtr grid, std::size_t target_dim, std::vector<double> values);

    static SampledFn zeros(GridPtr grid, std::size_t target_dim = 1);
    static SampledFn constant(GridPtr grid, double c);
    static SampledFn constant(GridPtr grid, std::span<const double> c);

    /// Samples f at cell midpoints. f takes either a double (k = 1 grids)
    /// or a std::span<const double> of length k.
    template <class F>
    static SampledFn from_midpoints(GridPtr grid, F&& f);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    std::size_t size() const { return grid_->size(); }
    std::size_t target_dim() const { return dim_; }
    bool is_scalar() const { return dim_ == 1; }

    std::span<const double> values() const { return values_; }
    double operator[](std::size_t cell) const { return values_[cell * dim_]; }
    double value(std::size_t cell, std::size_t comp) const { return values_[cell * dim_ + comp]; }
    std::span<const double> at(std::size_t cell) const { return {values_.data() + cell * dim_, dim_}; }

    SampledFn component(std::size_t comp) const;
    /// Scalar f placed in coordinate `comp` of an R^d-valued function.
    SampledFn embed(std::size_t d, std::size_t comp) const;

    SampledFn operator+(const SampledFn& o) const;
    SampledFn operator-(const SampledFn& o) const;
    SampledFn operator*(double s) const;
    friend SampledFn operator*(double s, const SampledFn& f) { return f * s; }
    SampledFn abs() const;  // componentwise

    /// Cellwise max |f - o| over all components.
    double max_abs_diff(const SampledFn& o) const;

    bool compatible(const SampledFn& o) const;
    bool operator==(const SampledFn& o) const;

private:
    GridPtr grid_;
    std::size_t dim_;
    std::vector<double> values_;
};

/// Cellwise Euclidean norm of an R^d-valued function (scalar result).
SampledFn pointwise_norm(const SampledFn& f, Exec exec = Exec::parallel);

/// mu_f as a right-continuous step function: mu_f(s) = plateau_measures[i]
/// for s in [thresholds[i], thresholds[i+1]), last plateau extending to
/// infinity (it is always 0).
struct StepDistribution {
    std::vector<double> thresholds;
    std::vector<double> plateau_measures;

    double operator()(double s) const;
    bool operator==(const StepDistribution&) const = default;
};

/// Nonincreasing rearrangement f* on [0, mu(Omega)): f*(t) = values[j] for
/// t in [breakpoints[j], breakpoints[j+1]).
struct Rearrangement {
    std::vector<double> breakpoints;  // size n + 1, starts at 0
    std::vector<double> values;       // size n, strictly decreasing, >= 0

    double operator()(double t) const;
    /// Distribution function of f* itself (Lebesgue measure on [0, inf)).
    StepDistribution distribution() const;
    /// integral of f* over [0, upto].
    double integral(double upto) const;
};

/// Exact distribution function of |f| (f scalar).
StepDistribution distribution(const SampledFn& f);

/// Exact nonincreasing rearrangement of |f| (f scalar).
Rearrangement rearrangement(const SampledFn& f);

/// Cell-aligned measurable subset of a grid (cells whose midpoint lies in
/// the given region).
struct CellSet {
    std::vector<std::size_t> cells;
    double measure = 0.0;
};

CellSet cells_in(const Grid& grid, const Domain& region);

/// integral over E of f (scalar), exact for the representation.
double integrate(const SampledFn& f, const CellSet& e);
double integrate(const SampledFn& f);

// ---------------------------------------------------------------------------

template <class F>
SampledFn SampledFn::from_midpoints(GridPtr grid, F&& f) {
    const Grid& g = *grid;
    std::vector<double> vals(g.size());
    if constexpr (std::is_invocable_r_v<double, F, double>) {
        if (g.dim() != 1) throw InputError("from_midpoints: scalar-argument callable needs a 1-D grid");
        for (std::size_t i = 0; i < g.size(); ++i) vals[i] = f(g.midpoint1(i));
    } else {
        std::vector<double> x(g.dim());
        for (std::size_t i = 0; i < g.size(); ++i) {
            g.midpoint(i, x);
            vals[i] = f(std::span<const double>(x));
        }
    }
    return SampledFn(std::move(grid), 1, std::move(vals));
}

}  // namespace lorentzfe
