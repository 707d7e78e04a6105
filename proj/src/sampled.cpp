#include "lorentzfe/sampled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lorentzfe {

double Box::volume() const {
    double v = 1.0;
    for (std::size_t a = 0; a < lo.size(); ++a) v *= hi[a] - lo[a];
    return v;
}

bool Box::contains(std::span<const double> x) const {
    for (std::size_t a = 0; a < lo.size(); ++a)
        if (!(x[a] >= lo[a] && x[a] < hi[a])) return false;
    return true;
}

Domain::Domain(std::vector<Box> boxes) : boxes_(std::move(boxes)) {
    if (boxes_.empty()) throw InputError("Domain: at least one box is required");
    dim_ = boxes_.front().dim();
    if (dim_ == 0) throw InputError("Domain: boxes must have dimension >= 1");
    for (const auto& b : boxes_) {
        if (b.lo.size() != dim_ || b.hi.size() != dim_) throw InputError("Domain: boxes of mixed dimension");
        for (std::size_t a = 0; a < dim_; ++a) {
            if (!std::isfinite(b.lo[a]) || !std::isfinite(b.hi[a]) || !(b.hi[a] > b.lo[a]))
                throw InputError("Domain: every box needs finite lo < hi on each axis");
        }
    }
    for (std::size_t i = 0; i < boxes_.size(); ++i) {
        for (std::size_t j = i + 1; j < boxes_.size(); ++j) {
            bool overlap = true;
            for (std::size_t a = 0; a < dim_; ++a) {
                if (boxes_[i].hi[a] <= boxes_[j].lo[a] || boxes_[j].hi[a] <= boxes_[i].lo[a]) {
                    overlap = false;
                    break;
                }
            }
            if (overlap) throw InputError("Domain: boxes " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
        }
        measure_ += boxes_[i].volume();
    }
}

Domain Domain::interval(double lo, double hi) { return Domain({Box{{lo}, {hi}}}); }

Domain Domain::intervals(const std::vector<std::pair<double, double>>& pieces) {
    std::vector<Box> boxes;
    boxes.reserve(pieces.size());
    for (const auto& [lo, hi] : pieces) boxes.push_back(Box{{lo}, {hi}});
    return Domain(std::move(boxes));
}

bool Domain::contains(std::span<const double> x) const {
    return std::any_of(boxes_.begin(), boxes_.end(), [&](const Box& b) { return b.contains(x); });
}

// ---------------------------------------------------------------------------

Grid::Grid(Domain domain, std::size_t cells_per_axis) : domain_(std::move(domain)), m_(cells_per_axis) {
    if (m_ == 0) throw InputError("Grid: cells per axis must be positive");
    cells_per_box_ = 1;
    for (std::size_t a = 0; a < dim(); ++a) {
        if (cells_per_box_ > std::numeric_limits<std::size_t>::max() / m_) throw InputError("Grid: too many cells");
        cells_per_box_ *= m_;
    }
    size_ = cells_per_box_ * domain_.boxes().size();
    for (const auto& b : domain_.boxes()) {
        double v = 1.0;
        for (std::size_t a = 0; a < dim(); ++a) v *= (b.hi[a] - b.lo[a]) / static_cast<double>(m_);
        box_cell_measure_.push_back(v);
    }
    for (std::size_t i = 0; i < size_; ++i) total_ += cell_measure(i);
}

void Grid::midpoint(std::size_t cell, std::span<double> out) const {
    const Box& b = domain_.boxes()[cell / cells_per_box_];
    std::size_t local = cell % cells_per_box_;
    for (std::size_t a = 0; a < dim(); ++a) {
        const std::size_t i = local % m_;
        local /= m_;
        const double h = (b.hi[a] - b.lo[a]) / static_cast<double>(m_);
        out[a] = b.lo[a] + (static_cast<double>(i) + 0.5) * h;
    }
}

double Grid::midpoint1(std::size_t cell) const {
    double x = 0.0;
    midpoint(cell, std::span<double>(&x, 1));
    return x;
}

void Grid::cell_bounds(std::size_t cell, std::span<double> lo, std::span<double> hi) const {
    const Box& b = domain_.boxes()[cell / cells_per_box_];
    std::size_t local = cell % cells_per_box_;
    for (std::size_t a = 0; a < dim(); ++a) {
        const std::size_t i = local % m_;
        local /= m_;
        const double h = (b.hi[a] - b.lo[a]) / static_cast<double>(m_);
        lo[a] = b.lo[a] + static_cast<double>(i) * h;
        hi[a] = (i + 1 == m_) ? b.hi[a] : b.lo[a] + static_cast<double>(i + 1) * h;
    }
}

std::size_t Grid::cell_in_box(std::size_t box, std::span<const double> x) const {
    const Box& b = domain_.boxes()[box];
    std::size_t index = 0;
    std::size_t stride = 1;
    for (std::size_t a = 0; a < dim(); ++a) {
        const double h = (b.hi[a] - b.lo[a]) / static_cast<double>(m_);
        double q = std::floor((x[a] - b.lo[a]) / h);
        q = std::clamp(q, 0.0, static_cast<double>(m_ - 1));
        index += static_cast<std::size_t>(q) * stride;
        stride *= m_;
    }
    return box * cells_per_box_ + index;
}

std::optional<std::size_t> Grid::locate(std::span<const double> x) const {
    const auto& boxes = domain_.boxes();
    for (std::size_t b = 0; b < boxes.size(); ++b)
        if (boxes[b].contains(x)) return cell_in_box(b, x);
    return std::nullopt;
}

Grid::Clamped Grid::locate_clamped(std::span<const double> x) const {
    if (auto c = locate(x)) return {*c, 0.0};
    const auto& boxes = domain_.boxes();
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_box = 0;
    std::vector<double> nearest(dim());
    for (std::size_t b = 0; b < boxes.size(); ++b) {
        double d2 = 0.0;
        for (std::size_t a = 0; a < dim(); ++a) {
            const double p = std::clamp(x[a], boxes[b].lo[a], boxes[b].hi[a]);
            d2 += (x[a] - p) * (x[a] - p);
        }
        if (d2 < best) {
            best = d2;
            best_box = b;
        }
    }
    for (std::size_t a = 0; a < dim(); ++a) nearest[a] = std::clamp(x[a], boxes[best_box].lo[a], boxes[best_box].hi[a]);
    return {cell_in_box(best_box, nearest), std::sqrt(best)};
}

bool Grid::same_shape(const Grid& other) const {
    if (m_ != other.m_ || dim() != other.dim() || domain_.boxes().size() != other.domain_.boxes().size()) return false;
    for (std::size_t b = 0; b < domain_.boxes().size(); ++b) {
        if (domain_.boxes()[b].lo != other.domain_.boxes()[b].lo) return false;
        if (domain_.boxes()[b].hi != other.domain_.boxes()[b].hi) return false;
    }
    return true;
}

GridPtr make_grid(Domain domain, std::size_t cells_per_axis) {
    return std::make_shared<const Grid>(std::move(domain), cells_per_axis);
}

// ---------------------------------------------------------------------------

SampledFn::SampledFn(GridPtr grid, std::size_t target_dim, std::vector<double> values)
    : grid_(std::move(grid)), dim_(target_dim), values_(std::move(values)) {
    if (!grid_) throw InputError("SampledFn: null grid");
    if (dim_ == 0) throw InputError("SampledFn: target dimension must be >= 1");
    if (values_.size() != grid_->size() * dim_)
        throw InputError("SampledFn: expected " + std::to_string(grid_->size() * dim_) + " values, got " +
                         std::to_string(values_.size()));
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!std::isfinite(values_[i]))
            throw InputError("SampledFn: non-finite value in cell " + std::to_string(i / dim_));
}

SampledFn SampledFn::zeros(GridPtr grid, std::size_t target_dim) {
    const std::size_t n = grid->size() * target_dim;
    return SampledFn(std::move(grid), target_dim, std::vector<double>(n, 0.0));
}

SampledFn SampledFn::constant(GridPtr grid, double c) {
    const std::size_t n = grid->size();
    return SampledFn(std::move(grid), 1, std::vector<double>(n, c));
}

SampledFn SampledFn::constant(GridPtr grid, std::span<const double> c) {
    std::vector<double> v;
    v.reserve(grid->size() * c.size());
    for (std::size_t i = 0; i < grid->size(); ++i) v.insert(v.end(), c.begin(), c.end());
    return SampledFn(std::move(grid), c.size(), std::move(v));
}

SampledFn SampledFn::component(std::size_t comp) const {
    if (comp >= dim_) throw InputError("SampledFn::component: index out of range");
    std::vector<double> v(size());
    for (std::size_t i = 0; i < size(); ++i) v[i] = value(i, comp);
    return SampledFn(grid_, 1, std::move(v));
}

SampledFn SampledFn::embed(std::size_t d, std::size_t comp) const {
    if (!is_scalar()) throw InputError("SampledFn::embed: source must be scalar");
    if (comp >= d) throw InputError("SampledFn::embed: component out of range");
    std::vector<double> v(size() * d, 0.0);
    for (std::size_t i = 0; i < size(); ++i) v[i * d + comp] = values_[i];
    return SampledFn(grid_, d, std::move(v));
}

bool SampledFn::compatible(const SampledFn& o) const {
    return dim_ == o.dim_ && (grid_ == o.grid_ || grid_->same_shape(*o.grid_));
}

namespace {
void require_compatible(const SampledFn& a, const SampledFn& b, const char* op) {
    if (!a.compatible(b)) throw InputError(std::string("SampledFn ") + op + ": grids or target dimensions differ");
}
}  // namespace

SampledFn SampledFn::operator+(const SampledFn& o) const {
    require_compatible(*this, o, "+");
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] + o.values_[i];
    return SampledFn(grid_, dim_, std::move(v));
}

SampledFn SampledFn::operator-(const SampledFn& o) const {
    require_compatible(*this, o, "-");
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] - o.values_[i];
    return SampledFn(grid_, dim_, std::move(v));
}

SampledFn SampledFn::operator*(double s) const {
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = s * values_[i];
    return SampledFn(grid_, dim_, std::move(v));
}

SampledFn SampledFn::abs() const {
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::abs(values_[i]);
    return SampledFn(grid_, dim_, std::move(v));
}

double SampledFn::max_abs_diff(const SampledFn& o) const {
    require_compatible(*this, o, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) m = std::max(m, std::abs(values_[i] - o.values_[i]));
    return m;
}

bool SampledFn::operator==(const SampledFn& o) const { return compatible(o) && values_ == o.values_; }

SampledFn pointwise_norm(const SampledFn& f, Exec exec) {
    std::vector<double> v(f.size());
    if (exec == Exec::parallel)
        kernels::row_norms_parallel(f.values(), f.target_dim(), v);
    else
        kernels::row_norms_serial(f.values(), f.target_dim(), v);
    return SampledFn(f.grid_ptr(), 1, std::move(v));
}

// ---------------------------------------------------------------------------

namespace {

struct Level {
    double value;       // > 0
    double cumulative;  // measure of {|f| >= value}
};

/// Distinct positive levels of |f| in decreasing order with cumulative
/// measure. Sorting on (value, measure) makes the result independent of
/// cell order, so permuted inputs give bit-identical levels.
std::vector<Level> levels_of(const SampledFn& f) {
    if (!f.is_scalar()) throw InputError("distribution/rearrangement need a scalar function; use pointwise_norm first");
    const Grid& g = f.grid();
    std::vector<std::pair<double, double>> cells;
    cells.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = std::abs(f[i]);
        if (a > 0.0) cells.emplace_back(a, g.cell_measure(i));
    }
    std::sort(cells.begin(), cells.end(), [](const auto& x, const auto& y) {
        return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    std::vector<Level> out;
    double cum = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        cum += cells[i].second;
        if (i + 1 == cells.size() || cells[i + 1].first != cells[i].first) out.push_back({cells[i].first, cum});
    }
    return out;
}

StepDistribution distribution_from_levels(const std::vector<Level>& lv) {
    StepDistribution d;
    d.thresholds.push_back(0.0);
    for (auto it = lv.rbegin(); it != lv.rend(); ++it) {
        d.plateau_measures.push_back(it->cumulative);
        d.thresholds.push_back(it->value);
    }
    d.plateau_measures.push_back(0.0);
    return d;
}

}  // namespace

double StepDistribution::operator()(double s) const {
    if (s < 0.0) throw InputError("distribution evaluated at negative level");
    auto it = std::upper_bound(thresholds.begin(), thresholds.end(), s);
    return plateau_measures[static_cast<std::size_t>(it - thresholds.begin()) - 1];
}

StepDistribution distribution(const SampledFn& f) { return distribution_from_levels(levels_of(f)); }

Rearrangement rearrangement(const SampledFn& f) {
    const auto lv = levels_of(f);
    Rearrangement r;
    r.breakpoints.push_back(0.0);
    for (const auto& l : lv) {
        r.values.push_back(l.value);
        r.breakpoints.push_back(l.cumulative);
    }
    const double total = f.grid().total_measure();
    if (lv.empty() || lv.back().cumulative < total) {
        r.values.push_back(0.0);
        r.breakpoints.push_back(total);
    }
    return r;
}

double Rearrangement::operator()(double t) const {
    if (t < 0.0) throw InputError("rearrangement evaluated at negative argument");
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    const auto j = static_cast<std::size_t>(it - breakpoints.begin());
    if (j == 0 || j > values.size()) return 0.0;
    return values[j - 1];
}

StepDistribution Rearrangement::distribution() const {
    std::vector<Level> lv;
    for (std::size_t j = 0; j < values.size(); ++j)
        if (values[j] > 0.0) lv.push_back({values[j], breakpoints[j + 1]});
    return distribution_from_levels(lv);
}

double Rearrangement::integral(double upto) const {
    double s = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double a = breakpoints[j];
        const double b = std::min(breakpoints[j + 1], upto);
        if (b <= a) break;
        s += values[j] * (b - a);
    }
    return s;
}

CellSet cells_in(const Grid& grid, const Domain& region) {
    if (region.dim() != grid.dim()) throw InputError("cells_in: dimension mismatch");
    CellSet e;
    std::vector<double> x(grid.dim());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.midpoint(i, x);
        if (region.contains(x)) {
            e.cells.push_back(i);
            e.measure += grid.cell_measure(i);
        }
    }
    return e;
}

double integrate(const SampledFn& f, const CellSet& e) {
    if (!f.is_scalar()) throw InputError("integrate: scalar function expected");
    double s = 0.0;
    for (std::size_t i : e.cells) s += f[i] * f.grid().cell_measure(i);
    return s;
}

double integrate(const SampledFn& f) {
    if (!f.is_scalar()) throw InputError("integrate: scalar function expected");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * f.grid().cell_measure(i);
    return s;
}

}  // namespace lorentzfe
