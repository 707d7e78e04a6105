#include "lorentzfe/maps.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lorentzfe {

Branch Branch::affine(double lo, double hi, double offset, double slope) {
    return Branch{lo, hi, [offset, slope](double x) { return offset + slope * x; },
                  [slope](double) { return slope; }, "affine"};
}

Branch Branch::mobius(double lo, double hi, double a, double b, double c, double d) {
    const double dlo = c * lo + d;
    const double dhi = c * hi + d;
    if (dlo == 0.0 || dhi == 0.0 || (dlo > 0.0) != (dhi > 0.0))
        throw InputError("mobius branch: denominator vanishes on [" + format_double(lo) + ", " + format_double(hi) + "]");
    if (a * d - b * c == 0.0) throw InputError("mobius branch: degenerate (ad - bc = 0)");
    return Branch{lo, hi, [a, b, c, d](double x) { return (a * x + b) / (c * x + d); },
                  [a, b, c, d](double x) {
                      const double den = c * x + d;
                      return (a * d - b * c) / (den * den);
                  },
                  "mobius"};
}

std::pair<double, double> Branch::image(double a, double b) const {
    const double ya = map(a);
    const double yb = map(b);
    return {std::min(ya, yb), std::max(ya, yb)};
}

PiecewiseMap::PiecewiseMap(std::vector<Branch> branches) : branches_(std::move(branches)) {
    if (branches_.empty()) throw InputError("PiecewiseMap: at least one branch is required");
    std::sort(branches_.begin(), branches_.end(), [](const Branch& x, const Branch& y) { return x.lo < y.lo; });
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        const Branch& br = branches_[i];
        const std::string where = "branch " + std::to_string(i) + " [" + format_double(br.lo) + ", " + format_double(br.hi) + ")";
        if (!br.map || !br.deriv) throw InputError("PiecewiseMap: " + where + " lacks a map or derivative");
        if (!(br.hi > br.lo)) throw InputError("PiecewiseMap: " + where + " is empty");
        if (i > 0 && br.lo < branches_[i - 1].hi) throw InputError("PiecewiseMap: " + where + " overlaps its predecessor");
        const double ylo = br.map(br.lo);
        const double yhi = br.map(br.hi);
        if (!std::isfinite(ylo) || !std::isfinite(yhi) || ylo == yhi)
            throw InputError("PiecewiseMap: " + where + " is not strictly monotone");
        const bool inc = yhi > ylo;
        // derivative may vanish at isolated points but never change sign
        constexpr int kSamples = 64;
        double prev = ylo;
        for (int s = 1; s <= kSamples; ++s) {
            const double x = br.lo + (br.hi - br.lo) * (static_cast<double>(s) / (kSamples + 1));
            const double y = br.map(x);
            const double dy = br.deriv(x);
            if (!std::isfinite(y) || !std::isfinite(dy))
                throw InputError("PiecewiseMap: " + where + " evaluates to a non-finite value at x = " + format_double(x));
            if ((inc && (dy < 0.0 || y <= prev)) || (!inc && (dy > 0.0 || y >= prev)))
                throw InputError("PiecewiseMap: " + where + " is not strictly monotone near x = " + format_double(x));
            prev = y;
        }
    }
}

PiecewiseMap PiecewiseMap::identity(double lo, double hi) { return PiecewiseMap({Branch::affine(lo, hi, 0.0, 1.0)}); }

std::optional<std::size_t> PiecewiseMap::branch_at(double x) const {
    auto it = std::upper_bound(branches_.begin(), branches_.end(), x,
                               [](double v, const Branch& b) { return v < b.lo; });
    if (it == branches_.begin()) return std::nullopt;
    --it;
    if (x < it->hi) return static_cast<std::size_t>(it - branches_.begin());
    return std::nullopt;
}

std::optional<double> PiecewiseMap::operator()(double x) const {
    if (auto b = branch_at(x)) return branches_[*b].map(x);
    return std::nullopt;
}

std::optional<double> PiecewiseMap::derivative(double x) const {
    if (auto b = branch_at(x)) return branches_[*b].deriv(x);
    return std::nullopt;
}

std::vector<std::pair<double, double>> PiecewiseMap::image_pieces(const Domain& e) const {
    if (e.dim() != 1) throw InputError("image_pieces: 1-D domain expected");
    std::vector<std::pair<double, double>> out;
    for (const auto& br : branches_) {
        for (const auto& box : e.boxes()) {
            const double a = std::max(br.lo, box.lo[0]);
            const double b = std::min(br.hi, box.hi[0]);
            if (b > a) out.push_back(br.image(a, b));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

TensorMap::TensorMap(PiecewiseMap single) { axes_.push_back(std::move(single)); }

TensorMap::TensorMap(std::vector<PiecewiseMap> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) throw InputError("TensorMap: at least one axis is required");
}

bool TensorMap::apply(std::span<const double> x, std::span<double> out) const {
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        auto y = axes_[a](x[a]);
        if (!y) return false;
        out[a] = *y;
    }
    return true;
}

std::optional<double> TensorMap::jacobian(std::span<const double> x) const {
    double j = 1.0;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        auto d = axes_[a].derivative(x[a]);
        if (!d) return std::nullopt;
        j *= *d;
    }
    return j;
}

// ---------------------------------------------------------------------------

IndicatrixResult banach_indicatrix(const PiecewiseMap& f, const Domain& e, double y) {
    if (e.dim() != 1) throw InputError("banach_indicatrix: only k = 1 is supported");
    IndicatrixResult res;
    for (const auto& br : f.branches()) {
        for (const auto& box : e.boxes()) {
            const double a = std::max(br.lo, box.lo[0]);
            const double b = std::min(br.hi, box.hi[0]);
            if (!(b > a)) continue;
            const double ya = br.map(a);
            const double yb = br.map(b);
            if (y == ya || y == yb) {
                res.ambiguous = true;
                // [a, b) is half-open: the image contains F(a) but not F(b)
                if (y == ya) {
                    ++res.count;
                    res.preimages.push_back(a);
                }
                continue;
            }
            if (y <= std::min(ya, yb) || y >= std::max(ya, yb)) continue;
            const bool inc = yb > ya;
            double lo = a;
            double hi = b;
            for (int it = 0; it < 200; ++it) {
                const double mid = lo + 0.5 * (hi - lo);
                if (mid <= lo || mid >= hi) break;
                if ((br.map(mid) < y) == inc)
                    lo = mid;
                else
                    hi = mid;
            }
            ++res.count;
            res.preimages.push_back(0.5 * (lo + hi));
        }
    }
    std::sort(res.preimages.begin(), res.preimages.end());
    return res;
}

ChangeOfVariablesReport change_of_variables_check(const PiecewiseMap& f, const SampledFn& h, const Domain& e,
                                                  std::size_t cells, double tol) {
    if (e.dim() != 1 || h.grid().dim() != 1) throw InputError("change_of_variables_check: only k = 1 is supported");
    if (!h.is_scalar()) throw InputError("change_of_variables_check: H must be scalar");
    for (std::size_t j = 0; j < h.size(); ++j)
        if (h[j] < 0.0)
            throw InputError("change_of_variables_check: H is negative in cell " + std::to_string(j) + " (H >= 0 required)");

    ChangeOfVariablesReport rep;
    rep.tolerance = tol;
    const Grid egrid(e, cells);
    for (std::size_t i = 0; i < egrid.size(); ++i) {
        const double x = egrid.midpoint1(i);
        const auto y = f(x);
        if (!y) continue;
        const auto cell = h.grid().locate(std::span<const double>(&*y, 1));
        if (!cell) continue;
        rep.lhs += h[*cell] * std::abs(*f.derivative(x)) * egrid.cell_measure(i);
    }
    const Grid& hg = h.grid();
    for (std::size_t j = 0; j < hg.size(); ++j) {
        if (h[j] == 0.0) continue;
        const auto n = banach_indicatrix(f, e, hg.midpoint1(j));
        if (n.ambiguous) ++rep.ambiguous_probes;
        rep.rhs += h[j] * n.count * hg.cell_measure(j);
    }
    const double scale = std::max(std::abs(rep.lhs), std::abs(rep.rhs));
    rep.relative_gap = scale > 0.0 ? std::abs(rep.lhs - rep.rhs) / scale : 0.0;
    rep.verdict = rep.relative_gap <= tol ? Verdict::pass : Verdict::fail;
    return rep;
}

Report ChangeOfVariablesReport::to_report() const {
    Report r;
    r.add("check", "change_of_variables").add("verdict", verdict);
    r.add("lhs", lhs).add("rhs", rhs).add("relative_gap", relative_gap).add("tolerance", tolerance);
    r.add("ambiguous_probes", ambiguous_probes);
    return r;
}

}  // namespace lorentzfe
