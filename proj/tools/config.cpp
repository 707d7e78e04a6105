#include "config.hpp"

#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "expr.hpp"
#include "lorentzfe/errors.hpp"

namespace lfe {

using lorentzfe::InputError;
namespace lz = lorentzfe;

namespace {

class Field {
public:
    Field(const YAML::Node& node, std::string path, const std::string* file) : node_(node), path_(std::move(path)), file_(file) {}

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream os;
        os << *file_;
        if (node_.IsDefined() && node_.Mark().line >= 0) os << ":" << node_.Mark().line + 1;
        os << ": field '" << path_ << "': " << what;
        throw InputError(os.str());
    }

    bool has(const std::string& key) const { return node_.IsMap() && node_[key].IsDefined() && !node_[key].IsNull(); }
    Field operator[](const std::string& key) const {
        if (!node_.IsMap()) fail("expected a mapping");
        const YAML::Node child = node_[key];
        const std::string p = path_.empty() ? key : path_ + "." + key;
        if (!child.IsDefined() || child.IsNull()) Field(node_, p, file_).fail("missing");
        return Field(child, p, file_);
    }
    std::size_t size() const {
        if (!node_.IsSequence()) fail("expected a list");
        return node_.size();
    }
    Field operator[](std::size_t i) const {
        if (!node_.IsSequence()) fail("expected a list");
        return Field(node_[i], path_ + "[" + std::to_string(i) + "]", file_);
    }
    bool is_list() const { return node_.IsSequence(); }
    bool is_map() const { return node_.IsMap(); }

    double num() const {
        if (!node_.IsScalar()) fail("expected a number");
        try {
            return node_.as<double>();
        } catch (const YAML::Exception&) {
            // allow small expressions like 1/4
            try {
                return Expr::parse(node_.Scalar())(std::span<const double>());
            } catch (const InputError&) {
                fail("expected a number, got '" + node_.Scalar() + "'");
            }
        }
    }
    long integer() const {
        const double v = num();
        if (v != static_cast<double>(static_cast<long>(v))) fail("expected an integer");
        return static_cast<long>(v);
    }
    std::string str() const {
        if (!node_.IsScalar()) fail("expected a scalar");
        return node_.Scalar();
    }
    Expr expr() const {
        try {
            return Expr::parse(str());
        } catch (const InputError& e) {
            fail(e.what());
        }
    }
    std::vector<double> numbers(std::size_t expected) const {
        if (!node_.IsSequence() || node_.size() != expected) fail("expected a list of " + std::to_string(expected) + " numbers");
        std::vector<double> v;
        for (std::size_t i = 0; i < expected; ++i) v.push_back((*this)[i].num());
        return v;
    }
    const std::string& file() const { return *file_; }

private:
    YAML::Node node_;
    std::string path_;
    const std::string* file_;
};

lz::Domain read_domain(const Field& f) {
    try {
        if (f.has("intervals")) {
            const Field iv = f["intervals"];
            std::vector<std::pair<double, double>> pieces;
            for (std::size_t i = 0; i < iv.size(); ++i) {
                const auto p = iv[i].numbers(2);
                pieces.emplace_back(p[0], p[1]);
            }
            return lz::Domain::intervals(pieces);
        }
        const Field bx = f["boxes"];
        std::vector<lz::Box> boxes;
        for (std::size_t i = 0; i < bx.size(); ++i) {
            const Field lo = bx[i]["lo"];
            boxes.push_back(lz::Box{lo.numbers(lo.size()), bx[i]["hi"].numbers(lo.size())});
        }
        return lz::Domain(std::move(boxes));
    } catch (const InputError& e) {
        if (std::string(e.what()).find("field '") != std::string::npos) throw;
        f.fail(e.what());
    }
}

lz::Branch read_branch(const Field& f) {
    const auto iv = f["interval"].numbers(2);
    try {
        if (f.has("affine")) {
            const auto c = f["affine"].numbers(2);
            return lz::Branch::affine(iv[0], iv[1], c[0], c[1]);
        }
        if (f.has("mobius")) {
            const auto c = f["mobius"].numbers(4);
            return lz::Branch::mobius(iv[0], iv[1], c[0], c[1], c[2], c[3]);
        }
        if (f.has("expr")) {
            const Expr map = f["expr"].expr();
            const Expr der = f["deriv"].expr();
            if (map.arity() > 1 || der.arity() > 1) f.fail("branch expressions may only use x");
            return lz::Branch{iv[0], iv[1], [map](double x) { return map(x); }, [der](double x) { return der(x); }, "expr"};
        }
    } catch (const InputError& e) {
        if (std::string(e.what()).find("field '") != std::string::npos) throw;
        f.fail(e.what());
    }
    f.fail("branch needs one of affine, mobius, expr");
}

lz::PiecewiseMap read_piecewise(const Field& f) {
    const Field br = f["branches"];
    std::vector<lz::Branch> v;
    for (std::size_t i = 0; i < br.size(); ++i) v.push_back(read_branch(br[i]));
    try {
        return lz::PiecewiseMap(std::move(v));
    } catch (const InputError& e) {
        f.fail(e.what());
    }
}

lz::TensorMap read_map(const Field& f, std::size_t dim) {
    if (f.has("axes")) {
        const Field ax = f["axes"];
        if (ax.size() != dim) ax.fail("expected one entry per axis (" + std::to_string(dim) + ")");
        std::vector<lz::PiecewiseMap> axes;
        for (std::size_t a = 0; a < dim; ++a) axes.push_back(read_piecewise(ax[a]));
        return lz::TensorMap(std::move(axes));
    }
    if (dim != 1) f.fail("k > 1 domains need per-axis maps under 'axes'");
    return lz::TensorMap(read_piecewise(f));
}

lz::SampledFn sample(const lz::GridPtr& g, const Field& f) {
    const Expr e = f.expr();
    if (e.arity() > g->dim()) f.fail("uses more coordinates than the domain has");
    std::vector<double> x(g->dim());
    std::vector<double> v(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) {
        g->midpoint(i, x);
        v[i] = e(x);
        if (!std::isfinite(v[i])) f.fail("not finite at cell " + std::to_string(i));
    }
    return lz::SampledFn(g, 1, std::move(v));
}

lz::SampledFn read_csv_values(const lz::GridPtr& g, const Field& f, const std::filesystem::path& base) {
    std::filesystem::path p = f.str();
    if (p.is_relative()) p = base / p;
    std::ifstream in(p);
    if (!in) f.fail("cannot open " + p.string());
    std::string line;
    if (!std::getline(in, line)) f.fail(p.string() + " is empty");
    std::vector<std::size_t> cols;
    {
        std::istringstream hs(line);
        std::string name;
        for (std::size_t c = 0; std::getline(hs, name, ','); ++c)
            if (name.rfind("value", 0) == 0) cols.push_back(c);
    }
    if (cols.empty()) f.fail(p.string() + ": header has no value column");
    std::vector<double> v;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::size_t want = 0;
        for (std::size_t c = 0; std::getline(ls, cell, ',') && want < cols.size(); ++c) {
            if (c != cols[want]) continue;
            try {
                std::size_t used = 0;
                v.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                f.fail(p.string() + ":" + std::to_string(row) + ": bad number '" + cell + "'");
            }
            ++want;
        }
        if (want != cols.size()) f.fail(p.string() + ":" + std::to_string(row) + ": missing value column");
    }
    if (v.size() != g->size() * cols.size())
        f.fail(p.string() + ": " + std::to_string(v.size() / cols.size()) + " rows for a grid of " + std::to_string(g->size()) +
               " cells");
    try {
        return lz::SampledFn(g, cols.size(), std::move(v));
    } catch (const InputError& e) {
        f.fail(e.what());
    }
}

lz::SampledFn read_h0(const lz::GridPtr& g, const Field& f, const std::filesystem::path& base) {
    if (f.is_map()) return read_csv_values(g, f["csv"], base);
    if (!f.is_list()) return sample(g, f);
    const std::size_t d = f.size();
    if (d == 0) f.fail("empty list");
    std::vector<lz::SampledFn> comps;
    for (std::size_t c = 0; c < d; ++c) comps.push_back(sample(g, f[c]));
    std::vector<double> v(g->size() * d);
    for (std::size_t i = 0; i < g->size(); ++i)
        for (std::size_t c = 0; c < d; ++c) v[i * d + c] = comps[c][i];
    return lz::SampledFn(g, d, std::move(v));
}

lz::YoungFn read_young(const Field& f) {
    const std::string fam = f["family"].str();
    const double param = f.has("m") ? f["m"].num() : f.has("p") ? f["p"].num() : 2.0;
    const double coef = f.has("coef") ? f["coef"].num() : 1.0;
    try {
        return lz::make_young(fam, param, coef);
    } catch (const InputError& e) {
        f.fail(e.what());
    }
}

}  // namespace

void check_grid_size(std::size_t m) {
    if (m < 16 || (m & (m - 1)) != 0)
        throw InputError("grid size must be a power of two >= 16, got " + std::to_string(m));
}

lz::YoungFn psi_from(const std::string& family, double param) { return lz::make_young(family, param); }

LoadedInstance load_instance(const std::filesystem::path& path, const Overrides& ov) {
    const std::string file = path.string();
    YAML::Node root;
    try {
        root = YAML::LoadFile(file);
    } catch (const YAML::BadFile&) {
        throw InputError(file + ": cannot open instance file");
    } catch (const YAML::Exception& e) {
        throw InputError(file + ":" + std::to_string(e.mark.line + 1) + ": YAML syntax error: " + e.msg);
    }
    if (!root.IsMap()) throw InputError(file + ": instance file is empty or not a mapping");
    const Field top(root, "", &file);

    const lz::Domain dom = read_domain(top["domain"]);
    const std::size_t m = ov.grid ? *ov.grid : static_cast<std::size_t>(top["grid"].integer());
    try {
        check_grid_size(m);
    } catch (const InputError& e) {
        if (ov.grid) throw;
        top["grid"].fail(e.what());
    }
    const lz::GridPtr grid = lz::make_grid(dom, m);

    lz::YoungFn psi = lz::make_power_young(2.0);
    if (ov.psi_family || ov.psi_param)
        psi = psi_from(ov.psi_family.value_or("power"), ov.psi_param.value_or(2.0));
    else if (top.has("psi"))
        psi = read_young(top["psi"]);

    const Field maps = top["maps"];
    const Field coeffs = top["coefficients"];
    if (coeffs.size() != maps.size())
        coeffs.fail(std::to_string(coeffs.size()) + " coefficients for " + std::to_string(maps.size()) + " maps");
    std::vector<lz::TensorMap> fs;
    std::vector<lz::SampledFn> gs;
    for (std::size_t n = 0; n < maps.size(); ++n) {
        fs.push_back(read_map(maps[n], dom.dim()));
        gs.push_back(sample(grid, coeffs[n]));
    }

    const Field consts = top["constants"];
    LoadedInstance out{
        lz::ProblemInstance{
            top.has("name") ? top["name"].str() : path.stem().string(),
            grid,
            std::move(fs),
            std::move(gs),
            read_h0(grid, top["h0"], path.parent_path()),
            static_cast<int>(consts["K"].integer()),
            static_cast<int>(consts["L"].integer()),
            consts["alpha"].num(),
            std::move(psi),
        },
        std::nullopt,
        {},
        {},
        path,
    };
    try {
        out.inst.validate();
    } catch (const InputError& e) {
        throw InputError(file + ": " + e.what());
    }

    if (top.has("Psi")) out.big_psi = read_young(top["Psi"]);
    if (top.has("cov")) {
        const Field hs = top["cov"]["H"];
        for (std::size_t i = 0; i < hs.size(); ++i) out.cov_h.emplace_back(hs[i].str(), sample(grid, hs[i]));
    }
    if (top.has("oracle")) {
        const Field o = top["oracle"];
        if (o.has("solution")) {
            const Field s = o["solution"];
            std::vector<double> v;
            if (s.is_list())
                for (std::size_t c = 0; c < s.size(); ++c) v.push_back(s[c].num());
            else
                v.push_back(s.num());
            if (v.size() != out.inst.h0.target_dim()) s.fail("solution has a different dimension than h0");
            out.oracle.solution = std::move(v);
        }
        if (o.has("norm")) out.oracle.norm = o["norm"].num();
        if (o.has("tol")) out.oracle.tol = o["tol"].num();
    }
    return out;
}

}  // namespace lfe
