#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "config.hpp"
#include "lorentzfe/norms.hpp"
#include "lorentzfe/random.hpp"
#include "lorentzfe/solver.hpp"

#ifndef LFE_INSTANCE_DIR
#define LFE_INSTANCE_DIR "instances"
#endif

namespace lfe {

namespace fs = std::filesystem;
namespace lz = lorentzfe;
using lz::format_double;
using lz::InputError;
using lz::Verdict;

namespace {

struct Options {
    std::string instance;
    std::optional<std::size_t> grid;
    std::optional<std::string> psi;
    std::optional<double> m;
    std::string route = "all";
    std::optional<double> tol;
    std::size_t max_steps = 200;
    std::uint64_t seed = 1;
    std::string out = ".";
    bool force = false;
};

int exit_code(Verdict v) { return v == Verdict::pass ? 0 : 1; }

void write_atomic(const fs::path& path, const std::string& body) {
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw InputError("cannot write " + tmp.string());
        f << body;
        if (!f.flush()) throw InputError("cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string render(const lz::Report& r) {
    std::ostringstream os;
    r.write(os);
    return os.str();
}

Overrides overrides(const Options& o) {
    if (o.grid) check_grid_size(*o.grid);
    return Overrides{o.grid, o.psi, o.m};
}

LoadedInstance need_instance(const Options& o) {
    if (o.instance.empty()) throw InputError("--instance is required for this subcommand");
    return load_instance(o.instance, overrides(o));
}

lz::YoungFn chosen_psi(const Options& o, const lz::YoungFn& fallback) {
    if (o.psi || o.m) return psi_from(o.psi.value_or("power"), o.m.value_or(2.0));
    return fallback;
}

std::vector<lz::Route> chosen_routes(const Options& o) {
    if (o.route == "all") return {std::begin(lz::kLorentzRoutes), std::end(lz::kLorentzRoutes)};
    auto r = lz::parse_route(o.route);
    if (!r || *r == lz::Route::luxemburg)
        throw InputError("--route must be distribution, rearrangement_tau, rearrangement_weight or all");
    return {*r};
}

std::string solution_csv(const lz::SampledFn& phi) {
    const lz::Grid& g = phi.grid();
    const std::size_t k = g.dim();
    const std::size_t d = phi.target_dim();
    std::ostringstream os;
    if (k == 1) {
        os << "cell_left,cell_right";
    } else {
        os << "cell";
        for (std::size_t a = 1; a <= k; ++a) os << ",lo_" << a << ",hi_" << a;
    }
    if (d == 1)
        os << ",value";
    else
        for (std::size_t c = 1; c <= d; ++c) os << ",value_" << c;
    os << "\n";
    std::vector<double> lo(k);
    std::vector<double> hi(k);
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.cell_bounds(i, lo, hi);
        if (k == 1) {
            os << format_double(lo[0]) << "," << format_double(hi[0]);
        } else {
            os << i;
            for (std::size_t a = 0; a < k; ++a) os << "," << format_double(lo[a]) << "," << format_double(hi[a]);
        }
        for (std::size_t c = 0; c < d; ++c) os << "," << format_double(phi.value(i, c));
        os << "\n";
    }
    return os.str();
}

std::string trace_csv(const lz::IterationTrace& t) {
    std::ostringstream os;
    os << "m,term_norm,partial_norm,tail_bound,residual\n";
    for (const auto& r : t.rows)
        os << r.m << "," << format_double(r.term_norm) << "," << format_double(r.partial_norm) << ","
           << format_double(r.tail_bound) << "," << format_double(r.residual) << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------

int cmd_solve(const Options& o, std::ostream& out) {
    const LoadedInstance li = need_instance(o);
    lz::SolveOptions so;
    so.tol = o.tol;
    so.max_steps = o.max_steps;
    so.force = o.force;
    lz::Solution sol = [&] {
        try {
            return lz::solve_elementary(li.inst, so);
        } catch (const lz::AuditRefused& e) {
            const fs::path dir = o.out;
            write_atomic(dir / "audit.txt", render(e.report.to_report()));
            throw;
        }
    }();
    const fs::path dir = o.out;
    write_atomic(dir / "solution.csv", solution_csv(sol.phi));
    write_atomic(dir / "trace.csv", trace_csv(sol.trace));
    const lz::Report cert = lz::certificate(sol, li.inst);
    write_atomic(dir / "certificate.txt", render(cert));
    cert.write(out);
    if (sol.trace.forced) return 1;
    return sol.trace.stop == lz::StopReason::tolerance ? 0 : 1;
}

int cmd_audit(const Options& o, std::ostream& out) {
    const LoadedInstance li = need_instance(o);
    const lz::AuditReport rep = lz::audit_contraction(li.inst);
    lz::Report r;
    r.add("instance", li.inst.name).merge(rep.to_report());
    write_atomic(fs::path(o.out) / "audit.txt", render(r));
    r.write(out);
    return exit_code(rep.verdict);
}

int cmd_norm(const Options& o, std::ostream& out) {
    const LoadedInstance li = need_instance(o);
    const lz::TauFn tau = lz::derive_tau(li.inst.psi);
    const lz::SampledFn mag = li.inst.h0.is_scalar() ? li.inst.h0 : lz::pointwise_norm(li.inst.h0);
    std::ostringstream csv;
    csv << "function_id,route,value\n";
    Verdict v = Verdict::pass;
    lz::Report r;
    r.add("instance", li.inst.name).add("psi", tau.label()).add("grid", li.inst.grid->cells_per_axis());
    for (lz::Route route : chosen_routes(o)) {
        const double val = lz::lorentz_norm(mag, tau, route).value;
        csv << li.inst.name << "," << lz::to_string(route) << "," << format_double(val) << "\n";
        r.add(std::string(lz::to_string(route)), val);
        if (li.oracle.norm) {
            const double rel = std::abs(val - *li.oracle.norm) / std::abs(*li.oracle.norm);
            if (rel > li.oracle.tol) v = Verdict::fail;
        }
    }
    if (li.oracle.norm) r.add("oracle", *li.oracle.norm).add("oracle_tol", li.oracle.tol).add("verdict", v);
    write_atomic(fs::path(o.out) / "norms.csv", csv.str());
    r.write(out);
    return exit_code(v);
}

int cmd_axioms(const Options& o, std::ostream& out) {
    lz::GridPtr grid;
    lz::YoungFn psi = lz::make_power_young(2.0);
    if (!o.instance.empty()) {
        const LoadedInstance li = need_instance(o);
        grid = li.inst.grid;
        psi = li.inst.psi;
    } else {
        const std::size_t m = o.grid.value_or(1024);
        check_grid_size(m);
        grid = lz::make_grid(lz::Domain::interval(0.0, 1.0), m);
        psi = chosen_psi(o, psi);
    }
    const lz::TauFn tau = lz::derive_tau(psi);
    const auto corpus = lz::random_corpus(grid, 200, o.seed);
    const auto sets = lz::random_sets(*grid, 20, o.seed + 1);
    const lz::AxiomReport rep = lz::axiom_suite(tau, corpus, sets);
    lz::Report r;
    r.add("psi", tau.label()).add("seed", static_cast<std::int64_t>(o.seed)).merge(rep.to_report());
    write_atomic(fs::path(o.out) / "axioms.txt", render(r));
    r.write(out);
    return exit_code(rep.verdict);
}

int cmd_bridge(const Options& o, std::ostream& out) {
    lz::YoungFn big_psi = lz::make_scaled_power_young(1.0, 2.0);
    lz::YoungFn psi = lz::make_power_young(2.0);
    std::vector<lz::SampledFn> hs;
    if (!o.instance.empty()) {
        const LoadedInstance li = need_instance(o);
        psi = li.inst.psi;
        if (li.big_psi) big_psi = *li.big_psi;
        hs.push_back(li.inst.h0);
    } else {
        const std::size_t m = o.grid.value_or(1024);
        check_grid_size(m);
        psi = chosen_psi(o, psi);
        hs = lz::random_modular_unit(lz::make_grid(lz::Domain::interval(0.0, 1.0), m), 50, o.seed, big_psi);
    }
    lz::Report r;
    r.add("psi", psi.label()).add("Psi", big_psi.label()).add("functions", hs.size());
    Verdict v = Verdict::pass;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const lz::BridgeReport b = lz::check_orlicz_lorentz_bridge(hs[i], big_psi, psi);
        v = lz::combine(v, b.verdict);
        r.merge(b.to_report(), "h" + std::to_string(i) + ".");
    }
    r.add("verdict", v);
    write_atomic(fs::path(o.out) / "bridge.txt", render(r));
    r.write(out);
    return exit_code(v);
}

struct CovRow {
    std::size_t map;
    std::string h;
    lz::ChangeOfVariablesReport rep;
};

std::vector<CovRow> run_cov(const LoadedInstance& li, std::size_t cells) {
    if (li.cov_h.empty()) throw InputError(li.source.string() + ": field 'cov.H': missing (cov-check needs test functions)");
    if (li.inst.grid->dim() != 1) throw InputError("cov-check supports 1-D domains only");
    std::vector<CovRow> rows;
    for (std::size_t n = 0; n < li.inst.N(); ++n)
        for (const auto& [text, h] : li.cov_h)
            rows.push_back({n, text, lz::change_of_variables_check(li.inst.maps[n].axes().front(), h,
                                                                    li.inst.grid->domain(), cells)});
    return rows;
}

int cmd_cov(const Options& o, std::ostream& out) {
    const LoadedInstance li = need_instance(o);
    const auto rows = run_cov(li, li.inst.grid->cells_per_axis());
    std::ostringstream csv;
    csv << "map,H,lhs,rhs,relative_gap,verdict\n";
    Verdict v = Verdict::pass;
    for (const auto& row : rows) {
        csv << row.map + 1 << ",\"" << row.h << "\"," << format_double(row.rep.lhs) << "," << format_double(row.rep.rhs)
            << "," << format_double(row.rep.relative_gap) << "," << lz::to_string(row.rep.verdict) << "\n";
        v = lz::combine(v, row.rep.verdict);
    }
    write_atomic(fs::path(o.out) / "cov.csv", csv.str());
    out << csv.str() << "verdict=" << lz::to_string(v) << "\n";
    return exit_code(v);
}

// One line per bundled instance; every oracle it carries is replayed.
int cmd_self_test(const Options& o, std::ostream& out) {
    fs::path where = o.instance.empty() ? fs::path(LFE_INSTANCE_DIR) : fs::path(o.instance);
    std::vector<fs::path> files;
    if (fs::is_directory(where)) {
        for (const auto& e : fs::directory_iterator(where))
            if (e.path().extension() == ".yaml") files.push_back(e.path());
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(where);
    }
    if (files.empty()) throw InputError("self-test: no .yaml instances under " + where.string());
    Verdict all = Verdict::pass;
    for (const auto& f : files) {
        const LoadedInstance li = load_instance(f, overrides(o));
        std::ostringstream notes;
        Verdict v = Verdict::pass;
        std::size_t checks = 0;
        if (li.oracle.solution) {
            ++checks;
            lz::SolveOptions so;
            so.tol = o.tol.value_or(1e-8);
            const lz::Solution s = lz::solve_elementary(li.inst, so);
            const auto& want = *li.oracle.solution;
            double err = 0.0;
            for (std::size_t i = 0; i < s.phi.size(); ++i)
                for (std::size_t c = 0; c < want.size(); ++c) err = std::max(err, std::abs(s.phi.value(i, c) - want[c]));
            const bool ok = err <= li.oracle.tol && s.trace.stop == lz::StopReason::tolerance;
            if (!ok) v = Verdict::fail;
            notes << " solution_err=" << format_double(err) << " steps=" << s.trace.rows.back().m;
        }
        if (li.oracle.norm) {
            ++checks;
            const lz::TauFn tau = lz::derive_tau(li.inst.psi);
            const lz::SampledFn mag = li.inst.h0.is_scalar() ? li.inst.h0 : lz::pointwise_norm(li.inst.h0);
            double worst = 0.0;
            for (lz::Route r : lz::kLorentzRoutes)
                worst = std::max(worst, std::abs(lz::lorentz_norm(mag, tau, r).value - *li.oracle.norm) / *li.oracle.norm);
            if (worst > li.oracle.tol) v = Verdict::fail;
            notes << " norm_rel_err=" << format_double(worst);
        }
        if (!li.cov_h.empty()) {
            ++checks;
            double worst = 0.0;
            for (const auto& row : run_cov(li, li.inst.grid->cells_per_axis())) {
                worst = std::max(worst, row.rep.relative_gap);
                v = lz::combine(v, row.rep.verdict);
            }
            notes << " cov_max_gap=" << format_double(worst);
        }
        if (checks == 0) notes << " (no oracle)";
        all = lz::combine(all, v);
        out << lz::to_string(v) << " " << li.inst.name << notes.str() << "\n";
    }
    return exit_code(all);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"lfe: elementary solutions of linear functional equations in Lorentz spaces"};
    app.require_subcommand(1, 1);
    Options o;

    auto common = [&o](CLI::App* s) {
        s->add_option("--instance", o.instance, "YAML instance file (self-test: file or directory)");
        s->add_option("--grid", o.grid, "cells per axis (power of two, >= 16)");
        s->add_option("--psi", o.psi, "Young function family: power, scaled-power, poly23");
        s->add_option("--m", o.m, "Young function parameter");
        s->add_option("--route", o.route, "distribution, rearrangement_tau, rearrangement_weight or all");
        s->add_option("--tol", o.tol, "stopping tolerance on the tail bound");
        s->add_option("--max-steps", o.max_steps, "iteration cap");
        s->add_option("--seed", o.seed, "seed for random corpora");
        s->add_option("--out", o.out, "output directory");
        s->add_flag("--force", o.force, "solve even if the contraction audit fails");
    };
    using Cmd = int (*)(const Options&, std::ostream&);
    const std::pair<const char*, Cmd> cmds[] = {
        {"solve", cmd_solve}, {"audit", cmd_audit},    {"norm", cmd_norm},           {"axioms", cmd_axioms},
        {"bridge", cmd_bridge}, {"cov-check", cmd_cov}, {"self-test", cmd_self_test},
    };
    std::vector<std::pair<CLI::App*, Cmd>> subs;
    for (const auto& [name, fn] : cmds) {
        CLI::App* s = app.add_subcommand(name);
        common(s);
        subs.emplace_back(s, fn);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "lfe: " << e.what() << "\n";
        return 2;
    }

    try {
        for (const auto& [s, fn] : subs)
            if (s->parsed()) return fn(o, out);
    } catch (const lz::AuditRefused& e) {
        err << "lfe: " << e.what() << " (smallest feasible alpha " << format_double(e.report.worst_ratio) << ")\n";
        return 1;
    } catch (const lz::DivergenceError& e) {
        err << "lfe: DIVERGENCE: " << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        err << "lfe: " << e.what() << "\n";
        return 2;
    } catch (const lz::NumericalError& e) {
        err << "lfe: numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const fs::filesystem_error& e) {
        err << "lfe: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace lfe
