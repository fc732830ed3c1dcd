// obstakl command-line driver: single solves, convergence studies, mesh info.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "obstakl/classical.hpp"
#include "obstakl/fractional.hpp"
#include "obstakl/harness.hpp"
#include "obstakl/mesh.hpp"
#include "obstakl/thin.hpp"
#include "obstakl/vi_solver.hpp"

namespace {

using namespace obstakl;

constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitCheckFailed = 4;

std::string kkt_line(const KktReport& r, Index iterations, const std::string& solver) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "kkt infeasibility=%.3e stationarity=%.3e complementarity=%.3e dual=%.3e iterations=%zu solver=%s",
                  r.infeasibility, r.stationarity, r.complementarity, r.dual_infeasibility, iterations,
                  solver.c_str());
    return buf;
}

void dump_vector(const std::string& prefix, const std::string& suffix, std::span<const double> v) {
    if (prefix.empty()) {
        write_obsvec(std::cout, v);
        return;
    }
    std::ofstream out(prefix + suffix);
    if (!out) throw InputError("cannot write " + prefix + suffix);
    write_obsvec(out, v);
}

SolverOptions solver_options(const std::string& name, double tol, int max_iter = 0) {
    SolverOptions o;
    o.kind = parse_solver_kind(name);
    o.tol = tol;
    o.max_iter = static_cast<Index>(max_iter);
    return o;
}

struct ClassicalArgs {
    int dim = 1;
    int level = 5;
    std::string solver = "pdas";
    double tol = 1e-10;
    int max_iter = 0;
    std::string prefix;
};

int run_classical(const ClassicalArgs& a) {
    const ClassicalBenchmark bench = a.dim == 1 ? benchmark_1d() : benchmark_2d();
    const ClassicalSolution sol = solve_classical(bench, Index{1} << a.level, solver_options(a.solver, a.tol, a.max_iter));
    dump_vector(a.prefix, ".obsvec", sol.U);
    std::cout << kkt_line(sol.vi.kkt, sol.vi.iterations, sol.vi.solver_id) << '\n';
    return 0;
}

struct ThinArgs {
    int level = 4;
    std::string solver = "pdas";
    double tol = 1e-10;
    int max_iter = 0;
    std::string prefix;
};

int run_thin(const ThinArgs& a) {
    const ThinSolution sol = solve_thin(default_thin_problem(), Index{1} << a.level, solver_options(a.solver, a.tol, a.max_iter));
    dump_vector(a.prefix, ".obsvec", sol.U);
    const KktReport r = signorini_report(sol.space, sol.system, sol.vi.U, a.tol);
    std::cout << kkt_line(r, sol.vi.iterations, sol.vi.solver_id) << '\n';
    return 0;
}

struct FractionalArgs {
    double s = 0.5;
    int level = 4;
    double gamma = 0.0;
    double Y = 0.0;
    bool linear = false;
    std::string solver = "pdas";
    double tol = 1e-10;
    std::string prefix = "fractional";
};

int run_fractional(const FractionalArgs& a) {
    if (a.solver == "cg" && !a.linear) throw InputError("--solver cg needs --linear");
    const Index M = Index{1} << a.level;
    const double lambda1 = std::numbers::pi * std::numbers::pi;
    const double Y = a.Y > 0.0 ? a.Y : choose_truncation(a.s, lambda1, std::max(10.0, double(M) * double(M)));
    const FractionalConfig cfg = make_fractional_config(a.s, a.gamma > 0.0 ? a.gamma : default_gamma(a.s), Y);
    const ScalarField f = a.linear ? ScalarField(detail::sine_mode) : ScalarField([](const Point&) { return 0.0; });

    ExtensionSolution ext;
    KktReport kkt;
    Index iterations = 0;
    if (a.solver == "cg") {
        ext = solve_fractional_linear(cfg, f, M);
    } else {
        const SolverOptions so = solver_options(a.solver, a.tol);
        // --linear: the obstacle sits far below the solution and never binds
        const ScalarField psi =
            a.linear ? ScalarField([](const Point&) { return -1e6; }) : ScalarField(detail::fractional_obstacle_psi);
        FractionalObstacleResult r = solve_fractional_obstacle(cfg, f, psi, M, so);
        kkt = r.vi.kkt;
        iterations = r.vi.iterations;
        ext = std::move(r.extension);
    }
    dump_vector(a.prefix, ".trace.obsvec", ext.trace);
    std::ofstream man(a.prefix + ".manifest");
    if (!man) throw InputError("cannot write " + a.prefix + ".manifest");
    char buf[2048];
    std::snprintf(buf, sizeof buf,
                  "problem=%s\ns=%.17g\nalpha=%.17g\nd_s=%.17g\nY=%.17g\ngamma=%.17g\nM=%zu\nndofs=%zu\n"
                  "energy=%.17g\nsolver=%s\niterations=%zu\nkkt_infeasibility=%.6e\nkkt_stationarity=%.6e\n"
                  "kkt_complementarity=%.6e\nkkt_dual=%.6e\n",
                  a.linear ? "linear" : "obstacle", cfg.s, cfg.alpha, cfg.d_s, cfg.Y, cfg.gamma, M, ext.ndofs(),
                  ext.energy, a.solver.c_str(), iterations, kkt.infeasibility, kkt.stationarity,
                  kkt.complementarity, kkt.dual_infeasibility);
    man << buf;
    std::cout << buf;
    return 0;
}

struct StudyArgs {
    std::string config;
    bool check = false;
};

int run_study_command(const StudyArgs& a) {
    const StudySpec spec = load_study_spec(a.config);
    std::unique_ptr<std::ofstream> file;
    std::ostream* csv = &std::cout;
    if (!spec.csv_path.empty()) {
        file = std::make_unique<std::ofstream>(spec.csv_path);
        if (!*file) throw InputError("cannot write " + spec.csv_path);
        csv = file.get();
    }
    const StudyResult res = run_study(spec, csv);
    std::ostream& log = spec.csv_path.empty() ? std::cerr : std::cout;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: %zu levels, slope %.4f, R^2 %.4f", to_string(spec.problem),
                  res.records.size(), res.h1_rate.slope, res.h1_rate.r_squared);
    log << buf;
    if (spec.problem == ProblemId::classical1d || spec.problem == ProblemId::classical2d)
        log << ", c_star " << res.c_star;
    log << '\n';
    if (!a.check) return 0;
    bool ok = true;
    for (const CheckLine& c : check_study(res)) {
        log << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        ok = ok && c.passed;
    }
    return ok ? 0 : kExitCheckFailed;
}

struct MeshArgs {
    int dim = 2;
    int level = 3;
    std::string file;
    std::string write;
    int axial = 0;
    double gamma = 1.0;
    double Y = 1.0;
};

int run_mesh_info(const MeshArgs& a) {
    std::shared_ptr<const SimplicialMesh> mesh;
    if (!a.file.empty()) {
        std::ifstream in(a.file);
        if (!in) throw InputError("cannot open " + a.file);
        mesh = std::make_shared<const SimplicialMesh>(read_obsmesh(in));
    } else {
        const Index n = Index{1} << a.level;
        mesh = std::make_shared<const SimplicialMesh>(a.dim == 1 ? uniform_interval_mesh(0.0, 1.0, n)
                                                                 : structured_triangle_mesh({0, 0, 1, 1}, n));
    }
    double sigma = 0.0;
    for (Index c = 0; c < mesh->num_cells(); ++c) sigma = std::max(sigma, mesh->shape_coefficient(c));
    const AcutenessReport acute = is_weakly_acute(*mesh);
    std::printf("dim=%d\nvertices=%zu\ncells=%zu\nboundary_nodes=%zu\nmax_h=%.10e\nmeasure=%.10e\n"
                "shape_coefficient=%.6f\nweakly_acute=%s\n",
                mesh->dim(), mesh->num_vertices(), mesh->num_cells(), mesh->boundary_nodes().size(), mesh->max_h(),
                mesh->measure(), sigma, acute.weakly_acute ? "yes" : "no");
    if (a.axial > 0) {
        const GradedPartition p = graded_partition(a.Y, static_cast<Index>(a.axial), a.gamma);
        std::printf("axial_intervals=%zu\naxial_first=%.10e\naxial_neighbor_ratio=%.6f\n", p.intervals(),
                    p.interval_length(0), p.neighbor_ratio());
    }
    if (!a.write.empty()) {
        std::ofstream out(a.write);
        if (!out) throw InputError("cannot write " + a.write);
        write_obsmesh(out, *mesh);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"obstakl: finite element solvers for obstacle problems"};
    app.require_subcommand(1);

    auto* solve = app.add_subcommand("solve", "solve one problem instance");
    solve->require_subcommand(1);

    ClassicalArgs ca;
    auto* classical = solve->add_subcommand("classical", "classical obstacle benchmark");
    classical->add_option("--dim", ca.dim)->check(CLI::IsMember({1, 2}));
    classical->add_option("--level", ca.level, "2^level cells per side")->check(CLI::Range(1, 12));
    classical->add_option("--solver", ca.solver)->check(CLI::IsMember({"psor", "pdas"}));
    classical->add_option("--tol", ca.tol)->check(CLI::PositiveNumber);
    classical->add_option("--max-iter", ca.max_iter, "0 keeps the solver default")->check(CLI::NonNegativeNumber);
    classical->add_option("--dump-prefix", ca.prefix, "write PREFIX.obsvec instead of printing the vector");

    ThinArgs ta;
    auto* thin = solve->add_subcommand("thin", "Signorini problem on the unit square");
    thin->add_option("--level", ta.level)->check(CLI::Range(1, 10));
    thin->add_option("--solver", ta.solver)->check(CLI::IsMember({"psor", "pdas"}));
    thin->add_option("--tol", ta.tol)->check(CLI::PositiveNumber);
    thin->add_option("--max-iter", ta.max_iter, "0 keeps the solver default")->check(CLI::NonNegativeNumber);
    thin->add_option("--dump-prefix", ta.prefix);

    FractionalArgs fa;
    auto* frac = solve->add_subcommand("fractional", "spectral fractional problem via the extension");
    frac->add_option("--s", fa.s)->check(CLI::Range(0.0, 1.0));
    frac->add_option("--level", fa.level)->check(CLI::Range(1, 10));
    frac->add_option("--gamma", fa.gamma, "axial grading exponent (default 1.05 * 3/(2s))");
    frac->add_option("--Y", fa.Y, "truncation height (default from the DoF count)");
    frac->add_flag("--linear", fa.linear, "f = sin(pi x) without obstacle");
    frac->add_option("--solver", fa.solver)->check(CLI::IsMember({"psor", "pdas", "cg"}));
    frac->add_option("--tol", fa.tol)->check(CLI::PositiveNumber);
    frac->add_option("--dump-prefix", fa.prefix);

    StudyArgs sa;
    auto* study = app.add_subcommand("study", "convergence study from a config file");
    study->add_option("--config", sa.config)->required()->check(CLI::ExistingFile);
    study->add_flag("--check", sa.check, "apply acceptance thresholds (exit 4 on failure)");

    MeshArgs ma;
    auto* mesh = app.add_subcommand("mesh", "mesh utilities");
    mesh->require_subcommand(1);
    auto* info = mesh->add_subcommand("info", "print mesh statistics");
    info->add_option("--dim", ma.dim)->check(CLI::IsMember({1, 2}));
    info->add_option("--level", ma.level)->check(CLI::Range(0, 12));
    info->add_option("--file", ma.file, "read an OBSMESH file instead");
    info->add_option("--write", ma.write, "write the mesh as OBSMESH");
    info->add_option("--axial", ma.axial, "also describe a graded partition with this many intervals");
    info->add_option("--gamma", ma.gamma);
    info->add_option("--Y", ma.Y);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (classical->parsed()) return run_classical(ca);
        if (thin->parsed()) return run_thin(ta);
        if (frac->parsed()) return run_fractional(fa);
        if (study->parsed()) return run_study_command(sa);
        if (info->parsed()) return run_mesh_info(ma);
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNoConvergence;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitUsage;
}
