#pragma once

/// Convergence studies across refinement levels: one record per level, CSV
/// output, fitted rates and acceptance checks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "obstakl/classical.hpp"
#include "obstakl/errors.hpp"
#include "obstakl/fit.hpp"
#include "obstakl/fractional.hpp"
#include "obstakl/thin.hpp"
#include "obstakl/vi_solver.hpp"

namespace obstakl {

enum class ProblemId { classical1d, classical2d, thin, fractional_linear, fractional_obstacle };

inline ProblemId parse_problem_id(const std::string& s) {
    if (s == "classical1d") return ProblemId::classical1d;
    if (s == "classical2d") return ProblemId::classical2d;
    if (s == "thin") return ProblemId::thin;
    if (s == "fractional-linear") return ProblemId::fractional_linear;
    if (s == "fractional-obstacle") return ProblemId::fractional_obstacle;
    throw InputError("unknown problem '" + s + "'");
}

inline const char* to_string(ProblemId p) {
    switch (p) {
        case ProblemId::classical1d: return "classical1d";
        case ProblemId::classical2d: return "classical2d";
        case ProblemId::thin: return "thin";
        case ProblemId::fractional_linear: return "fractional-linear";
        case ProblemId::fractional_obstacle: return "fractional-obstacle";
    }
    return "?";
}

/// Refinement level L means 2^L cells per side (classical, thin) or
/// M = 2^L base cells and axial intervals (fractional).
struct StudySpec {
    ProblemId problem = ProblemId::classical1d;
    std::vector<int> levels;
    SolverOptions solver{};
    // fractional
    double s = 0.5;
    std::optional<double> gamma;  ///< default: 5% above 3/(2s)
    std::optional<double> Y;      ///< default: chosen from the DoF count
    // overkill reference for thin and fractional-obstacle: finest level + offset
    int reference_offset = 3;
    // free boundary
    std::optional<double> c_star;  ///< default: calibrated on the two coarsest levels
    double margin = 2.0;           ///< K drops points within margin * h of the boundary
    int fb_min_level = 4;          ///< first level the interface checks apply to
    bool timing = false;           ///< write wall time; off keeps output byte-stable
    std::string csv_path;

    void validate() const {
        if (levels.empty()) throw InputError("study needs at least one level");
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (levels[i] < 1 || levels[i] > 14) throw InputError("levels must lie in 1..14");
            if (i > 0 && levels[i] <= levels[i - 1]) throw InputError("levels must be strictly increasing");
        }
        if (!(s > 0.0 && s < 1.0)) throw InputError("s must lie in (0,1)");
        if (gamma && !(*gamma > 3.0 / (2.0 * s))) throw InputError("gamma must exceed 3/(2s)");
        if (Y && !(*Y >= 1.0)) throw InputError("Y must be at least 1");
        if (reference_offset < 1) throw InputError("reference_offset must be at least 1");
        if (c_star && !(*c_star > 0.0)) throw InputError("c_star must be positive");
        if (!(margin >= 0.0)) throw InputError("margin must be nonnegative");
    }
};

struct ConvergenceRecord {
    int level = 0;
    double size = 0.0;  ///< h for classical and thin, #DoFs for fractional
    double err_h1 = 0.0;  ///< H1 (semi)norm, or weighted energy norm for fractional
    double err_l2 = 0.0;
    double err_linf = 0.0;
    double fb_measure = 0.0;
    double fb_distance = 0.0;
    double kkt = 0.0;
    double seconds = 0.0;
    // not written to CSV
    double fb_bound = 0.0;  ///< sqrt(2 eta)
    double eta = 0.0;
    Index fb_points = 0;
};

struct RateFit {
    double slope = 0.0;
    double r_squared = 1.0;
};

/// Least squares of log(error) against log(size).
inline RateFit fit_rate(std::span<const double> size, std::span<const double> error) {
    detail::require(size.size() == error.size(), "fit_rate: length mismatch");
    detail::require(size.size() >= 2, "fit_rate needs at least two pairs");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < size.size(); ++i) {
        if (!(size[i] > 0.0) || !(error[i] > 0.0)) throw InputError("fit_rate needs positive sizes and errors");
        x.push_back(std::log(size[i]));
        y.push_back(std::log(error[i]));
    }
    const LinearFit f = linear_fit(x, y);
    return {f.slope, f.r_squared};
}

struct StudyResult {
    StudySpec spec;
    std::vector<ConvergenceRecord> records;
    RateFit h1_rate;       ///< fractional: errors divided by |log #DoFs|^s first
    double c_star = 0.0;   ///< classical only
    std::vector<double> corrected;  ///< fractional: the divided errors
};

inline constexpr const char* kCsvHeader = "level,size,err_h1,err_l2,err_linf,fb_measure,fb_distance,kkt,seconds";

inline std::string csv_row(const ConvergenceRecord& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%d,%.10e,%.10e,%.10e,%.10e,%.10e,%.10e,%.10e,%.10e", r.level, r.size, r.err_h1,
                  r.err_l2, r.err_linf, r.fb_measure, r.fb_distance, r.kkt, r.seconds);
    return buf;
}

namespace detail {

class Stopwatch {
public:
    explicit Stopwatch(bool on) : on_(on), t0_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        if (!on_) return 0.0;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    bool on_;
    std::chrono::steady_clock::time_point t0_;
};

inline Index cells_for_level(int level) { return Index{1} << level; }

inline double sine_mode(const Point& x) { return std::sin(std::numbers::pi * x.x); }

/// Obstacle for the fractional study: concave, positive in the middle,
/// negative on the boundary of (0,1).
inline double fractional_obstacle_psi(const Point& x) { return 0.25 - 2.0 * (x.x - 0.5) * (x.x - 0.5); }

template <typename Emit>
void run_classical(const StudySpec& spec, StudyResult& res, Emit&& emit) {
    const ClassicalBenchmark bench = spec.problem == ProblemId::classical1d ? benchmark_1d() : benchmark_2d();
    struct Level {
        ClassicalSolution sol;
        ConvergenceRecord rec;
        double h;
    };
    auto finish = [&](Level& lv) {
        const Stopwatch sw(spec.timing);
        const double eta = delta_for_level(lv.h, res.c_star, bench.w2inf_seminorm);
        const FreeBoundaryEstimate est = extract_free_boundary(lv.sol.space, lv.sol.U, eta);
        const InterfaceMetrics m = interface_metrics(est, bench, spec.margin * lv.h);
        lv.rec.fb_measure = m.sym_diff_measure;
        lv.rec.fb_distance = m.sup_distance;
        lv.rec.fb_points = m.points_checked;
        lv.rec.eta = eta;
        lv.rec.fb_bound = std::sqrt(2.0 * eta);
        lv.rec.seconds += sw.seconds();
        emit(lv.rec);
    };
    std::vector<Level> pending;
    std::vector<double> linf, eta1;
    bool calibrated = spec.c_star.has_value();
    if (calibrated) res.c_star = *spec.c_star;
    for (std::size_t i = 0; i < spec.levels.size(); ++i) {
        const int L = spec.levels[i];
        const Stopwatch sw(spec.timing);
        Level lv{solve_classical(bench, cells_for_level(L), spec.solver), {}, 0.0};
        const SimplicialMesh& mesh = *lv.sol.space.mesh;
        lv.h = mesh.max_h();
        const ErrorNorms e = error_norms(mesh, lv.sol.U, bench.exact_u, bench.exact_grad);
        lv.rec.level = L;
        lv.rec.size = lv.h;
        lv.rec.err_h1 = e.h1_semi;
        lv.rec.err_l2 = e.l2;
        lv.rec.err_linf = e.linf;
        lv.rec.kkt = lv.sol.vi.kkt_residual;
        lv.rec.seconds = sw.seconds();
        pending.push_back(std::move(lv));
        if (!calibrated) {
            // c_star comes from the two coarsest levels
            linf.push_back(pending.back().rec.err_linf);
            eta1.push_back(delta_for_level(pending.back().h, 1.0, bench.w2inf_seminorm));
            if (linf.size() < 2 && i + 1 < spec.levels.size()) continue;
            res.c_star = calibrate_c_star(linf, eta1);
            calibrated = true;
        }
        for (Level& p : pending) finish(p);
        pending.clear();
    }
}

template <typename Emit>
void run_thin(const StudySpec& spec, StudyResult& res, Emit&& emit) {
    (void)res;
    const ThinProblem prob = default_thin_problem();
    const ThinSolution ref = solve_thin(prob, cells_for_level(spec.levels.back() + spec.reference_offset), spec.solver);
    for (int L : spec.levels) {
        const Stopwatch sw(spec.timing);
        const ThinSolution sol = solve_thin(prob, cells_for_level(L), spec.solver);
        const ErrorNorms e = nested_error_norms(sol.space.mesh, sol.U, ref.space.mesh, ref.U);
        ConvergenceRecord r;
        r.level = L;
        r.size = sol.space.mesh->max_h();
        r.err_h1 = e.h1();
        r.err_l2 = e.l2;
        r.err_linf = e.linf;
        r.kkt = signorini_report(sol.space, sol.system, sol.vi.U, spec.solver.tol).max();
        r.seconds = sw.seconds();
        emit(r);
    }
}

inline FractionalConfig study_config(const StudySpec& spec, double Y) {
    return make_fractional_config(spec.s, spec.gamma.value_or(default_gamma(spec.s)), Y);
}

template <typename Emit>
void run_fractional_linear(const StudySpec& spec, StudyResult& res, Emit&& emit) {
    (void)res;
    const double lambda1 = std::numbers::pi * std::numbers::pi;
    for (int L : spec.levels) {
        const Stopwatch sw(spec.timing);
        const Index M = cells_for_level(L);
        const double Y = spec.Y.value_or(choose_truncation(spec.s, lambda1, std::max(10.0, double(M) * double(M))));
        const FractionalConfig cfg = study_config(spec, Y);
        const ExtensionSolution sol = solve_fractional_linear(cfg, sine_mode, M, spec.solver.cg);
        const double scale = std::pow(lambda1, -spec.s);
        const ErrorNorms t = error_norms(
            sol.space.cylinder->base(), sol.trace, [scale](const Point& x) { return scale * sine_mode(x); }, nullptr);
        ConvergenceRecord r;
        r.level = L;
        r.size = static_cast<double>(sol.ndofs());
        r.err_h1 = sine_mode_energy_error(cfg, sol);
        r.err_l2 = t.l2;
        r.err_linf = t.linf;
        r.seconds = sw.seconds();
        emit(r);
    }
}

template <typename Emit>
void run_fractional_obstacle(const StudySpec& spec, StudyResult& res, Emit&& emit) {
    (void)res;
    const double lambda1 = std::numbers::pi * std::numbers::pi;
    const Index M_ref = cells_for_level(spec.levels.back() + spec.reference_offset);
    // One height for every level keeps the cylinders nested.
    const double Y = spec.Y.value_or(choose_truncation(spec.s, lambda1, double(M_ref) * double(M_ref)));
    const FractionalConfig cfg = study_config(spec, Y);
    auto zero = [](const Point&) { return 0.0; };
    const FractionalObstacleResult ref = solve_fractional_obstacle(cfg, zero, fractional_obstacle_psi, M_ref, spec.solver);
    for (int L : spec.levels) {
        const Stopwatch sw(spec.timing);
        const FractionalObstacleResult sol =
            solve_fractional_obstacle(cfg, zero, fractional_obstacle_psi, cells_for_level(L), spec.solver);
        const ErrorNorms t = nested_error_norms(sol.extension.space.cylinder->base_ptr(), sol.extension.trace,
                                                ref.extension.space.cylinder->base_ptr(), ref.extension.trace);
        ConvergenceRecord r;
        r.level = L;
        r.size = static_cast<double>(sol.extension.ndofs());
        r.err_h1 = extension_energy_distance(sol.extension, ref.extension);
        r.err_l2 = t.l2;
        r.err_linf = t.linf;
        r.kkt = sol.vi.kkt_residual;
        r.seconds = sw.seconds();
        emit(r);
    }
}

}  // namespace detail

inline bool is_fractional(ProblemId p) {
    return p == ProblemId::fractional_linear || p == ProblemId::fractional_obstacle;
}

/// Runs every level in order. Rows go to `csv` (if given) as soon as they are
/// known, so a failing level leaves the completed rows on disk.
inline StudyResult run_study(const StudySpec& spec, std::ostream* csv = nullptr) {
    spec.validate();
    StudyResult res;
    res.spec = spec;
    if (csv) *csv << kCsvHeader << '\n' << std::flush;
    auto emit = [&](const ConvergenceRecord& r) {
        res.records.push_back(r);
        if (csv) *csv << csv_row(r) << '\n' << std::flush;
    };
    switch (spec.problem) {
        case ProblemId::classical1d:
        case ProblemId::classical2d: detail::run_classical(spec, res, emit); break;
        case ProblemId::thin: detail::run_thin(spec, res, emit); break;
        case ProblemId::fractional_linear: detail::run_fractional_linear(spec, res, emit); break;
        case ProblemId::fractional_obstacle: detail::run_fractional_obstacle(spec, res, emit); break;
    }
    if (res.records.size() >= 2) {
        std::vector<double> size, err;
        for (const ConvergenceRecord& r : res.records) {
            size.push_back(r.size);
            double e = r.err_h1;
            if (is_fractional(spec.problem)) {
                e /= std::pow(std::log(r.size), spec.s);
                res.corrected.push_back(e);
            }
            err.push_back(e);
        }
        res.h1_rate = fit_rate(size, err);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Acceptance thresholds for --check

struct CheckLine {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline CheckLine range_check(std::string name, double v, double lo, double hi) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.4f in [%.2f, %.2f]", v, lo, hi);
    return {std::move(name), v >= lo && v <= hi, buf};
}

inline CheckLine max_check(std::string name, double v, double bound) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.3e <= %.3e", v, bound);
    return {std::move(name), v <= bound, buf};
}

}  // namespace detail

/// Ratio max/min of err_linf / (h^2 |log h|) over all levels.
inline double pointwise_ratio_spread(const StudyResult& res) {
    double lo = 1e300, hi = 0.0;
    for (const ConvergenceRecord& r : res.records) {
        const double q = r.err_linf / (r.size * r.size * std::abs(std::log(r.size)));
        lo = std::min(lo, q);
        hi = std::max(hi, q);
    }
    return hi / lo;
}

struct InterfaceCheck {
    double worst_distance_margin = 0.0;  ///< max over levels of fb_distance / sqrt(2 eta)
    double sym_diff_constant = 0.0;      ///< frozen from the first interface level
    double worst_sym_diff_ratio = 0.0;   ///< max over later levels of fb_measure / eta^{1/2}
    Index levels_checked = 0;
};

inline InterfaceCheck interface_check(const StudyResult& res) {
    InterfaceCheck c;
    bool frozen = false;
    for (const ConvergenceRecord& r : res.records) {
        if (r.level < res.spec.fb_min_level) continue;
        ++c.levels_checked;
        c.worst_distance_margin = std::max(c.worst_distance_margin, r.fb_distance / r.fb_bound);
        const double ratio = r.fb_measure / std::sqrt(r.eta);
        if (!frozen) {
            c.sym_diff_constant = ratio;
            frozen = true;
        } else {
            c.worst_sym_diff_ratio = std::max(c.worst_sym_diff_ratio, ratio);
        }
    }
    return c;
}

inline double max_kkt(const StudyResult& res) {
    double k = 0.0;
    for (const ConvergenceRecord& r : res.records) k = std::max(k, r.kkt);
    return k;
}

inline std::vector<CheckLine> check_study(const StudyResult& res) {
    std::vector<CheckLine> out;
    const RateFit& f = res.h1_rate;
    switch (res.spec.problem) {
        case ProblemId::classical1d: {
            out.push_back(detail::range_check("h1 slope", f.slope, 0.9, 1.1));
            out.push_back(detail::range_check("h1 fit R^2", f.r_squared, 0.99, 1.0));
            out.push_back(detail::max_check("linf/(h^2|log h|) max/min", pointwise_ratio_spread(res), 3.0));
            const InterfaceCheck ic = interface_check(res);
            out.push_back(detail::max_check("interface distance / sqrt(2 eta)", ic.worst_distance_margin, 1.0));
            out.push_back(detail::max_check("sym. difference / eta^(1/2)", ic.worst_sym_diff_ratio, ic.sym_diff_constant));
            break;
        }
        case ProblemId::classical2d:
            out.push_back(detail::range_check("h1 slope", f.slope, 0.8, 1.2));
            break;
        case ProblemId::thin:
            out.push_back(detail::range_check("h1 slope", f.slope, 0.85, 1.15));
            out.push_back(detail::max_check("signorini certificate", max_kkt(res), 1e-8));
            break;
        case ProblemId::fractional_linear:
            out.push_back(detail::range_check("log-corrected slope", f.slope, -0.65, -0.35));
            break;
        case ProblemId::fractional_obstacle:
            out.push_back(detail::range_check("log-corrected slope", f.slope, -0.7, -0.3));
            out.push_back(detail::max_check("trace certificate", max_kkt(res), 1e-8));
            break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Config files: flat `key = value` lines under [section] headers.

using ConfigMap = std::map<std::string, std::string>;

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Keys are returned as "section.key"; '#' starts a comment.
inline ConfigMap parse_config(std::istream& is) {
    ConfigMap map;
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw InputError("line " + std::to_string(lineno) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = (section.empty() ? "" : section + ".") + trim(line.substr(0, eq));
        if (map.count(key)) throw InputError("duplicate key '" + key + "'");
        map[key] = trim(line.substr(eq + 1));
    }
    return map;
}

namespace detail {

inline double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size() || v.empty()) throw InputError("'" + key + "' expects a number, got '" + v + "'");
    return d;
}

inline int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d != std::floor(d)) throw InputError("'" + key + "' expects an integer");
    return static_cast<int>(d);
}

inline bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw InputError("'" + key + "' expects true or false");
}

/// "3,4,5" or "3..9".
inline std::vector<int> parse_levels(const std::string& v) {
    std::vector<int> out;
    if (const auto dots = v.find(".."); dots != std::string::npos) {
        const int a = to_int("levels", trim(v.substr(0, dots))), b = to_int("levels", trim(v.substr(dots + 2)));
        for (int L = a; L <= b; ++L) out.push_back(L);
        return out;
    }
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(to_int("levels", trim(item)));
    return out;
}

}  // namespace detail

inline StudySpec study_spec_from_config(const ConfigMap& cfg) {
    StudySpec spec;
    bool have_problem = false;
    for (const auto& [key, v] : cfg) {
        if (key == "study.problem") {
            spec.problem = parse_problem_id(v);
            have_problem = true;
        } else if (key == "study.levels") {
            spec.levels = detail::parse_levels(v);
        } else if (key == "study.output") {
            spec.csv_path = v;
        } else if (key == "study.timing") {
            spec.timing = detail::to_bool(key, v);
        } else if (key == "study.reference_offset") {
            spec.reference_offset = detail::to_int(key, v);
        } else if (key == "solver.kind") {
            spec.solver.kind = parse_solver_kind(v);
        } else if (key == "solver.tol") {
            spec.solver.tol = detail::to_double(key, v);
        } else if (key == "solver.max_iter") {
            spec.solver.max_iter = static_cast<Index>(detail::to_int(key, v));
        } else if (key == "solver.omega") {
            spec.solver.omega = detail::to_double(key, v);
        } else if (key == "solver.preconditioner") {
            if (v == "jacobi")
                spec.solver.cg.preconditioner = Preconditioner::jacobi;
            else if (v == "cholesky")
                spec.solver.cg.preconditioner = Preconditioner::cholesky;
            else
                throw InputError("solver.preconditioner expects jacobi or cholesky");
        } else if (key == "solver.cg_tol") {
            spec.solver.cg.rel_tol = detail::to_double(key, v);
        } else if (key == "fractional.s") {
            spec.s = detail::to_double(key, v);
        } else if (key == "fractional.gamma") {
            if (v != "auto") spec.gamma = detail::to_double(key, v);
        } else if (key == "fractional.Y") {
            if (v != "auto") spec.Y = detail::to_double(key, v);
        } else if (key == "free_boundary.c_star") {
            if (v != "calibrate") spec.c_star = detail::to_double(key, v);
        } else if (key == "free_boundary.margin") {
            spec.margin = detail::to_double(key, v);
        } else if (key == "free_boundary.min_level") {
            spec.fb_min_level = detail::to_int(key, v);
        } else {
            throw InputError("unknown config key '" + key + "'");
        }
    }
    if (!have_problem) throw InputError("config is missing study.problem");
    spec.validate();
    return spec;
}

inline StudySpec load_study_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config '" + path + "'");
    return study_spec_from_config(parse_config(in));
}

}  // namespace obstakl
