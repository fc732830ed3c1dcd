#include <gtest/gtest.h>

#include <cmath>

#include "obstakl/classical.hpp"

using namespace obstakl;

namespace {

SolverOptions pdas(double tol = 1e-12) {
    SolverOptions o;
    o.tol = tol;
    return o;
}

FeSpace interval_space(Index n) {
    return make_dirichlet_space(std::make_shared<const SimplicialMesh>(uniform_interval_mesh(0.0, 1.0, n)));
}

}  // namespace

TEST(Benchmark1d, Values) {
    const ClassicalBenchmark b = benchmark_1d();
    EXPECT_DOUBLE_EQ(b.exact_u({0.5, 0.0}), 1.0 / 16.0);
    EXPECT_EQ(b.exact_u({0.25, 0.0}), 0.0);
    EXPECT_EQ(b.exact_grad({0.25, 0.0}).x, 0.0);
    EXPECT_EQ(b.exact_u({0.75, 0.0}), 0.0);
    EXPECT_NEAR(b.exact_grad({0.25 + 1e-9, 0.0}).x, 0.0, 1e-8);
    // multiplier on the contact set: -u'' - f = 0 - (-1)
    EXPECT_EQ(b.minus_laplacian({0.1, 0.0}) - b.f({0.1, 0.0}), 1.0);
}

TEST(Benchmark1d, ComplementarityBySubstitution) {
    const ClassicalBenchmark b = benchmark_1d();
    for (int i = 0; i <= 1000; ++i) {
        const Point x{i / 1000.0, 0.0};
        const double gap = b.exact_u(x) - b.psi(x);
        const double lambda = b.minus_laplacian(x) - b.f(x);
        EXPECT_GE(gap, 0.0);
        EXPECT_GE(lambda, 0.0);
        EXPECT_EQ(gap * lambda, 0.0);
    }
    // second derivative stays bounded by the stated seminorm
    for (int i = 1; i < 1000; ++i) EXPECT_LE(std::abs(b.minus_laplacian({i / 1000.0, 0.0})), b.w2inf_seminorm + 1e-12);
}

TEST(Benchmark2d, ComplementarityAndNegativeLoad) {
    const ClassicalBenchmark b = benchmark_2d();
    const double R = kBenchmark2dRadius;
    for (int i = 0; i <= 100; ++i)
        for (int j = 0; j <= 100; ++j) {
            const Point x{i / 100.0, j / 100.0};
            const double gap = b.exact_u(x) - b.psi(x);
            const double lambda = b.minus_laplacian(x) - b.f(x);
            EXPECT_GE(gap, 0.0);
            EXPECT_GE(lambda, -1e-12);
            EXPECT_NEAR(gap * lambda, 0.0, 1e-12);
            // f < 0 near the free boundary r = R
            const double r = std::hypot(x.x - 0.5, x.y - 0.5);
            if (std::abs(r - R) < 0.05) {
                EXPECT_LT(b.f(x), 0.0);
            }
        }
    EXPECT_EQ(b.exact_u({0.5 + R, 0.5}), 0.0);
    EXPECT_NEAR(b.exact_u({0.5, 0.5}), R * R, 1e-15);
}

TEST(SolveClassical, OneDimensionalKkt) {
    const ClassicalSolution s = solve_classical(benchmark_1d(), 8, pdas(1e-10));
    EXPECT_LE(s.vi.kkt_residual, 1e-9);
    for (double u : s.U) EXPECT_GE(u, 0.0);
}

TEST(SolveClassical, InactiveObstacleMatchesLinearSolve) {
    ClassicalBenchmark b = benchmark_1d();
    b.f = [](const Point& p) { return std::sin(3.0 * p.x) + 2.0; };
    b.psi = [](const Point&) { return -1e6; };
    const ClassicalSolution s = solve_classical(b, 32, pdas());
    const std::vector<double> lin = solve_spd(s.system.A, s.system.F);
    for (Index i = 0; i < lin.size(); ++i) EXPECT_NEAR(s.vi.U[i], lin[i], 1e-10);
    EXPECT_TRUE(s.vi.active_set.empty());
}

TEST(SolveClassical, RefinementHalvesH1Error) {
    const ClassicalBenchmark b = benchmark_1d();
    auto err = [&](Index n) {
        const ClassicalSolution s = solve_classical(b, n, pdas());
        return energy_norm_error(s.space, s.U, b.exact_u, b.exact_grad);
    };
    const double ratio = err(16) / err(32);
    EXPECT_GE(ratio, 1.7);
    EXPECT_LE(ratio, 2.3);
}

TEST(SolveClassical, SolversAgree) {
    for (int dim : {1, 2}) {
        const ClassicalBenchmark b = dim == 1 ? benchmark_1d() : benchmark_2d();
        SolverOptions psor = pdas(1e-13);
        psor.kind = SolverKind::psor;
        const auto a = solve_classical(b, 16, psor).U;
        const auto c = solve_classical(b, 16, pdas()).U;
        for (Index i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], c[i], 1e-8) << dim;
    }
}

TEST(SolveClassical, TwoDimensionalSymmetryAndContact) {
    const ClassicalSolution s = solve_classical(benchmark_2d(), 32, pdas());
    const Index row = 33;
    for (Index j = 0; j < row; ++j)
        for (Index i = 0; i < row; ++i) {
            const double u = s.U[i + j * row];
            EXPECT_GE(u, 0.0);
            // the diagonal mesh is invariant under x <-> y and under the half turn
            EXPECT_NEAR(u, s.U[j + i * row], 1e-9);
            EXPECT_NEAR(u, s.U[(row - 1 - i) + (row - 1 - j) * row], 1e-9);
        }
    EXPECT_FALSE(s.vi.active_set.empty());
    EXPECT_LE(s.vi.kkt_residual, 1e-8);
}

TEST(FreeBoundary, HatExample) {
    const FeSpace s = interval_space(2);
    const std::vector<double> U{0.0, 1.0, 0.0};
    const FreeBoundaryEstimate est = extract_free_boundary(s, U, 0.5);
    ASSERT_EQ(est.gamma_points.size(), 2u);
    EXPECT_DOUBLE_EQ(est.gamma_points[0].x, 0.25);
    EXPECT_DOUBLE_EQ(est.gamma_points[1].x, 0.75);
    EXPECT_DOUBLE_EQ(est.omega_plus_measure, 0.5);
}

TEST(FreeBoundary, ZeroThresholdPositiveEverywhere) {
    const FeSpace s = interval_space(4);
    const std::vector<double> U{0.1, 0.2, 0.3, 0.2, 0.1};
    const FreeBoundaryEstimate est = extract_free_boundary(s, U, 0.0);
    EXPECT_DOUBLE_EQ(est.omega_plus_measure, 1.0);
    EXPECT_TRUE(est.gamma_points.empty());

    const FeSpace sq = make_neumann_space(std::make_shared<const SimplicialMesh>(structured_triangle_mesh({}, 4)));
    const std::vector<double> P(25, 0.5);
    const FreeBoundaryEstimate e2 = extract_free_boundary(sq, P, 0.0);
    EXPECT_NEAR(e2.omega_plus_measure, 1.0, 1e-14);
    EXPECT_TRUE(e2.gamma_segments.empty());
}

TEST(FreeBoundary, ThresholdAboveMaximum) {
    const FeSpace s = interval_space(4);
    const std::vector<double> U{0.0, 0.2, 0.3, 0.2, 0.0};
    const FreeBoundaryEstimate est = extract_free_boundary(s, U, 0.31);
    EXPECT_EQ(est.omega_plus_measure, 0.0);
    EXPECT_TRUE(est.omega_plus_cells.empty());
    EXPECT_THROW(extract_free_boundary(s, U, -0.1), InputError);
}

TEST(FreeBoundary, TwoDimensionalHalfPlane) {
    // U - delta = x - 1/2: the positive part is the half square x > 1/2.
    const auto mesh = std::make_shared<const SimplicialMesh>(structured_triangle_mesh({}, 8));
    const FeSpace sq = make_neumann_space(mesh);
    const std::vector<double> U = interpolate_nodal(*mesh, [](const Point& p) { return p.x - 0.5 + 0.3; });
    const FreeBoundaryEstimate est = extract_free_boundary(sq, U, 0.3);
    EXPECT_NEAR(est.omega_plus_measure, 0.5, 1e-12);
    for (const Point& p : est.gamma_points) EXPECT_NEAR(p.x, 0.5, 1e-12);
}

TEST(InterfaceMetrics, ExactInterpolantGivesZero) {
    const ClassicalBenchmark b = benchmark_1d();
    const FeSpace s = interval_space(8);
    const FreeBoundaryEstimate est = extract_free_boundary(s, interpolate_nodal(s, b.exact_u), 0.0);
    const InterfaceMetrics m = interface_metrics(est, b, 0.0);
    EXPECT_NEAR(m.sym_diff_measure, 0.0, 1e-15);
    EXPECT_NEAR(m.sup_distance, 0.0, 1e-15);
    EXPECT_EQ(m.points_checked, 2u);
}

TEST(InterfaceMetrics, ShiftedInterface) {
    const ClassicalBenchmark b = benchmark_1d();
    const FeSpace s = interval_space(100);
    std::vector<double> U(101, 0.0);
    for (Index i = 25; i <= 75; ++i) U[i] = 1.0;
    const FreeBoundaryEstimate est = extract_free_boundary(s, U, 0.0);
    ASSERT_EQ(est.gamma_points.size(), 2u);
    EXPECT_NEAR(est.gamma_points[0].x, 0.24, 1e-14);
    EXPECT_NEAR(est.gamma_points[1].x, 0.76, 1e-14);
    const InterfaceMetrics m = interface_metrics(est, b, 0.0);
    EXPECT_NEAR(m.sup_distance, 0.01, 1e-14);
    EXPECT_NEAR(m.sym_diff_measure, 0.02, 1e-14);
    // a margin beyond the interface removes it from K
    EXPECT_EQ(interface_metrics(est, b, 0.3).points_checked, 0u);
}

TEST(Delta, Examples) {
    EXPECT_NEAR(delta_for_level(0.1, 1.0, 1.0), 0.01 * std::log(10.0), 1e-17);
    EXPECT_NEAR(delta_for_level(0.1, 1.0, 1.0), 0.023026, 1e-6);
    EXPECT_EQ(delta_for_level(0.1, 0.0, 8.0), 0.0);
    EXPECT_THROW(delta_for_level(1.0, 1.0, 1.0), InputError);
}

TEST(Delta, CalibrateCStar) {
    EXPECT_EQ(calibrate_c_star({0.5, 0.1}, {0.3, 0.1}), 2.0);
    EXPECT_EQ(calibrate_c_star({0.01}, {0.1}), 1.0);
    EXPECT_EQ(calibrate_c_star({1.0}, {0.1}), 16.0);
    EXPECT_THROW(calibrate_c_star({1.0}, {}), InputError);
}

TEST(GrowthEstimate, ConstantStableFromLevelFour) {
    const ClassicalBenchmark b = benchmark_1d();
    std::vector<double> C;
    for (int L = 4; L <= 9; ++L) C.push_back(contact_growth_constant(b, uniform_interval_mesh(0.0, 1.0, Index{1} << L)));
    const double lo = *std::min_element(C.begin(), C.end()), hi = *std::max_element(C.begin(), C.end());
    EXPECT_GT(lo, 0.0);
    EXPECT_LE(hi / lo, 2.0);
}
