#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "obstakl/linear_solve.hpp"
#include "obstakl/quadrature.hpp"
#include "obstakl/sparse.hpp"

using namespace obstakl;

namespace {

SparseOperator laplacian_1d(Index n) {
    std::vector<Triplet> t;
    for (Index i = 0; i < n; ++i) {
        t.push_back({i, i, 2.0});
        if (i + 1 < n) t.push_back({i, i + 1, -1.0});
    }
    return SparseOperator::symmetric_from_upper(n, t);
}

}  // namespace

TEST(SparseOperator, DuplicatesAreSummed) {
    const SparseOperator A = SparseOperator::from_triplets(2, {{0, 0, 1.0}, {1, 0, 2.0}, {0, 0, 3.0}, {1, 1, 5.0}});
    EXPECT_EQ(A.at(0, 0), 4.0);
    EXPECT_EQ(A.at(1, 0), 2.0);
    EXPECT_EQ(A.at(0, 1), 0.0);
    EXPECT_EQ(A.nnz(), 3u);
}

TEST(SparseOperator, SymmetricFromUpper) {
    const SparseOperator A = SparseOperator::symmetric_from_upper(3, {{0, 1, 0.1}, {0, 1, 0.2}, {1, 1, 1.0}, {0, 2, -3.0}});
    EXPECT_TRUE(A.is_symmetric());
    EXPECT_EQ(A.at(1, 0), A.at(0, 1));
    EXPECT_NEAR(A.at(1, 0), 0.3, 1e-15);
    EXPECT_THROW(SparseOperator::symmetric_from_upper(2, {{1, 0, 1.0}}), InputError);
}

TEST(SparseOperator, ApplyAndPin) {
    const SparseOperator A = laplacian_1d(3);
    const std::vector<double> x{1.0, 2.0, 3.0};
    EXPECT_EQ(A.apply(x), (std::vector<double>{0.0, 0.0, 4.0}));
    const SparseOperator P = A.with_pinned({0, 1, 0});
    EXPECT_EQ(P.nnz(), A.nnz());
    EXPECT_EQ(P.at(0, 1), 0.0);
    EXPECT_EQ(P.at(1, 2), 0.0);
    EXPECT_EQ(P.at(1, 1), 2.0);
    const SparseOperator S = A.principal_submatrix({0, 2});
    EXPECT_EQ(S.size(), 2u);
    EXPECT_EQ(S.at(0, 0), 2.0);
    EXPECT_EQ(S.at(0, 1), 0.0);
}

TEST(SparseOperator, DumpSortedTriplets) {
    std::ostringstream os;
    SparseOperator::from_triplets(2, {{1, 1, 0.5}, {0, 1, -1.0}, {0, 0, 2.0}}).dump(os);
    EXPECT_EQ(os.str(), "0 0 2\n0 1 -1\n1 1 0.5\n");
}

TEST(SpdSolve, MatchesDenseSolve) {
    std::mt19937 rng(7);
    std::normal_distribution<double> nd;
    const Index n = 30;
    Eigen::MatrixXd B(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) B(i, j) = nd(rng);
    const Eigen::MatrixXd D = B * B.transpose() / double(n) + Eigen::MatrixXd::Identity(n, n);
    std::vector<Triplet> t;
    for (Index i = 0; i < n; ++i)
        for (Index j = i; j < n; ++j) t.push_back({i, j, D(i, j)});
    const SparseOperator A = SparseOperator::symmetric_from_upper(n, t);
    Eigen::VectorXd b(n);
    std::vector<double> bv(n);
    for (Index i = 0; i < n; ++i) bv[i] = b[i] = nd(rng);
    const Eigen::VectorXd ref = D.ldlt().solve(b);
    for (Preconditioner p : {Preconditioner::jacobi, Preconditioner::cholesky}) {
        CgOptions o;
        o.preconditioner = p;
        CgResult info;
        const std::vector<double> x = solve_spd(A, bv, o, &info);
        EXPECT_LE(info.rel_residual, 1e-12);
        for (Index i = 0; i < n; ++i) EXPECT_NEAR(x[i], ref[i], 1e-10);
    }
}

TEST(SpdSolve, NonConvergenceCarriesResidual) {
    CgOptions o;
    o.preconditioner = Preconditioner::jacobi;
    o.max_iter = 2;
    const std::vector<double> b(200, 1.0);
    try {
        solve_spd(laplacian_1d(200), b, o);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_GT(e.last_residual(), 1e-12);
    }
}

TEST(SpdSolve, RejectsIndefinite) {
    const SparseOperator A = SparseOperator::symmetric_from_upper(2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 1, 1.0}});
    const std::vector<double> b{1.0, 1.0};
    EXPECT_THROW(solve_spd(A, b), InputError);
}

TEST(Quadrature, GaussExactness) {
    for (int n = 1; n <= 5; ++n) {
        const QuadRule r = gauss_interval(n);
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double s = 0.0;
            for (const QuadPoint& q : r) s += q.weight * std::pow(q.lambda[1], p);
            EXPECT_NEAR(s, 1.0 / (p + 1), 1e-14) << n << " " << p;
        }
    }
    EXPECT_THROW(gauss_interval(6), InputError);
}

// On the reference triangle int l1^a l2^b = a! b! / (a+b+2)!, i.e. the
// normalised weight-one rule must return 2 a! b! / (a+b+2)!.
TEST(Quadrature, TriangleExactness) {
    auto fact = [](int k) { return std::tgamma(k + 1.0); };
    const std::pair<QuadRule, int> rules[] = {{triangle_rule_3(), 2}, {triangle_rule_7(), 5}};
    for (const auto& [rule, degree] : rules)
        for (int a = 0; a <= degree; ++a)
            for (int b = 0; a + b <= degree; ++b) {
                double s = 0.0;
                for (const QuadPoint& q : rule) s += q.weight * std::pow(q.lambda[1], a) * std::pow(q.lambda[2], b);
                EXPECT_NEAR(s, 2.0 * fact(a) * fact(b) / fact(a + b + 2), 1e-14) << a << " " << b;
            }
}
