#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "mgoc/optcontrol/solve.hpp"
#include "support.hpp"

using namespace mgoc::optcontrol;
using namespace mgoc::testing;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

LinearOp dense_op(const MatrixXd& a) {
    return [a](std::span<const double> x, std::span<double> y) {
        Eigen::Map<VectorXd>(y.data(), static_cast<Index>(y.size())) =
            a * Eigen::Map<const VectorXd>(x.data(), static_cast<Index>(x.size()));
    };
}

MatrixXd random_spd(std::mt19937_64& rng, Index n) {
    std::normal_distribution<double> g;
    MatrixXd b(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) b(i, j) = g(rng);
    return b * b.transpose() + static_cast<double>(n) * MatrixXd::Identity(n, n);
}

// min ‖b - A x‖ over the Krylov space K_k(A, b), from an explicitly
// orthonormalized Krylov basis and a dense least-squares solve.
std::vector<double> minimal_residuals(const MatrixXd& a, const VectorXd& b, Index steps) {
    std::vector<double> out;
    MatrixXd q(b.size(), 0);
    VectorXd v = b;
    for (Index k = 1; k <= steps; ++k) {
        for (int pass = 0; pass < 2; ++pass) v -= q * (q.transpose() * v);
        q.conservativeResize(Eigen::NoChange, k);
        q.col(k - 1) = v.normalized();
        const MatrixXd aq = a * q;
        const VectorXd c = aq.colPivHouseholderQr().solve(b);
        out.push_back((b - aq * c).norm() / b.norm());
        v = a * q.col(k - 1);
    }
    return out;
}

}  // namespace

TEST_CASE("identity system converges in one step") {
    const Vector b{1.0, 2.0, -3.0};
    const LinearOp id = [](std::span<const double> x, std::span<double> y) {
        std::copy(x.begin(), x.end(), y.begin());
    };
    const auto g = gmres(id, {}, b);
    CHECK(g.converged);
    CHECK(g.iterations == 1);
    CHECK(g.x == b);
    CHECK(g.residual_history.front() == 1.0);
    const auto m = minres(id, {}, b);
    CHECK(m.converged);
    CHECK(m.iterations == 1);
}

TEST_CASE("random SPD system agrees with a direct solve") {
    std::mt19937_64 rng(12);
    const MatrixXd a = random_spd(rng, 20);
    const Vector b = random_vector(rng, 20);
    const VectorXd ref = a.ldlt().solve(Eigen::Map<const VectorXd>(b.data(), 20));
    for (const auto& r : {gmres(dense_op(a), {}, b), minres(dense_op(a), {}, b)}) {
        CHECK(r.converged);
        CHECK(r.true_relative_residual <= 1e-8);
        CHECK((Eigen::Map<const VectorXd>(r.x.data(), 20) - ref).norm() <= 1e-7 * ref.norm());
    }
}

TEST_CASE("preconditioned GMRES on a nonsymmetric system") {
    std::mt19937_64 rng(4);
    const Index n = 30;
    MatrixXd a = random_spd(rng, n);
    for (Index i = 0; i + 1 < n; ++i) a(i, i + 1) += 3.0;
    const MatrixXd jac = a.diagonal().cwiseInverse().asDiagonal();
    const Vector b = random_vector(rng, n);
    const auto r = gmres(dense_op(a), dense_op(jac), b, {1e-10, 0});
    CHECK(r.converged);
    CHECK(r.true_relative_residual <= 1e-10);
    const VectorXd ref = a.partialPivLu().solve(Eigen::Map<const VectorXd>(b.data(), n));
    CHECK((Eigen::Map<const VectorXd>(r.x.data(), n) - ref).norm() <= 1e-8 * ref.norm());
}

TEST_CASE("MINRES on an indefinite diagonal matrix") {
    MatrixXd a(2, 2);
    a << 1, 0, 0, -1;
    const auto r = minres(dense_op(a), {}, Vector{1.0, 1.0});
    CHECK(r.converged);
    CHECK(r.iterations <= 2);
    CHECK(r.x[0] == doctest::Approx(1.0));
    CHECK(r.x[1] == doctest::Approx(-1.0));
}

TEST_CASE("unpreconditioned residual histories are minimal over the Krylov space") {
    std::mt19937_64 rng(17);
    const Index n = 16;
    MatrixXd a = random_spd(rng, n);
    a(0, 0) = -5.0;  // indefinite but symmetric
    const Vector b = random_vector(rng, n);
    const auto oracle = minimal_residuals(a, Eigen::Map<const VectorXd>(b.data(), n), 8);
    const auto m = minres(dense_op(a), {}, b, {1e-14, 8});
    const auto g = gmres(dense_op(a), {}, b, {1e-14, 8});
    REQUIRE(m.residual_history.size() >= 9);
    REQUIRE(g.residual_history.size() >= 9);
    for (std::size_t k = 0; k < oracle.size(); ++k) {
        CHECK(m.residual_history[k + 1] == doctest::Approx(oracle[k]).epsilon(1e-8));
        CHECK(g.residual_history[k + 1] == doctest::Approx(oracle[k]).epsilon(1e-8));
    }
    for (std::size_t k = 1; k < m.residual_history.size(); ++k)
        CHECK(m.residual_history[k] <= m.residual_history[k - 1] * (1 + 1e-12));
}

TEST_CASE("iteration cap returns an unconverged iterate") {
    std::mt19937_64 rng(6);
    const MatrixXd a = random_spd(rng, 40);
    const Vector b = random_vector(rng, 40);
    const auto g = gmres(dense_op(a), {}, b, {1e-14, 3});
    CHECK_FALSE(g.converged);
    CHECK(g.iterations == 3);
    const auto m = minres(dense_op(a), {}, b, {1e-14, 3});
    CHECK_FALSE(m.converged);
    CHECK(m.iterations == 3);
    CHECK(m.true_relative_residual < 1.0);
}

TEST_CASE("zero right-hand side") {
    MatrixXd a = MatrixXd::Identity(3, 3);
    const auto g = gmres(dense_op(a), {}, Vector(3, 0.0));
    CHECK(g.converged);
    CHECK(g.iterations == 0);
    CHECK(g.x == Vector(3, 0.0));
    const auto m = minres(dense_op(a), {}, Vector(3, 0.0));
    CHECK(m.converged);
    CHECK(m.iterations == 0);
}

TEST_CASE("MINRES rejects nonsymmetric operators and indefinite preconditioners") {
    MatrixXd a(2, 2);
    a << 1, 2, 0, 1;
    CHECK_THROWS_AS(minres(dense_op(a), {}, Vector{1.0, 1.0}), std::domain_error);
    MatrixXd s(3, 3);
    s << 2, 1, 0, 1, 2, 1, 0, 1, 2;
    MatrixXd p(3, 3);
    p << 1, 0, 0, 0, -1, 0, 0, 0, 1;
    CHECK_THROWS_AS(minres(dense_op(s), dense_op(p), Vector{0.0, 1.0, 0.0}), std::domain_error);
}

TEST_CASE("KKT solves: ideal preconditioner and solver agreement") {
    const auto g = mgoc::graphs::make_star(3, VertexType::Dirichlet);
    mgoc::assembly::ProblemData d;
    d.beta = 1e-2;
    d.c0 = 2.0;
    d.f = 1.5;
    d.ybar = 1.0;
    const auto ops = mgoc::assembly::assemble(mgoc::mesh::build_mesh(g, 6), d);
    const auto ideal = solve_kkt(ops, d.beta, {SolverKind::Gmres, PreconKind::Ideal, 1e-8, 0});
    CHECK(ideal.stats.converged);
    CHECK(ideal.stats.iterations <= 5);
    const auto ideal_m = solve_kkt(ops, d.beta, {SolverKind::Minres, PreconKind::Ideal, 1e-8, 0});
    CHECK(ideal_m.stats.converged);
    CHECK(ideal_m.stats.iterations <= 5);

    const auto gm = solve_kkt(ops, d.beta, {SolverKind::Gmres, PreconKind::MatchedNonsymmetric, 1e-10, 0});
    const auto mr = solve_kkt(ops, d.beta, {SolverKind::Minres, PreconKind::MatchedSymmetric, 1e-10, 0});
    const auto un = solve_kkt(ops, d.beta, {SolverKind::Gmres, PreconKind::None, 1e-10, 0});
    REQUIRE(gm.stats.converged);
    REQUIRE(mr.stats.converged);
    REQUIRE(un.stats.converged);
    for (const auto* s : {&mr, &un, &ideal}) {
        Vector diff = s->u;
        mgoc::linalg::axpy(-1.0, gm.u, diff);
        CHECK(mgoc::linalg::norm2(diff) <= 1e-6 * mgoc::linalg::norm2(gm.u));
    }
}
