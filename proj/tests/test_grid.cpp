#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hartree/errors.hpp"
#include "hartree/grid.hpp"
#include "hartree/linalg.hpp"
#include "hartree/specfun.hpp"

using namespace hartree;

TEST_CASE("GLL rule integrates polynomials up to degree 2q-1 exactly") {
    for (int q : {4, 8, 12}) {
        const GllRule rule = make_gll_rule(q);
        CHECK(rule.x(0) == -1.0);
        CHECK(rule.x(q) == 1.0);
        for (int k = 0; k <= 2 * q - 1; ++k) {
            double quad = 0;
            for (int i = 0; i <= q; ++i) quad += rule.w(i) * std::pow(rule.x(i), k);
            const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
            CHECK(quad == doctest::Approx(exact).epsilon(1e-13));
        }
    }
}

TEST_CASE("GLL differentiation and cumulative integration are exact for degree q") {
    const int q = 8;
    const GllRule rule = make_gll_rule(q);
    Eigen::VectorXd f(q + 1), df(q + 1), If(q + 1);
    for (int i = 0; i <= q; ++i) {
        const double x = rule.x(i);
        f(i) = std::pow(x, q) - 3 * x * x;
        df(i) = q * std::pow(x, q - 1) - 6 * x;
        If(i) = (std::pow(x, q + 1) + 1) / (q + 1) - (x * x * x + 1);
    }
    CHECK((rule.D * f - df).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((rule.S * f - If).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("radial grid layout") {
    const RadialGrid g = make_radial_grid(3, 2.0, 100, 1.5);
    CHECK((g.size() - 1) % g.order == 0);
    CHECK(g.size() >= 100);
    CHECK(g.r(0) == 0.0);
    CHECK(g.r(g.size() - 1) == doctest::Approx(2.0).epsilon(1e-15));
    for (int i = 1; i < g.size(); ++i) CHECK(g.r(i) > g.r(i - 1));
    CHECK(g.w.sum() == doctest::Approx(2.0).epsilon(1e-13));
    CHECK_THROWS_AS(make_radial_grid(3, 1.0, 63, 1.0), ConfigError);
}

TEST_CASE("ball integrals and interpolation") {
    for (int n : {3, 4, 5}) {
        const RadialGrid g = make_radial_grid(n, 1.5, 161, 1.0);
        const Eigen::VectorXd one = Eigen::VectorXd::Ones(g.size());
        const double vol = sphere_area(n) * std::pow(1.5, n) / n;
        CHECK(g.ball_integral(one) == doctest::Approx(vol).epsilon(1e-13));
        Eigen::VectorXd f(g.size());
        for (int i = 0; i < g.size(); ++i) f(i) = std::exp(-g.r(i) * g.r(i));
        for (double s : {0.0, 0.013, 0.4, 1.2, 1.5}) CHECK(g.interpolate(f, s) == doctest::Approx(std::exp(-s * s)));
        const Eigen::VectorXd df = g.derivative(f);
        for (int i = 0; i < g.size(); ++i) CHECK(df(i) == doctest::Approx(-2 * g.r(i) * f(i)).epsilon(1e-9));
    }
}

TEST_CASE("mode Laplacian: structure and exact polynomial action") {
    const RadialGrid g = make_radial_grid(3, 1.0, 97, 1.0);
    for (int ell : {0, 1, 2}) {
        const ModeOperator A = laplacian_mode(g, ell, BoundaryCondition::dirichlet);
        CHECK(A.first == (ell == 0 ? 0 : 1));
        CHECK(A.first + A.count == g.size() - 1);
        CHECK(detect_bandwidth(A.reduced()) <= g.order);
        CHECK((A.matrix - A.matrix.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::LLT<Eigen::MatrixXd> llt(A.reduced());
        CHECK(llt.info() == Eigen::Success);
    }
    // -Delta_ell (r^ell (1 - r^2)) = 2(2 ell + n) r^ell in the interior
    for (int n : {3, 5}) {
        const RadialGrid gn = make_radial_grid(n, 1.0, 97, 1.0);
        for (int ell : {0, 1, 2}) {
            const ModeOperator A = laplacian_mode(gn, ell, BoundaryCondition::dirichlet);
            Eigen::VectorXd f(gn.size());
            for (int i = 0; i < gn.size(); ++i) f(i) = std::pow(gn.r(i), ell) * (1 - gn.r(i) * gn.r(i));
            // weak form: (A f)_i = weights_i * (-Delta_ell f)(r_i) at interior nodes
            const Eigen::VectorXd Af = A.matrix * f;
            double err = 0;
            for (int i = 1; i < gn.size() - 1; ++i)
                err = std::max(err, std::abs(Af(i) - gn.weights(i) * 2.0 * (2 * ell + n) * std::pow(gn.r(i), ell)));
            CHECK(err < 1e-12 * Af.cwiseAbs().maxCoeff());
            const Eigen::VectorXd lap = A.apply_strong(gn, f);
            CHECK(lap(gn.size() / 2) == doctest::Approx(2.0 * (2 * ell + n) * std::pow(gn.r(gn.size() / 2), ell)));
        }
    }
}

TEST_CASE("property: stiffness form is positive on random vectors") {
    std::mt19937 rng(7);
    std::normal_distribution<double> nd;
    const RadialGrid g = make_radial_grid(4, 3.0, 129, 2.0);
    for (auto bc : {BoundaryCondition::dirichlet, BoundaryCondition::decay}) {
        for (int ell : {0, 1, 3}) {
            const ModeOperator A = laplacian_mode(g, ell, bc);
            const Eigen::MatrixXd Af = A.reduced();
            for (int t = 0; t < 20; ++t) {
                Eigen::VectorXd v(A.count);
                for (auto& x : v) x = nd(rng);
                CHECK(v.dot(Af * v) > 0);
            }
        }
    }
}

TEST_CASE("band Cholesky matches a dense solve") {
    const RadialGrid g = make_radial_grid(3, 1.0, 129, 1.0);
    const Eigen::MatrixXd A = laplacian_mode(g, 1, BoundaryCondition::decay).reduced();
    const BandCholesky bc(A);
    CHECK(bc.bandwidth() == g.order);
    Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(A.rows(), 0.0, 1.0);
    const Eigen::VectorXd x = bc.solve(b);
    const Eigen::VectorXd xd = A.llt().solve(b);
    CHECK((x - xd).cwiseAbs().maxCoeff() < 1e-10 * xd.cwiseAbs().maxCoeff());
    Eigen::MatrixXd X = b;
    bc.lower_solve(X);
    bc.upper_solve(X);
    CHECK((X.col(0) - xd).cwiseAbs().maxCoeff() < 1e-10 * xd.cwiseAbs().maxCoeff());
}

TEST_CASE("symmetric top eigenpairs against Eigen") {
    std::mt19937 rng(3);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd M(40, 40);
    for (auto& x : M.reshaped()) x = nd(rng);
    const Eigen::MatrixXd C = M + M.transpose();
    const SymEig top = symmetric_top_eigenpairs(C, 5);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    for (int i = 0; i < 5; ++i) CHECK(top.values(i) == doctest::Approx(es.eigenvalues()(35 + i)).epsilon(1e-12));
}
