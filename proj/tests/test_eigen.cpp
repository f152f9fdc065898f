#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hartree/bubble.hpp"
#include "hartree/eigen.hpp"
#include "hartree/errors.hpp"

using namespace hartree;

TEST_CASE("generalized pencil against a dense generalized solver") {
    std::mt19937 rng(2);
    std::normal_distribution<double> nd;
    const int N = 60, kd = 3;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        A(i, i) = 10.0 + std::abs(nd(rng));
        for (int j = i + 1; j <= std::min(N - 1, i + kd); ++j) A(i, j) = A(j, i) = nd(rng);
    }
    Eigen::MatrixXd F(N, 8);
    for (auto& x : F.reshaped()) x = nd(rng);
    const Eigen::MatrixXd B = F * F.transpose();  // rank 8, positive semidefinite
    const auto pairs = solve_spectrum(A, B, 4, kd);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(B, A);
    for (int i = 0; i < 4; ++i) {
        CHECK(pairs[i].lambda == doctest::Approx(1.0 / ges.eigenvalues()(N - 1 - i)).epsilon(1e-10));
        CHECK(pairs[i].residual < 1e-10);
        const Eigen::VectorXd& v = pairs[i].vector;
        CHECK(v.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
        Eigen::Index im;
        v.cwiseAbs().maxCoeff(&im);
        CHECK(v(im) > 0);
    }
}

TEST_CASE("spherical harmonic multiplicities") {
    CHECK(harmonic_multiplicity(3, 0) == 1);
    CHECK(harmonic_multiplicity(3, 1) == 3);
    CHECK(harmonic_multiplicity(3, 2) == 5);
    CHECK(harmonic_multiplicity(4, 2) == 9);
    CHECK(harmonic_multiplicity(5, 1) == 5);
    CHECK(harmonic_multiplicity(5, 2) == 14);
}

TEST_CASE("spectrum at a ground state, n = 3, eps = 0.1") {
    const auto dim = DimensionSpec::make(3);
    const GroundState st = solve_ground_state(dim, 0.1, make_grid_ptr(3, 1.0, 481, 2.0));
    const Spectrum sp = spectrum_for(st);
    REQUIRE(sp.lambdas.size() >= 6);
    for (std::size_t i = 1; i < sp.lambdas.size(); ++i) CHECK(sp.lambdas[i] >= sp.lambdas[i - 1]);
    CHECK(sp.ells[0] == 0);
    CHECK(sp.ells[1] == 1);
    CHECK(sp.ells[3] == 1);
    CHECK(sp.ells[4] == 0);
    CHECK(sp.at(2).multiplicity == 3);
    // lambda_1 = 1/(2s-1) exactly: u itself is the first eigenfunction
    CHECK(sp.lambdas[0] == doctest::Approx(1.0 / (2 * st.s() - 1)).epsilon(1e-9));
    CHECK(sp.lambdas[1] > 1.0);
    CHECK(sp.lambdas[4] > 1.0);
    const MorseIndex mi = morse_index(sp);
    CHECK(mi.index == 1);
    CHECK(mi.ambiguous == 0);
    const NodalCount nc = nodal_count(sp.at(5));
    CHECK(nc.regions == 2);
    CHECK(nc.interior_nodal_set);
    CHECK(nodal_count(sp.at(1)).regions == 1);
    CHECK_THROWS_AS(nodal_count(sp.at(2)), DomainError);
    CHECK_THROWS_AS(nodal_count(*st.grid, Eigen::VectorXd::Zero(st.grid->size())), DomainError);
    CHECK_THROWS_AS(spectrum_for(st, 1), ConfigError);
    for (const auto& p : sp.pairs) CHECK(p.residual < 1e-8);
}

TEST_CASE("property: first eigenfunction is the ground state up to scale") {
    for (int n : {4, 5}) {
        const GroundState st = solve_ground_state(DimensionSpec::make(n), 0.2, make_grid_ptr(n, 1.0, 321, 2.0));
        const Spectrum sp = spectrum_for(st);
        CHECK(profile_l2_error(*st.grid, sp.at(1).profile.values, st.u.values) < 1e-8);
        CHECK(morse_index(sp).index == 1);
    }
}

TEST_CASE("limit spectrum on a moderate surrogate grid") {
    const auto dim = DimensionSpec::make(3);
    auto g = make_grid_ptr(3, 60.0, 1201, 1.5);
    const Spectrum sp = limit_spectrum(dim, g, 3, 1);
    CHECK(sp.lambdas[0] == doctest::Approx(1.0 / 9.0).epsilon(1e-3));
    CHECK(sp.lambdas[1] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(sp.ells[1] == 1);
    Eigen::VectorXd tr(g->size());
    for (int i = 0; i < g->size(); ++i) tr(i) = translation_profile(3, g->r(i));
    CHECK(profile_l2_error(*g, sp.at(2).profile.values, tr) < 0.02);
}

TEST_CASE("pencil sanity: identity, scaling and the Dirichlet ball") {
    std::mt19937 rng(5);
    std::normal_distribution<double> nd;
    const int N = 30;
    Eigen::MatrixXd F(N, N);
    for (auto& x : F.reshaped()) x = nd(rng);
    const Eigen::MatrixXd A = F * F.transpose() + N * Eigen::MatrixXd::Identity(N, N);
    for (const auto& p : solve_spectrum(A, A, 5)) CHECK(p.lambda == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& p : solve_spectrum(A, 4.0 * A, 5)) CHECK(p.lambda == doctest::Approx(0.25).epsilon(1e-12));

    // -u'' - (2/r) u' = lambda u on the unit ball, u(1) = 0: lambda = (k pi)^2
    const RadialGrid g = make_radial_grid(3, 1.0, 161, 0.0);
    const ModeOperator L = laplacian_mode(g, 0, BoundaryCondition::dirichlet);
    const Eigen::MatrixXd M = g.weights.segment(L.first, L.count).asDiagonal();
    const auto pairs = solve_spectrum(L.reduced(), M, 5, g.order);
    for (int k = 1; k <= 5; ++k) {
        const double exact = k * k * std::numbers::pi * std::numbers::pi;
        CHECK(std::abs(pairs[k - 1].lambda - exact) < 1e-3 * exact);
    }
}

TEST_CASE("property: b-orthogonality and the min-max characterization") {
    const auto dim = DimensionSpec::make(3);
    const GroundState st = solve_ground_state(dim, 0.1, make_grid_ptr(3, 1.0, 241, 2.0));
    const RadialGrid& g = *st.grid;
    const double s = st.s();
    for (int ell : {0, 1}) {
        const PencilForms pf = assemble_forms(st, ell);
        const Eigen::MatrixXd Af = pf.A.reduced(), Bf = pf.Bf();
        CHECK((pf.B - pf.B.transpose()).cwiseAbs().maxCoeff() < 1e-13 * pf.B.cwiseAbs().maxCoeff());
        const auto pairs = solve_spectrum(Af, Bf, 4);
        for (std::size_t i = 0; i < pairs.size(); ++i)
            for (std::size_t j = i + 1; j < pairs.size(); ++j) {
                const Eigen::VectorXd& vi = pairs[i].vector;
                const Eigen::VectorXd& vj = pairs[j].vector;
                const double c = vi.dot(Bf * vj) / std::sqrt(vi.dot(Bf * vi) * vj.dot(Bf * vj));
                CHECK(std::abs(c) < 1e-8);
            }
        std::mt19937 rng(11 + ell);
        std::normal_distribution<double> nd;
        double lowest = 1e300;
        for (int t = 0; t < 200; ++t) {
            Eigen::VectorXd v(Af.rows());
            for (auto& x : v) x = nd(rng);
            const double bvv = v.dot(Bf * v);
            CHECK(bvv > 0);
            lowest = std::min(lowest, v.dot(Af * v) / bvv);
        }
        CHECK(lowest >= pairs[0].lambda - 1e-9);
    }
    // b(u, u) = (2s - 1) <u^s, |x|^{2-n} * u^s>
    const PencilForms pf0 = assemble_forms(st, 0);
    const Eigen::VectorXd& u = st.u.values;
    const Eigen::VectorXd us = u.array().pow(s).matrix();
    const double expect = (2 * s - 1) * g.weights.dot(us.cwiseProduct(st.potential));
    CHECK(u.dot(pf0.B * u) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("Morse index and nodal counts on synthetic data") {
    Spectrum sp;
    sp.lambdas = {1.2, 1.5, 2.0};
    CHECK(morse_index(sp).index == 0);
    sp.lambdas = {0.5, 1.0 + 1e-12, 1.3};
    CHECK(morse_index(sp).index == 1);
    CHECK(morse_index(sp).ambiguous == 1);
    const RadialGrid g = make_radial_grid(3, 1.0, 201, 0.0);
    Eigen::VectorXd v(g.size());
    for (int i = 0; i < g.size(); ++i) v(i) = std::sin(2 * std::numbers::pi * g.r(i));
    CHECK(nodal_count(g, v).regions == 2);
}

TEST_CASE("small eps spectrum approaches the limit spectrum") {
    const auto dim = DimensionSpec::make(3);
    const GroundState st = solve_ground_state(dim, 0.05, make_grid_ptr(3, 1.0, 1025, 2.0));
    const Spectrum sp = spectrum_for(st);
    const Spectrum lim = limit_spectrum(dim, make_grid_ptr(3, 60.0, 1201, 1.5), 2, 0);
    CHECK(std::abs(sp.lambdas[0] - lim.lambdas[0]) < 0.05 * lim.lambdas[0]);
}
