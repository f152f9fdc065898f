#include "hartree/newtonian.hpp"

#include <cmath>

#include "hartree/errors.hpp"
#include "hartree/linalg.hpp"
#include "hartree/specfun.hpp"

namespace hartree {

Eigen::MatrixXd convolution_matrix_bvp(const RadialGrid& g, int ell) {
    const int N = g.size();
    ModeOperator op = laplacian_mode(g, ell, BoundaryCondition::decay);
    BandCholesky chol(op.reduced(), op.bandwidth);
    const double c = (g.n - 2) * sphere_area(g.n);
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(op.count, N);
    for (int i = 0; i < op.count; ++i) X(i, op.first + i) = c * g.weights(op.first + i);
    chol.solve_in_place(X);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N, N);
    K.middleRows(op.first, op.count) = X;
    return K;
}

RadialField convolve_mode_bvp(const RadialField& density) {
    const RadialGrid& g = *density.grid;
    ModeOperator op = laplacian_mode(g, density.ell, BoundaryCondition::decay);
    BandCholesky chol(op.reduced(), op.bandwidth);
    const double c = (g.n - 2) * sphere_area(g.n);
    Eigen::VectorXd rhs = c * g.weights.segment(op.first, op.count).cwiseProduct(
                                  density.values.segment(op.first, op.count));
    RadialField psi{density.grid, density.ell, Eigen::VectorXd::Zero(g.size())};
    psi.values.segment(op.first, op.count) = chol.solve(rhs);
    return psi;
}

namespace {

// running int_0^{r_i} h(s) ds with the element-local spectral integration matrix
Eigen::VectorXd cumulative(const RadialGrid& g, const Eigen::VectorXd& h) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(g.size());
    double acc = 0.0;
    for (int e = 0; e < g.elements; ++e) {
        const int base = e * g.order;
        const double half = 0.5 * (g.breaks[e + 1] - g.breaks[e]);
        Eigen::VectorXd loc = half * (g.rule.S * h.segment(base, g.order + 1));
        out.segment(base, g.order + 1) = loc.array() + acc;
        acc = out(base + g.order);
    }
    return out;
}

}  // namespace

RadialField convolve_mode_kernel(const RadialField& density, double exterior_moment) {
    const RadialGrid& g = *density.grid;
    const int n = g.n, ell = density.ell, N = g.size();
    const int k = ell + n - 2;
    const double c = (n - 2) * sphere_area(n) / (2.0 * ell + n - 2);
    const Eigen::VectorXd& f = density.values;
    Eigen::VectorXd h1(N), h2(N);
    for (int i = 0; i < N; ++i) {
        const double s = g.r(i);
        h1(i) = std::pow(s, ell + n - 1) * f(i);
        if (s > 0)
            h2(i) = std::pow(s, 1 - ell) * f(i);
        else
            h2(i) = ell == 1 ? f(i) : 0.0;
    }
    Eigen::VectorXd inner = cumulative(g, h1);
    Eigen::VectorXd run = cumulative(g, h2);
    const double total = run(N - 1) + exterior_moment;
    RadialField psi{density.grid, ell, Eigen::VectorXd::Zero(N)};
    for (int i = 0; i < N; ++i) {
        const double r = g.r(i);
        const double outer = total - run(i);
        if (r > 0)
            psi.values(i) = c * (std::pow(r, -k) * inner(i) + std::pow(r, ell) * outer);
        else
            psi.values(i) = ell == 0 ? c * outer : 0.0;
    }
    return psi;
}

double exterior_value(const RadialField& psi, double r) {
    const RadialGrid& g = *psi.grid;
    if (r < g.R) throw DomainError("exterior_value: radius inside the ball");
    return psi.values(g.size() - 1) * std::pow(g.R / r, psi.ell + g.n - 2);
}

}  // namespace hartree
