#include "hartree/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hartree/errors.hpp"
#include "hartree/specfun.hpp"

namespace hartree {

namespace {

// Legendre P_k(x) for k = 0..q by recurrence.
Eigen::VectorXd legendre_all(int q, double x) {
    Eigen::VectorXd P(q + 2);
    P(0) = 1.0;
    P(1) = x;
    for (int k = 1; k <= q; ++k) P(k + 1) = ((2 * k + 1) * x * P(k) - k * P(k - 1)) / (k + 1);
    return P;
}

}  // namespace

GllRule make_gll_rule(int q) {
    if (q < 2) throw ConfigError("GLL degree must be >= 2");
    GllRule g;
    g.q = q;
    const int N = q + 1;
    g.x.resize(N);
    g.w.resize(N);
    // Newton on (1-x^2) P_q'(x) starting from Chebyshev-Gauss-Lobatto points
    for (int i = 0; i < N; ++i) {
        double x = -std::cos(std::numbers::pi * i / q);
        for (int it = 0; it < 100; ++it) {
            Eigen::VectorXd P = legendre_all(q, x);
            double dx = (x * P(q) - P(q - 1)) / (N * P(q));
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        g.x(i) = x;
    }
    g.x(0) = -1.0;
    g.x(q) = 1.0;
    Eigen::VectorXd Pq(N);
    for (int i = 0; i < N; ++i) {
        Pq(i) = legendre_all(q, g.x(i))(q);
        g.w(i) = 2.0 / (q * (q + 1) * Pq(i) * Pq(i));
    }
    g.D = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (i != j) g.D(i, j) = Pq(i) / Pq(j) / (g.x(i) - g.x(j));
    g.D(0, 0) = -0.25 * q * (q + 1);
    g.D(q, q) = 0.25 * q * (q + 1);

    // cumulative integration through the Legendre expansion of each Lagrange basis function
    Eigen::MatrixXd V(N, N);
    for (int i = 0; i < N; ++i) V.row(i) = legendre_all(q, g.x(i)).head(N).transpose();
    Eigen::MatrixXd Vinv = V.inverse();
    Eigen::MatrixXd J(N, N);  // J(i,k) = int_{-1}^{x_i} P_k
    for (int i = 0; i < N; ++i) {
        Eigen::VectorXd P = legendre_all(q + 1, g.x(i));
        J(i, 0) = g.x(i) + 1.0;
        for (int k = 1; k < N; ++k) J(i, k) = (P(k + 1) - P(k - 1)) / (2 * k + 1);
    }
    g.S = J * Vinv;

    g.bary.resize(N);
    for (int j = 0; j < N; ++j) {
        double prod = 1.0;
        for (int k = 0; k < N; ++k)
            if (k != j) prod *= g.x(j) - g.x(k);
        g.bary(j) = 1.0 / prod;
    }
    return g;
}

RadialGrid make_radial_grid(int n, double R, int node_count, double grading, int order) {
    if (!(R > 0)) throw ConfigError("grid radius must be positive");
    if (node_count < 64) throw ConfigError("node_count must be >= 64");
    if (!(grading >= 0)) throw ConfigError("grading must be >= 0");
    RadialGrid g;
    g.n = n;
    g.R = R;
    g.grading = grading;
    g.order = order;
    g.rule = make_gll_rule(order);
    g.elements = (node_count - 1 + order - 1) / order;
    const int E = g.elements;
    const double gam = 1.0 + grading;
    g.breaks.resize(E + 1);
    for (int e = 0; e <= E; ++e) g.breaks[e] = R * std::pow(double(e) / E, gam);
    g.breaks[E] = R;
    const int N = E * order + 1;
    g.r = Eigen::VectorXd::Zero(N);
    g.w = Eigen::VectorXd::Zero(N);
    for (int e = 0; e < E; ++e) {
        const double a = g.breaks[e], h = g.breaks[e + 1] - a;
        for (int k = 0; k <= order; ++k) {
            int i = e * order + k;
            g.r(i) = a + 0.5 * (g.rule.x(k) + 1.0) * h;
            g.w(i) += 0.5 * h * g.rule.w(k);
        }
    }
    g.r(0) = 0.0;
    g.r(N - 1) = R;
    g.weights = g.w.array() * g.r.array().pow(n - 1);
    return g;
}

GridPtr make_grid_ptr(int n, double R, int node_count, double grading, int order) {
    return std::make_shared<const RadialGrid>(make_radial_grid(n, R, node_count, grading, order));
}

double RadialGrid::ball_integral(const Eigen::VectorXd& f) const {
    return sphere_area(n) * weights.dot(f);
}

double RadialGrid::interpolate(const Eigen::VectorXd& f, double s) const {
    if (s < 0 || s > R * (1 + 1e-14)) throw DomainError("interpolate: radius outside [0,R]");
    auto it = std::upper_bound(breaks.begin(), breaks.end(), s);
    int e = std::clamp(int(it - breaks.begin()) - 1, 0, elements - 1);
    const double a = breaks[e], h = breaks[e + 1] - a;
    const double xi = 2.0 * (s - a) / h - 1.0;
    const int base = e * order;
    double num = 0, den = 0;
    for (int k = 0; k <= order; ++k) {
        double d = xi - rule.x(k);
        if (d == 0.0) return f(base + k);
        double t = rule.bary(k) / d;
        num += t * f(base + k);
        den += t;
    }
    return num / den;
}

Eigen::VectorXd RadialGrid::derivative(const Eigen::VectorXd& f) const {
    const int N = size();
    Eigen::VectorXd d = Eigen::VectorXd::Zero(N), cnt = Eigen::VectorXd::Zero(N);
    for (int e = 0; e < elements; ++e) {
        const double h = breaks[e + 1] - breaks[e];
        const int base = e * order;
        Eigen::VectorXd de = (2.0 / h) * (rule.D * f.segment(base, order + 1));
        d.segment(base, order + 1) += de;
        cnt.segment(base, order + 1).array() += 1.0;
    }
    return d.cwiseQuotient(cnt);
}

RadialGrid RadialGrid::scaled(double factor) const {
    RadialGrid g = *this;
    g.R *= factor;
    for (double& b : g.breaks) b *= factor;
    g.r *= factor;
    g.w *= factor;
    g.weights = g.w.array() * g.r.array().pow(n - 1);
    return g;
}

ModeOperator laplacian_mode(const RadialGrid& g, int ell, BoundaryCondition bc) {
    if (ell < 0) throw DomainError("laplacian_mode: ell must be >= 0");
    const int N = g.size(), q = g.order, n = g.n;
    const double kappa = double(ell) * (ell + n - 2);
    ModeOperator op;
    op.ell = ell;
    op.bc = bc;
    op.bandwidth = q;
    op.matrix = Eigen::MatrixXd::Zero(N, N);
    for (int e = 0; e < g.elements; ++e) {
        const double h = g.breaks[e + 1] - g.breaks[e];
        const int base = e * q;
        Eigen::MatrixXd De = (2.0 / h) * g.rule.D;
        Eigen::VectorXd wr(q + 1), wk(q + 1);
        for (int k = 0; k <= q; ++k) {
            const double r = g.r(base + k), we = 0.5 * h * g.rule.w(k);
            wr(k) = we * std::pow(r, n - 1);
            // r^{n-3} only enters with kappa>0, where node 0 is removed
            wk(k) = (kappa > 0 && r > 0) ? kappa * we * std::pow(r, n - 3) : 0.0;
        }
        op.matrix.block(base, base, q + 1, q + 1) += De.transpose() * wr.asDiagonal() * De;
        op.matrix.block(base, base, q + 1, q + 1).diagonal() += wk;
    }
    if (bc == BoundaryCondition::decay) op.matrix(N - 1, N - 1) += (ell + n - 2) * std::pow(g.R, n - 2);
    op.first = ell >= 1 ? 1 : 0;
    int last = bc == BoundaryCondition::dirichlet ? N - 2 : N - 1;
    op.count = last - op.first + 1;
    return op;
}

Eigen::VectorXd ModeOperator::apply_strong(const RadialGrid& g, const Eigen::VectorXd& f) const {
    Eigen::VectorXd Af = matrix * f;
    Eigen::VectorXd out(Af.size());
    for (int i = 0; i < Af.size(); ++i)
        out(i) = g.weights(i) > 0 ? Af(i) / g.weights(i) : std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace hartree
