#include "hartree/greens.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "hartree/errors.hpp"
#include "hartree/newtonian.hpp"
#include "hartree/specfun.hpp"

namespace hartree {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

void check_point(const BallDomain& ball, std::span<const double> x) {
    if (int(x.size()) != ball.n) throw DomainError("point dimension does not match the ball");
}

}  // namespace

double fundamental_solution(int n, double dist) {
    return std::pow(dist, 2.0 - n) / ((n - 2) * sphere_area(n));
}

double regular_part(const BallDomain& ball, std::span<const double> x, std::span<const double> y) {
    check_point(ball, x);
    check_point(ball, y);
    const double R2 = ball.R * ball.R;
    const double q = dot(x, x) * dot(y, y) / R2 - 2.0 * dot(x, y) + R2;
    return -std::pow(q, 0.5 * (2 - ball.n)) / ((ball.n - 2) * sphere_area(ball.n));
}

double green_ball(const BallDomain& ball, std::span<const double> x, std::span<const double> y) {
    check_point(ball, x);
    check_point(ball, y);
    double d2 = 0;
    for (int k = 0; k < ball.n; ++k) d2 += (x[k] - y[k]) * (x[k] - y[k]);
    if (d2 == 0.0) throw DomainError("green_ball: x = y");
    return fundamental_solution(ball.n, std::sqrt(d2)) + regular_part(ball, x, y);
}

double robin_radial(const BallDomain& ball, double rho) {
    if (!(std::abs(rho) < ball.R)) throw DomainError("robin: point not inside the ball");
    const int n = ball.n;
    return -std::pow(ball.R, n - 2) / ((n - 2) * sphere_area(n) * std::pow(ball.R * ball.R - rho * rho, n - 2));
}

double robin_radial_d1(const BallDomain& ball, double rho) {
    const int n = ball.n;
    const double R = ball.R;
    return -2.0 * rho * std::pow(R, n - 2) * std::pow(R * R - rho * rho, 1 - n) / sphere_area(n);
}

double robin_radial_d2(const BallDomain& ball, double rho) {
    const int n = ball.n;
    const double R = ball.R, t = R * R - rho * rho;
    return -2.0 * std::pow(R, n - 2) / sphere_area(n) *
           (std::pow(t, 1 - n) + 2.0 * (n - 1) * rho * rho * std::pow(t, -n));
}

double robin_ball(const BallDomain& ball, std::span<const double> x) {
    check_point(ball, x);
    return robin_radial(ball, std::sqrt(dot(x, x)));
}

Eigen::MatrixXd robin_hessian(const BallDomain& ball, std::span<const double> x0, double h) {
    check_point(ball, x0);
    const int n = ball.n;
    if (!(h > 0)) throw DomainError("robin_hessian: step must be positive");
    if (std::sqrt(dot(x0, x0)) + std::sqrt(2.0) * h >= ball.R) throw DomainError("robin_hessian: stencil leaves the ball");
    std::vector<double> y(x0.begin(), x0.end());
    auto f = [&](int i, double di, int j, double dj) {
        y.assign(x0.begin(), x0.end());
        y[i] += di;
        y[j] += dj;
        return robin_ball(ball, y);
    };
    const double f0 = robin_ball(ball, x0);
    Eigen::MatrixXd H(n, n);
    for (int i = 0; i < n; ++i) {
        H(i, i) = (f(i, h, i, 0) - 2.0 * f0 + f(i, -h, i, 0)) / (h * h);
        for (int j = 0; j < i; ++j) {
            H(i, j) = (f(i, h, j, h) - f(i, h, j, -h) - f(i, -h, j, h) + f(i, -h, j, -h)) / (4.0 * h * h);
            H(j, i) = H(i, j);
        }
    }
    return H;
}

double poisson_kernel(const BallDomain& ball, std::span<const double> x, std::span<const double> y) {
    check_point(ball, x);
    check_point(ball, y);
    double d2 = 0;
    for (int k = 0; k < ball.n; ++k) d2 += (x[k] - y[k]) * (x[k] - y[k]);
    return (ball.R * ball.R - dot(y, y)) / (sphere_area(ball.n) * ball.R * std::pow(d2, 0.5 * ball.n));
}

namespace {

// int_{|x|=R} F(theta) dS for integrands depending only on the polar angle from e_1
template <class F>
double polar_surface_integral(const BallDomain& ball, F f) {
    using boost::math::quadrature::gauss_kronrod;
    const int n = ball.n;
    auto g = [&](double th) { return f(th) * std::pow(std::sin(th), n - 2); };
    double err = 0;
    const double v = gauss_kronrod<double, 61>::integrate(g, 0.0, std::numbers::pi, 20, 1e-15, &err);
    return std::pow(ball.R, n - 1) * sphere_area(n - 1) * v;
}

}  // namespace

SurfaceCheck surface_identity_gx0(const BallDomain& ball, double a) {
    const int n = ball.n;
    const double R = ball.R, om = sphere_area(n);
    if (!(std::abs(a) < R)) throw DomainError("surface_identity_gx0: point not inside the ball");
    SurfaceCheck sc;
    sc.integral = polar_surface_integral(ball, [&](double th) {
        const double d2 = R * R - 2.0 * a * R * std::cos(th) + a * a;
        const double dnuG = -(R * R - a * a) / (om * R * std::pow(d2, 0.5 * n));
        return dnuG * dnuG * (R - a * std::cos(th));
    });
    sc.closed_form = -(n - 2) * robin_radial(ball, a);
    sc.rel_error = std::abs(sc.integral / sc.closed_form - 1.0);
    return sc;
}

SurfaceCheck surface_identity_gx0_1(const BallDomain& ball, double a, bool axial) {
    const int n = ball.n;
    const double R = ball.R, om = sphere_area(n), c = R * R - a * a;
    if (!(std::abs(a) < R)) throw DomainError("surface_identity_gx0_1: point not inside the ball");
    SurfaceCheck sc;
    sc.integral = polar_surface_integral(ball, [&](double th) {
        const double ct = std::cos(th), st = std::sin(th);
        const double d2 = R * R - 2.0 * a * R * ct + a * a;
        const double P = c / (om * R * std::pow(d2, 0.5 * n));
        if (axial) {
            const double dP = -2.0 * a / (om * R * std::pow(d2, 0.5 * n)) +
                              c * n * (R * ct - a) / (om * R * std::pow(d2, 0.5 * n + 1));
            return P * ct * dP;
        }
        // transverse component averaged over the azimuthal sphere: <w_2^2> = 1/(n-1)
        const double dP_over = c * n * R * st / (om * R * std::pow(d2, 0.5 * n + 1));
        return P * st * dP_over / (n - 1);
    });
    double hess;
    if (axial)
        hess = robin_radial_d2(ball, a);
    else
        hess = a == 0.0 ? robin_radial_d2(ball, 0.0) : robin_radial_d1(ball, a) / a;
    sc.closed_form = -0.5 * hess;
    sc.rel_error = std::abs(sc.integral / sc.closed_form - 1.0);
    return sc;
}

namespace {

PohozaevTerms finish(double lhs, double rhs, double floor) {
    return {lhs, rhs, std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + floor)};
}

Eigen::VectorXd pow_pos(const Eigen::VectorXd& u, double e) {
    Eigen::VectorXd out(u.size());
    for (int i = 0; i < u.size(); ++i) out(i) = u(i) > 0 ? std::pow(u(i), e) : 0.0;
    return out;
}

}  // namespace

PohozaevTerms pohozaev_dilation_terms(const GroundState& st, const EigenPair& pair, double floor) {
    if (pair.ell != 0) return {0.0, 0.0, 0.0};  // angular integrals vanish identically
    const RadialGrid& g = *st.grid;
    const int n = g.n, N = g.size();
    const double s = st.s(), lam = pair.lambda;
    const Eigen::VectorXd& u = st.u.values;
    const Eigen::VectorXd& v = pair.profile.values;
    const Eigen::VectorXd du = g.derivative(u), dv = g.derivative(v);
    const Eigen::VectorXd a = pow_pos(u, s - 1.0);
    Eigen::VectorXd d(N);
    for (int i = 0; i < N; ++i) d(i) = u(i) > 0 ? st.potential(i) * std::pow(u(i), s - 2.0) : 0.0;
    const Eigen::VectorXd xi = g.r.cwiseProduct(du) + (2.0 / (s - 1.0)) * u;
    const double lhs = std::pow(g.R, n) * du(N - 1) * dv(N - 1);
    const Eigen::VectorXd Kx = st.conv0 * a.cwiseProduct(xi);
    const double t1 = s * g.weights.dot(a.cwiseProduct(v).cwiseProduct(Kx));
    const double t2 = (s - 1.0) * g.weights.dot(d.cwiseProduct(v).cwiseProduct(xi));
    return finish(lhs, (1.0 - lam) * (t1 + t2), floor);
}

double pohozaev_residual_dilation(const GroundState& st, const EigenPair& pair, std::span<const double> z,
                                  double floor) {
    for (double zk : z)
        if (zk != 0.0) throw DomainError("pohozaev_residual_dilation: radial implementation requires z = 0");
    return pohozaev_dilation_terms(st, pair, floor).residual;
}

PohozaevTerms pohozaev_translation_terms(const GroundState& st, const EigenPair& pair, int j, double floor) {
    if (pair.ell != 1) throw DomainError("pohozaev_residual_translation: pair must have ell = 1");
    if (j < 0 || j >= st.dim.n) throw DomainError("pohozaev_residual_translation: axis out of range");
    // every axis reduces to the same radial identity; the factor omega_n/n cancels
    const RadialGrid& g = *st.grid;
    const int n = g.n, N = g.size();
    const double s = st.s(), lam = pair.lambda;
    const Eigen::VectorXd& u = st.u.values;
    const Eigen::VectorXd& f = pair.profile.values;
    const Eigen::VectorXd du = g.derivative(u), df = g.derivative(f);
    const Eigen::VectorXd a = pow_pos(u, s - 1.0);
    Eigen::VectorXd d(N);
    for (int i = 0; i < N; ++i) d(i) = u(i) > 0 ? st.potential(i) * std::pow(u(i), s - 2.0) : 0.0;
    const double lhs = std::pow(g.R, n - 1) * du(N - 1) * df(N - 1);
    RadialField dens{st.grid, 1, a.cwiseProduct(du)};
    const Eigen::VectorXd K1 = convolve_mode_bvp(dens).values;
    const double t1 = s * g.weights.dot(a.cwiseProduct(f).cwiseProduct(K1));
    const double t2 = (s - 1.0) * g.weights.dot(d.cwiseProduct(f).cwiseProduct(du));
    return finish(lhs, (1.0 - lam) * (t1 + t2), floor);
}

double pohozaev_residual_translation(const GroundState& st, const EigenPair& pair, int j, double floor) {
    return pohozaev_translation_terms(st, pair, j, floor).residual;
}

PohozaevTerms pohozaev_ground_state(const GroundState& st) {
    const RadialGrid& g = *st.grid;
    const int n = g.n, N = g.size();
    const double s = st.s();
    const Eigen::VectorXd du = g.derivative(st.u.values);
    const double lhs = std::pow(g.R, n) * du(N - 1) * du(N - 1);
    const double D = g.weights.dot(st.potential.cwiseProduct(pow_pos(st.u.values, s)));
    return finish(lhs, (n + 2.0) * (1.0 / s - 1.0 / st.dim.p) * D, 1e-30);
}

}  // namespace hartree
