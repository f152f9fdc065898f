#include "hartree/specfun.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hartree/errors.hpp"

namespace hartree {

using std::numbers::pi;

DimensionSpec DimensionSpec::make(int n) {
    if (n < 3 || n > 5) throw DomainError("dimension must be 3, 4 or 5, got " + std::to_string(n));
    DimensionSpec d;
    d.n = n;
    d.p = double(n + 2) / double(n - 2);
    d.alpha = n - 2;
    d.two_star = 2.0 * n / double(n - 2);
    return d;
}

double gamma_fn(double s) {
    if (!(s > 0)) throw DomainError("gamma_fn: argument must be positive");
    return std::tgamma(s);
}

double sphere_area(int n) {
    if (n < 2) throw DomainError("sphere_area: n must be >= 2");
    return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double hls_constant(int n, double alpha) {
    if (!(alpha > 0 && alpha < n)) throw DomainError("hls_constant: alpha must lie in (0, n)");
    return std::tgamma(0.5 * (n - alpha)) * std::pow(pi, 0.5 * alpha) / std::tgamma(n - 0.5 * alpha) *
           std::pow(std::tgamma(double(n)) / std::tgamma(0.5 * n), 1.0 - alpha / n);
}

double riesz_integral(int n, double s) {
    return std::pow(pi, 0.5 * n) * std::tgamma(0.5 * (n - 2.0 * s)) / std::tgamma(n - s);
}

double sobolev_constant_closed(int n) {
    return pi * n * (n - 2) * std::pow(std::tgamma(0.5 * n) / std::tgamma(double(n)), 2.0 / n);
}

double c_tilde_closed(int n) {
    const double e = (2.0 - n) / 8.0;
    return std::pow(n * (n - 2.0), 0.25 * (n - 2)) * std::pow(sobolev_constant_closed(n), e) *
           std::pow(hls_constant(n, n - 2.0), e);
}

double radial_integral_inf(int n, const std::function<double(double)>& f, double rel_tol) {
    using boost::math::quadrature::gauss_kronrod;
    auto g = [&](double r) { return f(r) * std::pow(r, n - 1); };
    double err0 = 0, err1 = 0;
    // split at r=1: core and algebraic tail
    double a = gauss_kronrod<double, 61>::integrate(g, 0.0, 1.0, 15, 1e-14, &err0);
    double b = gauss_kronrod<double, 61>::integrate(g, 1.0, std::numeric_limits<double>::infinity(), 15,
                                                    1e-14, &err1);
    double total = a + b;
    double rel = (err0 + err1) / std::abs(total);
    if (!(rel <= rel_tol)) throw NumericalError("radial quadrature did not reach tolerance", rel);
    return sphere_area(n) * total;
}

ConstantSet constant_set(const DimensionSpec& dim) {
    const int n = dim.n;
    const double p = dim.p;
    const double om = sphere_area(n);
    ConstantSet c;
    c.n = n;

    // Aubin-Talenti quotient for U = (1+r^2)^{-(n-2)/2}
    auto U = [n](double r) { return std::pow(1.0 + r * r, -0.5 * (n - 2)); };
    auto dU = [n](double r) { return -(n - 2) * r * std::pow(1.0 + r * r, -0.5 * n); };
    double grad2 = radial_integral_inf(n, [&](double r) { return dU(r) * dU(r); });
    double l2s = radial_integral_inf(n, [&](double r) { return std::pow(U(r), dim.two_star); });
    c.S = grad2 / std::pow(l2s, 2.0 / dim.two_star);
    c.S_closed = sobolev_constant_closed(n);
    if (std::abs(c.S / c.S_closed - 1.0) > 1e-10)
        throw NumericalError("Sobolev quotient disagrees with closed form", std::abs(c.S / c.S_closed - 1.0));

    c.C_hls_kernel = hls_constant(n, dim.alpha);
    const double e = (2.0 - n) / 8.0;
    c.c_tilde = std::pow(n * (n - 2.0), 0.25 * (n - 2)) * std::pow(c.S, e) * std::pow(c.C_hls_kernel, e);
    c.C_N = std::pow(c.c_tilde, 2.0 * (p - 2.0));
    c.I_half = riesz_integral(n, 0.5 * (n - 2));
    c.Gamma_n_formula = c.I_half * std::pow(c.S, e) * std::pow(c.C_hls_kernel, e) *
                        std::pow(n * (n - 2.0), 0.25 * (n - 2));
    c.Gamma_n = c.I_half * std::pow(c.c_tilde, p - 1.0);
    c.C_HLS = c.S * std::pow(c.C_hls_kernel, (2.0 - n) / (n + 2.0));

    const double g1 = std::tgamma(0.5 * (n + 2));
    c.alpha_tilde = std::pow(n * (n - 2.0) / std::sqrt(c.S), 0.25 * (n - 2)) * std::pow(pi, 0.5 * n) / g1 *
                    std::pow(std::pow(pi, 0.5 * (n - 2)) / g1 *
                                 std::pow(std::tgamma(double(n)) / std::tgamma(0.5 * n), 2.0 / n),
                             e);

    const double ct = c.c_tilde;
    auto W = [&](double r) { return ct * U(r); };
    auto dW = [&](double r) { return ct * dU(r); };
    auto gam = [n](double r) { return (1.0 - r * r) * std::pow(1.0 + r * r, -0.5 * n); };
    c.int_Wp = radial_integral_inf(n, [&](double r) { return std::pow(W(r), p); });
    c.int_Wpm1_grad_sq =
        radial_integral_inf(n, [&](double r) { return std::pow(W(r), p - 1.0) * dW(r) * dW(r); });
    c.int_Wpm1_gamma = radial_integral_inf(n, [&](double r) { return std::pow(W(r), p - 1.0) * gam(r); });
    c.int_Wpm1_gamma_sq =
        radial_integral_inf(n, [&](double r) { return std::pow(W(r), p - 1.0) * gam(r) * gam(r); });
    c.wn_printed = -(n - 2.0) * om / (n * (n + 2.0));

    c.K_n = c.alpha_tilde * c.int_Wp;
    c.M_0 = -(4.0 / (n * (n + 2.0)) + 1.0 / n) * c.Gamma_n_formula * c.C_N * om;
    // unit-peak bubble V = W[0, c_tilde^{-2/(n-2)}]: int V^p = c_tilde int W^p
    c.green_mass = c.Gamma_n * c.c_tilde * c.int_Wp;
    return c;
}

DomainDerivedConstants domain_constants(const DimensionSpec& dim, double robin_value,
                                        const Eigen::MatrixXd& hessian) {
    return domain_constants(dim, constant_set(dim), robin_value, hessian);
}

DomainDerivedConstants domain_constants(const DimensionSpec& dim, const ConstantSet& c, double robin_value,
                                        const Eigen::MatrixXd& hessian) {
    if (!(robin_value < 0)) throw DomainError("domain_constants: Robin value must be negative");
    if (hessian.rows() != hessian.cols()) throw DomainError("domain_constants: Hessian must be square");
    if ((hessian - hessian.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + hessian.cwiseAbs().maxCoeff()))
        throw DomainError("domain_constants: Hessian must be symmetric");
    const int n = dim.n;
    const double p = dim.p;
    DomainDerivedConstants d;
    d.robin_value = robin_value;
    d.F_n = -c.alpha_tilde * c.alpha_tilde * (n + 2.0) / (n - 2.0) * std::pow(c.C_HLS, -0.25 * (n + 2)) *
            c.int_Wp * c.int_Wp * robin_value;
    d.C_0 = -(n - 2.0) * c.K_n * c.M_0 * d.F_n / ((2.0 * p - 1.0) * c.Gamma_n_formula * c.C_N) /
            c.int_Wpm1_gamma_sq * robin_value;
    const double fpow = std::pow(d.F_n, (n - 1.0) / (n - 2.0));
    d.A_0_direct = (p - 2.0) * std::pow(c.c_tilde, 2.0 * (p - 2.0)) / (p * fpow) * c.I_half *
                    std::pow(c.S, (2.0 - n) / 8.0) * std::pow(c.C_hls_kernel, (2.0 - n) / 8.0) *
                    std::pow(n * (n - 2.0), 0.25 * (n - 2)) * c.int_Wp;
    d.A_0_factored = c.C_N * c.Gamma_n_formula * (p - 2.0) / (p * fpow) * c.int_Wp;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (hessian + hessian.transpose()),
                                                       Eigen::EigenvaluesOnly);
    d.nu = es.eigenvalues();
    return d;
}

}  // namespace hartree
