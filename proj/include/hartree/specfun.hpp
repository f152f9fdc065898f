#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace hartree {

/// Space dimension with the derived critical exponents (kernel exponent alpha = n-2).
struct DimensionSpec {
    int n = 3;
    double p = 5.0;         ///< (n+2)/(n-2)
    double alpha = 1.0;     ///< n-2
    double two_star = 6.0;  ///< 2n/(n-2)

    /// Throws DomainError unless n is 3, 4 or 5.
    static DimensionSpec make(int n);
};

double gamma_fn(double s);
double sphere_area(int n);
/// Sharp HLS constant C_{n,alpha}.
double hls_constant(int n, double alpha);
/// I(s) = pi^{n/2} Gamma((n-2s)/2) / Gamma(n-s).
double riesz_integral(int n, double s);
/// Best Sobolev constant from the closed form pi n(n-2) (Gamma(n/2)/Gamma(n))^{2/n}.
double sobolev_constant_closed(int n);
/// Bubble amplitude c_tilde_{n,n-2} from closed-form S and C_{n,n-2}.
double c_tilde_closed(int n);

/// omega_n * int_0^inf f(r) r^{n-1} dr by adaptive Gauss-Kronrod.
/// Throws NumericalError carrying the achieved relative error if above rel_tol.
double radial_integral_inf(int n, const std::function<double(double)>& f, double rel_tol = 1e-10);

struct ConstantSet {
    int n = 3;
    double S = 0;                 ///< bubble quotient |grad U|^2 / |U|_{2*}^2 (quadrature)
    double S_closed = 0;          ///< closed-form cross-check
    double C_hls_kernel = 0;      ///< C_{n,n-2}
    double c_tilde = 0;
    double C_N = 0;               ///< c_tilde^{2(p-2)}
    double I_half = 0;            ///< I((n-2)/2)
    double Gamma_n = 0;           ///< value that closes |x|^{2-n} * W^p = Gamma_n W
    double Gamma_n_formula = 0;   ///< I S^{(2-n)/8} C^{(2-n)/8} [n(n-2)]^{(n-2)/4}
    double alpha_tilde = 0;
    double K_n = 0;               ///< alpha_tilde * int W^p
    double M_0 = 0;               ///< -(4/(n(n+2)) + 1/n) Gamma_n_formula C_N omega_n
    double C_HLS = 0;             ///< S C^{(2-n)/(n+2)}
    double int_Wp = 0;            ///< int W^p
    double int_Wpm1_grad_sq = 0;  ///< int W^{p-1} |grad W|^2
    double int_Wpm1_gamma = 0;    ///< int W^{p-1} gamma
    double int_Wpm1_gamma_sq = 0; ///< int W^{p-1} gamma^2
    double wn_printed = 0;        ///< -(n-2) omega_n / (n(n+2))
    double green_mass = 0;        ///< int (K*V^p) V^{p-1} for the unit-peak bubble V
};

ConstantSet constant_set(const DimensionSpec& dim);

struct DomainDerivedConstants {
    double robin_value = 0;
    double F_n = 0;
    double C_0 = 0;
    double A_0_direct = 0;    ///< A_0 from its direct expression
    double A_0_factored = 0;   ///< A_0 with the C_N Gamma_n (p-2)/p prefactor
    Eigen::VectorXd nu;       ///< sorted Robin-Hessian eigenvalues
};

DomainDerivedConstants domain_constants(const DimensionSpec& dim, double robin_value,
                                        const Eigen::MatrixXd& hessian);
DomainDerivedConstants domain_constants(const DimensionSpec& dim, const ConstantSet& c,
                                        double robin_value, const Eigen::MatrixXd& hessian);

}  // namespace hartree
