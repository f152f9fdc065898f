#include "hartree/bubble.hpp"

#include <cmath>

#include "hartree/errors.hpp"
#include "hartree/grid.hpp"
#include "hartree/newtonian.hpp"

namespace hartree {

double w_eval(const DimensionSpec& dim, const BubbleParams& params, std::span<const double> x) {
    if (!(params.mu > 0)) throw DomainError("bubble scale must be positive");
    double d2 = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        double xi = k < params.center.size() ? params.center[k] : 0.0;
        d2 += (x[k] - xi) * (x[k] - xi);
    }
    const double mu = params.mu;
    return c_tilde_closed(dim.n) * std::pow(mu / (1.0 + mu * mu * d2), 0.5 * (dim.n - 2));
}

double w_radial(const DimensionSpec& dim, double mu, double r) {
    return c_tilde_closed(dim.n) * std::pow(mu / (1.0 + mu * mu * r * r), 0.5 * (dim.n - 2));
}

double unit_peak_bubble(const DimensionSpec& dim, double r) {
    const double mu = std::pow(c_tilde_closed(dim.n), -2.0 / (dim.n - 2));
    return std::pow(1.0 + mu * mu * r * r, -0.5 * (dim.n - 2));
}

double gamma_profile_radial(int n, double r) {
    return (1.0 - r * r) * std::pow(1.0 + r * r, -0.5 * n);
}

double gamma_profile(std::span<const double> x) {
    double r2 = 0;
    for (double v : x) r2 += v * v;
    return (1.0 - r2) * std::pow(1.0 + r2, -0.5 * double(x.size()));
}

double translation_profile(int n, double r) {
    return -(n - 2) * r * std::pow(1.0 + r * r, -0.5 * n);
}

double bubble_dilation_mode(const DimensionSpec& dim, std::span<const double> x) {
    const int n = dim.n;
    const double ct = c_tilde_closed(n);
    double r2 = 0;
    for (double v : x) r2 += v * v;
    const double W = ct * std::pow(1.0 + r2, -0.5 * (n - 2));
    // grad W = -(n-2) c_tilde x (1+r^2)^{-n/2}
    const double x_dot_grad = -(n - 2) * ct * r2 * std::pow(1.0 + r2, -0.5 * n);
    return 0.5 * (n - 2) * W + x_dot_grad;
}

double hls_identity_residual(const DimensionSpec& dim, const std::vector<double>& radii, double gamma_n,
                             const IdentityOptions& opts) {
    if (radii.empty()) throw DomainError("hls_identity_residual: empty probe list");
    for (double r : radii)
        if (r < 0 || r > 20) throw DomainError("hls_identity_residual: probe radius outside [0,20]");
    const int n = dim.n;
    const double p = dim.p, ct = c_tilde_closed(n);
    auto g = make_grid_ptr(n, opts.r_max, opts.node_count, opts.grading);
    RadialField f{g, 0, Eigen::VectorXd(g->size())};
    for (int i = 0; i < g->size(); ++i) f.values(i) = std::pow(w_radial(dim, 1.0, g->r(i)), p);
    // int_{r_max}^inf s W^p ds in closed form
    const double tail = std::pow(ct, p) * std::pow(1.0 + opts.r_max * opts.r_max, -0.5 * n) / n;
    RadialField psi = convolve_mode_kernel(f, tail);
    double worst = 0;
    for (double r : radii) {
        const double lhs = g->interpolate(psi.values, r);
        const double rhs = gamma_n * w_radial(dim, 1.0, r);
        worst = std::max(worst, std::abs(lhs / rhs - 1.0));
    }
    return worst;
}

double hls_identity_residual(const DimensionSpec& dim, const std::vector<double>& radii) {
    const ConstantSet c = constant_set(dim);
    return hls_identity_residual(dim, radii, c.Gamma_n);
}

}  // namespace hartree
