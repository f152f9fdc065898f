#include "hartree/identities.hpp"

#include <fmt/format.h>

#include <cmath>

#include "hartree/bubble.hpp"
#include "hartree/greens.hpp"

namespace hartree {

std::vector<IdentityResult> run_identity_suite(const DimensionSpec& dim, double tol, double hess_tol) {
    const ConstantSet c = constant_set(dim);
    const int n = dim.n;
    std::vector<IdentityResult> out;
    auto add = [&](std::string name, double value, double t, std::string note) {
        out.push_back({std::move(name), value, t, value < t, std::move(note)});
    };

    const double conv = hls_identity_residual(dim, {0.0, 0.5, 1.0, 3.0, 10.0}, c.Gamma_n);
    add("convolution_identity", conv, tol,
        fmt::format("Gamma_n={:.10g} (displayed formula gives {:.10g}, ratio {:.10g})", c.Gamma_n,
                    c.Gamma_n_formula, c.Gamma_n_formula / c.Gamma_n));

    const double corrected = std::pow(c.c_tilde, dim.p - 1.0) * c.wn_printed;
    add("bubble_gamma_integral", std::abs(c.int_Wpm1_gamma / corrected - 1.0), tol,
        fmt::format("quadrature={:.12g} displayed={:.12g} discrepancy_factor={:.12g} (c_tilde^(p-1)={:.12g})",
                    c.int_Wpm1_gamma, c.wn_printed, c.int_Wpm1_gamma / c.wn_printed,
                    std::pow(c.c_tilde, dim.p - 1.0)));

    const BallDomain ball{n, 1.0};
    for (double a : {0.0, 0.3}) {
        SurfaceCheck s = surface_identity_gx0(ball, a);
        add(fmt::format("boundary_flux_x0={}", a), s.rel_error, tol,
            fmt::format("integral={:.12g} closed_form={:.12g}", s.integral, s.closed_form));
    }
    for (double a : {0.0, 0.3}) {
        for (bool axial : {true, false}) {
            SurfaceCheck s = surface_identity_gx0_1(ball, a, axial);
            add(fmt::format("boundary_mixed_x0={}_{}", a, axial ? "axial" : "transverse"), s.rel_error, tol,
                fmt::format("integral={:.12g} closed_form(-D2phi/2)={:.12g} factor_vs_+D2phi/2={:.6g}", s.integral,
                            s.closed_form, -1.0));
        }
    }
    std::vector<double> x0(n, 0.0);
    const Eigen::MatrixXd H = robin_hessian(ball, x0, 1e-3);
    const SurfaceCheck s0 = surface_identity_gx0_1(ball, 0.0, true);
    const double fd = std::abs(s0.integral / (-0.5 * H(0, 0)) - 1.0);
    add("boundary_mixed_vs_fd_hessian", fd, hess_tol,
        fmt::format("integral={:.12g} -H_fd(0,0)/2={:.12g}", s0.integral, -0.5 * H(0, 0)));
    return out;
}

}  // namespace hartree
