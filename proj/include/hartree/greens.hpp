#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "hartree/eigen.hpp"
#include "hartree/groundstate.hpp"

namespace hartree {

struct BallDomain {
    int n = 3;
    double R = 1.0;
};

double fundamental_solution(int n, double dist);
/// Regular part by the method of images:
/// H(x,y) = -((n-2) omega_n)^{-1} (|x|^2 |y|^2 / R^2 - 2 x.y + R^2)^{(2-n)/2}.
double regular_part(const BallDomain& ball, std::span<const double> x, std::span<const double> y);
double green_ball(const BallDomain& ball, std::span<const double> x, std::span<const double> y);
double robin_ball(const BallDomain& ball, std::span<const double> x);
double robin_radial(const BallDomain& ball, double rho);
/// phi'(rho) and phi''(rho) of the radial Robin function.
double robin_radial_d1(const BallDomain& ball, double rho);
double robin_radial_d2(const BallDomain& ball, double rho);
/// Central second differences of robin_ball.
Eigen::MatrixXd robin_hessian(const BallDomain& ball, std::span<const double> x0, double h);
/// Poisson kernel P(x,y) = -d_nu G(x,y) for |x| = R.
double poisson_kernel(const BallDomain& ball, std::span<const double> x, std::span<const double> y);

struct SurfaceCheck {
    double integral = 0;
    double closed_form = 0;
    double rel_error = 0;
};

/// int (d_nu G(x,x0))^2 (nu, x - x0) dS against -(n-2) H(x0,x0), x0 = a e_1.
SurfaceCheck surface_identity_gx0(const BallDomain& ball, double a);
/// int d_nu G(x,w) nu_j d_nu d_{w_k} G(x,w) dS at w = a e_1 against -D^2 phi(w)_{jk} / 2.
/// axial: j = k = 1; otherwise j = k = 2.
SurfaceCheck surface_identity_gx0_1(const BallDomain& ball, double a, bool axial);

struct PohozaevTerms {
    double lhs = 0;
    double rhs = 0;
    double residual = 0;
};

/// Dilation identity (z = 0) for an eigenpair of the linearization at state.
PohozaevTerms pohozaev_dilation_terms(const GroundState& state, const EigenPair& pair, double floor = 1e-30);
double pohozaev_residual_dilation(const GroundState& state, const EigenPair& pair, std::span<const double> z,
                                  double floor = 1e-30);
/// Translation identity along axis j (0-based) for an ell = 1 pair.
PohozaevTerms pohozaev_translation_terms(const GroundState& state, const EigenPair& pair, int j,
                                         double floor = 1e-30);
double pohozaev_residual_translation(const GroundState& state, const EigenPair& pair, int j,
                                     double floor = 1e-30);
/// Scalar identity for u itself: R^n u'(R)^2 = (n+2)(1/s - 1/p) int (K*u^s) u^s.
PohozaevTerms pohozaev_ground_state(const GroundState& state);

}  // namespace hartree
