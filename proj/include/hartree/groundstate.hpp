#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hartree/grid.hpp"
#include "hartree/specfun.hpp"

namespace hartree {

struct SolveOptions {
    double tol = 1e-8;               ///< accepted residual
    int max_picard = 40;
    int max_newton = 50;
    double damping = 0.5;            ///< Picard relaxation on the first damped_iterations steps
    int damped_iterations = 10;
    double quotient_tol = 1e-12;     ///< allowed relative increase of the energy quotient per step
    BoundaryCondition bc = BoundaryCondition::dirichlet;
};

/// Radial solution of -Delta u = (|x|^{2-n} * u^{p-eps}) u^{p-1-eps} on B_R.
struct GroundState {
    DimensionSpec dim;
    double eps = 0;
    GridPtr grid;
    BoundaryCondition bc = BoundaryCondition::dirichlet;
    RadialField u;
    double sup_norm = 0;
    double mu = 0;        ///< sup_norm^{(4-(n-2)eps)/(2(n-2))}
    double residual = 0;  ///< |A u - M N(u)|_inf / |M N(u)|_inf over free nodes
    double mu0 = 0;       ///< scale of the initial truncated bubble
    int picard_iterations = 0;
    int newton_iterations = 0;
    std::vector<double> quotient_history;  ///< energy quotient along accepted Picard steps
    Eigen::MatrixXd conv0;                 ///< mode-0 convolution matrix of the grid
    Eigen::VectorXd potential;             ///< |x|^{2-n} * u^{p-eps}

    double s() const { return dim.p - eps; }
};

GroundState solve_ground_state(const DimensionSpec& dim, double eps, GridPtr grid, const SolveOptions& opts = {});

/// int |grad u|^2 / (int (K*u^s) u^s)^{1/s}
double energy_quotient(const RadialGrid& g, const Eigen::MatrixXd& stiffness, const Eigen::MatrixXd& conv0,
                       const Eigen::VectorXd& u, double s);

bool is_radially_nonincreasing(const Eigen::VectorXd& u, double rel_tol = 1e-13);

struct ConcentrationDiagnostics {
    double eps_supnorm_sq = 0;
    double supnorm_to_eps = 0;
    double profile_error = 0;            ///< sup_{|x|<=5} |u_tilde - W[0,1]|
    double profile_error_unit_peak = 0;  ///< same against the unit-peak bubble V
    double domination_constant = 0;      ///< max u_tilde / W[0,1]
    double domination_constant_unit_peak = 0;
    double green_profile_error = 0;      ///< against K_n G(r,0)
    double green_profile_error_mass = 0; ///< against green_mass G(r,0)
};

ConcentrationDiagnostics concentration_diagnostics(const GroundState& state, const ConstantSet& constants);

/// Green function of B_R with pole at the center.
double green_center(int n, double R, double r);

}  // namespace hartree
