#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

namespace hartree {

/// Gauss-Lobatto-Legendre rule of degree q on [-1,1].
struct GllRule {
    int q = 0;
    Eigen::VectorXd x, w;
    Eigen::MatrixXd D;     ///< D(i,j) = l_j'(x_i)
    Eigen::MatrixXd S;     ///< S(i,j) = int_{-1}^{x_i} l_j
    Eigen::VectorXd bary;  ///< barycentric weights
};

GllRule make_gll_rule(int q);

/// Radial spectral-element mesh on [0,R] with power-law graded elements.
///
/// Element breakpoints are R (e/E)^{1+grading}; each element carries the GLL
/// nodes of degree `order`, so r=0 and r=R are nodes and the node count is
/// E*order+1.
class RadialGrid {
public:
    int n = 3;
    double R = 1.0;
    double grading = 0.0;
    int order = 8;
    int elements = 0;
    std::vector<double> breaks;
    Eigen::VectorXd r;        ///< nodes, r(0)=0, r(N-1)=R
    Eigen::VectorXd w;        ///< line weights, sum = R
    Eigen::VectorXd weights;  ///< w r^{n-1}: int_0^R f r^{n-1} dr = weights . f
    GllRule rule;

    int size() const { return int(r.size()); }
    int element_first(int e) const { return e * order; }

    /// omega_n * sum weights * f
    double ball_integral(const Eigen::VectorXd& f) const;
    /// High-order interpolation of nodal values at radius s in [0,R].
    double interpolate(const Eigen::VectorXd& f, double s) const;
    /// Element-local derivative, averaged at shared nodes.
    Eigen::VectorXd derivative(const Eigen::VectorXd& f) const;
    /// Same grid with all radii multiplied by factor.
    RadialGrid scaled(double factor) const;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// node_count is rounded up to E*order+1. Throws ConfigError if node_count < 64.
RadialGrid make_radial_grid(int n, double R, int node_count, double grading, int order = 8);
GridPtr make_grid_ptr(int n, double R, int node_count, double grading, int order = 8);

/// Samples of a mode-ell radial profile on a grid.
struct RadialField {
    GridPtr grid;
    int ell = 0;
    Eigen::VectorXd values;
};

enum class BoundaryCondition { dirichlet, decay };

/// Weak form of -Delta restricted to f(r) Y_ell.
///
/// matrix(i,j) = int f_i' f_j' r^{n-1} + ell(ell+n-2) int f_i f_j r^{n-3} over all nodes.
/// The free nodes form the contiguous range [first, first+count): node 0 is
/// dropped for ell>=1, node R for Dirichlet. With the decay condition the
/// exterior harmonic energy (ell+n-2) R^{n-2} is added at r=R.
struct ModeOperator {
    int ell = 0;
    BoundaryCondition bc = BoundaryCondition::dirichlet;
    Eigen::MatrixXd matrix;
    int first = 0;
    int count = 0;
    int bandwidth = 0;

    Eigen::MatrixXd reduced() const { return matrix.block(first, first, count, count); }
    /// Strong form (A f)_i / weights_i; NaN where the weight vanishes.
    Eigen::VectorXd apply_strong(const RadialGrid& g, const Eigen::VectorXd& f) const;
};

ModeOperator laplacian_mode(const RadialGrid& g, int ell,
                            BoundaryCondition bc = BoundaryCondition::dirichlet);

}  // namespace hartree
