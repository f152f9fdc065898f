#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hartree/groundstate.hpp"
#include "hartree/grid.hpp"

namespace hartree {

/// Pencil A v = lambda B v for one spherical-harmonic mode, on the free nodes of A.
struct PencilForms {
    ModeOperator A;
    Eigen::MatrixXd B;  ///< full-node matrix of the bilinear form b
    Eigen::MatrixXd Bf() const { return B.block(A.first, A.first, A.count, A.count); }
};

/// Forms of the linearization at a positive radial profile u with exponent s = p - eps.
/// cn multiplies B (the C_N factor of the limiting equation).
PencilForms assemble_forms(const RadialGrid& g, const Eigen::VectorXd& u, double s, int ell,
                           BoundaryCondition bc, const Eigen::MatrixXd& conv0, double cn = 1.0);
PencilForms assemble_forms(const GroundState& state, int ell);

struct GenEigenPair {
    double lambda = 0;
    Eigen::VectorXd vector;  ///< sup-normalized, positive at the largest-magnitude entry
    double residual = 0;     ///< |A v - lambda B v| / |A v|
};

/// k smallest eigenvalues of A v = lambda B v with A SPD and B PSD.
/// The pencil is reduced with the (band) Cholesky factor of A and the
/// largest eigenvalues of L^{-1} B L^{-T} are inverted.
std::vector<GenEigenPair> solve_spectrum(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int k,
                                         int bandwidth = -1);

/// Dimension of the degree-ell spherical harmonics in R^n.
int harmonic_multiplicity(int n, int ell);

struct EigenPair {
    double lambda = 0;
    int ell = 0;
    int multiplicity = 1;
    int mode_index = 0;    ///< position within its mode block
    int global_index = 0;  ///< 1-based index of the first copy in the merged spectrum
    RadialField profile;   ///< sup-normalized, full-node
    double residual = 0;
};

struct Spectrum {
    double eps = 0;
    int n = 3;
    std::vector<EigenPair> pairs;  ///< one entry per mode eigenpair, ordered by (lambda, ell)
    std::vector<double> lambdas;   ///< multiplicity-expanded ascending eigenvalues
    std::vector<int> ells;         ///< mode of each expanded entry
    std::vector<int> pair_of;      ///< index into pairs of each expanded entry
    double complete_below = 0;     ///< the merged list is complete up to this value

    /// Pair behind the 1-based expanded index i.
    const EigenPair& at(int i) const { return pairs.at(pair_of.at(i - 1)); }
};

Spectrum merge_modes(int n, double eps, std::vector<std::vector<EigenPair>> blocks);

/// Spectrum of the limiting pencil around the bubble on a large ball with the
/// decay condition. B carries C_N and the profile is the bubble amplitude that
/// solves the C_N-weighted equation.
Spectrum limit_spectrum(const DimensionSpec& dim, GridPtr grid, int k_per_mode, int ell_max = 1);

/// Multiplicity-expanded spectrum of the linearization at a ground state.
Spectrum spectrum_for(const GroundState& state, int ell_max = 2, int k_per_mode = 4);

/// v(x / mu) sampled on the grid dilated by mu.
RadialField rescale_eigenfunction(const GroundState& state, const EigenPair& pair);

struct MorseIndex {
    int index = 0;      ///< eigenvalues below 1 - band
    int ambiguous = 0;  ///< eigenvalues within band of 1
};
MorseIndex morse_index(const Spectrum& spectrum, double band = 1e-10);

struct NodalCount {
    int regions = 0;
    bool interior_nodal_set = false;
};
NodalCount nodal_count(const EigenPair& pair);
NodalCount nodal_count(const RadialGrid& g, const Eigen::VectorXd& profile);

/// L2(r^{n-1}) relative distance of v from its best multiple of ref on r <= r_max.
double profile_l2_error(const RadialGrid& g, const Eigen::VectorXd& v, const Eigen::VectorXd& ref,
                        double r_max = -1);
/// Normalized L2(r^{n-1}) inner product on r <= r_max.
double profile_correlation(const RadialGrid& g, const Eigen::VectorXd& v, const Eigen::VectorXd& ref,
                           double r_max = -1);

}  // namespace hartree
