#pragma once

#include <Eigen/Dense>
#include <vector>

namespace hartree {

/// Cholesky factor A = L L^T of a symmetric positive definite band matrix.
class BandCholesky {
public:
    /// kd < 0 detects the bandwidth from the nonzero pattern of A.
    explicit BandCholesky(const Eigen::MatrixXd& A, int kd = -1);

    int size() const { return n_; }
    int bandwidth() const { return kd_; }
    /// Solves A X = B in place.
    void solve_in_place(Eigen::MatrixXd& B) const;
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
    /// X <- L^{-1} X
    void lower_solve(Eigen::MatrixXd& X) const;
    /// X <- L^{-T} X
    void upper_solve(Eigen::MatrixXd& X) const;

private:
    int n_ = 0;
    int kd_ = 0;
    Eigen::MatrixXd ab_;  // LAPACK lower band storage, (kd+1) x n
};

int detect_bandwidth(const Eigen::MatrixXd& A);

/// Largest k eigenpairs of a dense symmetric matrix, ascending.
struct SymEig {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};
SymEig symmetric_top_eigenpairs(const Eigen::MatrixXd& C, int k);

}  // namespace hartree
