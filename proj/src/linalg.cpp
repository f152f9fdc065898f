#include "hartree/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <string>

#include "hartree/errors.hpp"

namespace hartree {

int detect_bandwidth(const Eigen::MatrixXd& A) {
    int kd = 0;
    for (int j = 0; j < A.cols(); ++j)
        for (int i = A.rows() - 1; i > j + kd; --i)
            if (A(i, j) != 0.0) {
                kd = i - j;
                break;
            }
    return kd;
}

BandCholesky::BandCholesky(const Eigen::MatrixXd& A, int kd) : n_(int(A.rows())) {
    if (A.rows() != A.cols()) throw NumericalError("BandCholesky: matrix not square");
    kd_ = kd < 0 ? detect_bandwidth(A) : std::min(kd, std::max(n_ - 1, 0));
    ab_ = Eigen::MatrixXd::Zero(kd_ + 1, n_);
    for (int j = 0; j < n_; ++j)
        for (int i = j; i <= std::min(n_ - 1, j + kd_); ++i) ab_(i - j, j) = A(i, j);
    lapack_int info = LAPACKE_dpbtrf(LAPACK_COL_MAJOR, 'L', n_, kd_, ab_.data(), kd_ + 1);
    if (info != 0)
        throw NumericalError("band Cholesky failed (matrix not positive definite), info=" + std::to_string(info));
}

void BandCholesky::solve_in_place(Eigen::MatrixXd& B) const {
    lapack_int info = LAPACKE_dpbtrs(LAPACK_COL_MAJOR, 'L', n_, kd_, int(B.cols()), ab_.data(), kd_ + 1,
                                     B.data(), int(B.rows()));
    if (info != 0) throw NumericalError("band Cholesky solve failed");
}

Eigen::VectorXd BandCholesky::solve(const Eigen::VectorXd& b) const {
    Eigen::MatrixXd X = b;
    solve_in_place(X);
    return X.col(0);
}

void BandCholesky::lower_solve(Eigen::MatrixXd& X) const {
    lapack_int info = LAPACKE_dtbtrs(LAPACK_COL_MAJOR, 'L', 'N', 'N', n_, kd_, int(X.cols()), ab_.data(),
                                     kd_ + 1, X.data(), int(X.rows()));
    if (info != 0) throw NumericalError("triangular band solve failed");
}

void BandCholesky::upper_solve(Eigen::MatrixXd& X) const {
    lapack_int info = LAPACKE_dtbtrs(LAPACK_COL_MAJOR, 'L', 'T', 'N', n_, kd_, int(X.cols()), ab_.data(),
                                     kd_ + 1, X.data(), int(X.rows()));
    if (info != 0) throw NumericalError("triangular band solve failed");
}

SymEig symmetric_top_eigenpairs(const Eigen::MatrixXd& C, int k) {
    const int N = int(C.rows());
    if (k < 1 || k > N) throw NumericalError("requested eigenpair count out of range");
    Eigen::MatrixXd a = C;
    SymEig out;
    out.values.resize(N);
    out.vectors.resize(N, k);
    std::vector<lapack_int> isuppz(2 * std::max(k, 1));
    lapack_int m = 0;
    lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', N, a.data(), N, 0.0, 0.0, N - k + 1, N,
                                     LAPACKE_dlamch('S'), &m, out.values.data(), out.vectors.data(), N,
                                     isuppz.data());
    if (info != 0 || m != k) throw NumericalError("symmetric eigensolver failed, info=" + std::to_string(info));
    out.values.conservativeResize(k);
    return out;
}

}  // namespace hartree
