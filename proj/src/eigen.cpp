#include "hartree/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

#include "hartree/bubble.hpp"
#include "hartree/errors.hpp"
#include "hartree/linalg.hpp"
#include "hartree/newtonian.hpp"

namespace hartree {

PencilForms assemble_forms(const RadialGrid& g, const Eigen::VectorXd& u, double s, int ell,
                           BoundaryCondition bc, const Eigen::MatrixXd& conv0, double cn) {
    const int N = g.size();
    PencilForms pf{laplacian_mode(g, ell, bc), {}};
    const Eigen::MatrixXd Kl = ell == 0 ? conv0 : convolution_matrix_bvp(g, ell);
    Eigen::VectorXd us(N), a(N), d(N);
    for (int i = 0; i < N; ++i) {
        const double ui = u(i);
        if (ui < 0) throw NumericalError("assemble_forms: profile must be nonnegative");
        us(i) = ui > 0 ? std::pow(ui, s) : 0.0;
        a(i) = ui > 0 ? std::pow(ui, s - 1.0) : 0.0;
    }
    const Eigen::VectorXd P = conv0 * us;
    for (int i = 0; i < N; ++i) {
        d(i) = u(i) > 0 ? P(i) * std::pow(u(i), s - 2.0) : 0.0;
        if (d(i) < 0) throw NumericalError("assemble_forms: indefinite B (negative potential term)");
    }
    Eigen::MatrixXd B = s * (g.weights.cwiseProduct(a)).asDiagonal() * Kl * a.asDiagonal();
    B.diagonal() += (s - 1.0) * g.weights.cwiseProduct(d);
    pf.B = cn * 0.5 * (B + B.transpose());
    return pf;
}

PencilForms assemble_forms(const GroundState& st, int ell) {
    return assemble_forms(*st.grid, st.u.values, st.s(), ell, BoundaryCondition::dirichlet, st.conv0);
}

namespace {

void sign_normalize(Eigen::VectorXd& v) {
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    v /= v(imax);
}

}  // namespace

std::vector<GenEigenPair> solve_spectrum(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int k,
                                         int bandwidth) {
    const int N = int(A.rows());
    if (B.rows() != N || B.cols() != N || A.cols() != N) throw NumericalError("solve_spectrum: shape mismatch");
    if (k < 1 || k > N) throw NumericalError("solve_spectrum: k out of range");
    BandCholesky L(A, bandwidth);
    Eigen::MatrixXd X = B;
    L.lower_solve(X);
    Eigen::MatrixXd C = X.transpose();
    L.lower_solve(C);
    C = 0.5 * (C + C.transpose());
    SymEig se = symmetric_top_eigenpairs(C, k);
    Eigen::MatrixXd V = se.vectors;
    L.upper_solve(V);
    std::vector<GenEigenPair> out;
    for (int j = k - 1; j >= 0; --j) {
        const double mu = se.values(j);
        if (!(mu > 0)) throw NumericalError("solve_spectrum: B has fewer than k positive directions", mu);
        GenEigenPair gp;
        gp.lambda = 1.0 / mu;
        gp.vector = V.col(j);
        sign_normalize(gp.vector);
        const Eigen::VectorXd Av = A * gp.vector;
        gp.residual = (Av - gp.lambda * (B * gp.vector)).norm() / Av.norm();
        out.push_back(std::move(gp));
    }
    return out;
}

int harmonic_multiplicity(int n, int ell) {
    if (ell == 0) return 1;
    // (2l+n-2)(l+n-3)! / (l! (n-2)!)
    double num = 2.0 * ell + n - 2;
    for (int k = 1; k <= n - 3; ++k) num *= double(ell + k) / k;
    return int(std::lround(num / (n - 2)));
}

Spectrum merge_modes(int n, double eps, std::vector<std::vector<EigenPair>> blocks) {
    Spectrum sp;
    sp.eps = eps;
    sp.n = n;
    sp.complete_below = std::numeric_limits<double>::infinity();
    for (auto& b : blocks) {
        if (b.empty()) continue;
        sp.complete_below = std::min(sp.complete_below, b.back().lambda);
        for (auto& pr : b) sp.pairs.push_back(std::move(pr));
    }
    std::stable_sort(sp.pairs.begin(), sp.pairs.end(), [](const EigenPair& x, const EigenPair& y) {
        return x.lambda != y.lambda ? x.lambda < y.lambda : x.ell < y.ell;
    });
    std::erase_if(sp.pairs, [&](const EigenPair& p) { return p.lambda > sp.complete_below; });
    int idx = 1;
    for (std::size_t j = 0; j < sp.pairs.size(); ++j) {
        EigenPair& p = sp.pairs[j];
        p.global_index = idx;
        for (int m = 0; m < p.multiplicity; ++m) {
            sp.lambdas.push_back(p.lambda);
            sp.ells.push_back(p.ell);
            sp.pair_of.push_back(int(j));
        }
        idx += p.multiplicity;
    }
    return sp;
}

namespace {

std::vector<EigenPair> mode_block(const PencilForms& pf, GridPtr grid, int n, int k) {
    const auto sols = solve_spectrum(pf.A.reduced(), pf.Bf(), k, pf.A.bandwidth);
    std::vector<EigenPair> out;
    for (std::size_t j = 0; j < sols.size(); ++j) {
        EigenPair ep;
        ep.lambda = sols[j].lambda;
        ep.ell = pf.A.ell;
        ep.multiplicity = harmonic_multiplicity(n, pf.A.ell);
        ep.mode_index = int(j);
        ep.residual = sols[j].residual;
        ep.profile = RadialField{grid, pf.A.ell, Eigen::VectorXd::Zero(grid->size())};
        ep.profile.values.segment(pf.A.first, pf.A.count) = sols[j].vector;
        out.push_back(std::move(ep));
    }
    return out;
}

}  // namespace

Spectrum limit_spectrum(const DimensionSpec& dim, GridPtr grid, int k_per_mode, int ell_max) {
    const RadialGrid& g = *grid;
    const double cn = std::pow(c_tilde_closed(dim.n), 2.0 * (dim.p - 2.0));
    // amplitude kappa with kappa^{2p-2} C_N = 1 turns W[0,1] into a solution of the C_N-weighted equation
    const double kappa = std::pow(cn, -1.0 / (2.0 * dim.p - 2.0));
    Eigen::VectorXd u(g.size());
    for (int i = 0; i < g.size(); ++i) u(i) = kappa * w_radial(dim, 1.0, g.r(i));
    const Eigen::MatrixXd K0 = convolution_matrix_bvp(g, 0);
    std::vector<std::future<std::vector<EigenPair>>> jobs;
    for (int ell = 0; ell <= ell_max; ++ell)
        jobs.push_back(std::async(std::launch::async, [&, ell] {
            PencilForms pf = assemble_forms(g, u, dim.p, ell, BoundaryCondition::decay, K0, cn);
            return mode_block(pf, grid, dim.n, k_per_mode);
        }));
    std::vector<std::vector<EigenPair>> blocks;
    for (auto& j : jobs) blocks.push_back(j.get());
    return merge_modes(dim.n, 0.0, std::move(blocks));
}

Spectrum spectrum_for(const GroundState& st, int ell_max, int k_per_mode) {
    if (ell_max < 2) throw ConfigError("spectrum_for: ell_max must be >= 2");
    std::vector<std::future<std::vector<EigenPair>>> jobs;
    for (int ell = 0; ell <= ell_max; ++ell)
        jobs.push_back(std::async(std::launch::async, [&, ell] {
            return mode_block(assemble_forms(st, ell), st.grid, st.dim.n, k_per_mode);
        }));
    std::vector<std::vector<EigenPair>> blocks;
    for (auto& j : jobs) blocks.push_back(j.get());
    Spectrum sp = merge_modes(st.dim.n, st.eps, std::move(blocks));
    if (int(sp.lambdas.size()) < st.dim.n + 3)
        throw ConfigError("spectrum_for: modes do not fill the first n+3 eigenvalues; raise k_per_mode");
    return sp;
}

RadialField rescale_eigenfunction(const GroundState& st, const EigenPair& pair) {
    auto g = std::make_shared<const RadialGrid>(pair.profile.grid->scaled(st.mu));
    return RadialField{g, pair.ell, pair.profile.values};
}

MorseIndex morse_index(const Spectrum& sp, double band) {
    MorseIndex m;
    for (double l : sp.lambdas) {
        if (std::abs(l - 1.0) <= band)
            ++m.ambiguous;
        else if (l < 1.0)
            ++m.index;
    }
    return m;
}

NodalCount nodal_count(const RadialGrid& g, const Eigen::VectorXd& v) {
    const double scale = v.cwiseAbs().maxCoeff();
    if (!(scale > 0)) throw DomainError("nodal_count: profile identically zero");
    const double tiny = 1e-12 * scale;
    const int N = int(v.size());
    int changes = 0, last_prev = -1, last_sign = 0, last_node = -1;
    for (int i = 0; i < N; ++i) {
        if (std::abs(v(i)) <= tiny) continue;
        const int sg = v(i) > 0 ? 1 : -1;
        if (last_sign != 0 && sg != last_sign) {
            ++changes;
            last_prev = last_node;
        }
        last_sign = sg;
        last_node = i;
    }
    NodalCount nc;
    nc.regions = changes + 1;
    if (changes > 0) {
        // the crossing lies after node last_prev; interior if it is not in the last cell
        const double h = g.R - g.r(N - 2);
        nc.interior_nodal_set = g.r(last_prev) < g.R - h && last_prev < N - 2;
    }
    return nc;
}

NodalCount nodal_count(const EigenPair& pair) {
    if (pair.ell != 0) throw DomainError("nodal_count: only ell = 0 pairs");
    return nodal_count(*pair.profile.grid, pair.profile.values);
}

double profile_l2_error(const RadialGrid& g, const Eigen::VectorXd& v, const Eigen::VectorXd& ref,
                        double r_max) {
    Eigen::VectorXd w = g.weights;
    if (r_max > 0)
        for (int i = 0; i < g.size(); ++i)
            if (g.r(i) > r_max) w(i) = 0;
    const double c = (w.cwiseProduct(v)).dot(ref) / (w.cwiseProduct(ref)).dot(ref);
    const Eigen::VectorXd diff = v - c * ref;
    return std::sqrt((w.cwiseProduct(diff)).dot(diff) / (c * c * (w.cwiseProduct(ref)).dot(ref)));
}

double profile_correlation(const RadialGrid& g, const Eigen::VectorXd& v, const Eigen::VectorXd& ref,
                           double r_max) {
    Eigen::VectorXd w = g.weights;
    if (r_max > 0)
        for (int i = 0; i < g.size(); ++i)
            if (g.r(i) > r_max) w(i) = 0;
    return (w.cwiseProduct(v)).dot(ref) /
           std::sqrt((w.cwiseProduct(v)).dot(v) * (w.cwiseProduct(ref)).dot(ref));
}

}  // namespace hartree
