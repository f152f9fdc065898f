#include "hartree/groundstate.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>

#include "hartree/bubble.hpp"
#include "hartree/errors.hpp"
#include "hartree/newtonian.hpp"

namespace hartree {

namespace {

Eigen::VectorXd pow_pos(const Eigen::VectorXd& u, double e) {
    Eigen::VectorXd out(u.size());
    for (int i = 0; i < u.size(); ++i) out(i) = u(i) > 0 ? std::pow(u(i), e) : 0.0;
    return out;
}

struct Problem {
    const RadialGrid& g;
    const ModeOperator& A;
    const Eigen::MatrixXd& K0;
    double s;

    Eigen::VectorXd potential(const Eigen::VectorXd& u) const { return K0 * pow_pos(u, s); }
    // M N(u) on all nodes
    Eigen::VectorXd load(const Eigen::VectorXd& u, const Eigen::VectorXd& P) const {
        return g.weights.cwiseProduct(P).cwiseProduct(pow_pos(u, s - 1.0));
    }
};

double sup_norm_of(const Eigen::VectorXd& u) { return u.cwiseAbs().maxCoeff(); }

}  // namespace

double energy_quotient(const RadialGrid& g, const Eigen::MatrixXd& stiffness, const Eigen::MatrixXd& conv0,
                       const Eigen::VectorXd& u, double s) {
    const Eigen::VectorXd us = pow_pos(u, s);
    const double a = u.dot(stiffness * u);
    const double d = g.weights.dot((conv0 * us).cwiseProduct(us));
    return a / std::pow(d, 1.0 / s);
}

bool is_radially_nonincreasing(const Eigen::VectorXd& u, double rel_tol) {
    const double scale = u.cwiseAbs().maxCoeff();
    for (int i = 1; i < u.size(); ++i)
        if (u(i) > u(i - 1) + rel_tol * scale) return false;
    return true;
}

double green_center(int n, double R, double r) {
    return (std::pow(r, 2.0 - n) - std::pow(R, 2.0 - n)) / ((n - 2) * sphere_area(n));
}

GroundState solve_ground_state(const DimensionSpec& dim, double eps, GridPtr grid, const SolveOptions& opts) {
    const bool dirichlet = opts.bc == BoundaryCondition::dirichlet;
    if (!(eps <= 0.5) || eps < 0 || (eps == 0 && dirichlet))
        throw DomainError("solve_ground_state: eps must lie in (0, 0.5] (eps = 0 only with the decay condition)");
    const RadialGrid& g = *grid;
    const int n = dim.n, N = g.size();
    const double s = dim.p - eps;

    GroundState st;
    st.dim = dim;
    st.eps = eps;
    st.grid = grid;
    st.bc = opts.bc;
    const ModeOperator A = laplacian_mode(g, 0, opts.bc);
    st.conv0 = convolution_matrix_bvp(g, 0);
    const Problem pb{g, A, st.conv0, s};
    const int f0 = A.first, nf = A.count;
    const Eigen::MatrixXd Af = A.reduced();
    // stiffness on free nodes embedded in the full index space, for quotient evaluation
    Eigen::MatrixXd Afull = Eigen::MatrixXd::Zero(N, N);
    Afull.block(f0, f0, nf, nf) = Af;

    // initial truncated bubble, scale from a one-parameter quotient minimization
    auto trunc_bubble = [&](double mu) {
        Eigen::VectorXd u(N);
        const double edge = dirichlet ? std::pow(mu / (1.0 + mu * mu * g.R * g.R), 0.5 * (n - 2)) : 0.0;
        for (int i = 0; i < N; ++i) u(i) = std::pow(mu / (1.0 + mu * mu * g.r(i) * g.r(i)), 0.5 * (n - 2)) - edge;
        return u;
    };
    auto q_of_logmu = [&](double lm) { return energy_quotient(g, Afull, st.conv0, trunc_bubble(std::exp(lm)), s); };
    const double lo = std::log(0.5 / g.R), hi = std::log(0.05 / g.r(1));
    const int samples = 80;
    int best = 0;
    double best_q = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        double q = q_of_logmu(lo + (hi - lo) * k / (samples - 1));
        if (q < best_q) best_q = q, best = k;
    }
    const double step = (hi - lo) / (samples - 1);
    auto res = boost::math::tools::brent_find_minima(q_of_logmu, lo + std::max(best - 1, 0) * step,
                                                     lo + std::min(best + 1, samples - 1) * step, 40);
    // at eps = 0 with the decay condition the quotient is flat along dilations, so the scale is fixed instead
    const bool scale_free = eps == 0;
    st.mu0 = scale_free ? 1.0 : std::exp(res.first);
    Eigen::VectorXd u = trunc_bubble(st.mu0);
    u /= sup_norm_of(u);

    // normalized Picard sweeps u <- A^{-1} M N(u), relaxed and renormalized
    Eigen::LLT<Eigen::MatrixXd> llt(Af);
    if (llt.info() != Eigen::Success) throw NumericalError("stiffness factorization failed");
    double q_prev = energy_quotient(g, Afull, st.conv0, u, s);
    st.quotient_history.push_back(q_prev);
    for (int it = 0; it < opts.max_picard; ++it) {
        Eigen::VectorXd P = pb.potential(u);
        Eigen::VectorXd w = Eigen::VectorXd::Zero(N);
        w.segment(f0, nf) = llt.solve(pb.load(u, P).segment(f0, nf));
        w /= sup_norm_of(w);
        double theta = it < opts.damped_iterations ? opts.damping : 1.0;
        bool accepted = false;
        Eigen::VectorXd cand;
        double q = 0;
        for (int tries = 0; tries < 8; ++tries, theta *= 0.5) {
            cand = (1.0 - theta) * u + theta * w;
            cand /= sup_norm_of(cand);
            q = energy_quotient(g, Afull, st.conv0, cand, s);
            if (q <= q_prev * (1.0 + opts.quotient_tol)) {
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        for (int i = 0; i < N - (dirichlet ? 1 : 0); ++i)
            if (!(cand(i) > 0)) throw SolverError("Picard iterate lost positivity");
        const double change = (cand - u).cwiseAbs().maxCoeff();
        u = cand;
        q_prev = q;
        st.quotient_history.push_back(q);
        st.picard_iterations = it + 1;
        if (change < 1e-9) break;
    }

    // projective rescaling: A(tu) = M N(tu) projected on u
    {
        Eigen::VectorXd P = pb.potential(u);
        const double a = u.dot(Afull * u);
        const double b = u.dot(pb.load(u, P));
        u *= std::pow(a / b, 1.0 / (2.0 * s - 2.0));
    }

    // Newton polish with the exact Jacobian A - M N'(u)
    auto residual_of = [&](const Eigen::VectorXd& v, Eigen::VectorXd& F) {
        Eigen::VectorXd P = pb.potential(v);
        Eigen::VectorXd L = pb.load(v, P).segment(f0, nf);
        F = Af * v.segment(f0, nf) - L;
        return F.cwiseAbs().maxCoeff() / L.cwiseAbs().maxCoeff();
    };
    Eigen::VectorXd F;
    double r = residual_of(u, F);
    for (int it = 0; it < opts.max_newton && r > 1e-13; ++it) {
        const Eigen::VectorXd P = pb.potential(u);
        const Eigen::VectorXd a1 = pow_pos(u, s - 1.0);
        Eigen::VectorXd d2(N);
        for (int i = 0; i < N; ++i) d2(i) = u(i) > 0 ? P(i) * std::pow(u(i), s - 2.0) : 0.0;
        Eigen::MatrixXd Nprime = s * (g.weights.cwiseProduct(a1)).asDiagonal() * st.conv0 * a1.asDiagonal();
        Nprime.diagonal() += (s - 1.0) * g.weights.cwiseProduct(d2);
        Eigen::MatrixXd J = Af - Nprime.block(f0, f0, nf, nf);
        Eigen::VectorXd du;
        if (scale_free) {
            // bordered system: the step is kept orthogonal to the dilation generator r u' + (n-2)/2 u
            const Eigen::VectorXd xi =
                (g.r.cwiseProduct(g.derivative(u)) + 0.5 * (n - 2) * u).segment(f0, nf).normalized();
            Eigen::MatrixXd Jb = Eigen::MatrixXd::Zero(nf + 1, nf + 1);
            Jb.topLeftCorner(nf, nf) = J;
            Jb.block(0, nf, nf, 1) = xi;
            Jb.block(nf, 0, 1, nf) = xi.transpose();
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf + 1);
            rhs.head(nf) = -F;
            du = Jb.partialPivLu().solve(rhs).head(nf);
        } else {
            // symmetric equilibration: rows and columns near r = 0 carry weights ~ r^{n-1}
            const Eigen::VectorXd d = J.diagonal().cwiseAbs().cwiseSqrt().cwiseInverse();
            const Eigen::MatrixXd Js = d.asDiagonal() * J * d.asDiagonal();
            du = d.cwiseProduct(Js.partialPivLu().solve(d.cwiseProduct(-F)));
        }
        double lambda = 1.0, r_new = r;
        Eigen::VectorXd trial, F_new;
        bool ok = false;
        for (int ls = 0; ls < 12; ++ls, lambda *= 0.5) {
            trial = u;
            trial.segment(f0, nf) += lambda * du;
            bool positive = true;
            for (int i = 0; i < N - (dirichlet ? 1 : 0); ++i)
                if (!(trial(i) > 0)) positive = false;
            if (!positive) continue;
            r_new = residual_of(trial, F_new);
            if (r_new < r) {
                ok = true;
                break;
            }
        }
        if (!ok) break;
        const double improvement = r_new / r;
        u = trial;
        F = F_new;
        r = r_new;
        st.newton_iterations = it + 1;
        if (r < opts.tol && improvement > 0.5) break;  // roundoff floor reached
    }
    for (int i = 0; i < N - (dirichlet ? 1 : 0); ++i)
        if (!(u(i) > 0)) throw SolverError("solution lost positivity");
    if (!(r < opts.tol)) throw IterationError("ground state did not converge", r);

    st.u = RadialField{grid, 0, u};
    st.sup_norm = sup_norm_of(u);
    st.mu = std::pow(st.sup_norm, (4.0 - (n - 2) * eps) / (2.0 * (n - 2)));
    st.residual = r;
    st.potential = pb.potential(u);
    return st;
}

ConcentrationDiagnostics concentration_diagnostics(const GroundState& st, const ConstantSet& c) {
    const RadialGrid& g = *st.grid;
    const DimensionSpec& dim = st.dim;
    const int n = dim.n;
    const double M = st.sup_norm, mu = st.mu;
    ConcentrationDiagnostics d;
    d.eps_supnorm_sq = st.eps * M * M;
    d.supnorm_to_eps = std::pow(M, st.eps);
    const int probes = 501;
    for (int k = 0; k < probes; ++k) {
        const double rho = 5.0 * k / (probes - 1);
        if (rho / mu > g.R) break;
        const double ut = g.interpolate(st.u.values, rho / mu) / M;
        d.profile_error = std::max(d.profile_error, std::abs(ut - w_radial(dim, 1.0, rho)));
        d.profile_error_unit_peak = std::max(d.profile_error_unit_peak, std::abs(ut - unit_peak_bubble(dim, rho)));
    }
    for (int i = 0; i < g.size(); ++i) {
        const double rho = mu * g.r(i);
        const double ut = st.u.values(i) / M;
        d.domination_constant = std::max(d.domination_constant, ut / w_radial(dim, 1.0, rho));
        d.domination_constant_unit_peak = std::max(d.domination_constant_unit_peak, ut / unit_peak_bubble(dim, rho));
    }
    for (int k = 0; k <= 8; ++k) {
        const double r = g.R * (0.5 + 0.05 * k);
        const double val = M * g.interpolate(st.u.values, r);
        const double G = green_center(n, g.R, r);
        d.green_profile_error = std::max(d.green_profile_error, std::abs(val - c.K_n * G) / std::abs(c.K_n * G));
        d.green_profile_error_mass =
            std::max(d.green_profile_error_mass, std::abs(val - c.green_mass * G) / std::abs(c.green_mass * G));
    }
    return d;
}

}  // namespace hartree
