// Command-line front end: constants, identities, solve, spectrum, sweep.
#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cstdio>
#include <iostream>

#include "hartree/errors.hpp"
#include "hartree/greens.hpp"
#include "hartree/identities.hpp"
#include "hartree/io.hpp"
#include "hartree/sweep.hpp"

using namespace hartree;

namespace {

struct RunFlags {
    std::string config;
    int dim = 0;
    double radius = 0;
    double eps = -1;
    std::string eps_list;
    int nodes = 0;
    double grading = -1;
    double tol = 0;
    std::string out;
    std::string out_policy;
    std::string boundary;
    int threads = -1;
    int ell_max = 0;
    int k_per_mode = 0;
};

void add_run_flags(CLI::App* sub, RunFlags& f, bool sweep) {
    sub->add_option("--config", f.config, "key=value config file (dim, radius, eps, eps_list, nodes, grading, tol, "
                                          "out_dir, out_policy, boundary, threads, ell_max, k_per_mode)");
    sub->add_option("--dim", f.dim, "space dimension n (3, 4 or 5)")->check(CLI::IsMember({3, 4, 5}));
    sub->add_option("--radius", f.radius, "ball radius R (default 1)")->check(CLI::PositiveNumber);
    if (sweep)
        sub->add_option("--eps-list", f.eps_list, "comma-separated, strictly decreasing eps values in [0.02, 0.5]");
    else
        sub->add_option("--eps", f.eps, "subcriticality eps in (0, 0.5]; eps = 0 needs --boundary decay");
    sub->add_option("--nodes", f.nodes,
                    sweep ? "fixed node count for every row (default: 481 sqrt(0.1/eps), capped at 4096)"
                          : "node count, rounded up to a multiple of the element order plus one (default 481 "
                            "sqrt(0.1/eps))");
    sub->add_option("--grading", f.grading, "element grading exponent (default: automatic, at least 2)");
    sub->add_option("--tol", f.tol, "accepted discrete residual of the ground state (default 1e-8)");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--out-policy", f.out_policy, "overwrite | fail when the output directory exists (default "
                                                  "overwrite)");
    if (!sweep) sub->add_option("--boundary", f.boundary, "dirichlet | decay (default dirichlet)");
    if (sweep) sub->add_option("--threads", f.threads, "worker threads (default: hardware concurrency)");
    if (!sweep) {
        sub->add_option("--ell-max", f.ell_max, "highest harmonic mode in the spectrum (default 2)");
        sub->add_option("--k-per-mode", f.k_per_mode, "eigenpairs per mode (default 4)");
    }
}

Config merged_config(const RunFlags& f) {
    Config cfg;
    if (!f.config.empty()) cfg = read_config(f.config);
    if (f.dim) cfg["dim"] = std::to_string(f.dim);
    if (f.radius > 0) cfg["radius"] = csv_number(f.radius);
    if (f.eps >= 0) cfg["eps"] = csv_number(f.eps);
    if (!f.eps_list.empty()) cfg["eps_list"] = f.eps_list;
    if (f.nodes) cfg["nodes"] = std::to_string(f.nodes);
    if (f.grading >= 0) cfg["grading"] = csv_number(f.grading);
    if (f.tol > 0) cfg["tol"] = csv_number(f.tol);
    if (!f.out.empty()) cfg["out_dir"] = f.out;
    if (!f.out_policy.empty()) cfg["out_policy"] = f.out_policy;
    if (!f.boundary.empty()) cfg["boundary"] = f.boundary;
    if (f.threads >= 0) cfg["threads"] = std::to_string(f.threads);
    if (f.ell_max) cfg["ell_max"] = std::to_string(f.ell_max);
    if (f.k_per_mode) cfg["k_per_mode"] = std::to_string(f.k_per_mode);
    return cfg;
}

DimensionSpec config_dim(const Config& cfg) {
    const std::string& d = require_key(cfg, "dim");
    const int n = config_int(cfg, "dim", 0);
    if (n < 3 || n > 5) throw ConfigError(fmt::format("config key 'dim' must be 3, 4 or 5, got '{}'", d));
    return DimensionSpec::make(n);
}

SolveOptions config_solve_options(const Config& cfg) {
    SolveOptions o;
    o.tol = config_double(cfg, "tol", o.tol);
    const std::string bc = cfg.count("boundary") ? cfg.at("boundary") : "dirichlet";
    if (bc == "dirichlet")
        o.bc = BoundaryCondition::dirichlet;
    else if (bc == "decay")
        o.bc = BoundaryCondition::decay;
    else
        throw ConfigError(fmt::format("config key 'boundary' must be dirichlet or decay, got '{}'", bc));
    return o;
}

GridPtr config_grid(const Config& cfg, const DimensionSpec& dim, double R, double eps) {
    GridPolicy pol;
    pol.fixed_nodes = config_int(cfg, "nodes", 0);
    pol.fixed_grading = config_double(cfg, "grading", -1);
    const GridChoice gc = choose_grid(dim, R, std::max(eps, 0.02), pol);
    return make_grid_ptr(dim.n, R, gc.nodes, gc.grading, pol.order);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_constants(int n, double ball, const std::string& format) {
    const DimensionSpec dim = DimensionSpec::make(n);
    const ConstantSet c = constant_set(dim);
    std::vector<std::pair<std::string, double>> rows{
        {"n", double(n)},
        {"p", dim.p},
        {"S", c.S},
        {"S_closed", c.S_closed},
        {"C_hls_kernel", c.C_hls_kernel},
        {"c_tilde", c.c_tilde},
        {"C_N", c.C_N},
        {"I_half", c.I_half},
        {"Gamma_n", c.Gamma_n},
        {"Gamma_n_formula", c.Gamma_n_formula},
        {"alpha_tilde", c.alpha_tilde},
        {"K_n", c.K_n},
        {"M_0", c.M_0},
        {"C_HLS", c.C_HLS},
        {"int_Wp", c.int_Wp},
        {"int_Wpm1_grad_sq", c.int_Wpm1_grad_sq},
        {"int_Wpm1_gamma", c.int_Wpm1_gamma},
        {"int_Wpm1_gamma_sq", c.int_Wpm1_gamma_sq},
        {"wn_printed", c.wn_printed},
        {"green_mass", c.green_mass},
    };
    if (ball > 0) {
        const BallDomain b{n, ball};
        const std::vector<double> x0(n, 0.0);
        const DomainDerivedConstants d =
            domain_constants(dim, c, robin_ball(b, x0), robin_hessian(b, x0, 1e-3 * ball));
        rows.push_back({"R", ball});
        rows.push_back({"robin_value", d.robin_value});
        rows.push_back({"F_n", d.F_n});
        rows.push_back({"C_0", d.C_0});
        rows.push_back({"A_0_direct", d.A_0_direct});
        rows.push_back({"A_0_factored", d.A_0_factored});
        for (int i = 0; i < d.nu.size(); ++i) rows.push_back({fmt::format("nu_{}", i + 1), d.nu(i)});
    }
    if (format == "csv") {
        fmt::print("name,value\n");
        for (auto& [k, v] : rows) fmt::print("{},{}\n", k, csv_number(v));
    } else {
        for (auto& [k, v] : rows) fmt::print("{:<20} {:.12g}\n", k, v);
    }
    return 0;
}

int cmd_identities(int n, double tol, double hessian_tol) {
    const auto results = run_identity_suite(DimensionSpec::make(n), tol, hessian_tol);
    int failures = 0;
    for (const auto& r : results) {
        fmt::print("{:<4} {:<36} residual={:.3e} tol={:.1e}  {}\n", r.pass ? "ok" : "FAIL", r.name, r.value,
                   r.tolerance, r.note);
        if (!r.pass) {
            ++failures;
            fmt::print(stderr, "identity {} failed: residual {:.3e} above {:.1e}\n", r.name, r.value, r.tolerance);
        }
    }
    return failures ? 1 : 0;
}

int cmd_solve(const RunFlags& f, bool with_spectrum) {
    const auto t0 = std::chrono::steady_clock::now();
    const Config cfg = merged_config(f);
    const DimensionSpec dim = config_dim(cfg);
    const double R = config_double(cfg, "radius", 1.0);
    const double eps = std::stod(require_key(cfg, "eps"));
    const SolveOptions opts = config_solve_options(cfg);
    const GridPtr grid = config_grid(cfg, dim, R, eps);
    const bool write = cfg.count("out_dir") > 0;
    const OutPolicy policy = parse_out_policy(cfg.count("out_policy") ? cfg.at("out_policy") : "overwrite");
    if (write) prepare_out_dir(cfg.at("out_dir"), policy);

    const GroundState st = solve_ground_state(dim, eps, grid, opts);
    fmt::print("sup_norm={:.12g} residual={:.3e} nodes={} grading={} picard={} newton={}\n", st.sup_norm, st.residual,
               grid->size(), grid->grading, st.picard_iterations, st.newton_iterations);
    if (write) write_ground_state(cfg.at("out_dir"), st);
    if (with_spectrum) {
        const int ell_max = config_int(cfg, "ell_max", 2);
        const int k = config_int(cfg, "k_per_mode", 4);
        const Spectrum sp = spectrum_for(st, ell_max, k);
        const MorseIndex mi = morse_index(sp);
        for (int i = 1; i <= dim.n + 3; ++i)
            fmt::print("lambda_{} = {:.12g}  (ell={})\n", i, sp.lambdas[i - 1], sp.ells[i - 1]);
        fmt::print("morse_index={} ambiguous={}\n", mi.index, mi.ambiguous);
        if (write) write_spectrum(cfg.at("out_dir"), sp, *grid, dim.n + 3);
    }
    if (write) write_manifest(cfg.at("out_dir"), with_spectrum ? "spectrum" : "solve", cfg, seconds_since(t0));
    return 0;
}

int cmd_sweep(const RunFlags& f) {
    const auto t0 = std::chrono::steady_clock::now();
    const Config cfg = merged_config(f);
    const DimensionSpec dim = config_dim(cfg);
    const double R = config_double(cfg, "radius", 1.0);
    const std::vector<double> eps = parse_number_list(require_key(cfg, "eps_list"));
    const SolveOptions opts = config_solve_options(cfg);
    if (opts.bc != BoundaryCondition::dirichlet) throw ConfigError("sweep supports the Dirichlet ball only");
    GridPolicy pol;
    pol.fixed_nodes = config_int(cfg, "nodes", 0);
    pol.fixed_grading = config_double(cfg, "grading", -1);
    const unsigned threads = unsigned(config_int(cfg, "threads", 0));
    const bool write = cfg.count("out_dir") > 0;
    const OutPolicy policy = parse_out_policy(cfg.count("out_policy") ? cfg.at("out_policy") : "overwrite");
    if (write) prepare_out_dir(cfg.at("out_dir"), policy);

    const SweepTable table = run_sweep(dim, R, eps, pol, opts, threads);
    const FitReport rep = fit_asymptotics(table, constant_set(dim));
    int failed = 0;
    for (const auto& r : table.rows) {
        if (r.ok) {
            fmt::print("eps={:<6} sup_norm={:.8g} lambda_1={:.8f} lambda_{}={:.8f} morse={} residual={:.2e}\n", r.eps,
                       r.sup_norm, r.lambdas[0], dim.n + 2, r.lambdas[dim.n + 1], r.morse_index, r.residual);
        } else {
            ++failed;
            fmt::print(stderr, "row eps={} failed: {}\n", r.eps, r.status);
        }
    }
    if (!rep.enabled) fmt::print("{}\n", rep.reason);
    for (const auto& e : rep.entries)
        fmt::print("fit {:<18} {:.6g} [{:.6g}, {:.6g}] reference {:.6g} ({})\n", e.metric, e.estimate, e.ci_low,
                   e.ci_high, e.reference_value, e.flag);
    if (write) {
        const std::string dir = cfg.at("out_dir");
        write_sweep(dir, table);
        write_fits(dir, rep);
        write_plots(dir, table, rep);
        write_manifest(dir, "sweep", cfg, seconds_since(t0));
    }
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial Hartree-type critical problem on a ball: constants, identities, ground states, spectra"};
    app.require_subcommand(1);

    int cn = 3;
    double ball = 0;
    std::string format = "table";
    auto* c = app.add_subcommand("constants", "print the model constants for dimension n");
    c->add_option("--dim", cn, "space dimension n")->required()->check(CLI::IsMember({3, 4, 5}));
    c->add_option("--ball", ball, "also print domain constants for the ball of radius R")->check(CLI::PositiveNumber);
    c->add_option("--format", format, "table | csv")->check(CLI::IsMember({"table", "csv"}));

    int in = 3;
    double tol = 1e-6, htol = 1e-4;
    auto* id = app.add_subcommand("identities", "check the analytic identities by quadrature");
    id->add_option("--dim", in, "space dimension n")->required()->check(CLI::IsMember({3, 4, 5}));
    id->add_option("--tol", tol, "relative tolerance for every identity (default 1e-6)");
    id->add_option("--hessian-tol", htol,
                   "tolerance for the finite-difference Hessian cross-check, h = 1e-3 (default 1e-4)");

    RunFlags solve_f, spec_f, sweep_f;
    auto* so = app.add_subcommand("solve", "compute the radial ground state");
    add_run_flags(so, solve_f, false);
    auto* sp = app.add_subcommand("spectrum", "ground state plus the first n+3 linearized eigenvalues");
    add_run_flags(sp, spec_f, false);
    auto* sw = app.add_subcommand("sweep", "eps sweep with asymptotic fits and plots");
    add_run_flags(sw, sweep_f, true);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*c) return cmd_constants(cn, ball, format);
        if (*id) return cmd_identities(in, tol, htol);
        if (*so) return cmd_solve(solve_f, false);
        if (*sp) return cmd_solve(spec_f, true);
        if (*sw) return cmd_sweep(sweep_f);
    } catch (const ConfigError& e) {
        fmt::print(stderr, "configuration error: {}\n", e.what());
        return 2;
    } catch (const IoError& e) {
        fmt::print(stderr, "io error: {}\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 4;
    }
    return 0;
}
