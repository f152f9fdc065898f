#pragma once

#include <string>
#include <vector>

#include "hartree/eigen.hpp"
#include "hartree/groundstate.hpp"
#include "hartree/specfun.hpp"

namespace hartree {

/// Node count grows like eps^{-1/2} from base_nodes at base_eps, capped at max_nodes.
/// The grading is raised above base_grading when fewer than core_nodes nodes
/// would fall inside the expected concentration core r <= 1/mu_eps.
struct GridPolicy {
    int base_nodes = 481;
    double base_eps = 0.1;
    int max_nodes = 4096;
    double base_grading = 2.0;
    double max_grading = 3.0;
    int core_nodes = 30;
    int order = 8;
    int fixed_nodes = 0;         ///< > 0 overrides the eps scaling
    double fixed_grading = -1;   ///< >= 0 overrides the automatic grading
};

struct GridChoice {
    int nodes = 0;
    double grading = 0;
};

GridChoice choose_grid(const DimensionSpec& dim, double R, double eps, const GridPolicy& policy);

struct SweepRow {
    double eps = 0;
    bool ok = false;
    std::string status;
    double sup_norm = 0;
    double eps_supnorm_sq = 0;
    double supnorm_to_eps = 0;
    std::vector<double> lambdas;  ///< lambda_1 .. lambda_{n+3}
    int morse_index = 0;
    int nodal_regions_n2 = 0;
    double profile_error = 0;
    double green_profile_error = 0;
    double pohozaev_dilation_v1 = 0;
    double pohozaev_translation_v2 = 0;
    double pohozaev_dilation_vn2 = 0;
    // supplementary diagnostics
    int morse_ambiguous = 0;
    bool nodal_interior_n2 = false;
    double profile_error_unit_peak = 0;
    double domination_constant = 0;
    double green_profile_error_mass = 0;
    double first_eigen_green_error = 0;
    double gap_lambda1 = 0;    ///< distance of lambda_1 to its nearest neighbor
    double gap_lambda_n2 = 0;  ///< distance of lambda_{n+2} to its nearest neighbors
    double residual = 0;
    double mu = 0;
    int nodes = 0;
    double grading = 0;
};

struct SweepTable {
    DimensionSpec dim;
    double R = 1.0;
    std::vector<SweepRow> rows;
};

/// Relative deviation of sup_norm^2 v_1(r) from reference_mass G(r,0) over the probes.
double first_eigen_green_check(const GroundState& state, const EigenPair& pair1, double reference_mass,
                               const std::vector<double>& probe_radii);

SweepRow run_sweep_row(const DimensionSpec& dim, double R, double eps, const GridPolicy& policy,
                       const SolveOptions& opts, const ConstantSet& constants);

/// One row per eps, computed by a worker pool and merged in input order.
/// threads = 0 uses the hardware concurrency.
SweepTable run_sweep(const DimensionSpec& dim, double R, const std::vector<double>& eps_list,
                     const GridPolicy& policy = {}, const SolveOptions& opts = {}, unsigned threads = 0);

struct FitEntry {
    std::string metric;
    double estimate = 0;
    double ci_low = 0;
    double ci_high = 0;
    double reference_value = 0;
    std::string flag;
};

struct FitReport {
    bool enabled = false;
    std::string reason;
    std::vector<FitEntry> entries;
    const FitEntry* find(const std::string& metric) const;
};

/// Requires at least 4 successful rows; otherwise returns a disabled report with a reason.
FitReport fit_asymptotics(const SweepTable& table, const ConstantSet& constants);

std::vector<std::string> sweep_columns(int n);
std::vector<double> sweep_row_values(const SweepRow& row);

}  // namespace hartree
