#pragma once

#include <span>
#include <vector>

#include "hartree/specfun.hpp"

namespace hartree {

struct BubbleParams {
    std::vector<double> center;  ///< empty means the origin
    double mu = 1.0;
};

/// c_tilde (mu / (1 + mu^2 |x - xi|^2))^{(n-2)/2}
double w_eval(const DimensionSpec& dim, const BubbleParams& params, std::span<const double> x);
/// Centered bubble W[0,mu] at radius r.
double w_radial(const DimensionSpec& dim, double mu, double r);
/// Unit-peak bubble V = W[0, c_tilde^{-2/(n-2)}], V(0) = 1.
double unit_peak_bubble(const DimensionSpec& dim, double r);

/// (1 - |x|^2) / (1 + |x|^2)^{n/2} with n = x.size()
double gamma_profile(std::span<const double> x);
double gamma_profile_radial(int n, double r);
/// Radial factor of the translation mode: -(n-2) r / (1 + r^2)^{n/2}.
double translation_profile(int n, double r);

/// ((n-2)/2) W[0,1](x) + x . grad W[0,1](x)
double bubble_dilation_mode(const DimensionSpec& dim, std::span<const double> x);

struct IdentityOptions {
    double r_max = 200.0;
    int node_count = 801;
    double grading = 1.0;
};

/// Max over probes of |(|x|^{2-n} * W^p)(r) / (Gamma_n W(r)) - 1|, with the
/// convolution from the mode-0 kernel backend on [0, r_max] plus the exact tail.
double hls_identity_residual(const DimensionSpec& dim, const std::vector<double>& radii, double gamma_n,
                             const IdentityOptions& opts = {});
double hls_identity_residual(const DimensionSpec& dim, const std::vector<double>& radii);

}  // namespace hartree
