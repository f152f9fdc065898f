#pragma once

#include <string>
#include <vector>

#include "hartree/specfun.hpp"

namespace hartree {

struct IdentityResult {
    std::string name;
    double value = 0;      ///< relative residual
    double tolerance = 0;
    bool pass = false;
    std::string note;
};

/// Convolution identity, bubble integral, and the two ball surface identities.
std::vector<IdentityResult> run_identity_suite(const DimensionSpec& dim, double tolerance = 1e-6,
                                               double hessian_tolerance = 1e-4);

}  // namespace hartree
