#pragma once

#include <vector>

#include "polyrat/poly.hpp"

namespace polyrat {

struct MomentCheckResult {
    bool pass = true;
    std::vector<std::vector<int>> violations;
};

/// Kor'anyi-Puk'anszky moment test for a boundary density: coefficients at
/// mixed-sign frequencies (some component > 0 and some < 0) must vanish.
inline MomentCheckResult kp_moment_check(const TrigDensity& rho, double tol)
{
    MomentCheckResult res;
    for (const auto& [k, v] : rho.coeffs) {
        bool has_pos = false, has_neg = false;
        for (int kj : k) {
            has_pos |= kj > 0;
            has_neg |= kj < 0;
        }
        if (has_pos && has_neg && std::abs(v) > tol) {
            res.pass = false;
            res.violations.push_back(k);
        }
    }
    return res;
}

} // namespace polyrat
