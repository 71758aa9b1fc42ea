#pragma once

#include <numbers>
#include <vector>

#include "polyrat/poly.hpp"

namespace polyrat {

struct ProbePoint {
    double radius;
    std::vector<Complex> z;
    double modulus;
};

struct ProbeReport {
    std::vector<double> radii;
    std::vector<double> min_modulus; ///< per radius, over the tensor grid
    std::vector<ProbePoint> near_zeros;
    double ztol = 1e-6;
};

/// Minimum modulus of a polynomial over tensor torus grids at the given radii.
/// Diagnostic only: a small grid minimum flags a zero near that torus, it does
/// not prove nonvanishing.
inline ProbeReport pole_probe(const TruncatedPoly& q_star, std::vector<double> radii = {},
                              int grid_per_axis = 0, double ztol = 1e-6)
{
    const int d = q_star.box.dim();
    if (radii.empty())
        radii = {0.5, 0.9, 0.99, 1.0};
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0 && radii[i] <= 1.0))
            throw DomainError("pole_probe: radii must lie in (0,1]");
        if (i > 0 && radii[i] <= radii[i - 1])
            throw DomainError("pole_probe: radii must be strictly increasing");
    }
    if (grid_per_axis <= 0)
        grid_per_axis = d <= 2 ? 128 : 32;

    ProbeReport rep;
    rep.radii = radii;
    rep.ztol = ztol;
    long long total = 1;
    for (int j = 0; j < d; ++j)
        total *= grid_per_axis;

    std::vector<int> k(static_cast<std::size_t>(d), 0);
    std::vector<Complex> z(static_cast<std::size_t>(d));
    for (double r : radii) {
        double mn = std::numeric_limits<double>::infinity();
        std::fill(k.begin(), k.end(), 0);
        for (long long step = 0; step < total; ++step) {
            for (int j = 0; j < d; ++j)
                z[static_cast<std::size_t>(j)] =
                    std::polar(r, 2.0 * std::numbers::pi * k[static_cast<std::size_t>(j)] /
                                      grid_per_axis);
            const double m = std::abs(eval_poly(q_star, z));
            if (m < mn)
                mn = m;
            if (m < ztol)
                rep.near_zeros.push_back({r, z, m});
            for (int j = 0; j < d; ++j) {
                if (++k[static_cast<std::size_t>(j)] < grid_per_axis)
                    break;
                k[static_cast<std::size_t>(j)] = 0;
            }
        }
        rep.min_modulus.push_back(mn);
    }
    return rep;
}

} // namespace polyrat
