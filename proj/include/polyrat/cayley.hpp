#pragma once

#include "polyrat/poly.hpp"

namespace polyrat {

/// Taylor coefficients of g = (1+f)(1-f)^{-1} through the table's box.
/// The denominator constant is 1 - c_0(f); below pole_tol the universal
/// transforms blow up, reported as DegeneratePole.
inline FourierTable cayley_forward(const FourierTable& f, double pole_tol = 1e-12)
{
    TruncatedPoly num(f.box, f.coeffs);
    num.coeffs[0] += 1.0;
    TruncatedPoly den(f.box, -f.coeffs);
    den.coeffs[0] += 1.0;
    if (std::abs(den.coeffs[0]) <= pole_tol)
        throw DegeneratePoleError("cayley_forward: 1 - c_0(f) below tolerance");
    TruncatedPoly g = series_divide(num, den, pole_tol);
    return FourierTable(f.box, std::move(g.coeffs), f.trunc_error_estimate);
}

/// Inverse direction: g = (phi - 1)(phi + 1)^{-1}.
inline FourierTable cayley_inverse(const FourierTable& phi, double pole_tol = 1e-12)
{
    TruncatedPoly num(phi.box, phi.coeffs);
    num.coeffs[0] -= 1.0;
    TruncatedPoly den(phi.box, phi.coeffs);
    den.coeffs[0] += 1.0;
    if (std::abs(den.coeffs[0]) <= pole_tol)
        throw DegeneratePoleError("cayley_inverse: 1 + c_0(phi) below tolerance");
    TruncatedPoly g = series_divide(num, den, pole_tol);
    return FourierTable(phi.box, std::move(g.coeffs), phi.trunc_error_estimate);
}

/// Coefficients of (A g + B)(C g + D)^{-1} through the box.
inline FourierTable mobius_of_table(const FourierTable& g, Complex A, Complex B, Complex C,
                                    Complex D, double pole_tol = 1e-12)
{
    TruncatedPoly num(g.box, A * g.coeffs);
    num.coeffs[0] += B;
    TruncatedPoly den(g.box, C * g.coeffs);
    den.coeffs[0] += D;
    if (std::abs(den.coeffs[0]) <= pole_tol)
        throw DegeneratePoleError("mobius_of_table: denominator constant below tolerance");
    TruncatedPoly out = series_divide(num, den, pole_tol);
    return FourierTable(g.box, std::move(out.coeffs), g.trunc_error_estimate);
}

} // namespace polyrat
