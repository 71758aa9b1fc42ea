#pragma once

#include <array>

#include "polyrat/poly.hpp"

namespace polyrat {
namespace k11 {

struct K11Point {
    Complex c00{1.0}, c01{0.0}, c10{0.0}, c11{0.0};
};

struct K11Verdict {
    bool member = false;
    double slack1 = 0.0; ///< 4 - (2|c11 - c10 c01| + |c10|^2 + |c01|^2)
    double slack2 = 0.0; ///< 2 - (|c10| + |c01|)
};

/// Closed-form membership test for normalized bidisk data (1, c01, c10, c11).
inline K11Verdict k11_check(Complex c01, Complex c10, Complex c11)
{
    K11Verdict v;
    v.slack1 = 4.0 - (2.0 * std::abs(c11 - c10 * c01) + std::norm(c10) + std::norm(c01));
    v.slack2 = 2.0 - (std::abs(c10) + std::abs(c01));
    v.member = v.slack1 >= 0.0 && v.slack2 >= 0.0;
    return v;
}

/// Explicit Cayley rational inner interpolant phi = (1+g)/(1-g) for member
/// data. The generic branch uses
///   sigma = 2(c11 - c10 c01)/(4 - |c10|^2 - |c01|^2),
///   g = (c10 z/2 + c01 w/2 + sigma zw) / (1 + sigma(conj(c01) z/2 + conj(c10) w/2));
/// on the boundary |c01|^2 + |c10|^2 = 4 the formula degenerates and the
/// one-variable witness (1 + tau w)/(1 - tau w) (resp. in z) takes over.
struct K11Interpolant {
    bool degenerate_branch = false;
    Complex sigma{0.0};
    TruncatedPoly g_num, g_den; ///< over the box of (1,1)
    std::array<Complex, 4> taylor{}; ///< (c00, c01, c10, c11) of phi

    Complex eval(Complex z, Complex w) const
    {
        const std::vector<Complex> p{z, w};
        const Complex n = eval_poly(g_num, p), d = eval_poly(g_den, p);
        return (d + n) / (d - n);
    }
};

inline K11Interpolant k11_construct(Complex c01, Complex c10, Complex c11,
                                    double branch_tol = 1e-12)
{
    const K11Verdict v = k11_check(c01, c10, c11);
    if (!v.member)
        throw DomainError("k11_construct: data outside K11");

    const MultiIndexBox box({1, 1});
    K11Interpolant out;
    out.g_num = TruncatedPoly(box);
    out.g_den = TruncatedPoly(box);

    const double denom = 4.0 - std::norm(c10) - std::norm(c01);
    if (denom <= branch_tol) {
        // |c01|^2 + |c10|^2 = 4 with membership forces c01 c10 = 0, c11 = 0.
        out.degenerate_branch = true;
        if (std::abs(c10) <= std::abs(c01)) {
            out.g_num.set({0, 1}, c01 / 2.0); // tau w
        } else {
            out.g_num.set({1, 0}, c10 / 2.0); // tau z
        }
        out.g_den.set({0, 0}, 1.0);
    } else {
        out.sigma = 2.0 * (c11 - c10 * c01) / denom;
        out.g_num.set({1, 0}, c10 / 2.0);
        out.g_num.set({0, 1}, c01 / 2.0);
        out.g_num.set({1, 1}, out.sigma);
        out.g_den.set({0, 0}, 1.0);
        out.g_den.set({1, 0}, out.sigma * std::conj(c01) / 2.0);
        out.g_den.set({0, 1}, out.sigma * std::conj(c10) / 2.0);
    }

    TruncatedPoly num = out.g_den + out.g_num;
    TruncatedPoly den = out.g_den - out.g_num;
    TruncatedPoly phi = series_divide(num, den);
    out.taylor = {phi.coeff({0, 0}), phi.coeff({0, 1}), phi.coeff({1, 0}), phi.coeff({1, 1})};
    return out;
}

/// Automorphism of the right half plane sending c00 to 1:
/// Phi(z) = (Az + B)/(Cz + D) with gamma = (c00 - 1)/(c00 + 1),
/// A = 2 - gamma - conj(gamma), B = conj(gamma) - gamma, C = -B, D = 2 + gamma + conj(gamma).
struct HalfPlaneMobius {
    Complex A, B, C, D;
    Complex d1; ///< Phi'(c00)
    Complex d2; ///< Phi''(c00)

    Complex apply(Complex z) const { return (A * z + B) / (C * z + D); }
    Complex inverse_apply(Complex w) const { return (D * w - B) / (-C * w + A); }
};

inline HalfPlaneMobius mobius_from_c00(Complex c00)
{
    if (!(c00.real() > 0.0))
        throw DomainError("mobius_from_c00: Re c00 must be positive");
    const Complex gamma = (c00 - 1.0) / (c00 + 1.0);
    HalfPlaneMobius m;
    m.A = 2.0 - gamma - std::conj(gamma);
    m.B = std::conj(gamma) - gamma;
    m.C = gamma - std::conj(gamma);
    m.D = 2.0 + gamma + std::conj(gamma);
    const Complex det = m.A * m.D - m.B * m.C;
    const Complex cd = m.C * c00 + m.D;
    m.d1 = det / (cd * cd);
    m.d2 = -2.0 * det * m.C / (cd * cd * cd);
    return m;
}

/// Solvability test for general (c00, c01, c10, c11) with Re c00 > 0:
///   2|(Phi'' - Phi'^2) c01 c10 + Phi' c11| + |Phi'|^2 (|c01|^2 + |c10|^2) <= 4
///   and |Phi'| (|c01| + |c10|) <= 2,
/// derivatives taken at c00. Restricting c00 = 1 gives back k11_check.
inline bool cf2_general_check(Complex c00, Complex c01, Complex c10, Complex c11)
{
    const HalfPlaneMobius m = mobius_from_c00(c00);
    const double lhs1 =
        2.0 * std::abs((m.d2 - m.d1 * m.d1) * c01 * c10 + m.d1 * c11) +
        std::norm(m.d1) * (std::norm(c01) + std::norm(c10));
    const double lhs2 = std::abs(m.d1) * (std::abs(c01) + std::abs(c10));
    return lhs1 <= 4.0 && lhs2 <= 2.0;
}

/// Coefficient transform under post-composition with an automorphism psi of
/// the right half plane fixing the normalization:
/// (1, c01, c10, c11) -> (1, psi' c01, psi' c10, psi'' c01 c10 + psi' c11).
inline std::array<Complex, 4> automorphism_transform(const std::array<Complex, 4>& data,
                                                     Complex psi1, Complex psi2)
{
    return {data[0], psi1 * data[1], psi1 * data[2], psi2 * data[1] * data[2] + psi1 * data[3]};
}

} // namespace k11
} // namespace polyrat
