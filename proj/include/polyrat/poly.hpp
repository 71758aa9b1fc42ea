#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "polyrat/errors.hpp"
#include "polyrat/multi_index.hpp"

namespace polyrat {

using Complex = std::complex<double>;
using Evaluator = std::function<Complex(const std::vector<Complex>&)>;

/// Element of C_n[z]: complex coefficients over a MultiIndexBox, stored in the
/// box enumeration order.
struct TruncatedPoly {
    MultiIndexBox box;
    Eigen::VectorXcd coeffs;

    TruncatedPoly() = default;
    explicit TruncatedPoly(MultiIndexBox b)
        : box(std::move(b)), coeffs(Eigen::VectorXcd::Zero(box.size()))
    {
    }
    TruncatedPoly(MultiIndexBox b, Eigen::VectorXcd c) : box(std::move(b)), coeffs(std::move(c))
    {
        if (coeffs.size() != box.size())
            throw BoxMismatchError("TruncatedPoly: coefficient count != box cardinality");
    }

    Complex coeff(const MultiIndex& a) const
    {
        const int k = box.index_of(a);
        return k < 0 ? Complex(0) : coeffs[k];
    }
    void set(const MultiIndex& a, Complex v)
    {
        const int k = box.index_of(a);
        if (k < 0)
            throw BoxMismatchError("TruncatedPoly::set: index outside box " + to_string(a));
        coeffs[k] = v;
    }
    double norm2() const { return coeffs.norm(); }
};

/// Taylor (or Fourier) coefficient table of a holomorphic function over a box,
/// together with an aliasing estimate when obtained from a grid evaluator.
struct FourierTable {
    MultiIndexBox box;
    Eigen::VectorXcd coeffs;
    double trunc_error_estimate = 0.0;

    FourierTable() = default;
    explicit FourierTable(MultiIndexBox b)
        : box(std::move(b)), coeffs(Eigen::VectorXcd::Zero(box.size()))
    {
    }
    FourierTable(MultiIndexBox b, Eigen::VectorXcd c, double est = 0.0)
        : box(std::move(b)), coeffs(std::move(c)), trunc_error_estimate(est)
    {
        if (coeffs.size() != box.size())
            throw BoxMismatchError("FourierTable: coefficient count != box cardinality");
    }

    Complex coeff(const MultiIndex& a) const
    {
        const int k = box.index_of(a);
        return k < 0 ? Complex(0) : coeffs[k];
    }
    TruncatedPoly as_poly() const { return TruncatedPoly(box, coeffs); }
};

/// Trigonometric polynomial / density on T^d: coefficients over signed
/// multi-indices. The map ordering (lexicographic on the index vector) is the
/// deterministic iteration order.
struct TrigPoly {
    int d = 0;
    std::map<std::vector<int>, Complex> coeffs;

    TrigPoly() = default;
    explicit TrigPoly(int dim) : d(dim) {}

    void set(const std::vector<int>& k, Complex v)
    {
        if (static_cast<int>(k.size()) != d)
            throw BoxMismatchError("TrigPoly::set: wrong index dimension");
        coeffs[k] = v;
    }
    Complex coeff(const std::vector<int>& k) const
    {
        auto it = coeffs.find(k);
        return it == coeffs.end() ? Complex(0) : it->second;
    }
    double norm2() const
    {
        double s = 0;
        for (const auto& [k, v] : coeffs)
            s += std::norm(v);
        return std::sqrt(s);
    }
    bool is_hermitian(double tol = 1e-12) const
    {
        for (const auto& [k, v] : coeffs) {
            std::vector<int> mk(k.size());
            for (std::size_t j = 0; j < k.size(); ++j)
                mk[j] = -k[j];
            if (std::abs(std::conj(coeff(mk)) - v) > tol)
                return false;
        }
        return true;
    }
    /// Evaluate at a torus point given by angles t_j (radians), radius 1.
    Complex eval_angles(const std::vector<double>& t) const
    {
        Complex s = 0;
        for (const auto& [k, v] : coeffs) {
            double phase = 0;
            for (std::size_t j = 0; j < k.size(); ++j)
                phase += k[j] * t[j];
            s += v * std::polar(1.0, phase);
        }
        return s;
    }
};

using TrigDensity = TrigPoly;

/// Truncated product: coefficient of z^a is sum_{b+c=a} p_b q_c for a in
/// out_box; everything beyond the box is discarded.
inline TruncatedPoly poly_mul_trunc(const TruncatedPoly& p, const TruncatedPoly& q,
                                    const MultiIndexBox& out_box)
{
    if (p.box.dim() != q.box.dim() || p.box.dim() != out_box.dim())
        throw BoxMismatchError("poly_mul_trunc: dimension mismatch");
    TruncatedPoly r(out_box);
    for (int i = 0; i < p.box.size(); ++i) {
        const Complex pi = p.coeffs[i];
        if (pi == Complex(0))
            continue;
        const MultiIndex& beta = p.box.at(i);
        for (int j = 0; j < q.box.size(); ++j) {
            const Complex qj = q.coeffs[j];
            if (qj == Complex(0))
                continue;
            const int k = out_box.index_of(add(beta, q.box.at(j)));
            if (k >= 0)
                r.coeffs[k] += pi * qj;
        }
    }
    return r;
}

inline TruncatedPoly operator+(const TruncatedPoly& p, const TruncatedPoly& q)
{
    if (p.box != q.box)
        throw BoxMismatchError("poly add: box mismatch");
    return TruncatedPoly(p.box, p.coeffs + q.coeffs);
}

inline TruncatedPoly operator-(const TruncatedPoly& p, const TruncatedPoly& q)
{
    if (p.box != q.box)
        throw BoxMismatchError("poly sub: box mismatch");
    return TruncatedPoly(p.box, p.coeffs - q.coeffs);
}

inline TruncatedPoly operator*(Complex s, const TruncatedPoly& p)
{
    return TruncatedPoly(p.box, s * p.coeffs);
}

/// Embed p into a (not smaller) box, optionally shifting all exponents.
inline TruncatedPoly embed(const TruncatedPoly& p, const MultiIndexBox& out_box,
                           const MultiIndex& shift = {})
{
    TruncatedPoly r(out_box);
    for (int i = 0; i < p.box.size(); ++i) {
        if (p.coeffs[i] == Complex(0))
            continue;
        MultiIndex a = p.box.at(i);
        if (!shift.empty())
            a = add(a, shift);
        const int k = out_box.index_of(a);
        if (k < 0)
            throw BoxMismatchError("embed: shifted index outside target box");
        r.coeffs[k] = p.coeffs[i];
    }
    return r;
}

/// Reflection p*(z) = z^n conj(p(1/conj(z))): coefficientwise reversal with
/// conjugation, (p*)_b = conj(p_{n-b}). Involution and 2-norm isometry.
inline TruncatedPoly reflect(const TruncatedPoly& p, const MultiIndex& n)
{
    if (p.box.bound() != n)
        throw BoxMismatchError("reflect: polynomial not over the box of n");
    TruncatedPoly r(p.box);
    for (int k = 0; k < p.box.size(); ++k) {
        const MultiIndex rev = sub_or_empty(n, p.box.at(k));
        r.coeffs[k] = std::conj(p.coeffs[p.box.index_of(rev)]);
    }
    return r;
}

namespace detail {

inline Complex eval_rec(const TruncatedPoly& p, const std::vector<Complex>& z, int axis,
                        MultiIndex& idx)
{
    const int nj = p.box.bound()[static_cast<std::size_t>(axis)];
    Complex acc = 0;
    for (int k = nj; k >= 0; --k) {
        idx[static_cast<std::size_t>(axis)] = k;
        const Complex c = (axis == 0) ? p.coeffs[p.box.index_of(idx)]
                                      : eval_rec(p, z, axis - 1, idx);
        acc = acc * z[static_cast<std::size_t>(axis)] + c;
    }
    return acc;
}

} // namespace detail

/// Nested Horner evaluation, one level per variable.
inline Complex eval_poly(const TruncatedPoly& p, const std::vector<Complex>& z)
{
    if (static_cast<int>(z.size()) != p.box.dim())
        throw BoxMismatchError("eval_poly: point dimension mismatch");
    MultiIndex idx(static_cast<std::size_t>(p.box.dim()), 0);
    return detail::eval_rec(p, z, p.box.dim() - 1, idx);
}

/// Truncated reciprocal of a unit like 1/u with u(0) != 0, via the Neumann
/// series of u0/u = 1/(1 - v); v has no constant term so the series terminates
/// at the total degree of the box.
inline TruncatedPoly series_inverse(const TruncatedPoly& u, double pole_tol = 1e-12)
{
    const Complex u0 = u.coeffs[0];
    if (std::abs(u0) <= pole_tol)
        throw DegeneratePoleError("series_inverse: constant term below tolerance");
    TruncatedPoly v(u.box, -(u.coeffs / u0));
    v.coeffs[0] = 0;
    TruncatedPoly acc(u.box);
    acc.coeffs[0] = 1;
    TruncatedPoly term = acc;
    const int total = grade(u.box.bound());
    for (int k = 1; k <= total; ++k) {
        term = poly_mul_trunc(term, v, u.box);
        if (term.coeffs.isZero(0.0))
            break;
        acc.coeffs += term.coeffs;
    }
    acc.coeffs /= u0;
    return acc;
}

/// Truncated quotient p/q over the common box; q(0) must be away from zero.
inline TruncatedPoly series_divide(const TruncatedPoly& p, const TruncatedPoly& q,
                                   double pole_tol = 1e-12)
{
    return poly_mul_trunc(p, series_inverse(q, pole_tol), p.box);
}

} // namespace polyrat
