#pragma once

#include <Eigen/Dense>

#include <vector>

#include "polyrat/poly.hpp"

namespace polyrat {
namespace takagi {

/// Matrix of the anti-linear operator T_n C_n acting on C_n[z]:
/// A[b,g] = f_{b+g-n}, zero when any component of b+g-n is negative.
/// Complex symmetric by construction (entries depend on b+g only).
struct ConSymMatrix {
    MultiIndexBox box;
    Eigen::MatrixXcd a;
    /// Set when the symbol table did not cover some nonnegative index b+g-n;
    /// those entries were taken as zero.
    bool symbol_truncated = false;
};

inline ConSymMatrix build_con_matrix(const FourierTable& f, const MultiIndex& n)
{
    ConSymMatrix m;
    m.box = MultiIndexBox(n);
    const int N = m.box.size();
    m.a.setZero(N, N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j <= i; ++j) {
            const MultiIndex idx = sub_or_empty(add(m.box.at(i), m.box.at(j)), n);
            Complex v = 0;
            if (!idx.empty()) {
                const int k = f.box.index_of(idx);
                if (k >= 0)
                    v = f.coeffs[k];
                else
                    m.symbol_truncated = true;
            }
            m.a(i, j) = v;
            m.a(j, i) = v;
        }
    }
    return m;
}

/// Con-eigenpair A conj(q) = sigma q with sigma >= 0, q unit, phase fixed by
/// the sign convention below (the only residual-preserving freedom is +-1).
struct ConEigPair {
    double sigma = 0.0;
    TruncatedPoly q;
    double residual = 0.0;
};

struct ConEigOptions {
    double rtol_rel = 1e-10; ///< residual acceptance: rtol_rel * ||A||_F
};

namespace detail {

inline void canonical_sign(Eigen::VectorXcd& v)
{
    int imax = 0;
    double best = -1.0;
    for (int i = 0; i < v.size(); ++i) {
        const double m = std::abs(v[i]);
        if (m > best) {
            best = m;
            imax = i;
        }
    }
    const Complex a = v[imax];
    if (a.real() < 0.0 || (a.real() == 0.0 && a.imag() < 0.0))
        v = -v;
}

struct RawPair {
    double sigma;
    Eigen::VectorXcd v;
    double residual;
};

/// Full set of con-eigenpairs of a complex symmetric matrix via the Hermitian
/// spectrum of A A^*. For a simple singular value sigma, A conj(u) = mu u with
/// |mu| = sigma and q = e^{i theta} u, e^{2 i theta} = mu/sigma. Degenerate
/// clusters go through the anti-linear involution S(x) = A conj(x)/sigma:
/// candidates u + S(u) and i(u - S(u)) are S-fixed and real-span the
/// con-eigenspace; Gram-Schmidt with real coefficients keeps them S-fixed.
inline std::vector<RawPair> coneig_raw(const Eigen::MatrixXcd& A, const ConEigOptions& opts,
                                       bool top_only)
{
    const int N = static_cast<int>(A.rows());
    const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-13 * std::max(1.0, A.cwiseAbs().maxCoeff()))
        throw BoxMismatchError("coneig: matrix is not complex symmetric");

    const double anorm = A.norm();
    const double rtol = opts.rtol_rel * anorm;

    Eigen::MatrixXcd H = A * A.adjoint();
    H = ((H + H.adjoint()) * 0.5).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success)
        throw ConvergenceFailureError("coneig: Hermitian eigensolver failed");

    // Descending singular values.
    std::vector<double> sigma(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i)
        sigma[static_cast<std::size_t>(i)] =
            std::sqrt(std::max(0.0, es.eigenvalues()[N - 1 - i]));
    auto u_of = [&](int i) { return es.eigenvectors().col(N - 1 - i); };

    const double cluster_tol = std::max(1e-7 * std::max(sigma[0], 1.0), 1e-13);
    auto S = [&](const Eigen::VectorXcd& x, double s) -> Eigen::VectorXcd {
        return (A * x.conjugate()) / s;
    };
    auto residual_of = [&](const Eigen::VectorXcd& q, double s) {
        return (A * q.conjugate() - s * q).norm();
    };

    std::vector<RawPair> out;
    int i = 0;
    while (i < N) {
        int j = i;
        while (j + 1 < N &&
               sigma[static_cast<std::size_t>(j)] - sigma[static_cast<std::size_t>(j + 1)] <=
                   cluster_tol)
            ++j;
        const int m = j - i + 1;

        bool cluster_needed = m > 1 && sigma[static_cast<std::size_t>(i)] > rtol;
        std::vector<RawPair> accepted;
        if (sigma[static_cast<std::size_t>(i)] <= rtol) {
            // Kernel block: A A^* u = 0 forces A conj(u) = 0 already.
            for (int k = i; k <= j; ++k) {
                Eigen::VectorXcd v = u_of(k);
                accepted.push_back({sigma[static_cast<std::size_t>(k)], v,
                                    residual_of(v, sigma[static_cast<std::size_t>(k)])});
            }
        } else if (!cluster_needed) {
            const double s = sigma[static_cast<std::size_t>(i)];
            Eigen::VectorXcd u = u_of(i);
            Eigen::VectorXcd z = A * u.conjugate();
            const Complex mu = u.dot(z); // u^H z
            Eigen::VectorXcd q = std::polar(1.0, std::arg(mu) / 2.0) * u;
            double r = residual_of(q, s);
            if (r <= rtol) {
                accepted.push_back({s, q, r});
            } else {
                Eigen::VectorXcd w = u + z / s;
                if (w.norm() < 1e-8)
                    w = Complex(0, 1) * (u - z / s);
                w.normalize();
                r = residual_of(w, s);
                if (r <= rtol)
                    accepted.push_back({s, w, r});
                else
                    cluster_needed = true;
            }
        }

        if (cluster_needed) {
            // Joint construction over the whole cluster.
            accepted.clear();
            std::vector<Eigen::VectorXcd> cands;
            for (int k = i; k <= j; ++k) {
                const double s = sigma[static_cast<std::size_t>(k)];
                Eigen::VectorXcd u = u_of(k);
                Eigen::VectorXcd su = S(u, s);
                cands.push_back(u + su);
                cands.push_back(Complex(0, 1) * (u - su));
            }
            std::vector<Eigen::VectorXcd> basis;
            for (auto& c : cands) {
                if (static_cast<int>(basis.size()) == m)
                    break;
                Eigen::VectorXcd v = c;
                for (const auto& b : basis)
                    v -= b.dot(v).real() * b; // inner products of S-fixed vectors are real
                if (v.norm() < 1e-6)
                    continue;
                v.normalize();
                basis.push_back(v);
            }
            if (static_cast<int>(basis.size()) != m)
                throw ConvergenceFailureError("coneig: degenerate cluster basis incomplete");
            for (int k = 0; k < m; ++k) {
                const double s = sigma[static_cast<std::size_t>(i + k)];
                const double r = residual_of(basis[static_cast<std::size_t>(k)], s);
                if (r > rtol)
                    throw ConvergenceFailureError("coneig: residual above tolerance in cluster");
                accepted.push_back({s, basis[static_cast<std::size_t>(k)], r});
            }
        }

        for (auto& p : accepted) {
            canonical_sign(p.v);
            out.push_back(std::move(p));
            if (top_only)
                return out;
        }
        i = j + 1;
    }
    return out;
}

} // namespace detail

inline ConEigPair con_eig_max(const ConSymMatrix& A, const ConEigOptions& opts = {})
{
    auto raw = detail::coneig_raw(A.a, opts, true);
    return ConEigPair{raw[0].sigma, TruncatedPoly(A.box, std::move(raw[0].v)), raw[0].residual};
}

inline std::vector<ConEigPair> con_eig_all(const ConSymMatrix& A, const ConEigOptions& opts = {})
{
    auto raw = detail::coneig_raw(A.a, opts, false);
    std::vector<ConEigPair> out;
    out.reserve(raw.size());
    for (auto& p : raw)
        out.push_back({p.sigma, TruncatedPoly(A.box, std::move(p.v)), p.residual});
    return out;
}

/// Residuals of the Schmidt-pair relations: r1 for A conj(q) = sigma q and
/// r2 for A^* q = sigma conj(q) (the adjoint half of the pair).
inline std::pair<double, double> schmidt_check(const ConSymMatrix& A, const ConEigPair& pair)
{
    const Eigen::VectorXcd& q = pair.q.coeffs;
    const double r1 = (A.a * q.conjugate() - pair.sigma * q).norm();
    const double r2 = (A.a.adjoint() * q - pair.sigma * q.conjugate()).norm();
    return {r1, r2};
}

/// Matrix of the linear compression T_n itself: M[b,g] = f_{b-g}.
inline Eigen::MatrixXcd build_compression_matrix(const FourierTable& f, const MultiIndexBox& box)
{
    const int N = box.size();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const MultiIndex idx = sub_or_empty(box.at(i), box.at(j));
            if (!idx.empty()) {
                const int k = f.box.index_of(idx);
                if (k >= 0)
                    m(i, j) = f.coeffs[k];
            }
        }
    return m;
}

/// Frobenius deviation of the C-symmetry identity C T C = T^* in matrix form:
/// || J conj(M) J - M^H ||_F with J the index-reversal permutation of the box.
inline double c_symmetry_check(const FourierTable& f, const MultiIndex& n)
{
    const MultiIndexBox box(n);
    const int N = box.size();
    const Eigen::MatrixXcd M = build_compression_matrix(f, box);
    std::vector<int> rev(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i)
        rev[static_cast<std::size_t>(i)] = box.index_of(sub_or_empty(n, box.at(i)));
    Eigen::MatrixXcd lhs(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            lhs(i, j) = std::conj(M(rev[static_cast<std::size_t>(i)],
                                    rev[static_cast<std::size_t>(j)]));
    return (lhs - M.adjoint()).norm();
}

/// Hankel form H_f(q, r) = <f q, conj(r)> on trigonometric polynomials,
/// computed from coefficients: sum of f_a q_b r_c over a + b + c = 0.
/// Frequencies a with a >= 0 must be covered by the symbol table.
inline Complex hankel_form(const FourierTable& f, const TrigPoly& q, const TrigPoly& r)
{
    if (q.d != f.box.dim() || r.d != f.box.dim())
        throw SupportMismatchError("hankel_form: dimension mismatch");
    Complex h = 0;
    for (const auto& [b, qb] : q.coeffs) {
        if (qb == Complex(0))
            continue;
        for (const auto& [c, rc] : r.coeffs) {
            if (rc == Complex(0))
                continue;
            MultiIndex a(b.size());
            bool nonneg = true;
            for (std::size_t t = 0; t < b.size(); ++t) {
                a[t] = -b[t] - c[t];
                nonneg &= a[t] >= 0;
            }
            if (!nonneg)
                continue;
            const int k = f.box.index_of(a);
            if (k < 0)
                throw SupportMismatchError("hankel_form: symbol table does not cover " +
                                           to_string(a));
            h += f.coeffs[k] * qb * rc;
        }
    }
    return h;
}

/// The extremal element of the Hankel optimization on Trig_n, read off a
/// con-eigenfunction p over the box of 2n: t_k = conj(p_{n-k}) realizes
/// Re H_f(t,t) = sigma_{2n}.
inline TrigPoly extremal_trig(const TruncatedPoly& p, const MultiIndex& n)
{
    const int d = p.box.dim();
    TrigPoly t(d);
    std::vector<int> k(static_cast<std::size_t>(d));
    for (int i = 0; i < p.box.size(); ++i) {
        const MultiIndex& beta = p.box.at(i);
        for (int j = 0; j < d; ++j)
            k[static_cast<std::size_t>(j)] =
                n[static_cast<std::size_t>(j)] - beta[static_cast<std::size_t>(j)];
        if (p.coeffs[i] != Complex(0))
            t.set(k, std::conj(p.coeffs[i]));
    }
    return t;
}

} // namespace takagi
} // namespace polyrat
