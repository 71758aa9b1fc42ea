#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <vector>

#include "polyrat/cayley.hpp"
#include "polyrat/k11.hpp"
#include "polyrat/taylor.hpp"
#include "polyrat/zero_probe.hpp"

namespace polyrat {
namespace cf {

/// Normalized Carath'eodory-Fej'er interpolation data over a box: c_0 = 1.
struct CFData {
    MultiIndexBox box;
    Eigen::VectorXcd c;
    bool normalized = false;

    CFData() = default;
    CFData(MultiIndexBox b, Eigen::VectorXcd coeffs) : box(std::move(b)), c(std::move(coeffs))
    {
        if (c.size() != box.size())
            throw BoxMismatchError("CFData: coefficient count != box cardinality");
        normalized = std::abs(c[0] - 1.0) <= 1e-12;
    }
};

/// X[b,g] = c_{b-g} (0 outside the box), the shift matrices T_r with
/// T_r[b,g] = 1 iff b = g + e_r, and the columns C (data) and E (delta at 0).
struct StructureMatrices {
    Eigen::MatrixXcd X;
    Eigen::VectorXcd C_col, E_col;
    std::vector<Eigen::MatrixXcd> T;
};

inline StructureMatrices build_structure(const CFData& data)
{
    const MultiIndexBox& box = data.box;
    const int N = box.size(), d = box.dim();
    StructureMatrices s;
    s.X.setZero(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const MultiIndex idx = sub_or_empty(box.at(i), box.at(j));
            if (!idx.empty()) {
                const int k = box.index_of(idx);
                if (k >= 0)
                    s.X(i, j) = data.c[k];
            }
        }
    s.C_col = data.c;
    s.E_col = Eigen::VectorXcd::Zero(N);
    s.E_col[0] = 1.0;
    s.T.assign(static_cast<std::size_t>(d), Eigen::MatrixXcd::Zero(N, N));
    for (int r = 0; r < d; ++r) {
        MultiIndex er(static_cast<std::size_t>(d), 0);
        er[static_cast<std::size_t>(r)] = 1;
        for (int j = 0; j < N; ++j) {
            const int i = box.index_of(add(box.at(j), er));
            if (i >= 0)
                s.T[static_cast<std::size_t>(r)](i, j) = 1.0;
        }
    }
    return s;
}

struct AglerCertificate {
    std::vector<Eigen::MatrixXcd> gammas;
    double eq_residual = 0.0; ///< ||sum_j (G_j - T_j G_j T_j^*) - 2(EC^*+CE^*)||_F
    double min_eig = 0.0;     ///< smallest eigenvalue across the G_j
    int iterations = 0;
};

enum class FeasStatus { Certificate, ProvenInfeasible, Undecided };

struct FeasibilityResult {
    FeasStatus status = FeasStatus::Undecided;
    std::optional<AglerCertificate> cert;
    double best_residual = 0.0;
    int iterations = 0;
    double necessity_min_eig = 0.0; ///< smallest eigenvalue of X + X^*
};

struct FeasibilityOptions {
    double ftol = 1e-9;
    double ptol = 1e-10;
    int max_iters = 20000;
    double necessity_tol = 1e-8;
    /// Gauss-Newton polish on the factorization G_j = Y_j Y_j^H, attempted
    /// periodically from the Dykstra iterate. Dykstra alone is sublinear when
    /// every certificate touches the PSD boundary (boundary interpolation
    /// data); the factorized polish recovers fast local convergence there and
    /// returns certificates that are PSD by construction.
    bool polish = true;
};

namespace detail {

/// The data-independent linear map L(G)_j = sum_j (G_j - T_j G_j T_j^*) and
/// the factored normal map L L^* used for exact affine projections.
class AffineProjector {
public:
    explicit AffineProjector(const std::vector<Eigen::MatrixXcd>& T) : T_(T)
    {
        const int N = static_cast<int>(T[0].rows());
        Eigen::MatrixXcd K(N * N, N * N);
        Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(N, N);
        for (int col = 0; col < N * N; ++col) {
            basis(col % N, col / N) = 1.0;
            const Eigen::MatrixXcd img = apply_LLstar(basis);
            K.col(col) = Eigen::Map<const Eigen::VectorXcd>(img.data(), N * N);
            basis(col % N, col / N) = 0.0;
        }
        lu_.compute(K);
    }

    Eigen::MatrixXcd apply_L(const std::vector<Eigen::MatrixXcd>& G) const
    {
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(T_[0].rows(), T_[0].cols());
        for (std::size_t j = 0; j < T_.size(); ++j)
            out += G[j] - T_[j] * G[j] * T_[j].adjoint();
        return out;
    }

    /// Orthogonal projection onto { G : L(G) = B } in the Frobenius geometry.
    void project(std::vector<Eigen::MatrixXcd>& G, const Eigen::MatrixXcd& B) const
    {
        const int N = static_cast<int>(T_[0].rows());
        Eigen::MatrixXcd R = apply_L(G) - B;
        const Eigen::VectorXcd y =
            lu_.solve(Eigen::Map<const Eigen::VectorXcd>(R.data(), N * N));
        const Eigen::MatrixXcd Y = Eigen::Map<const Eigen::MatrixXcd>(y.data(), N, N);
        for (std::size_t j = 0; j < T_.size(); ++j)
            G[j] -= Y - T_[j].adjoint() * Y * T_[j];
    }

private:
    Eigen::MatrixXcd apply_LLstar(const Eigen::MatrixXcd& Y) const
    {
        std::vector<Eigen::MatrixXcd> G;
        G.reserve(T_.size());
        for (const auto& t : T_)
            G.push_back(Y - t.adjoint() * Y * t);
        return apply_L(G);
    }

    std::vector<Eigen::MatrixXcd> T_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

inline Eigen::MatrixXcd psd_clip(const Eigen::MatrixXcd& M)
{
    Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

inline double min_eig_herm(const Eigen::MatrixXcd& M)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (M + M.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

/// Levenberg-Marquardt on the residual L(Y Y^H) - B over the factor entries.
/// Returns true when the Frobenius residual reaches target; gammas then hold
/// the exactly-PSD products Y_j Y_j^H.
inline bool polish_certificate(const std::vector<Eigen::MatrixXcd>& T,
                               const AffineProjector& aff, const Eigen::MatrixXcd& B,
                               std::vector<Eigen::MatrixXcd>& gammas, double target)
{
    const int d = static_cast<int>(T.size());
    const int N = static_cast<int>(T[0].rows());
    const int nres = N * N;
    const int nvar = 2 * d * N * N;
    const double rt2 = std::sqrt(2.0);

    std::vector<Eigen::MatrixXcd> Y(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            0.5 * (gammas[static_cast<std::size_t>(j)] +
                   gammas[static_cast<std::size_t>(j)].adjoint()));
        Y[static_cast<std::size_t>(j)] = es.eigenvectors() *
                                         es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                                         es.eigenvectors().adjoint();
    }

    auto vec_herm = [&](const Eigen::MatrixXcd& H) {
        Eigen::VectorXd v(nres);
        int idx = 0;
        for (int i = 0; i < N; ++i)
            v[idx++] = H(i, i).real();
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j) {
                v[idx++] = rt2 * H(i, j).real();
                v[idx++] = rt2 * H(i, j).imag();
            }
        return v;
    };
    auto residual = [&](const std::vector<Eigen::MatrixXcd>& Ys) {
        std::vector<Eigen::MatrixXcd> G(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j)
            G[static_cast<std::size_t>(j)] = Ys[static_cast<std::size_t>(j)] *
                                             Ys[static_cast<std::size_t>(j)].adjoint();
        Eigen::MatrixXcd R = aff.apply_L(G) - B;
        return vec_herm(0.5 * (R + R.adjoint()));
    };

    Eigen::VectorXd r = residual(Y);
    double lambda = 1e-6;
    for (int iter = 0; iter < 80; ++iter) {
        if (r.norm() <= target)
            break;
        Eigen::MatrixXd J(nres, nvar);
        int col = 0;
        for (int j = 0; j < d; ++j)
            for (int q = 0; q < N; ++q)
                for (int p = 0; p < N; ++p) {
                    const Eigen::VectorXcd yq = Y[static_cast<std::size_t>(j)].col(q);
                    for (int part = 0; part < 2; ++part) {
                        const Complex h = part == 0 ? Complex(1, 0) : Complex(0, 1);
                        Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(N, N);
                        D.row(p) += h * yq.adjoint();
                        D.col(p) += std::conj(h) * yq;
                        const Eigen::MatrixXcd M =
                            D - T[static_cast<std::size_t>(j)] * D *
                                    T[static_cast<std::size_t>(j)].adjoint();
                        J.col(col++) = vec_herm(M);
                    }
                }
        const Eigen::MatrixXd JJt = J * J.transpose();
        bool stepped = false;
        for (int attempt = 0; attempt < 12 && !stepped; ++attempt) {
            Eigen::MatrixXd A = JJt;
            A.diagonal().array() += lambda * (1.0 + JJt.diagonal().maxCoeff());
            const Eigen::VectorXd u = A.ldlt().solve(-r);
            const Eigen::VectorXd step = J.transpose() * u;
            std::vector<Eigen::MatrixXcd> Ytrial = Y;
            int idx = 0;
            for (int j = 0; j < d; ++j)
                for (int q = 0; q < N; ++q)
                    for (int p = 0; p < N; ++p) {
                        Ytrial[static_cast<std::size_t>(j)](p, q) +=
                            Complex(step[idx], step[idx + 1]);
                        idx += 2;
                    }
            const Eigen::VectorXd rtrial = residual(Ytrial);
            if (rtrial.norm() < r.norm()) {
                Y = std::move(Ytrial);
                r = rtrial;
                lambda = std::max(lambda / 3.0, 1e-14);
                stepped = true;
            } else {
                lambda *= 10.0;
            }
        }
        if (!stepped)
            break;
    }
    if (r.norm() > target)
        return false;
    for (int j = 0; j < d; ++j)
        gammas[static_cast<std::size_t>(j)] = Y[static_cast<std::size_t>(j)] *
                                              Y[static_cast<std::size_t>(j)].adjoint();
    return true;
}

inline double halton(long long i, int base)
{
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

inline std::vector<Complex> halton_polydisk_point(long long i, int d, double max_radius)
{
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    std::vector<Complex> z(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        const double u = halton(i + 1, primes[(2 * j) % 12]);
        const double v = halton(i + 1, primes[(2 * j + 1) % 12]);
        z[static_cast<std::size_t>(j)] =
            std::polar(max_radius * std::sqrt(u), 2.0 * std::numbers::pi * v);
    }
    return z;
}

} // namespace detail

/// Alternating projections with Dykstra's correction between the product PSD
/// cone and the affine set sum_j (G_j - T_j G_j T_j^*) = 2(EC^* + CE^*).
/// A failed search is not a proof of infeasibility; the only conclusive
/// negative here is the necessary condition X + X^* >= 0.
inline FeasibilityResult agler_feasibility(const CFData& data, const FeasibilityOptions& opts = {})
{
    if (!data.normalized)
        throw DomainError("agler_feasibility: data must be normalized (c_0 = 1)");
    const StructureMatrices s = build_structure(data);
    const int N = data.box.size(), d = data.box.dim();

    FeasibilityResult res;
    res.necessity_min_eig = detail::min_eig_herm(s.X + s.X.adjoint());
    if (res.necessity_min_eig < -opts.necessity_tol) {
        res.status = FeasStatus::ProvenInfeasible;
        return res;
    }

    const Eigen::MatrixXcd B =
        2.0 * (s.E_col * s.C_col.adjoint() + s.C_col * s.E_col.adjoint());
    detail::AffineProjector aff(s.T);

    std::vector<Eigen::MatrixXcd> x(static_cast<std::size_t>(d),
                                    Eigen::MatrixXcd::Zero(N, N));
    std::vector<Eigen::MatrixXcd> p = x;
    aff.project(x, B); // minimum-norm affine solution as the starting point

    auto finish = [&](std::vector<Eigen::MatrixXcd> gammas, double r, int it) {
        AglerCertificate cert;
        cert.gammas = std::move(gammas);
        cert.eq_residual = r;
        cert.iterations = it;
        cert.min_eig = std::numeric_limits<double>::infinity();
        for (const auto& g : cert.gammas)
            cert.min_eig = std::min(cert.min_eig, detail::min_eig_herm(g));
        res.status = FeasStatus::Certificate;
        res.cert = std::move(cert);
        res.best_residual = r;
        res.iterations = it;
        return res;
    };

    double best = std::numeric_limits<double>::infinity();
    int next_polish = 64;
    for (int it = 1; it <= opts.max_iters; ++it) {
        std::vector<Eigen::MatrixXcd> a = x;
        aff.project(a, B);
        for (int j = 0; j < d; ++j) {
            const Eigen::MatrixXcd t = a[static_cast<std::size_t>(j)] +
                                       p[static_cast<std::size_t>(j)];
            x[static_cast<std::size_t>(j)] = detail::psd_clip(t);
            p[static_cast<std::size_t>(j)] = t - x[static_cast<std::size_t>(j)];
        }
        const double r = (aff.apply_L(x) - B).norm();
        best = std::min(best, r);
        res.iterations = it;
        if (r <= opts.ftol)
            return finish(x, r, it);
        if (opts.polish && it == next_polish) {
            next_polish *= 4;
            std::vector<Eigen::MatrixXcd> gammas = x;
            if (detail::polish_certificate(s.T, aff, B, gammas, opts.ftol * 1e-2)) {
                const double rp = (aff.apply_L(gammas) - B).norm();
                if (rp <= opts.ftol)
                    return finish(std::move(gammas), rp, it);
            }
        }
    }
    res.status = FeasStatus::Undecided;
    res.best_residual = best;
    return res;
}

/// Colligation realizing the Cayley rational inner interpolant:
/// phi(z) = 1 + 2 V^* U (I - Delta(z) U)^{-1} Delta(z) V with U unitary of
/// size d|Lambda| and V a unit column; Delta(z) = blockdiag(z_j I).
struct Realization {
    Eigen::MatrixXcd U;
    Eigen::VectorXcd V;
    int d = 0;
    MultiIndexBox box;
    double u22_abs = 0.0; ///< lower-right entry of the extension; vanishes identically in exact arithmetic
};

struct RealizationOptions {
    double utol = 1e-8;
    double rank_tol = 1e-10;
    double reg_eps_rel = 1e-10;
};

inline Realization build_realization(const AglerCertificate& cert, const CFData& data,
                                     const RealizationOptions& opts = {})
{
    const StructureMatrices s = build_structure(data);
    const int N = data.box.size(), d = data.box.dim();
    const int m = d * N;

    // Square roots of the regularized certificate blocks.
    std::vector<Eigen::MatrixXcd> S(static_cast<std::size_t>(d));
    double scale = 0.0;
    for (const auto& g : cert.gammas)
        scale = std::max(scale, std::abs(g.trace().real()) / N);
    const double eps = opts.reg_eps_rel * std::max(scale, 1.0);
    for (int j = 0; j < d; ++j) {
        Eigen::MatrixXcd H = 0.5 * (cert.gammas[static_cast<std::size_t>(j)] +
                                    cert.gammas[static_cast<std::size_t>(j)].adjoint());
        H += eps * Eigen::MatrixXcd::Identity(N, N);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
        S[static_cast<std::size_t>(j)] = es.eigenvectors() *
                                         es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                                         es.eigenvectors().adjoint();
    }

    Eigen::MatrixXcd W1(m + 1, N), W2(m + 1, N);
    for (int j = 0; j < d; ++j) {
        W1.middleRows(j * N, N) = S[static_cast<std::size_t>(j)];
        W2.middleRows(j * N, N) =
            S[static_cast<std::size_t>(j)] * s.T[static_cast<std::size_t>(j)].adjoint();
    }
    W1.row(m) = (s.E_col - s.C_col).adjoint();
    W2.row(m) = (s.E_col + s.C_col).adjoint();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(W1);
    qr.setThreshold(opts.rank_tol);
    const int r = static_cast<int>(qr.rank());
    if (r < N)
        throw RankDefectError("build_realization: W1 rank " + std::to_string(r) +
                              " below box size " + std::to_string(N));

    Eigen::MatrixXcd Q1full = qr.householderQ();
    const Eigen::MatrixXcd Q1 = Q1full.leftCols(r);
    const Eigen::MatrixXcd Q1c = Q1full.rightCols(m + 1 - r);
    const Eigen::MatrixXcd R1 =
        qr.matrixR().topLeftCorner(r, r).template triangularView<Eigen::Upper>();
    Eigen::MatrixXcd Z = (W2 * qr.colsPermutation()).leftCols(r);
    Z = R1.triangularView<Eigen::Upper>()
            .transpose()
            .solve(Z.transpose())
            .transpose(); // Z <- Z R1^{-1}

    // W2^* W2 = W1^* W1 up to the certificate residual, so Z is nearly
    // isometric; a polar correction makes the extension exactly unitary.
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Z.adjoint() * Z);
        const Eigen::MatrixXcd gih =
            es.eigenvectors() *
            es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse().asDiagonal() *
            es.eigenvectors().adjoint();
        Z = Z * gih;
    }

    Eigen::HouseholderQR<Eigen::MatrixXcd> qr2(Z);
    const Eigen::MatrixXcd Q2full = qr2.householderQ();
    const Eigen::MatrixXcd Q2c = Q2full.rightCols(m + 1 - r);

    Eigen::MatrixXcd left(m + 1, m + 1), right(m + 1, m + 1);
    left << Z, Q2c;
    right << Q1, Q1c;
    const Eigen::MatrixXcd Ucal = left * right.adjoint();

    Realization rz;
    rz.d = d;
    rz.box = data.box;
    rz.u22_abs = std::abs(Ucal(m, m));
    if (rz.u22_abs > opts.utol)
        throw U22NotZeroError("build_realization: |U22| = " + std::to_string(rz.u22_abs));

    rz.V = -Ucal.topRightCorner(m, 1);
    rz.U = Ucal.topLeftCorner(m, m) - Ucal.topRightCorner(m, 1) * Ucal.bottomLeftCorner(1, m);
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rz.U.adjoint() * rz.U);
        const Eigen::MatrixXcd gih =
            es.eigenvectors() *
            es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse().asDiagonal() *
            es.eigenvectors().adjoint();
        rz.U = rz.U * gih;
    }
    rz.V.normalize();
    return rz;
}

namespace detail {

inline Eigen::MatrixXcd delta_times(const Realization& r, const std::vector<Complex>& z,
                                    const Eigen::MatrixXcd& M)
{
    const int N = r.box.size();
    Eigen::MatrixXcd out(M.rows(), M.cols());
    for (int j = 0; j < r.d; ++j)
        out.middleRows(j * N, N) = z[static_cast<std::size_t>(j)] * M.middleRows(j * N, N);
    return out;
}

} // namespace detail

inline Complex eval_realization(const Realization& r, const std::vector<Complex>& z)
{
    if (static_cast<int>(z.size()) != r.d)
        throw DomainError("eval_realization: point dimension mismatch");
    for (Complex zj : z)
        if (!(std::abs(zj) < 1.0))
            throw DomainError("eval_realization: point must lie in the open polydisk");
    const int m = r.d * r.box.size();
    const Eigen::MatrixXcd A =
        Eigen::MatrixXcd::Identity(m, m) - detail::delta_times(r, z, r.U);
    const Eigen::VectorXcd rhs = detail::delta_times(r, z, r.V);
    const Eigen::VectorXcd x = Eigen::PartialPivLU<Eigen::MatrixXcd>(A).solve(rhs);
    const Complex phi = 1.0 + 2.0 * r.V.dot(r.U * x);
    if (!std::isfinite(phi.real()) || !std::isfinite(phi.imag()))
        throw SingularResolventError("eval_realization: resolvent blew up");
    return phi;
}

/// Two independent routes to 2 Re phi(z): the evaluation formula, and the
/// factorized PSD form 2 y^*[I - U D D^* U^*] y with y = (I - D^*U^*)^{-1} V,
/// D = Delta(z). Their agreement (and nonnegativity of the second) certifies
/// Re phi >= 0 in the polydisk.
inline std::pair<double, double> herglotz_identity(const Realization& r,
                                                   const std::vector<Complex>& z)
{
    const int m = r.d * r.box.size();
    const int N = r.box.size();
    const double two_re_phi = 2.0 * eval_realization(r, z).real();
    Eigen::MatrixXcd UD = r.U; // U Delta(z): scale columns by block
    for (int j = 0; j < r.d; ++j)
        UD.middleCols(j * N, N) *= z[static_cast<std::size_t>(j)];
    const Eigen::MatrixXcd B = Eigen::MatrixXcd::Identity(m, m) - UD;
    const Eigen::VectorXcd y = B.adjoint().partialPivLu().solve(r.V);
    Eigen::VectorXd dd(m);
    for (int j = 0; j < r.d; ++j)
        dd.segment(j * N, N).setConstant(std::norm(z[static_cast<std::size_t>(j)]));
    const Eigen::MatrixXcd G = Eigen::MatrixXcd::Identity(m, m) -
                               r.U * dd.asDiagonal() * r.U.adjoint();
    const double psd_route = (y.dot(G * y)).real() * 2.0;
    return {two_re_phi, psd_route};
}

struct RationalPair {
    TruncatedPoly num, den; ///< phi = num/den, den(0) = 1
    ProbeReport den_probe;
};

/// Exact polynomial fraction of the realization, recovered by tensor DFT
/// interpolation of det(I - Delta(z)U) and of phi * det. Unavailable when the
/// colligation is larger than max_dim.
inline std::optional<RationalPair> realization_to_rational(const Realization& r,
                                                           int max_dim = 12)
{
    const int N = r.box.size();
    const int m = r.d * N;
    if (m > max_dim)
        return std::nullopt;

    const MultiIndexBox outbox(MultiIndex(static_cast<std::size_t>(r.d), N + 1));
    const std::vector<int> grid(static_cast<std::size_t>(r.d), N + 3);
    const double rad = 0.7;

    Evaluator det_eval = [&r, m](const std::vector<Complex>& z) {
        const Eigen::MatrixXcd A =
            Eigen::MatrixXcd::Identity(m, m) - detail::delta_times(r, z, r.U);
        return Eigen::PartialPivLU<Eigen::MatrixXcd>(A).determinant();
    };
    Evaluator num_eval = [&r, m](const std::vector<Complex>& z) {
        const Eigen::MatrixXcd A =
            Eigen::MatrixXcd::Identity(m, m) - detail::delta_times(r, z, r.U);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
        const Eigen::VectorXcd x = lu.solve(detail::delta_times(r, z, r.V));
        return lu.determinant() * (1.0 + 2.0 * r.V.dot(r.U * x));
    };

    FourierTable dent = taylor_from_evaluator(det_eval, outbox, rad, grid);
    FourierTable numt = taylor_from_evaluator(num_eval, outbox, rad, grid);

    const double trim = 1e-9 * std::max(dent.coeffs.cwiseAbs().maxCoeff(),
                                        numt.coeffs.cwiseAbs().maxCoeff());
    MultiIndex deg(static_cast<std::size_t>(r.d), 0);
    for (int k = 0; k < outbox.size(); ++k) {
        if (std::abs(dent.coeffs[k]) <= trim && std::abs(numt.coeffs[k]) <= trim)
            continue;
        for (int j = 0; j < r.d; ++j)
            deg[static_cast<std::size_t>(j)] =
                std::max(deg[static_cast<std::size_t>(j)],
                         outbox.at(k)[static_cast<std::size_t>(j)]);
    }
    for (int dj : deg)
        if (dj > m)
            throw DegreeBoundViolatedError("realization_to_rational: degree exceeds d|Lambda|");

    const MultiIndexBox tight(deg);
    RationalPair pair;
    pair.num = TruncatedPoly(tight);
    pair.den = TruncatedPoly(tight);
    for (int k = 0; k < tight.size(); ++k) {
        pair.num.coeffs[k] = numt.coeff(tight.at(k));
        pair.den.coeffs[k] = dent.coeff(tight.at(k));
    }
    pair.den_probe = pole_probe(pair.den);
    return pair;
}

struct InterpolantReport {
    double max_coeff_err = 0.0;
    double min_re_interior = 0.0;
    std::array<double, 3> boundary_radii{0.9, 0.99, 0.999};
    std::array<double, 3> boundary_median_re{};
    bool coeff_ok = false;
    bool positivity_ok = false;
    bool boundary_decreasing = false;
};

inline InterpolantReport verify_interpolant(const Realization& r, const CFData& data,
                                            double vtol = 1e-6, int n_interior = 1000)
{
    InterpolantReport rep;
    const int d = data.box.dim();
    Evaluator phi = [&r](const std::vector<Complex>& z) { return eval_realization(r, z); };

    std::vector<int> grid(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j)
        grid[static_cast<std::size_t>(j)] = data.box.bound()[static_cast<std::size_t>(j)] + 32;
    const FourierTable tab = taylor_from_evaluator(phi, data.box, 0.5, grid);
    rep.max_coeff_err = (tab.coeffs - data.c).cwiseAbs().maxCoeff();
    rep.coeff_ok = rep.max_coeff_err <= vtol;

    rep.min_re_interior = std::numeric_limits<double>::infinity();
    for (long long i = 0; i < n_interior; ++i) {
        const auto z = detail::halton_polydisk_point(i, d, 0.98);
        rep.min_re_interior = std::min(rep.min_re_interior, eval_realization(r, z).real());
    }
    rep.positivity_ok = rep.min_re_interior >= -1e-6;

    const int G = d == 1 ? 128 : (d == 2 ? 24 : 8);
    long long total = 1;
    for (int j = 0; j < d; ++j)
        total *= G;
    for (std::size_t ri = 0; ri < rep.boundary_radii.size(); ++ri) {
        std::vector<double> vals;
        vals.reserve(static_cast<std::size_t>(total));
        std::vector<int> k(static_cast<std::size_t>(d), 0);
        std::vector<Complex> z(static_cast<std::size_t>(d));
        for (long long step = 0; step < total; ++step) {
            for (int j = 0; j < d; ++j)
                z[static_cast<std::size_t>(j)] =
                    std::polar(rep.boundary_radii[ri],
                               2.0 * std::numbers::pi * k[static_cast<std::size_t>(j)] / G);
            vals.push_back(eval_realization(r, z).real());
            for (int j = 0; j < d; ++j) {
                if (++k[static_cast<std::size_t>(j)] < G)
                    break;
                k[static_cast<std::size_t>(j)] = 0;
            }
        }
        std::nth_element(vals.begin(), vals.begin() + vals.size() / 2, vals.end());
        rep.boundary_median_re[ri] = vals[vals.size() / 2];
    }
    rep.boundary_decreasing = rep.boundary_median_re[0] > rep.boundary_median_re[1] &&
                              rep.boundary_median_re[1] > rep.boundary_median_re[2];
    return rep;
}

struct CFInnerOptions {
    FeasibilityOptions feas;
    RealizationOptions real;
    double match_tol = 1e-6;
    int rational_max_dim = 12;
    /// For d >= 3 the Schur class is strictly larger than the Agler class and
    /// the certificate step is only valid on the latter; the caller must
    /// assert membership explicitly.
    bool assume_agler = false;
};

/// A rational inner approximant of a Schur-class f matching its Taylor data
/// through the box of (n,...,n). When f(0) != 0 the Herglotz transform has
/// c_0 != 1 and the data is normalized through a half-plane automorphism,
/// undone pointwise after the realization.
struct CFInnerResult {
    Realization realization;
    std::optional<k11::HalfPlaneMobius> normalizer;
    FourierTable fn_taylor;     ///< Taylor data of f_n over the box
    double max_match_err = 0.0; ///< against f's own table
    std::optional<RationalPair> rational;

    Complex eval(const std::vector<Complex>& z) const
    {
        Complex phi = eval_realization(realization, z);
        if (normalizer)
            phi = normalizer->inverse_apply(phi);
        return (phi - 1.0) / (phi + 1.0);
    }
};

inline CFInnerResult cf_inner_sequence(const Evaluator& f, int d, int n,
                                       const CFInnerOptions& opts = {})
{
    if (d >= 3 && !opts.assume_agler)
        throw DomainError("cf_inner_sequence: d >= 3 requires asserting Agler membership");
    const MultiIndexBox box(MultiIndex(static_cast<std::size_t>(d), n));
    std::vector<int> grid(static_cast<std::size_t>(d), n + 32);
    const FourierTable ftab = taylor_from_evaluator(f, box, 0.5, grid);

    FourierTable g = cayley_forward(ftab);
    CFInnerResult res;
    const Complex g0 = g.coeffs[0];
    if (std::abs(g0 - 1.0) > 1e-12) {
        if (!(g0.real() > 0.0))
            throw DomainError("cf_inner_sequence: Re g(0) must be positive");
        res.normalizer = k11::mobius_from_c00(g0);
        g = mobius_of_table(g, res.normalizer->A, res.normalizer->B, res.normalizer->C,
                            res.normalizer->D);
    }
    g.coeffs[0] = 1.0;

    CFData data(box, g.coeffs);
    FeasibilityResult feas = agler_feasibility(data, opts.feas);
    if (feas.status != FeasStatus::Certificate)
        throw ConvergenceFailureError(
            "cf_inner_sequence: feasibility search did not produce a certificate (residual " +
            std::to_string(feas.best_residual) + ")");
    res.realization = build_realization(*feas.cert, data, opts.real);

    Evaluator fn = [&res](const std::vector<Complex>& z) { return res.eval(z); };
    res.fn_taylor = taylor_from_evaluator(fn, box, 0.5, grid);
    res.max_match_err = (res.fn_taylor.coeffs - ftab.coeffs).cwiseAbs().maxCoeff();

    res.rational = realization_to_rational(res.realization, opts.rational_max_dim);
    return res;
}

} // namespace cf
} // namespace polyrat
