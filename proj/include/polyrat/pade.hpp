#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "polyrat/takagi.hpp"
#include "polyrat/taylor.hpp"
#include "polyrat/zero_probe.hpp"

namespace polyrat {
namespace pade {

struct PadeOptions {
    double sup_radius = 0.999;
    double ztol = 1e-6;
    double mtol = 1e-7;
    double qtol = 1e-7;
    double qstar0_tol = 1e-8;
    std::vector<double> probe_radii = {0.5, 0.9, 0.99, 1.0};
    takagi::ConEigOptions coneig;
};

/// Max modulus of the evaluator over a dense torus tensor grid near the
/// boundary; stands in for ||f||_inf at desk scale.
inline double sup_norm_estimate(const Evaluator& f, int d, double radius = 0.999,
                                int per_axis = 0)
{
    if (per_axis <= 0)
        per_axis = d <= 2 ? 256 : 40;
    long long total = 1;
    for (int j = 0; j < d; ++j)
        total *= per_axis;
    std::vector<int> k(static_cast<std::size_t>(d), 0);
    std::vector<Complex> z(static_cast<std::size_t>(d));
    double sup = 0.0;
    for (long long step = 0; step < total; ++step) {
        for (int j = 0; j < d; ++j)
            z[static_cast<std::size_t>(j)] =
                std::polar(radius, 2.0 * std::numbers::pi * k[static_cast<std::size_t>(j)] /
                                       per_axis);
        sup = std::max(sup, std::abs(f(z)));
        for (int j = 0; j < d; ++j) {
            if (++k[static_cast<std::size_t>(j)] < per_axis)
                break;
            k[static_cast<std::size_t>(j)] = 0;
        }
    }
    return sup;
}

struct PadeReport {
    MultiIndex n;
    double sigma = 0.0;
    TruncatedPoly q, q_star;
    double coneig_residual = 0.0;
    double remainder_l2 = 0.0; ///< quadrature L2 norm of f q* - sigma q on T^d
    double bound_l2 = 0.0;     ///< (sup|f| - sigma) ||q||_2
    double sup_f_est = 0.0;
    ProbeReport pole_probe;
    std::optional<MultiIndex> taylor_match_depth;
};

/// One Takagi-Pfister step: solve the anti-linear eigenproblem on the box of
/// n, form q* and the remainder f q* - sigma q, probe q* for zeros, and (when
/// q*(0) is away from zero) record how deep the Taylor data of f and of
/// sigma q/q* agree.
inline PadeReport pade_step(const FourierTable& f, const Evaluator& fe, const MultiIndex& n,
                            const PadeOptions& opts = {})
{
    const int d = static_cast<int>(n.size());
    PadeReport rep;
    rep.n = n;

    auto A = takagi::build_con_matrix(f, n);
    auto pair = takagi::con_eig_max(A, opts.coneig);
    rep.sigma = pair.sigma;
    rep.q = pair.q;
    rep.coneig_residual = pair.residual;
    rep.q_star = reflect(pair.q, n);

    rep.sup_f_est = sup_norm_estimate(fe, d, opts.sup_radius);
    rep.bound_l2 = (rep.sup_f_est - rep.sigma) * rep.q.norm2();

    // Quadrature of |f q* - sigma q|^2 on the torus; grid 4 n_j + 8 per axis.
    {
        std::vector<int> grid(static_cast<std::size_t>(d));
        long long total = 1;
        for (int j = 0; j < d; ++j) {
            grid[static_cast<std::size_t>(j)] = 4 * n[static_cast<std::size_t>(j)] + 8;
            total *= grid[static_cast<std::size_t>(j)];
        }
        std::vector<int> k(static_cast<std::size_t>(d), 0);
        std::vector<Complex> z(static_cast<std::size_t>(d));
        double acc = 0.0;
        for (long long step = 0; step < total; ++step) {
            for (int j = 0; j < d; ++j)
                z[static_cast<std::size_t>(j)] = std::polar(
                    1.0, 2.0 * std::numbers::pi * k[static_cast<std::size_t>(j)] /
                             grid[static_cast<std::size_t>(j)]);
            const Complex r =
                fe(z) * eval_poly(rep.q_star, z) - rep.sigma * eval_poly(rep.q, z);
            acc += std::norm(r);
            for (int j = 0; j < d; ++j) {
                if (++k[static_cast<std::size_t>(j)] < grid[static_cast<std::size_t>(j)])
                    break;
                k[static_cast<std::size_t>(j)] = 0;
            }
        }
        rep.remainder_l2 = std::sqrt(acc / static_cast<double>(total));
    }

    rep.pole_probe = pole_probe(rep.q_star, opts.probe_radii, 0, opts.ztol);

    // Taylor matching depth of R = sigma q / q* against the symbol table,
    // grown greedily one axis at a time within the table's box.
    if (std::abs(rep.q_star.coeffs[0]) > opts.qstar0_tol) {
        const MultiIndexBox& fbox = f.box;
        TruncatedPoly qe = embed(rep.q, fbox);
        TruncatedPoly qse = embed(rep.q_star, fbox);
        TruncatedPoly R = rep.sigma * series_divide(qe, qse);
        auto matches = [&](const MultiIndex& a) {
            return std::abs(R.coeff(a) - f.coeff(a)) <= opts.mtol;
        };
        MultiIndex depth(static_cast<std::size_t>(d), 0);
        if (matches(depth)) {
            bool grew = true;
            while (grew) {
                grew = false;
                for (int j = 0; j < d; ++j) {
                    if (depth[static_cast<std::size_t>(j)] >=
                        fbox.bound()[static_cast<std::size_t>(j)])
                        continue;
                    MultiIndex trial = depth;
                    ++trial[static_cast<std::size_t>(j)];
                    bool ok = true;
                    const MultiIndexBox tb(trial);
                    for (int t = 0; t < tb.size() && ok; ++t)
                        ok = matches(tb.at(t));
                    if (ok) {
                        depth = trial;
                        grew = true;
                    }
                }
            }
            rep.taylor_match_depth = depth;
        }
    }
    return rep;
}

/// The first-order decay estimate (sup|f| - sigma) ||q||_2 delta^m / (1-delta^2)^{d/2}.
inline double remainder_pointwise_bound(double sup_f, double sigma, double q_norm, double delta,
                                        int m, int d)
{
    if (!(delta > 0.0 && delta < 1.0))
        throw DomainError("remainder_pointwise_bound: delta must lie in (0,1)");
    return (sup_f - sigma) * q_norm * std::pow(delta, m) /
           std::pow(1.0 - delta * delta, 0.5 * d);
}

/// True when the step certifies a rational inner symbol: sigma and sup|f|
/// both 1 within tol and a vanishing remainder, in which case f = q/q*.
/// |f| is re-sampled on the torus itself; an inner function is unimodular
/// there, while the interior sup grid of the report understates it by O(1-r).
inline bool detect_rational_inner(const PadeReport& rep, const Evaluator& fe, double tol = 1e-6)
{
    const double sup_boundary =
        sup_norm_estimate(fe, static_cast<int>(rep.n.size()), 1.0);
    const bool inner = rep.sigma >= 1.0 - tol && std::abs(sup_boundary - 1.0) <= tol &&
                       rep.remainder_l2 <= tol;
    if (!inner)
        return false;
    for (std::size_t i = 0; i < rep.pole_probe.radii.size(); ++i)
        if (rep.pole_probe.radii[i] < 1.0 && rep.pole_probe.min_modulus[i] < rep.pole_probe.ztol)
            throw ConvergenceFailureError(
                "detect_rational_inner: sigma = 1 but q* has a near-zero inside the polydisk");
    return true;
}

struct PfisterStep {
    int kappa = 0;
    TruncatedPoly p;   ///< Taylor section of f_rho, total degree <= kappa
    TruncatedPoly num; ///< p + z_1...z_d z^N
    TruncatedPoly den; ///< 1 + z_1...z_d p*
    double unimod_dev = 0.0;
    double sup_err_half_polydisk = 0.0;

    Complex eval(const std::vector<Complex>& z) const
    {
        return eval_poly(num, z) / eval_poly(den, z);
    }
};

/// Pfister's inner approximants for f_rho(z) = f(rho z):
/// phi = (p + z_1...z_d z^N) / (1 + z_1...z_d p*), N = (kappa,...,kappa).
inline std::vector<PfisterStep> pfister_sequence(const Evaluator& f, int d, double rho,
                                                 const std::vector<int>& kappas,
                                                 double den_tol = 1e-6)
{
    if (!(rho > 0.0 && rho < 1.0))
        throw DomainError("pfister_sequence: rho must lie in (0,1)");
    Evaluator f_rho = [&f, rho](const std::vector<Complex>& z) {
        std::vector<Complex> w(z.size());
        for (std::size_t j = 0; j < z.size(); ++j)
            w[j] = rho * z[j];
        return f(w);
    };

    std::vector<PfisterStep> steps;
    for (int kappa : kappas) {
        PfisterStep st;
        st.kappa = kappa;
        const MultiIndex N(static_cast<std::size_t>(d), kappa);
        const MultiIndexBox boxN(N);

        FourierTable tab = taylor_from_evaluator(f_rho, boxN, 0.5,
                                                 std::vector<int>(static_cast<std::size_t>(d),
                                                                  kappa + 12));
        st.p = TruncatedPoly(boxN, tab.coeffs);
        for (int k = 0; k < boxN.size(); ++k)
            if (grade(boxN.at(k)) > kappa)
                st.p.coeffs[k] = 0;

        const TruncatedPoly p_star = reflect(st.p, N);
        const MultiIndex ones(static_cast<std::size_t>(d), 1);
        const MultiIndexBox boxN1(add(N, ones));
        st.num = embed(st.p, boxN1);
        st.num.set(add(N, ones), st.num.coeff(add(N, ones)) + 1.0);
        st.den = embed(p_star, boxN1, ones);
        st.den.set(MultiIndex(static_cast<std::size_t>(d), 0), 1.0);

        // |phi| on the torus, skipping near-zeros of the denominator.
        {
            const int G = d <= 2 ? 64 : 16;
            long long total = 1;
            for (int j = 0; j < d; ++j)
                total *= G;
            std::vector<int> k(static_cast<std::size_t>(d), 0);
            std::vector<Complex> z(static_cast<std::size_t>(d));
            double dev = 0.0;
            for (long long step = 0; step < total; ++step) {
                for (int j = 0; j < d; ++j)
                    z[static_cast<std::size_t>(j)] = std::polar(
                        1.0, 2.0 * std::numbers::pi * k[static_cast<std::size_t>(j)] / G);
                const Complex den = eval_poly(st.den, z);
                if (std::abs(den) > den_tol)
                    dev = std::max(dev, std::abs(std::abs(eval_poly(st.num, z) / den) - 1.0));
                for (int j = 0; j < d; ++j) {
                    if (++k[static_cast<std::size_t>(j)] < G)
                        break;
                    k[static_cast<std::size_t>(j)] = 0;
                }
            }
            st.unimod_dev = dev;
        }

        // Sup error against f_rho on the radius-0.5 polydisk.
        {
            const int G = d <= 2 ? 24 : 8;
            long long total = 1;
            for (int j = 0; j < d; ++j)
                total *= G;
            std::vector<int> k(static_cast<std::size_t>(d), 0);
            std::vector<Complex> z(static_cast<std::size_t>(d));
            double err = 0.0;
            for (long long step = 0; step < total; ++step) {
                for (int j = 0; j < d; ++j) {
                    const double ang =
                        2.0 * std::numbers::pi * k[static_cast<std::size_t>(j)] / G;
                    const double rad = 0.5 * (0.35 + 0.65 * ((k[static_cast<std::size_t>(j)] * 7 + 3) % G) / G);
                    z[static_cast<std::size_t>(j)] = std::polar(rad, ang);
                }
                err = std::max(err, std::abs(st.eval(z) - f_rho(z)));
                for (int j = 0; j < d; ++j) {
                    if (++k[static_cast<std::size_t>(j)] < G)
                        break;
                    k[static_cast<std::size_t>(j)] = 0;
                }
            }
            // include the distinguished radius-0.5 torus itself
            std::fill(k.begin(), k.end(), 0);
            for (long long step = 0; step < total; ++step) {
                for (int j = 0; j < d; ++j)
                    z[static_cast<std::size_t>(j)] = std::polar(
                        0.5, 2.0 * std::numbers::pi * k[static_cast<std::size_t>(j)] / G);
                err = std::max(err, std::abs(st.eval(z) - f_rho(z)));
                for (int j = 0; j < d; ++j) {
                    if (++k[static_cast<std::size_t>(j)] < G)
                        break;
                    k[static_cast<std::size_t>(j)] = 0;
                }
            }
            st.sup_err_half_polydisk = err;
        }
        steps.push_back(std::move(st));
    }
    return steps;
}

struct TensorPadeResult {
    double sigma_g = 0.0, sigma_h = 0.0;
    double sigma_product = 0.0; ///< sigma_g * sigma_h
    double sigma_direct = 0.0;  ///< top con-eigenvalue of the 2-D problem
    TruncatedPoly q_product;    ///< p(z) q(w) over the box (n1, n2)
    double product_residual = 0.0;
};

/// Tensor-product fast path for f(z,w) = g(z) h(w): the 2-D matrix is the
/// Kronecker product of the 1-D ones, so the top con-eigenvalue multiplies and
/// p(z)q(w) is an eigenfunction. Cross-checked against the direct 2-D solve.
inline TensorPadeResult tensor_pade(const FourierTable& g, const FourierTable& h, int n1, int n2,
                                    const takagi::ConEigOptions& opts = {})
{
    if (g.box.dim() != 1 || h.box.dim() != 1)
        throw BoxMismatchError("tensor_pade: factors must be one-variable tables");
    TensorPadeResult res;
    auto Ag = takagi::build_con_matrix(g, {n1});
    auto Ah = takagi::build_con_matrix(h, {n2});
    auto pg = takagi::con_eig_max(Ag, opts);
    auto ph = takagi::con_eig_max(Ah, opts);
    res.sigma_g = pg.sigma;
    res.sigma_h = ph.sigma;
    res.sigma_product = pg.sigma * ph.sigma;

    const MultiIndexBox box2({n1, n2});
    res.q_product = TruncatedPoly(box2);
    for (int i = 0; i <= n1; ++i)
        for (int j = 0; j <= n2; ++j)
            res.q_product.set({i, j}, pg.q.coeffs[i] * ph.q.coeffs[j]);

    FourierTable f2(box2);
    for (int i = 0; i <= n1; ++i)
        for (int j = 0; j <= n2; ++j)
            f2.coeffs[box2.index_of({i, j})] = g.coeff({i}) * h.coeff({j});
    auto A2 = takagi::build_con_matrix(f2, {n1, n2});
    res.sigma_direct = takagi::con_eig_max(A2, opts).sigma;
    res.product_residual =
        (A2.a * res.q_product.coeffs.conjugate() - res.sigma_product * res.q_product.coeffs)
            .norm();
    return res;
}

struct PlateauHistogram {
    double total_mass = 0.0;
    double concentration_ratio = 0.0; ///< mass on {|f| >= sup - eps} / total
    double sup_f = 0.0;
    std::vector<double> weights;    ///< |q(zeta)|^2 over the grid
    std::vector<double> magnitudes; ///< |f(zeta)| over the grid
};

/// Where does |q|^2 dm concentrate relative to the level set {|f| = ||f||}?
inline PlateauHistogram plateau_histogram(const TruncatedPoly& q, const Evaluator& f,
                                          int grid_per_axis, double eps)
{
    const int d = q.box.dim();
    PlateauHistogram h;
    long long total = 1;
    for (int j = 0; j < d; ++j)
        total *= grid_per_axis;
    h.weights.reserve(static_cast<std::size_t>(total));
    h.magnitudes.reserve(static_cast<std::size_t>(total));
    std::vector<int> k(static_cast<std::size_t>(d), 0);
    std::vector<Complex> z(static_cast<std::size_t>(d));
    for (long long step = 0; step < total; ++step) {
        for (int j = 0; j < d; ++j)
            z[static_cast<std::size_t>(j)] = std::polar(
                1.0, 2.0 * std::numbers::pi * k[static_cast<std::size_t>(j)] / grid_per_axis);
        h.weights.push_back(std::norm(eval_poly(q, z)));
        h.magnitudes.push_back(std::abs(f(z)));
        for (int j = 0; j < d; ++j) {
            if (++k[static_cast<std::size_t>(j)] < grid_per_axis)
                break;
            k[static_cast<std::size_t>(j)] = 0;
        }
    }
    h.sup_f = *std::max_element(h.magnitudes.begin(), h.magnitudes.end());
    double mass_on = 0.0;
    for (std::size_t i = 0; i < h.weights.size(); ++i) {
        h.total_mass += h.weights[i];
        if (h.magnitudes[i] >= h.sup_f - eps)
            mass_on += h.weights[i];
    }
    h.total_mass /= static_cast<double>(total);
    h.concentration_ratio = h.total_mass > 0 ? mass_on / static_cast<double>(total) / h.total_mass : 0.0;
    return h;
}

struct ConvergenceRow {
    MultiIndex n;
    double sigma = 0.0;
    std::vector<double> sup_err; ///< per compact, masked near zeros of q*
    int pole_count = 0;          ///< near-zeros of q* at probed radii < 1
};

/// Sweep the scheme along a schedule and measure sup |f - sigma q/q*| on
/// closed polydisks of the given radii, skipping points with |q*| < mask_tol.
inline std::vector<ConvergenceRow> convergence_study(const Evaluator& fe,
                                                     const std::vector<MultiIndex>& schedule,
                                                     const std::vector<double>& compact_radii,
                                                     const PadeOptions& opts = {},
                                                     double mask_tol = 1e-3)
{
    std::vector<ConvergenceRow> rows;
    for (const MultiIndex& n : schedule) {
        const int d = static_cast<int>(n.size());
        const MultiIndexBox box(n);
        FourierTable tab = taylor_from_evaluator(
            fe, box, 0.5, std::vector<int>(static_cast<std::size_t>(d), grade(n) + 12));
        PadeReport rep = pade_step(tab, fe, n, opts);
        ConvergenceRow row;
        row.n = n;
        row.sigma = rep.sigma;
        for (std::size_t i = 0; i < rep.pole_probe.radii.size(); ++i)
            if (rep.pole_probe.radii[i] < 1.0)
                for (const auto& nz : rep.pole_probe.near_zeros)
                    row.pole_count += nz.radius == rep.pole_probe.radii[i] ? 1 : 0;
        for (double rc : compact_radii) {
            const int G = d <= 2 ? 24 : 8;
            long long total = 1;
            for (int j = 0; j < d; ++j)
                total *= G;
            std::vector<int> k(static_cast<std::size_t>(d), 0);
            std::vector<Complex> z(static_cast<std::size_t>(d));
            double err = 0.0;
            for (long long step = 0; step < total; ++step) {
                for (int j = 0; j < d; ++j)
                    z[static_cast<std::size_t>(j)] = std::polar(
                        rc, 2.0 * std::numbers::pi * k[static_cast<std::size_t>(j)] / G);
                const Complex qs = eval_poly(rep.q_star, z);
                if (std::abs(qs) >= mask_tol)
                    err = std::max(err,
                                   std::abs(fe(z) - rep.sigma * eval_poly(rep.q, z) / qs));
                for (int j = 0; j < d; ++j) {
                    if (++k[static_cast<std::size_t>(j)] < G)
                        break;
                    k[static_cast<std::size_t>(j)] = 0;
                }
            }
            row.sup_err.push_back(err);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace pade
} // namespace polyrat
