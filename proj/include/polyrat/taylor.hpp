#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "polyrat/poly.hpp"

namespace polyrat {

/// Taylor coefficients of a black-box holomorphic f over the box of n, by a
/// tensor discrete Fourier average on the radius-r torus grid:
///   c_a ~ r^{-|a|} * (1/prod K_j) sum_k f(r e^{i t_k}) e^{-i <a, t_k>}.
/// Exact for polynomials of per-axis degree < K_j; otherwise the aliasing is
/// controlled by sup|f| * sum_j r^{K_j}/(1-r^{K_j}), recorded in the returned
/// table's trunc_error_estimate.
inline FourierTable taylor_from_evaluator(const Evaluator& f, const MultiIndexBox& box,
                                          double radius = 0.5, std::vector<int> grid = {})
{
    const int d = box.dim();
    const MultiIndex& n = box.bound();
    if (grid.empty()) {
        grid.resize(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j)
            grid[static_cast<std::size_t>(j)] = n[static_cast<std::size_t>(j)] + 9;
    }
    if (static_cast<int>(grid.size()) != d)
        throw GridTooSmallError("taylor_from_evaluator: grid dimension mismatch");
    for (int j = 0; j < d; ++j)
        if (grid[static_cast<std::size_t>(j)] <= n[static_cast<std::size_t>(j)])
            throw GridTooSmallError("taylor_from_evaluator: K_j must exceed n_j");
    if (!(radius > 0.0 && radius < 1.0))
        throw DomainError("taylor_from_evaluator: radius must lie in (0,1)");

    // Per-axis twiddle factors exp(-2 pi i k a / K).
    std::vector<std::vector<std::vector<Complex>>> tw(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        const int K = grid[static_cast<std::size_t>(j)];
        auto& t = tw[static_cast<std::size_t>(j)];
        t.assign(static_cast<std::size_t>(K),
                 std::vector<Complex>(static_cast<std::size_t>(n[static_cast<std::size_t>(j)] + 1)));
        for (int k = 0; k < K; ++k)
            for (int a = 0; a <= n[static_cast<std::size_t>(j)]; ++a)
                t[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)] =
                    std::polar(1.0, -2.0 * std::numbers::pi * k * a / K);
    }

    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(box.size());
    std::vector<int> k(static_cast<std::size_t>(d), 0);
    std::vector<Complex> z(static_cast<std::size_t>(d));
    long long total = 1;
    for (int j = 0; j < d; ++j)
        total *= grid[static_cast<std::size_t>(j)];

    double sup_f = 0.0;
    for (long long step = 0; step < total; ++step) {
        for (int j = 0; j < d; ++j)
            z[static_cast<std::size_t>(j)] = std::polar(
                radius, 2.0 * std::numbers::pi * k[static_cast<std::size_t>(j)] /
                            grid[static_cast<std::size_t>(j)]);
        const Complex val = f(z);
        sup_f = std::max(sup_f, std::abs(val));
        for (int m = 0; m < box.size(); ++m) {
            const MultiIndex& a = box.at(m);
            Complex w = val;
            for (int j = 0; j < d; ++j)
                w *= tw[static_cast<std::size_t>(j)][static_cast<std::size_t>(
                    k[static_cast<std::size_t>(j)])][static_cast<std::size_t>(
                    a[static_cast<std::size_t>(j)])];
            acc[m] += w;
        }
        for (int j = 0; j < d; ++j) {
            if (++k[static_cast<std::size_t>(j)] < grid[static_cast<std::size_t>(j)])
                break;
            k[static_cast<std::size_t>(j)] = 0;
        }
    }

    for (int m = 0; m < box.size(); ++m)
        acc[m] *= std::pow(radius, -grade(box.at(m))) / static_cast<double>(total);

    double alias = 0.0;
    for (int j = 0; j < d; ++j) {
        const double rK = std::pow(radius, grid[static_cast<std::size_t>(j)]);
        alias += rK / (1.0 - rK);
    }
    return FourierTable(box, std::move(acc), sup_f * alias);
}

} // namespace polyrat
