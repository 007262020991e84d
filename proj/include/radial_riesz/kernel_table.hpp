#pragma once

// Cell-averaged samples of the weighted kernel g(x) = x^w I_{gamma,k}(x) on a log grid of
// ratios. Averaging (rather than point sampling) keeps the mass of the integrable diagonal
// singularity consistent under refinement.

#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "grid.hpp"
#include "kernel.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace radial_riesz {

struct KernelTable {
    KernelParams params;
    /// Weighting q and beta, w = n/q - beta (q = inf, beta = 0 means no weighting).
    double q = std::numeric_limits<double>::infinity();
    double beta = 0.0;
    /// Cell centres; cell m spans [x_m e^{-step/2}, x_m e^{step/2}].
    LogGrid grid;
    /// (1/step) * int_cell g(x) dx/x for every cell.
    std::vector<double> values;
    std::vector<RegimeTag> regime_tags;

    double weight() const { return std::isinf(q) ? -beta : params.n / q - beta; }
    double cell_left(std::size_t m) const { return std::exp(grid.log_node(m) - 0.5 * grid.step()); }
    double cell_right(std::size_t m) const { return std::exp(grid.log_node(m) + 0.5 * grid.step()); }
};

namespace detail {

/// Exponent of the leading behaviour of I near a = 1 (0 where the kernel stays bounded
/// or grows only logarithmically).
inline double diagonal_exponent(const KernelParams& p) {
    if (p.n == 1) return -p.gamma;
    return diagonal_regime(p) == DiagonalRegime::Power ? p.n - 1.0 - p.gamma : 0.0;
}

/// int_{ul}^{ur} e^{w u} I(e^u) du, with the diagonal u = 0 handled by graded quadrature.
inline double weighted_kernel_integral(const KernelParams& p, double w, double ul, double ur, double tol) {
    const auto g = [&](double u) { return std::exp(w * u) * eval_kernel_log(p, u, 1e-2 * tol); };
    const double width = ur - ul;
    if (ul < 0.0 && ur > 0.0) {
        const double e = diagonal_exponent(p);
        quad::Estimate left = quad::graded_endpoint([&](double t) { return g(-t); }, -ul, e, 1e-2 * tol);
        left += quad::graded_endpoint([&](double t) { return g(t); }, ur, e, 1e-2 * tol);
        quad::require_tolerance(left, tol, "singular kernel cell");
        return left.value;
    }
    if (ul == 0.0 || ur == 0.0) {
        const double e = diagonal_exponent(p);
        const quad::Estimate r = ul == 0.0 ? quad::graded_endpoint(g, width, e, 1e-2 * tol)
                                           : quad::graded_endpoint([&](double t) { return g(-t); }, width, e, 1e-2 * tol);
        quad::require_tolerance(r, tol, "kernel cell at the diagonal");
        return r.value;
    }
    const double distance = std::min(std::abs(ul), std::abs(ur));
    if (distance >= 4.0 * width) {
        const double g5 = boost::math::quadrature::gauss<double, 5>::integrate(g, ul, ur);
        const double g4 = boost::math::quadrature::gauss<double, 4>::integrate(g, ul, ur);
        if (std::abs(g5 - g4) <= 1e-2 * tol * std::abs(g5)) return g5;
    }
    const quad::Estimate e = quad::kronrod(g, ul, ur, 1e-2 * tol);
    quad::require_tolerance(e, tol, "kernel cell");
    return e.value;
}

} // namespace detail

/// Builds the cell-averaged table of g(x) = x^{n/q - beta} I_{gamma,k}(x) over `grid`.
inline KernelTable build_table(const KernelParams& params, const LogGrid& grid,
                               double q = std::numeric_limits<double>::infinity(), double beta = 0.0,
                               double tol = 1e-10) {
    KernelTable t;
    t.params = params;
    t.q = q;
    t.beta = beta;
    t.grid = grid;
    const std::size_t n = grid.count();
    t.values.assign(n, 0.0);
    t.regime_tags.assign(n, RegimeTag::Smooth);
    const double w = t.weight();
    const double half = 0.5 * grid.step();
    parallel_for(n, [&](std::size_t m) {
        const double u = grid.log_node(m);
        // Snap cell edges that straddle the diagonal within rounding of zero.
        double ul = u - half;
        double ur = u + half;
        if (std::abs(ul) < 1e-14 * half) ul = 0.0;
        if (std::abs(ur) < 1e-14 * half) ur = 0.0;
        t.values[m] = detail::weighted_kernel_integral(params, w, ul, ur, tol) / grid.step();
        const double a_lo = std::exp(ul);
        const double a_hi = std::exp(ur);
        if (a_hi >= 1.0 - near_diagonal_halfwidth && a_lo <= 1.0 + near_diagonal_halfwidth)
            t.regime_tags[m] = RegimeTag::NearDiagonal;
        else if (a_lo >= tail_ratio || a_hi <= 1.0 / tail_ratio)
            t.regime_tags[m] = RegimeTag::Tail;
    });
    return t;
}

} // namespace radial_riesz
