#pragma once

// Log-uniform radial grids, sampled radial profiles, weighted L^p(R^n) norms
// through polar coordinates, and distribution functions / weak-L^s quasinorms
// with respect to the Haar measure dr/r.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "kernel.hpp"

namespace radial_riesz {

/// Nodes r_j = r_min e^{j step}, j = 0..count-1, step = ln(r_max/r_min)/(count-1).
class LogGrid {
public:
    LogGrid() = default;
    LogGrid(double r_min, double r_max, std::size_t count)
        : r_min_(r_min), r_max_(r_max), count_(count) {
        if (!(r_min > 0.0) || !std::isfinite(r_max) || !(r_max > r_min))
            throw precondition_error("log grid requires 0 < r_min < r_max");
        if (count < 2) throw precondition_error("log grid requires at least 2 nodes");
        log_min_ = std::log(r_min);
        step_ = (std::log(r_max) - log_min_) / static_cast<double>(count - 1);
        if (!(step_ > 0.0)) throw precondition_error("log grid has zero width");
    }

    /// Grid of `count` nodes with spacing `step` in ln r, starting at ln r = log_min.
    static LogGrid from_log(double log_min, double step, std::size_t count) {
        LogGrid g(std::exp(log_min), std::exp(log_min + step * static_cast<double>(count - 1)), count);
        g.log_min_ = log_min;
        g.step_ = step;
        return g;
    }

    /// count nodes spanning [1/R, R] symmetrically in ln r.
    static LogGrid symmetric(double R, std::size_t count) {
        if (!(R > 1.0)) throw precondition_error("symmetric log grid requires R > 1");
        const double L = std::log(R);
        return from_log(-L, 2.0 * L / static_cast<double>(count - 1), count);
    }

    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }
    std::size_t count() const { return count_; }
    double step() const { return step_; }
    double log_min() const { return log_min_; }

    double log_node(std::size_t j) const { return log_min_ + step_ * static_cast<double>(j); }
    double node(std::size_t j) const { return std::exp(log_node(j)); }

    std::vector<double> nodes() const {
        std::vector<double> r(count_);
        for (std::size_t j = 0; j < count_; ++j) r[j] = node(j);
        return r;
    }

    /// Contiguous run of nodes [first, first+count) as a grid of its own.
    LogGrid subgrid(std::size_t first, std::size_t count) const {
        if (count < 2 || first + count > count_) throw precondition_error("subgrid out of range");
        return from_log(log_node(first), step_, count);
    }

    /// Same spacing, window widened by `factor` at both ends (node alignment preserved).
    LogGrid widened(double factor) const {
        const auto extra = static_cast<std::size_t>(std::ceil(std::log(factor) / step_));
        return from_log(log_min_ - step_ * static_cast<double>(extra), step_, count_ + 2 * extra);
    }

    /// Grid of ratios e^{m step}, m = -(count-1)..(count-1): every quotient of two nodes.
    LogGrid ratio_grid() const {
        return from_log(-step_ * static_cast<double>(count_ - 1), step_, 2 * count_ - 1);
    }

private:
    double r_min_ = 1.0;
    double r_max_ = 2.0;
    std::size_t count_ = 2;
    double step_ = 0.0;
    double log_min_ = 0.0;
};

/// Radial profile v0 sampled at the nodes of a log grid. `edge_margin` counts the nodes at
/// each end whose values are edge-contaminated (set by the potential evaluator).
struct RadialProfile {
    LogGrid grid;
    std::vector<double> samples;
    std::size_t edge_margin = 0;

    RadialProfile() = default;
    RadialProfile(LogGrid g, std::vector<double> s, std::size_t margin = 0)
        : grid(std::move(g)), samples(std::move(s)), edge_margin(margin) {
        if (samples.size() != grid.count()) throw precondition_error("profile length does not match grid");
        for (std::size_t j = 0; j < samples.size(); ++j)
            if (!std::isfinite(samples[j])) {
                std::ostringstream os;
                os << "non-finite sample at node " << j << " (r = " << grid.node(j) << ")";
                throw precondition_error(os.str());
            }
        if (2 * edge_margin + 2 > samples.size() && edge_margin > 0)
            throw precondition_error("edge margin leaves fewer than 2 interior nodes");
    }

    std::size_t size() const { return samples.size(); }

    /// The profile restricted to nodes that are not edge-contaminated.
    RadialProfile interior() const {
        if (edge_margin == 0) return *this;
        const std::size_t n = samples.size() - 2 * edge_margin;
        std::vector<double> s(samples.begin() + static_cast<std::ptrdiff_t>(edge_margin),
                              samples.begin() + static_cast<std::ptrdiff_t>(edge_margin + n));
        return {grid.subgrid(edge_margin, n), std::move(s)};
    }

    RadialProfile scaled(double c) const {
        RadialProfile out = *this;
        for (double& v : out.samples) v *= c;
        return out;
    }
};

/// Pointwise evaluation of f at the grid nodes; a non-finite value is an error naming the node.
template <class F>
RadialProfile sample(F&& f, const LogGrid& grid) {
    std::vector<double> s(grid.count());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = f(grid.node(j));
    return {grid, std::move(s)};
}

namespace detail {

inline void require_exponent(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw domain_error("Lebesgue exponent p must satisfy 1 <= p < inf");
}

// Trapezoid rule in ln r of |v_j / scale|^p * weight_j, with weight_j = exp(e ln r_j).
inline double trapezoid_power(const RadialProfile& v, double p, double e, double scale) {
    const std::size_t n = v.size();
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (v.samples[j] == 0.0) continue;
        const double term = std::pow(std::abs(v.samples[j]) / scale, p) * std::exp(e * v.grid.log_node(j));
        sum += (j == 0 || j + 1 == n) ? 0.5 * term : term;
    }
    return sum * v.grid.step();
}

inline double max_abs(const RadialProfile& v) {
    double m = 0.0;
    for (double x : v.samples) m = std::max(m, std::abs(x));
    return m;
}

} // namespace detail

/// || |x|^a v ||_{L^p(R^n)} = omega_{n-1}^{1/p} ( int |v0(r)|^p r^{ap+n} dr/r )^{1/p},
/// with the radial integral truncated to the grid and done by the trapezoid rule in ln r.
inline double weighted_lp_norm(const RadialProfile& v, double p, double a, int n) {
    detail::require_exponent(p);
    if (n < 1) throw domain_error("dimension n must be >= 1");
    const double m = detail::max_abs(v);
    if (m == 0.0) return 0.0;
    const double s = detail::trapezoid_power(v, p, a * p + n, m);
    return m * std::pow(sphere_area(n - 1) * s, 1.0 / p);
}

/// || g ||_{L^p(dr/r)} over the grid, trapezoid rule in ln r.
inline double mu_lp_norm(const RadialProfile& g, double p) {
    detail::require_exponent(p);
    const double m = detail::max_abs(g);
    if (m == 0.0) return 0.0;
    return m * std::pow(detail::trapezoid_power(g, p, 0.0, m), 1.0 / p);
}

namespace detail {

// Measure (dr/r) of {|g| > lambda} (or >= when inclusive), |g| interpolated linearly in ln r.
inline double superlevel_measure(const RadialProfile& g, double lambda, bool inclusive) {
    const auto above = [&](double x) { return inclusive ? x >= lambda : x > lambda; };
    double cells = 0.0;
    for (std::size_t j = 0; j + 1 < g.size(); ++j) {
        const double a = std::abs(g.samples[j]);
        const double b = std::abs(g.samples[j + 1]);
        const bool ia = above(a);
        const bool ib = above(b);
        if (ia && ib) {
            cells += 1.0;
        } else if (ia != ib) {
            const double t = (lambda - a) / (b - a);  // crossing position within the cell
            cells += ia ? t : 1.0 - t;
        }
    }
    return cells * g.grid.step();
}

} // namespace detail

/// d_g(lambda) = mu({ |g| > lambda }) for the piecewise-linear (in ln r) interpolant of g.
inline double distribution_function(const RadialProfile& g, double lambda) {
    if (!(lambda > 0.0)) throw domain_error("distribution_function requires lambda > 0");
    return detail::superlevel_measure(g, lambda, false);
}

/// Ladder density of the weak-norm supremum.
inline constexpr int weak_ladder_per_decade = 64;

/// sup_lambda lambda d_g(lambda)^{1/s}, the supremum taken over the decade-aligned ladder
/// lambda = 10^{i/64} between the smallest positive and the largest |g| (plus both ends).
/// Each ladder point uses the left limit d_g(lambda-) = mu(|g| >= lambda), so the value is
/// the supremum over lambda' < lambda as well.
inline double weak_quasinorm(const RadialProfile& g, double s) {
    if (!(s > 0.0)) throw domain_error("weak_quasinorm requires s > 0");
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double x : g.samples) {
        const double ax = std::abs(x);
        if (ax > 0.0) lo = std::min(lo, ax);
        hi = std::max(hi, ax);
    }
    if (hi == 0.0) return 0.0;

    const double total = detail::superlevel_measure(g, lo, true);
    const double inv_s = 1.0 / s;
    double best = 0.0;
    const auto visit = [&](double lambda) {
        best = std::max(best, lambda * std::pow(detail::superlevel_measure(g, lambda, true), inv_s));
    };
    visit(hi);
    visit(lo);
    const int top = static_cast<int>(std::floor(weak_ladder_per_decade * std::log10(hi)));
    const int bottom = static_cast<int>(std::ceil(weak_ladder_per_decade * std::log10(lo)));
    for (int i = top; i >= bottom; --i) {
        const double lambda = std::pow(10.0, static_cast<double>(i) / weak_ladder_per_decade);
        if (lambda > hi || lambda < lo) continue;
        // Nothing below this level can beat the current best: d_g never exceeds `total`.
        if (lambda * std::pow(total, inv_s) < best) break;
        visit(lambda);
    }
    return best;
}

/// Relative change of a truncated-grid measurement when the window is widened tenfold at
/// both ends (same spacing). Experiments use it to show truncation insensitivity.
inline double truncation_sensitivity(const std::function<double(const LogGrid&)>& measure,
                                     const LogGrid& grid, double factor = 10.0) {
    const double base = measure(grid);
    const double wide = measure(grid.widened(factor));
    return std::abs(wide - base) / std::max(std::abs(wide), std::numeric_limits<double>::min());
}

} // namespace radial_riesz
