#pragma once

// Adaptive quadrature used by the kernel, potential and lab modules:
// global-adaptive Gauss-Kronrod (G10/K21, node tables from Boost.Math) and a
// dyadically graded rule for integrands with an algebraic endpoint singularity.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "errors.hpp"

namespace radial_riesz::quad {

/// Default relative tolerance for kernel-level quadrature.
inline constexpr double default_tolerance = 1e-10;
/// Subdivision budget (2^20 intervals).
inline constexpr std::size_t max_intervals = std::size_t{1} << 20;

struct Estimate {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;

    Estimate& operator+=(const Estimate& o) {
        value += o.value;
        error += o.error;
        l1 += o.l1;
        return *this;
    }
};

namespace detail {

struct Panel {
    double a, b;
    Estimate est;
    bool operator<(const Panel& o) const { return est.error < o.est.error; }
};

// K21 with embedded G10 on [a, b]. The error estimate is the raw |K21 - G10|.
template <class F>
Estimate kronrod21(F& f, double a, double b) {
    using gk = boost::math::quadrature::gauss_kronrod<double, 21>;
    using g = boost::math::quadrature::gauss<double, 10>;
    const auto& x = gk::abscissa();
    const auto& wk = gk::weights();
    const auto& wg = g::weights();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f0 = f(mid);
    double k = wk[0] * f0;
    double gsum = 0.0;
    double l1 = wk[0] * std::abs(f0);
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double fl = f(mid - half * x[i]);
        const double fr = f(mid + half * x[i]);
        k += wk[i] * (fl + fr);
        l1 += wk[i] * (std::abs(fl) + std::abs(fr));
        if (i % 2 == 1) gsum += wg[(i - 1) / 2] * (fl + fr);
    }
    return {k * half, std::abs(k - gsum) * half, l1 * std::abs(half)};
}

} // namespace detail

/// Global-adaptive Gauss-Kronrod on [a, b]: the panel with the largest error estimate is
/// bisected until the summed estimate is below tol * |integral| (or below tol * L1 when the
/// integral cancels) or the interval budget is spent. Callers check the returned error.
template <class F>
Estimate kronrod(F&& f, double a, double b, double tol = 1e-12, std::size_t budget = 4096) {
    if (a == b) return {};
    std::priority_queue<detail::Panel> heap;
    Estimate total = detail::kronrod21(f, a, b);
    heap.push({a, b, total});
    std::size_t panels = 1;
    const auto done = [&] {
        const double scale = std::max(std::abs(total.value), 1e-3 * total.l1);
        return total.error <= tol * scale;
    };
    while (!done() && panels < std::min(budget, max_intervals)) {
        const detail::Panel worst = heap.top();
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        if (m <= worst.a || m >= worst.b) break;  // interval exhausted in floating point
        const Estimate left = detail::kronrod21(f, worst.a, m);
        const Estimate right = detail::kronrod21(f, m, worst.b);
        total.value += left.value + right.value - worst.est.value;
        total.error += left.error + right.error - worst.est.error;
        total.l1 += left.l1 + right.l1 - worst.est.l1;
        heap.push({worst.a, m, left});
        heap.push({m, worst.b, right});
        ++panels;
    }
    if (heap.size() > 1) {
        // Re-sum to shed the cancellation accumulated by the running updates.
        total = {};
        while (!heap.empty()) {
            total += heap.top().est;
            heap.pop();
        }
    }
    return total;
}

/// Fixed 7-point Gauss-Legendre on [a, b].
template <class F>
double gauss7(F&& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 7>::integrate(f, a, b);
}

/// Raises tolerance_failure if the accumulated estimate misses the relative target.
inline void require_tolerance(const Estimate& e, double tol, const std::string& what) {
    const double scale = std::max({std::abs(e.value), 1e-3 * e.l1, std::numeric_limits<double>::min()});
    if (!(e.error <= tol * scale) || !std::isfinite(e.value))
        throw tolerance_failure(what + " did not reach relative tolerance " + std::to_string(tol),
                                e.error / scale);
}

/// Integral of f over (0, length] where f(t) behaves like t^exponent (exponent > -1) as t -> 0.
/// f receives the distance t from the singular endpoint. The interval is split into dyadic
/// pieces [length 2^-(j+1), length 2^-j]; once successive pieces decay at the rate of the
/// power law, the part below the last piece is added as its geometric remainder.
template <class F>
Estimate graded_endpoint(F&& f, double length, double exponent, double tol = 1e-12) {
    if (!(exponent > -1.0)) throw domain_error("graded_endpoint: singularity exponent must exceed -1");
    Estimate total;
    const double ratio = std::pow(2.0, -(exponent + 1.0));  // piece-to-piece decay of t^exponent
    double hi = length;
    double last = 0.0;
    double prev = 0.0;
    double uncertainty = 0.0;
    for (int j = 0; j < 4000; ++j) {
        const double lo = 0.5 * hi;
        const Estimate piece = kronrod(f, lo, hi, tol);
        total += piece;
        prev = last;
        last = piece.value;
        hi = lo;
        if (j < 4) continue;
        if (last == 0.0) {
            uncertainty = 0.0;
            break;
        }
        const double observed = last / prev;
        uncertainty = std::abs(observed - ratio) * std::abs(last) / ((1.0 - ratio) * (1.0 - ratio));
        if (uncertainty <= 1e-2 * tol * std::abs(total.value)) break;
        if (hi < 1e-250) break;
    }
    const double remainder = last * ratio / (1.0 - ratio);
    total.value += remainder;
    total.error += uncertainty;
    total.l1 += std::abs(remainder);
    return total;
}

} // namespace radial_riesz::quad
