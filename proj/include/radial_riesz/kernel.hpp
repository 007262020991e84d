#pragma once

// The reduced spherical kernel
//
//     I_{gamma,k}(a) = int_{-1}^{1} (1 - t^2)^k (1 - 2 a t + a^2)^{-gamma/2} dt,  k = (n-3)/2,
//
// which turns the Riesz potential of a radial function into a convolution on
// the multiplicative group (0, inf).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"

namespace radial_riesz {

struct KernelParams {
    int n = 3;
    double gamma = 1.0;
    /// (n-3)/2; unused for n = 1, where the two-point kernel applies.
    double k = 0.0;

    KernelParams() = default;
    KernelParams(int dim, double g) : n(dim), gamma(g), k((dim - 3) / 2.0) {
        if (dim < 1) throw domain_error("dimension n must be >= 1");
        if (!(g > 0.0 && g < dim)) throw domain_error("gamma must lie in (0, n)");
    }

    /// Parameters of the kernel with weight exponent k (n = 2k + 3).
    static KernelParams from_k(double k, double gamma) {
        const double n = 2.0 * k + 3.0;
        if (n != std::round(n)) throw domain_error("k must be an integer or half-integer");
        return KernelParams(static_cast<int>(n), gamma);
    }

    friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

/// Behaviour of I_{gamma,k} as a -> 1.
enum class DiagonalRegime { Bounded, Logarithmic, Power };

inline DiagonalRegime diagonal_regime(const KernelParams& p) {
    const double critical = p.n - 1.0;
    if (std::abs(p.gamma - critical) < 1e-12) return DiagonalRegime::Logarithmic;
    return p.gamma < critical ? DiagonalRegime::Bounded : DiagonalRegime::Power;
}

/// Where a ratio value sits relative to the kernel's asymptotic regimes.
enum class RegimeTag { Smooth, NearDiagonal, Tail };

inline std::string_view to_string(RegimeTag t) {
    switch (t) {
    case RegimeTag::Smooth: return "Smooth";
    case RegimeTag::NearDiagonal: return "NearDiagonal";
    case RegimeTag::Tail: return "Tail";
    }
    return "?";
}

/// Ratios with |1 - a| <= 1/2 are near-diagonal; a >= 1000 or a <= 1/1000 is the tail.
inline constexpr double near_diagonal_halfwidth = 0.5;
inline constexpr double tail_ratio = 1000.0;

inline RegimeTag regime_of(double a) {
    if (std::abs(1.0 - a) <= near_diagonal_halfwidth) return RegimeTag::NearDiagonal;
    if (a >= tail_ratio || a <= 1.0 / tail_ratio) return RegimeTag::Tail;
    return RegimeTag::Smooth;
}

/// C_k = int_{-1}^{1} (1-t^2)^k dt = sqrt(pi) Gamma(k+1) / Gamma(k+3/2).
inline double tail_constant(double k) {
    if (k < -0.5) throw domain_error("tail_constant requires k >= -1/2");
    return std::sqrt(std::numbers::pi) * std::exp(std::lgamma(k + 1.0) - std::lgamma(k + 1.5));
}

/// Area of the unit sphere S^{m} in R^{m+1}: 2 pi^{(m+1)/2} / Gamma((m+1)/2).
/// m = 0 gives 2 (two points); m = -1 is defined as 1, which makes the
/// n = 1 potential formula uniform with the others.
inline double sphere_area(int m) {
    if (m == -1) return 1.0;
    if (m < -1) throw domain_error("sphere_area: dimension must be >= -1");
    const double h = 0.5 * (m + 1);
    return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

namespace detail {

inline double two_point_kernel(double gamma, double a, double delta) {
    return std::pow(std::abs(delta), -gamma) + std::pow(1.0 + a, -gamma);
}

/// I(1) in closed form (finite only for gamma < n-1): 2^{2k+1-gamma} B(k+1, k+1-gamma/2).
inline double kernel_at_one(const KernelParams& p) {
    const double k = p.k;
    const double b = k + 1.0 - 0.5 * p.gamma;
    const double log_beta = std::lgamma(k + 1.0) + std::lgamma(b) - std::lgamma(k + 1.0 + b);
    return std::exp((2.0 * k + 1.0 - p.gamma) * std::numbers::ln2 + log_beta);
}

/// Kernel at ratio a with delta = 1 - a supplied separately (so it keeps full precision near a = 1).
///
/// With t = cos(theta) the weight (1-t^2)^k dt becomes sin^{n-2}(theta) dtheta and
///     1 - 2 a cos(theta) + a^2 = delta^2 + 4 a sin^2(theta/2),
/// which is smooth except for the near-pole at theta ~ i |delta| / sqrt(a). Far from the
/// diagonal the theta integral is done directly; close to it the variable theta = d tau,
/// d = |delta| / sqrt(a), scales the peak to unit width and [0, pi/d] is cut into dyadic pieces.
inline double kernel_value(const KernelParams& p, double a, double delta, double tol) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw domain_error("kernel ratio a must be finite and >= 0");
    if (p.n == 1) {
        if (delta == 0.0) return std::numeric_limits<double>::infinity();
        return two_point_kernel(p.gamma, a, delta);
    }
    if (delta == 0.0) {
        if (diagonal_regime(p) != DiagonalRegime::Bounded) return std::numeric_limits<double>::infinity();
        return kernel_at_one(p);
    }

    const int m = p.n - 2;  // power of sin(theta)
    const double gamma = p.gamma;
    const double sqrt_a = std::sqrt(a);
    const double d = std::abs(delta) / (sqrt_a > 0.0 ? sqrt_a : 1.0);
    const double piece_tol = 1e-2 * tol;

    if (a == 0.0 || d >= 0.5) {
        const auto integrand = [&](double theta) {
            const double s = std::sin(theta);
            const double dist = std::hypot(delta, 2.0 * sqrt_a * std::sin(0.5 * theta));
            return (m == 0 ? 1.0 : std::pow(s, m)) * std::pow(dist, -gamma);
        };
        const quad::Estimate e = quad::kronrod(integrand, 0.0, std::numbers::pi, piece_tol);
        quad::require_tolerance(e, tol, "kernel quadrature");
        return e.value;
    }

    const auto integrand = [&](double tau) {
        const double theta = d * tau;
        const double rho = 2.0 * std::sin(0.5 * theta) / d;
        double weight = 1.0;
        if (m > 0) {
            const double sinc = theta == 0.0 ? 1.0 : std::sin(theta) / theta;
            weight = std::pow(tau * sinc, m);
        }
        return weight * std::pow(1.0 + rho * rho, -0.5 * gamma);
    };
    const double upper = std::numbers::pi / d;
    quad::Estimate total = quad::kronrod(integrand, 0.0, std::min(1.0, upper), piece_tol);
    for (double lo = 1.0; lo < upper; lo *= 2.0)
        total += quad::kronrod(integrand, lo, std::min(2.0 * lo, upper), piece_tol);
    quad::require_tolerance(total, tol, "kernel quadrature");
    const double log_prefactor = (p.n - 1.0 - gamma) * std::log(std::abs(delta)) - 0.5 * (p.n - 1.0) * std::log(a);
    return total.value * std::exp(log_prefactor);
}

} // namespace detail

/// I_{gamma,k}(a). Returns +inf at a = 1 when gamma >= n-1 (the diagonal singularity is not
/// integrable in t there). Throws tolerance_failure if the requested relative accuracy is
/// not reached within the subdivision budget.
inline double eval_kernel(const KernelParams& p, double a, double tol = quad::default_tolerance) {
    return detail::kernel_value(p, a, 1.0 - a, tol);
}

/// Same as eval_kernel for a = exp(u), keeping precision in 1 - a for small |u|.
inline double eval_kernel_log(const KernelParams& p, double u, double tol = quad::default_tolerance) {
    return detail::kernel_value(p, std::exp(u), -std::expm1(u), tol);
}

/// Elementary antiderivative for n = 3 (k = 0):
///     ((1+a)^{2-gamma} - |1-a|^{2-gamma}) / (a (2-gamma)),   gamma != 2,
///     ln((1+a)/|1-a|) / a,                                   gamma == 2.
inline double eval_kernel_closed_n3(double gamma, double a) {
    if (!(a > 0.0)) throw domain_error("closed form requires a > 0");
    if (!(gamma > 0.0 && gamma < 3.0)) throw domain_error("gamma must lie in (0, 3)");
    if (a == 1.0 && gamma >= 2.0) return std::numeric_limits<double>::infinity();
    if (std::abs(gamma - 2.0) < 1e-12) return std::log((1.0 + a) / std::abs(1.0 - a)) / a;
    const double e = 2.0 - gamma;
    return (std::pow(1.0 + a, e) - std::pow(std::abs(1.0 - a), e)) / (a * e);
}

/// Shape function of the near-diagonal majorant: 1, log(1/|1-a|) or |1-a|^{n-1-gamma}.
inline double diagonal_shape(const KernelParams& p, double a) {
    const double h = std::abs(1.0 - a);
    if (p.n == 1) return std::pow(h, -p.gamma);
    switch (diagonal_regime(p)) {
    case DiagonalRegime::Bounded: return 1.0;
    case DiagonalRegime::Logarithmic: return std::log(1.0 / h);
    case DiagonalRegime::Power: return std::pow(h, p.n - 1.0 - p.gamma);
    }
    return 1.0;
}

/// Empirically calibrated near-diagonal majorant C_{k,gamma} * shape(a), valid for
/// |1 - a| in (0, 1/2]. C is 1.1 times the largest observed I / shape over
/// |1 - a| in [2^-20, 1/2]; a testing aid, not a certified bound.
class KernelMajorant {
public:
    explicit KernelMajorant(const KernelParams& p) : params_(p) {
        double sup = 0.0;
        for (int j = 4; j <= 80; ++j) {
            const double h = std::exp2(-0.25 * j);
            for (double a : {1.0 - h, 1.0 + h}) {
                const double ratio = detail::kernel_value(p, a, 1.0 - a, quad::default_tolerance) /
                                     diagonal_shape(p, a);
                sup = std::max(sup, ratio);
            }
        }
        constant_ = 1.1 * sup;
    }

    double constant() const { return constant_; }
    const KernelParams& params() const { return params_; }

    double operator()(double a) const {
        const double h = std::abs(1.0 - a);
        if (h == 0.0) throw domain_error("kernel_bound is undefined at a = 1");
        if (h > near_diagonal_halfwidth) throw precondition_error("kernel_bound requires |1 - a| <= 1/2");
        return constant_ * diagonal_shape(params_, a);
    }

private:
    KernelParams params_;
    double constant_ = 0.0;
};

/// One-shot majorant evaluation; calibrates C_{k,gamma} on every call.
inline double kernel_bound(const KernelParams& p, double a) { return KernelMajorant(p)(a); }

} // namespace radial_riesz
