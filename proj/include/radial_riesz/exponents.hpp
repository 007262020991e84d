#pragma once

// Exponent bookkeeping for the weighted fractional-integral inequality
//
//     || |x|^{-beta} T_gamma v ||_{L^q(R^n)} <= C || |x|^alpha v ||_{L^p(R^n)}
//
// with the admissibility regions of the classical power-weight theorem
// (Stein-Weiss) and of its radial improvement.

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace radial_riesz {

/// Tolerance on the scaling relation below which a tuple counts as consistent.
inline constexpr double scaling_tolerance = 1e-12;

struct ExponentTuple {
    int n = 3;
    double gamma = 1.0;
    double p = 2.0;
    double q = 2.0;
    double alpha = 0.0;
    double beta = 0.0;

    /// Hoelder conjugate p' = p/(p-1); +inf for p = 1.
    double p_prime() const {
        return p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
    }

    /// Young exponent s with 1/s = 1 + 1/q - 1/p.
    double young_exponent() const { return 1.0 / (1.0 + 1.0 / q - 1.0 / p); }

    /// Weight exponent n/q - beta carried by the convolution factorisation.
    double convolution_weight() const { return n / q - beta; }

    friend bool operator==(const ExponentTuple&, const ExponentTuple&) = default;
};

enum class AdmissibilityClass { SteinWeiss, RadialOnly, Inadmissible };

inline std::string_view to_string(AdmissibilityClass c) {
    switch (c) {
    case AdmissibilityClass::SteinWeiss: return "SteinWeiss";
    case AdmissibilityClass::RadialOnly: return "RadialOnly";
    case AdmissibilityClass::Inadmissible: return "Inadmissible";
    }
    return "?";
}

inline AdmissibilityClass admissibility_class_from_string(std::string_view s) {
    if (s == "SteinWeiss") return AdmissibilityClass::SteinWeiss;
    if (s == "RadialOnly") return AdmissibilityClass::RadialOnly;
    if (s == "Inadmissible") return AdmissibilityClass::Inadmissible;
    throw precondition_error("unknown admissibility class '" + std::string(s) + "'");
}

/// One checked condition: `lhs (op) rhs`.
struct ConditionCheck {
    std::string condition;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

struct AdmissibilityVerdict {
    AdmissibilityClass cls = AdmissibilityClass::Inadmissible;
    std::vector<ConditionCheck> reasons;
    bool boundary = false;

    /// Truth value of a named condition; throws if the verdict does not carry it.
    bool holds(std::string_view condition) const {
        for (const auto& r : reasons)
            if (r.condition == condition) return r.holds;
        throw precondition_error("verdict has no condition '" + std::string(condition) + "'");
    }
};

// Condition identifiers reported in AdmissibilityVerdict::reasons.
inline constexpr std::string_view cond_alpha = "alpha < n/p'";
inline constexpr std::string_view cond_beta = "beta < n/q";
inline constexpr std::string_view cond_stein_weiss = "alpha + beta >= 0";
inline constexpr std::string_view cond_radial = "alpha + beta >= (n-1)(1/q - 1/p)";
inline constexpr std::string_view cond_radial_strict = "alpha + beta > (n-1)(1/q - 1/p)";

namespace detail {

inline void require_finite(const ExponentTuple& t) {
    for (double v : {t.gamma, t.p, t.q, t.alpha, t.beta})
        if (!std::isfinite(v)) throw domain_error("exponent tuple has a non-finite entry");
    if (t.n < 1) throw domain_error("dimension n must be >= 1");
}

inline bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= scaling_tolerance * std::max(1.0, std::abs(b));
}

} // namespace detail

/// 1/q - 1/p - (gamma+alpha+beta)/n + 1; zero for a tuple obeying the scaling relation.
inline double scaling_residual(const ExponentTuple& t) {
    detail::require_finite(t);
    if (!(t.p > 0.0) || !(t.q > 0.0)) throw domain_error("p and q must be positive");
    return 1.0 / t.q - 1.0 / t.p - (t.gamma + t.alpha + t.beta) / t.n + 1.0;
}

inline bool is_consistent(const ExponentTuple& t) {
    return std::abs(scaling_residual(t)) <= scaling_tolerance;
}

/// Solves the scaling relation for q.
inline double solve_q(int n, double gamma, double p, double alpha, double beta) {
    ExponentTuple probe{n, gamma, p, 1.0, alpha, beta};
    detail::require_finite(probe);
    if (!(p > 0.0)) throw domain_error("p must be positive");
    const double inv_q = 1.0 / p + (gamma + alpha + beta) / n - 1.0;
    if (!(inv_q > 0.0) || inv_q > 1.0 / p) {
        std::ostringstream os;
        os << "no admissible q: scaling relation gives 1/q = " << inv_q << ", outside (0, 1/p]";
        throw precondition_error(os.str());
    }
    return 1.0 / inv_q;
}

/// Validates the standing assumptions shared by classify and the experiments.
inline void validate_tuple(const ExponentTuple& t) {
    detail::require_finite(t);
    if (!(t.gamma > 0.0 && t.gamma < t.n)) throw domain_error("gamma must lie in (0, n)");
    if (t.p < 1.0) throw domain_error("p must be >= 1");
    if (!(t.q >= t.p)) throw domain_error("q must satisfy p <= q < inf");
    const double r = scaling_residual(t);
    if (std::abs(r) > scaling_tolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "scaling relation violated by " << r;
        throw inconsistent_scaling(os.str(), r);
    }
}

/// Classifies a consistent tuple into the Stein-Weiss region, the radial-only
/// extension, or neither. Equalities are detected to within scaling_tolerance;
/// a strict condition met with equality fails and sets `boundary`.
inline AdmissibilityVerdict classify(const ExponentTuple& t) {
    validate_tuple(t);

    AdmissibilityVerdict v;
    const auto check = [&](std::string_view name, double lhs, double rhs, bool strict) {
        const bool eq = detail::nearly_equal(lhs, rhs);
        const bool holds = eq ? !strict : (strict ? lhs < rhs : lhs <= rhs);
        if (eq) v.boundary = true;
        v.reasons.push_back({std::string(name), lhs, rhs, holds});
        return holds;
    };
    const auto check_ge = [&](std::string_view name, double lhs, double rhs, bool strict) {
        const bool eq = detail::nearly_equal(lhs, rhs);
        const bool holds = eq ? !strict : lhs > rhs;
        if (eq) v.boundary = true;
        v.reasons.push_back({std::string(name), lhs, rhs, holds});
        return holds;
    };

    const double n = t.n;
    const double sum = t.alpha + t.beta;
    const bool alpha_ok = check(cond_alpha, t.alpha, n * (1.0 - 1.0 / t.p), true);
    const bool beta_ok = check(cond_beta, t.beta, n / t.q, true);
    const bool sw_ok = check_ge(cond_stein_weiss, sum, 0.0, false);
    const bool p_is_one = t.p == 1.0;
    const bool radial_ok = check_ge(p_is_one ? cond_radial_strict : cond_radial, sum,
                                    (n - 1.0) * (1.0 / t.q - 1.0 / t.p), p_is_one);

    if (alpha_ok && beta_ok && radial_ok)
        v.cls = sw_ok ? AdmissibilityClass::SteinWeiss : AdmissibilityClass::RadialOnly;
    else
        v.cls = AdmissibilityClass::Inadmissible;
    return v;
}

/// Membership in the radial region (the RadialOnly predicate, which SteinWeiss tuples also satisfy).
inline bool radial_admissible(const AdmissibilityVerdict& v) {
    return v.cls != AdmissibilityClass::Inadmissible;
}

/// Membership in the classical Stein-Weiss region, evaluated from the verdict's reasons.
inline bool stein_weiss_admissible(const AdmissibilityVerdict& v) {
    return v.holds(cond_alpha) && v.holds(cond_beta) && v.holds(cond_stein_weiss);
}

} // namespace radial_riesz
