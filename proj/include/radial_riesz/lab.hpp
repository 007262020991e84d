#pragma once

// Numerical experiments around the weighted inequality
//
//     || |x|^{-beta} T_gamma v ||_{L^q} <= C || |x|^alpha v ||_{L^p}:
// ratio measurements over test families, the n = 3 counterexample probe, the split of the
// convolution kernel into a weak-L^s diagonal piece and an L^s remainder, and the Sobolev
// embedding ratio.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "exponents.hpp"
#include "grid.hpp"
#include "kernel.hpp"
#include "potential.hpp"

namespace radial_riesz {

// ---------------------------------------------------------------------------------------
// Test families

struct Gaussian {
    double scale = 1.0;  // v0(r) = exp(-(r/scale)^2)
};
struct BallIndicator {
    double radius = 1.0;
};
/// f(r) = chi_[1/2,3/2](r) / (|r-1|^{1/p} log(1/|r-1|)^eta); the radial input is
/// f0(r) = f(r) r^{-n/p - alpha} with n, alpha taken from the tuple.
struct CounterexampleCusp {
    double p = 2.0;
    double eta = 1.0;
};
struct DilationLadder;

using TestFamily = std::variant<Gaussian, BallIndicator, CounterexampleCusp, std::shared_ptr<const DilationLadder>>;

/// base(r / t) for every t in `scales`.
struct DilationLadder {
    TestFamily base;
    std::vector<double> scales;
};

inline TestFamily make_ladder(TestFamily base, std::vector<double> scales) {
    return std::make_shared<const DilationLadder>(DilationLadder{std::move(base), std::move(scales)});
}

inline void validate_family(const TestFamily& f) {
    struct {
        void operator()(const Gaussian& g) const {
            if (!(g.scale > 0.0) || !std::isfinite(g.scale)) throw precondition_error("gaussian scale must be positive");
        }
        void operator()(const BallIndicator& b) const {
            if (!(b.radius > 0.0) || !std::isfinite(b.radius)) throw precondition_error("ball radius must be positive");
        }
        void operator()(const CounterexampleCusp& c) const {
            if (!(c.p >= 1.0)) throw domain_error("cusp exponent p must be >= 1");
            if (!(c.eta * c.p > 1.0)) throw precondition_error("cusp requires eta * p > 1");
        }
        void operator()(const std::shared_ptr<const DilationLadder>& d) const {
            if (!d || d->scales.empty()) throw precondition_error("dilation ladder needs at least one scale");
            for (double t : d->scales)
                if (!(t > 0.0)) throw precondition_error("dilation scales must be positive");
            std::visit(*this, d->base);
        }
    } v;
    std::visit(v, f);
}

inline std::string family_id(const TestFamily& f) {
    std::ostringstream os;
    os.precision(17);
    struct {
        std::ostringstream& os;
        void operator()(const Gaussian& g) const { os << "gaussian:" << g.scale; }
        void operator()(const BallIndicator& b) const { os << "ball:" << b.radius; }
        void operator()(const CounterexampleCusp& c) const { os << "cusp:" << c.eta; }
        void operator()(const std::shared_ptr<const DilationLadder>& d) const {
            os << "ladder(";
            std::visit(*this, d->base);
            os << ")";
        }
    } v{os};
    std::visit(v, f);
    return os.str();
}

/// v0 as a function of r for a non-ladder family.
inline std::function<double(double)> family_function(const TestFamily& f, const ExponentTuple& t) {
    validate_family(f);
    if (const auto* g = std::get_if<Gaussian>(&f)) {
        const double s = g->scale;
        return [s](double r) { return std::exp(-(r / s) * (r / s)); };
    }
    if (const auto* b = std::get_if<BallIndicator>(&f)) {
        const double R = b->radius;
        return [R](double r) { return r <= R ? 1.0 : 0.0; };
    }
    if (const auto* c = std::get_if<CounterexampleCusp>(&f)) {
        const double p = c->p;
        const double eta = c->eta;
        const double weight = -t.n / p - t.alpha;
        return [p, eta, weight](double r) {
            if (r < 0.5 || r > 1.5 || r == 1.0) return 0.0;
            const double d = std::abs(r - 1.0);
            // |r-1| = 1/2 gives log 2 > 0, so the log factor stays positive on the support.
            return std::pow(d, -1.0 / p) * std::pow(std::log(1.0 / d), -eta) * std::pow(r, weight);
        };
    }
    throw precondition_error("a dilation ladder has several members; use family_members");
}

struct FamilyMember {
    std::string id;
    RadialProfile profile;
};

/// Sampled members of a family on `grid` (one member unless the family is a ladder).
inline std::vector<FamilyMember> family_members(const TestFamily& f, const LogGrid& grid, const ExponentTuple& t) {
    validate_family(f);
    if (const auto* d = std::get_if<std::shared_ptr<const DilationLadder>>(&f)) {
        const auto base = family_function((*d)->base, t);
        std::vector<FamilyMember> out;
        for (double s : (*d)->scales) {
            std::ostringstream id;
            id.precision(17);
            id << family_id((*d)->base) << "@" << s;
            out.push_back({id.str(), sample([&](double r) { return base(r / s); }, grid)});
        }
        return out;
    }
    return {{family_id(f), sample(family_function(f, t), grid)}};
}

// ---------------------------------------------------------------------------------------
// Ratio records

struct RatioRecord {
    ExponentTuple tuple;
    std::string family;
    std::size_t N = 0;
    double lhs = 0.0;  // || |x|^{-beta} T_gamma v ||_q over the edge-safe nodes
    double rhs = 0.0;  // || |x|^alpha v ||_p
    double ratio = 0.0;
    std::string verdict;
    std::size_t edge_excluded_count = 0;
    std::string error;  // non-empty for error rows

    bool ok() const { return error.empty(); }
};

namespace detail {

inline std::string verdict_name(const ExponentTuple& t) {
    try {
        return std::string(to_string(classify(t).cls));
    } catch (const std::exception&) {
        return "invalid";
    }
}

} // namespace detail

/// lhs / rhs of the inequality for input v, with T_gamma v from the fast path. Nodes
/// flagged edge-contaminated by riesz_radial are excluded from the lhs norm.
inline RatioRecord inequality_ratio(const ExponentTuple& t, const RadialProfile& v, const ConvolutionPlan& plan,
                                    std::string family = "custom") {
    if (t.n < 1) throw domain_error("dimension n must be >= 1");
    RatioRecord rec;
    rec.tuple = t;
    rec.family = std::move(family);
    rec.N = v.size();
    rec.verdict = detail::verdict_name(t);
    rec.rhs = weighted_lp_norm(v, t.p, t.alpha, t.n);
    if (!(rec.rhs > 0.0)) throw precondition_error("zero input: rhs norm vanishes on the grid");
    if (!std::isfinite(rec.rhs)) throw precondition_error("rhs norm is not finite on the grid");
    const RadialProfile T = riesz_radial(v, plan);
    rec.edge_excluded_count = 2 * T.edge_margin;
    rec.lhs = weighted_lp_norm(T.interior(), t.q, -t.beta, t.n);
    rec.ratio = rec.lhs / rec.rhs;
    return rec;
}

inline RatioRecord inequality_ratio(const ExponentTuple& t, const RadialProfile& v, std::string family = "custom") {
    const ConvolutionPlan plan(KernelParams(t.n, t.gamma), v.grid, t);
    return inequality_ratio(t, v, plan, std::move(family));
}

// ---------------------------------------------------------------------------------------
// Kernel split

/// C^inf cutoff supported in [1/2, 3/2], equal to 1 on [3/4, 5/4]: the standard
/// exp(-1/t) smoothstep on each flank.
inline double smooth_cutoff(double x) {
    const auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
    const auto step = [&](double t) { return psi(t) / (psi(t) + psi(1.0 - t)); };
    if (x <= 0.5 || x >= 1.5) return 0.0;
    if (x >= 0.75 && x <= 1.25) return 1.0;
    return x < 0.75 ? step((x - 0.5) / 0.25) : step((1.5 - x) / 0.25);
}

/// C^1 piecewise-cubic cutoff with the same support and plateau.
inline double cubic_cutoff(double x) {
    const auto step = [](double t) { return t * t * (3.0 - 2.0 * t); };
    if (x <= 0.5 || x >= 1.5) return 0.0;
    if (x >= 0.75 && x <= 1.25) return 1.0;
    return x < 0.75 ? step((x - 0.5) / 0.25) : step((1.5 - x) / 0.25);
}

struct WeakNormOptions {
    int levels = 4;
    /// Nodes of the diagonal grid [1/2, 2] at level 0 (doubled per level).
    std::size_t diagonal_nodes = std::size_t{1} << 12;
    /// Half-width in ln x of the remainder grid at level 0 (doubled per level).
    double tail_halfwidth = 16.0;
    /// ln-spacing of the remainder grid.
    double tail_step = 1.0 / 128.0;
    /// Largest relative change between consecutive levels still read as convergence.
    double stability = 0.05;
    std::function<double(double)> cutoff = smooth_cutoff;
};

struct WeakNormReport {
    double s = 0.0;
    /// weak_quasinorm(g1, s) per level; g1 = cutoff * g exercises the radial condition.
    std::vector<double> diagonal_weak;
    /// mu_lp_norm(g2, s) per level; g2 = (1 - cutoff) * g exercises the alpha and beta conditions.
    std::vector<double> remainder_strong;
    bool diagonal_finite = false;
    bool remainder_finite = false;
    std::string diagonal_condition;
    std::string remainder_condition;

    bool finite() const { return diagonal_finite && remainder_finite; }
    double diagonal_value() const { return diagonal_weak.empty() ? 0.0 : diagonal_weak.back(); }
    double remainder_value() const { return remainder_strong.empty() ? 0.0 : remainder_strong.back(); }
};

namespace detail {

inline bool stable_sequence(const std::vector<double>& xs, double tol) {
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i])) return false;
        if (std::abs(xs[i] - xs[i - 1]) > tol * std::abs(xs[i - 1])) return false;
    }
    return true;
}

} // namespace detail

/// Splits g(x) = x^{n/q - beta} I_{gamma,k}(x) with the cutoff and measures both pieces at
/// increasing resolution: g1 on [1/2, 2] with the node count doubling (the closest approach to
/// x = 1 halves), g2 on [e^{-L}, e^{L}] with L doubling. A piece counts as finite when every
/// consecutive change stays within `stability`.
inline WeakNormReport kernel_weak_norm_check(const ExponentTuple& t, const WeakNormOptions& opt = {}) {
    validate_tuple(t);
    if (opt.levels < 2) throw precondition_error("kernel_weak_norm_check needs at least 2 levels");
    if (opt.diagonal_nodes < 4 || opt.diagonal_nodes % 2 != 0)
        throw precondition_error("diagonal grid needs an even node count so x = 1 is not a node");
    const KernelParams kp(t.n, t.gamma);
    const double w = t.convolution_weight();
    const auto g = [&](double u) { return std::exp(w * u) * eval_kernel_log(kp, u); };

    WeakNormReport rep;
    rep.s = t.young_exponent();
    rep.diagonal_condition = std::string(t.p == 1.0 ? cond_radial_strict : cond_radial);
    rep.remainder_condition = std::string(cond_alpha) + " and " + std::string(cond_beta);
    for (int level = 0; level < opt.levels; ++level) {
        const LogGrid dg = LogGrid::symmetric(2.0, opt.diagonal_nodes << level);
        std::vector<double> s1(dg.count());
        parallel_for(dg.count(), [&](std::size_t j) {
            const double phi = opt.cutoff(dg.node(j));
            s1[j] = phi == 0.0 ? 0.0 : phi * g(dg.log_node(j));
        });
        rep.diagonal_weak.push_back(weak_quasinorm(RadialProfile(dg, std::move(s1)), rep.s));

        const double L = opt.tail_halfwidth * std::ldexp(1.0, level);
        const auto half = static_cast<std::size_t>(std::ceil(L / opt.tail_step));
        const LogGrid tg = LogGrid::from_log(-opt.tail_step * static_cast<double>(half), opt.tail_step, 2 * half + 1);
        std::vector<double> s2(tg.count());
        parallel_for(tg.count(), [&](std::size_t j) {
            const double phi = opt.cutoff(tg.node(j));
            s2[j] = phi == 1.0 ? 0.0 : (1.0 - phi) * g(tg.log_node(j));
        });
        rep.remainder_strong.push_back(mu_lp_norm(RadialProfile(tg, std::move(s2)), rep.s));
    }
    rep.diagonal_finite = detail::stable_sequence(rep.diagonal_weak, opt.stability);
    rep.remainder_finite = detail::stable_sequence(rep.remainder_strong, opt.stability);
    return rep;
}

// ---------------------------------------------------------------------------------------
// Counterexample probe

struct SharpnessOptions {
    std::size_t base_nodes = std::size_t{1} << 12;
    /// The grid is [1/R, R].
    double half_range = 4.0;
    /// Run an admissible tuple as a control instead of refusing it.
    bool control = false;
};

/// The cusp family at `levels` resolutions, each doubling N on a grid symmetric about r = 1
/// (so the closest node to the cusp halves its distance per level). For parameters outside
/// the radial region the lhs should increase without bound while the rhs converges.
inline std::vector<RatioRecord> sharpness_probe(double p, double q, double gamma, double alpha, double beta,
                                                std::optional<double> eta, int levels,
                                                const SharpnessOptions& opt = {}) {
    const ExponentTuple t{3, gamma, p, q, alpha, beta};
    validate_tuple(t);
    const double e = eta.value_or(2.0 / p);
    if (!(e * p > 1.0)) throw precondition_error("sharpness probe requires eta * p > 1");
    if (levels < 1) throw precondition_error("sharpness probe needs at least one level");
    if (opt.base_nodes % 2 != 0) throw precondition_error("sharpness grid needs an even node count");
    const bool radial_ok = alpha + beta >= 2.0 * (1.0 / q - 1.0 / p);
    if (radial_ok && !opt.control)
        throw precondition_error("sharpness probe requires alpha + beta < (n-1)(1/q - 1/p); pass control to run an admissible tuple");

    const TestFamily fam = CounterexampleCusp{p, e};
    std::vector<RatioRecord> out;
    for (int level = 0; level < levels; ++level) {
        const LogGrid grid = LogGrid::symmetric(opt.half_range, opt.base_nodes << level);
        const RadialProfile v = sample(family_function(fam, t), grid);
        const ConvolutionPlan plan(KernelParams(3, gamma), grid, t);
        out.push_back(inequality_ratio(t, v, plan, family_id(fam)));
    }
    return out;
}

// ---------------------------------------------------------------------------------------
// Sobolev embedding

/// Critical exponent 2(n + c)/(n - 2 s_order) of the weighted embedding.
inline double critical_embedding_exponent(int n, double s_order, double c) {
    return 2.0 * (n + c) / (n - 2.0 * s_order);
}

namespace detail {

inline void require_embedding_region(int n, double s_order, double c, double q, bool allow_critical) {
    std::ostringstream os;
    os.precision(17);
    if (n < 1) throw domain_error("dimension n must be >= 1");
    if (!(s_order > 0.0 && s_order < n / 2.0)) {
        os << "embedding requires 0 < s < n/2 (s = " << s_order << ")";
        throw precondition_error(os.str());
    }
    if (!(c > -2.0 * s_order)) {
        os << "embedding requires c > -2s (c = " << c << ")";
        throw precondition_error(os.str());
    }
    if (!(c < (n - 1) * (q - 2.0) / 2.0)) {
        os << "embedding requires c < (n-1)(q-2)/2 = " << (n - 1) * (q - 2.0) / 2.0 << " (c = " << c << ")";
        throw precondition_error(os.str());
    }
    const double crit = critical_embedding_exponent(n, s_order, c);
    const bool upper = allow_critical ? q <= crit * (1.0 + 1e-12) : q < crit;
    if (!(q > 2.0) || !upper) {
        os << "embedding requires 2 < q < 2(n+c)/(n-2s) = " << crit << " (q = " << q << ")";
        throw precondition_error(os.str());
    }
}

inline RatioRecord embedding_record(int n, double s_order, double c, double q, const RadialProfile& f,
                                    const ConvolutionPlan* plan) {
    // u = T_{n-s} f stands for (-Laplacian)^{-s/2} f with the normalisation constant set to 1.
    const ExponentTuple t{n, n - s_order, 2.0, q, 0.0, -c / q};
    RatioRecord rec;
    rec.tuple = t;
    rec.family = "embedding";
    rec.N = f.size();
    rec.verdict = verdict_name(t);
    rec.rhs = weighted_lp_norm(f, 2.0, 0.0, n);
    if (!(rec.rhs > 0.0)) throw precondition_error("zero input: rhs norm vanishes on the grid");
    const RadialProfile u = plan ? riesz_radial(f, *plan) : riesz_radial(f, KernelParams(n, n - s_order));
    rec.edge_excluded_count = 2 * u.edge_margin;
    rec.lhs = weighted_lp_norm(u.interior(), q, c / q, n);
    rec.ratio = rec.lhs / rec.rhs;
    return rec;
}

} // namespace detail

/// || |x|^{c/q} u ||_q / || f ||_2 with u = T_{n-s} f, for q in the open range of the
/// weighted Sobolev embedding.
inline RatioRecord embedding_ratio(int n, double s_order, double c, double q, const RadialProfile& f) {
    detail::require_embedding_region(n, s_order, c, q, false);
    return detail::embedding_record(n, s_order, c, q, f, nullptr);
}

/// The same ratio at the critical exponent q* = 2(n + c)/(n - 2s), where it is invariant
/// under dilation of f. The upper bound on c is checked at q*.
inline RatioRecord critical_embedding_ratio(int n, double s_order, double c, const RadialProfile& f,
                                            const ConvolutionPlan* plan = nullptr) {
    const double q = critical_embedding_exponent(n, s_order, c);
    detail::require_embedding_region(n, s_order, c, q, true);
    return detail::embedding_record(n, s_order, c, q, f, plan);
}

// ---------------------------------------------------------------------------------------
// Sweeps

/// Every (tuple, family member) pair in input order. A failing experiment becomes an error
/// row; `sink` (if given) sees each record as soon as it is complete.
inline std::vector<RatioRecord> sweep(const std::vector<ExponentTuple>& tuples, const std::vector<TestFamily>& families,
                                      const LogGrid& grid,
                                      const std::function<void(const RatioRecord&)>& sink = {}) {
    std::vector<RatioRecord> out;
    const auto emit = [&](RatioRecord r) {
        if (sink) sink(r);
        out.push_back(std::move(r));
    };
    for (const ExponentTuple& t : tuples) {
        std::optional<ConvolutionPlan> plan;
        std::string plan_error;
        try {
            validate_tuple(t);
            plan.emplace(KernelParams(t.n, t.gamma), grid, t);
        } catch (const std::exception& e) {
            plan_error = e.what();
        }
        for (const TestFamily& f : families) {
            std::vector<FamilyMember> members;
            try {
                members = family_members(f, grid, t);
            } catch (const std::exception& e) {
                RatioRecord r{t, family_id(f), grid.count()};
                r.verdict = detail::verdict_name(t);
                r.error = e.what();
                emit(std::move(r));
                continue;
            }
            for (FamilyMember& m : members) {
                RatioRecord r{t, m.id, grid.count()};
                r.verdict = detail::verdict_name(t);
                if (!plan) {
                    r.error = plan_error;
                } else {
                    try {
                        r = inequality_ratio(t, m.profile, *plan, m.id);
                    } catch (const std::exception& e) {
                        r.error = e.what();
                    }
                }
                emit(std::move(r));
            }
        }
    }
    return out;
}

} // namespace radial_riesz
