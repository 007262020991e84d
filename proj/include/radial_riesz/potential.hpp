#pragma once

// Riesz potential T_gamma v(x) = int v(y) |x - y|^{-gamma} dy of a radial v = v0(|x|).
//
// Fast path: with h(r) = v0(r) r^{n-gamma+w} and g(x) = x^w I_{gamma,k}(x),
//     rho^w T_gamma v(rho) = omega_{n-2} (h * g)(rho),
// a convolution on the multiplicative group, evaluated as a linear convolution in ln r by FFT.
// Direct path: nested quadrature of omega_{n-2} int v0(r) r^n rho^{-gamma} I(r/rho) dr/r.

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include <fftw3.h>

#include "errors.hpp"
#include "exponents.hpp"
#include "grid.hpp"
#include "kernel.hpp"
#include "kernel_table.hpp"
#include "quadrature.hpp"

namespace radial_riesz {

namespace detail {

// FFTW planning is not thread-safe; execution with the new-array interface is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};
template <class T>
using fftw_buffer = std::unique_ptr<T[], FftwFree>;

template <class T>
fftw_buffer<T> fftw_alloc(std::size_t n) {
    return fftw_buffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * n)));
}

class RealFft {
public:
    explicit RealFft(std::size_t n) : n_(n), real_(fftw_alloc<double>(n)), spec_(fftw_alloc<fftw_complex>(n / 2 + 1)) {
        std::lock_guard lock(fftw_planner_mutex());
        forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_.get(), spec_.get(), FFTW_ESTIMATE);
        inverse_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_.get(), real_.get(), FFTW_ESTIMATE);
    }
    ~RealFft() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(inverse_);
    }
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const { return n_; }
    double* real() { return real_.get(); }
    fftw_complex* spectrum() { return spec_.get(); }
    void forward() { fftw_execute(forward_); }
    void inverse() { fftw_execute(inverse_); }

private:
    std::size_t n_;
    fftw_buffer<double> real_;
    fftw_buffer<fftw_complex> spec_;
    fftw_plan forward_ = nullptr;
    fftw_plan inverse_ = nullptr;
};

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace detail

/// Nodes at each end of the output whose value lies within half the near-diagonal kernel
/// width, ln 3 / 2 in ln r, of the grid edge.
inline std::size_t edge_margin_for(const LogGrid& grid) {
    const double half_support = 0.5 * (std::log(1.0 + near_diagonal_halfwidth) - std::log(1.0 - near_diagonal_halfwidth));
    return static_cast<std::size_t>(std::ceil(half_support / grid.step()));
}

/// Everything riesz_radial needs for one (kernel, grid, weighting) combination. Immutable
/// after construction and shareable between threads.
class ConvolutionPlan {
public:
    ConvolutionPlan(const KernelParams& params, const LogGrid& grid,
                    std::optional<ExponentTuple> tuple = std::nullopt, double tol = 1e-10)
        : params_(params), grid_(grid), tuple_(tuple) {
        if (tuple) {
            if (tuple->n != params.n || tuple->gamma != params.gamma)
                throw precondition_error("plan tuple does not match kernel parameters");
            weight_ = tuple->convolution_weight();
        }
        const std::size_t n = grid.count();
        padded_ = detail::next_pow2(3 * n - 2);
        edge_margin_ = edge_margin_for(grid);
        const double q = tuple ? tuple->q : std::numeric_limits<double>::infinity();
        const double beta = tuple ? tuple->beta : 0.0;
        table_ = std::make_shared<const KernelTable>(build_table(params, grid.ratio_grid(), q, beta, tol));
        tilt_ = weight_ - 0.5 * params.gamma;

        // Spectrum of the tilted cell integrals, laid out with ratio index m = -(n-1) at offset 0.
        detail::RealFft fft(padded_);
        std::fill(fft.real(), fft.real() + padded_, 0.0);
        for (std::size_t m = 0; m < table_->values.size(); ++m)
            fft.real()[m] = table_->values[m] * grid.step() * std::exp(-tilt_ * table_->grid.log_node(m));
        fft.forward();
        spectrum_.resize(padded_ / 2 + 1);
        for (std::size_t i = 0; i < spectrum_.size(); ++i)
            spectrum_[i] = {fft.spectrum()[i][0], fft.spectrum()[i][1]};
    }

    const KernelParams& params() const { return params_; }
    const LogGrid& grid() const { return grid_; }
    const std::optional<ExponentTuple>& tuple() const { return tuple_; }
    const KernelTable& table() const { return *table_; }
    /// w = n/q - beta threaded through the factorisation (0 without a tuple).
    double weight() const { return weight_; }
    /// Exponent c of the tilt e^{-c ln r} applied to both convolution factors and undone on
    /// the output. Exact in arithmetic; c = w - gamma/2 centres the rho^w and rho^{w-gamma}
    /// ends of the weighted output so FFT roundoff stays small relative to the tails.
    double tilt() const { return tilt_; }
    std::size_t padded_length() const { return padded_; }
    std::size_t edge_margin() const { return edge_margin_; }
    const std::vector<std::complex<double>>& kernel_spectrum() const { return spectrum_; }

private:
    KernelParams params_;
    LogGrid grid_;
    std::optional<ExponentTuple> tuple_;
    double weight_ = 0.0;
    double tilt_ = 0.0;
    std::size_t padded_ = 0;
    std::size_t edge_margin_ = 0;
    std::shared_ptr<const KernelTable> table_;
    std::vector<std::complex<double>> spectrum_;
};

inline bool same_grid(const LogGrid& a, const LogGrid& b) {
    return a.count() == b.count() && std::abs(a.log_min() - b.log_min()) <= 1e-12 * std::max(1.0, std::abs(a.log_min())) &&
           std::abs(a.step() - b.step()) <= 1e-12 * a.step();
}

/// T_gamma v on the grid of v, by FFT convolution with the plan's cell-averaged kernel.
/// The returned profile carries the plan's edge margin.
inline RadialProfile riesz_radial(const RadialProfile& v, const ConvolutionPlan& plan) {
    if (!same_grid(v.grid, plan.grid())) {
        std::ostringstream os;
        os.precision(17);
        os << "kernel table range insufficient: profile grid [" << v.grid.r_min() << ", " << v.grid.r_max()
           << "] with " << v.grid.count() << " nodes needs ratios in [" << v.grid.r_min() / v.grid.r_max() << ", "
           << v.grid.r_max() / v.grid.r_min() << "] at its spacing; the plan was built for a different grid";
        throw precondition_error(os.str());
    }
    const std::size_t n = v.size();
    const std::size_t L = plan.padded_length();
    const KernelParams& kp = plan.params();
    const double w = plan.weight();
    const double h_exp = kp.n - kp.gamma + w - plan.tilt();

    detail::RealFft fft(L);
    double* x = fft.real();
    std::fill(x, x + L, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (v.samples[i] != 0.0) x[i] = v.samples[i] * std::exp(h_exp * v.grid.log_node(i));
    fft.forward();
    const auto& ks = plan.kernel_spectrum();
    fftw_complex* s = fft.spectrum();
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const std::complex<double> z = std::complex<double>(s[i][0], s[i][1]) * ks[i];
        s[i][0] = z.real();
        s[i][1] = z.imag();
    }
    fft.inverse();

    // Linear convolution index i + m + (n-1) for output node j = i + m.
    const double scale = sphere_area(kp.n - 2) / static_cast<double>(L);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = scale * x[j + n - 1] * std::exp((plan.tilt() - w) * v.grid.log_node(j));
    const std::size_t margin = 2 * plan.edge_margin() + 2 <= n ? plan.edge_margin() : 0;
    return {v.grid, std::move(out), margin};
}

/// Convenience overload building a one-off plan.
inline RadialProfile riesz_radial(const RadialProfile& v, const KernelParams& params,
                                  std::optional<ExponentTuple> tuple = std::nullopt) {
    return riesz_radial(v, ConvolutionPlan(params, v.grid, tuple));
}

namespace detail {

// omega_{n-2} int v(r) r^n rho^{-gamma} I(r/rho) dr/r over u = ln r in [ul, ur], with v
// supplied as a function of u. The point u = ln rho is split out and handled by graded
// quadrature; cells close to it use adaptive Gauss-Kronrod, distant cells a checked
// Gauss-Legendre pair.
template <class V>
quad::Estimate direct_cell(const KernelParams& kp, V&& v_of_u, double log_rho, double ul, double ur, double tol) {
    const auto f = [&](double u) {
        const double s = u - log_rho;
        const double k = detail::kernel_value(kp, std::exp(s), -std::expm1(s), 1e-2 * tol);
        return v_of_u(u) * std::exp(kp.n * u - kp.gamma * log_rho) * k;
    };
    const auto f_at = [&](double s) {  // same integrand in terms of s = u - ln rho
        const double k = detail::kernel_value(kp, std::exp(s), -std::expm1(s), 1e-2 * tol);
        return v_of_u(log_rho + s) * std::exp(kp.n * (log_rho + s) - kp.gamma * log_rho) * k;
    };
    const double e = diagonal_exponent(kp);
    const double sl = ul - log_rho;
    const double sr = ur - log_rho;
    if (sl < 0.0 && sr > 0.0) {
        quad::Estimate r = quad::graded_endpoint([&](double t) { return f_at(-t); }, -sl, e, 1e-2 * tol);
        r += quad::graded_endpoint([&](double t) { return f_at(t); }, sr, e, 1e-2 * tol);
        return r;
    }
    if (sl == 0.0) return quad::graded_endpoint([&](double t) { return f_at(t); }, sr, e, 1e-2 * tol);
    if (sr == 0.0) return quad::graded_endpoint([&](double t) { return f_at(-t); }, -sl, e, 1e-2 * tol);
    const double width = ur - ul;
    const double distance = std::min(std::abs(sl), std::abs(sr));
    if (distance >= 4.0 * width) {
        const double g5 = boost::math::quadrature::gauss<double, 5>::integrate(f, ul, ur);
        const double g4 = boost::math::quadrature::gauss<double, 4>::integrate(f, ul, ur);
        if (std::abs(g5 - g4) <= 1e-2 * tol * std::abs(g5)) return {g5, std::abs(g5 - g4), std::abs(g5)};
    }
    return quad::kronrod(f, ul, ur, 1e-2 * tol);
}

} // namespace detail

/// Slow oracle for riesz_radial: T_gamma v(rho) by nested adaptive quadrature, with v0
/// interpolated linearly in ln r between grid nodes and zero outside the grid.
inline double riesz_direct(const RadialProfile& v, const KernelParams& params, double rho, double tol = 1e-8) {
    if (!(rho > 0.0)) throw domain_error("riesz_direct requires rho > 0");
    const double log_rho = std::log(rho);
    const LogGrid& g = v.grid;
    quad::Estimate total;
    for (std::size_t j = 0; j + 1 < v.size(); ++j) {
        const double v0 = v.samples[j];
        const double v1 = v.samples[j + 1];
        if (v0 == 0.0 && v1 == 0.0) continue;
        const double ul = g.log_node(j);
        const double ur = g.log_node(j + 1);
        const auto lin = [&](double u) { return v0 + (v1 - v0) * (u - ul) / (ur - ul); };
        total += detail::direct_cell(params, lin, log_rho, ul, ur, tol);
    }
    quad::require_tolerance(total, tol, "riesz_direct");
    return sphere_area(params.n - 2) * total.value;
}

/// Oracle for a profile given as a function: T_gamma v(rho) for v0 supported in [r_lo, r_hi].
/// `breakpoints` lists radii where v0 is not smooth.
inline double riesz_direct(const std::function<double(double)>& v0, double r_lo, double r_hi,
                           const KernelParams& params, double rho, std::vector<double> breakpoints = {},
                           double tol = 1e-8) {
    if (!(rho > 0.0)) throw domain_error("riesz_direct requires rho > 0");
    if (!(r_lo > 0.0 && r_hi > r_lo)) throw precondition_error("riesz_direct requires 0 < r_lo < r_hi");
    const double log_rho = std::log(rho);
    std::vector<double> cuts{std::log(r_lo), std::log(r_hi)};
    for (double b : breakpoints)
        if (b > r_lo && b < r_hi) cuts.push_back(std::log(b));
    // Pieces no longer than ln 2 keep the quadrature panels well scaled.
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> pieces{cuts.front()};
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double a = pieces.back();
        const int splits = static_cast<int>(std::ceil((cuts[i] - a) / std::numbers::ln2));
        for (int s = 1; s <= splits; ++s) pieces.push_back(a + (cuts[i] - a) * s / splits);
    }
    const auto v_of_u = [&](double u) { return v0(std::exp(u)); };
    quad::Estimate total;
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i)
        total += detail::direct_cell(params, v_of_u, log_rho, pieces[i], pieces[i + 1], tol);
    quad::require_tolerance(total, tol, "riesz_direct");
    return sphere_area(params.n - 2) * total.value;
}

struct SphereAverage {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Monte-Carlo estimate of int_{S^{n-1}} f(x . y) dy for uniform y on the sphere, using the
/// unit vector x (defaults to e_n). Deterministic for a given seed.
inline SphereAverage sphere_average(const std::function<double(double)>& f, int n, std::size_t samples,
                                    std::uint64_t seed, std::vector<double> x = {}) {
    if (n < 2) throw domain_error("sphere_average requires n >= 2");
    if (samples < 2) throw precondition_error("sphere_average needs at least 2 samples");
    if (x.empty()) {
        x.assign(static_cast<std::size_t>(n), 0.0);
        x.back() = 1.0;
    }
    if (x.size() != static_cast<std::size_t>(n)) throw precondition_error("direction has wrong dimension");
    double norm = 0.0;
    for (double c : x) norm += c * c;
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) throw precondition_error("direction must be nonzero");
    for (double& c : x) c /= norm;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> y(static_cast<std::size_t>(n));
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        double r2 = 0.0;
        for (double& c : y) {
            c = normal(rng);
            r2 += c * c;
        }
        const double inv = 1.0 / std::sqrt(r2);
        double dot = 0.0;
        for (std::size_t d = 0; d < y.size(); ++d) dot += x[d] * y[d] * inv;
        const double value = f(std::clamp(dot, -1.0, 1.0));
        const double delta = value - mean;  // Welford update
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (value - mean);
    }
    const double area = sphere_area(n - 1);
    const double var = m2 / static_cast<double>(samples - 1);
    return {area * mean, area * std::sqrt(var / static_cast<double>(samples))};
}

/// omega_{n-2} int_{-1}^{1} f(t) (1 - t^2)^{(n-3)/2} dt, by quadrature in t = cos(theta).
inline double sphere_reduction(const std::function<double(double)>& f, int n, double tol = 1e-12) {
    if (n < 2) throw domain_error("sphere_reduction requires n >= 2");
    const auto g = [&](double theta) {
        const double w = n == 2 ? 1.0 : std::pow(std::sin(theta), n - 2);
        return f(std::cos(theta)) * w;
    };
    const quad::Estimate e = quad::kronrod(g, 0.0, std::numbers::pi, tol);
    quad::require_tolerance(e, std::max(tol, 1e-10), "sphere_reduction");
    return sphere_area(n - 2) * e.value;
}

} // namespace radial_riesz
