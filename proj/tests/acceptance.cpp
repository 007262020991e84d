// Acceptance checks, one per criterion. `acceptance <id>` runs one and exits nonzero on
// failure; without arguments every criterion runs in order. Each prints a PASS/FAIL line.

#include <radial_riesz.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

using namespace radial_riesz;

namespace {

const double pi = std::numbers::pi;

class Stopwatch {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "  failed: " << what << "\n";
        }
    }
    template <class... T>
    void note(const T&... parts) {
        detail << "  ";
        (detail << ... << parts);
        detail << "\n";
    }
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RadialProfile gaussian(const LogGrid& g, double scale = 1.0) {
    return sample([scale](double r) { return std::exp(-(r / scale) * (r / scale)); }, g);
}

RadialProfile ball(const LogGrid& g) {
    return sample([](double r) { return r <= 1.0 ? 1.0 : 0.0; }, g);
}

// 1. n = 3 kernel against the elementary closed form.
void kernel_oracle(Outcome& o) {
    Stopwatch sw;
    double worst = 0.0;
    for (double g : {0.5, 1.5, 2.0, 2.5, 2.9}) {
        for (int i = 1; i <= 9; ++i) {
            const double a = 0.1 * i;
            worst = std::max(worst, std::abs(eval_kernel(KernelParams(3, g), a) / eval_kernel_closed_n3(g, a) - 1.0));
        }
        for (int i = 11; i <= 100; ++i) {
            const double a = 0.1 * i;
            worst = std::max(worst, std::abs(eval_kernel(KernelParams(3, g), a) / eval_kernel_closed_n3(g, a) - 1.0));
        }
    }
    const double t = sw.seconds();
    o.note("max relative error ", sci(worst), " (limit 1e-8), ", sci(t), " s (limit 5 s)");
    o.require(worst <= 1e-8, "relative error");
    o.require(t < 5.0, "runtime");
}

// 2. I(1/a) = a^gamma I(a).
void homogeneity(Outcome& o) {
    Stopwatch sw;
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> dim(2, 5);
    std::uniform_real_distribution<double> frac(0.01, 0.99);
    std::uniform_real_distribution<double> log_a(-6.0, 6.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int n = dim(rng);
        const KernelParams p(n, frac(rng) * n);
        double a = std::exp(log_a(rng));
        if (a == 1.0) a = 1.5;
        const double inv = eval_kernel(p, 1.0 / a);
        worst = std::max(worst, std::abs(inv - std::pow(a, p.gamma) * eval_kernel(p, a)) / inv);
    }
    const double t = sw.seconds();
    o.note("max relative deviation ", sci(worst), " over 100 samples (limit 1e-8), ", sci(t), " s (limit 10 s)");
    o.require(worst <= 1e-8, "homogeneity");
    o.require(t < 10.0, "runtime");
}

// 3. Near-diagonal regimes.
void regimes(Outcome& o) {
    for (auto [n, g] : {std::pair{3, 2.5}, {2, 1.5}, {4, 3.5}}) {
        const KernelParams p(n, g);
        for (double side : {1.0, -1.0}) {
            std::vector<double> x, y;
            for (int j = 8; j <= 16; ++j) {
                const double h = std::exp2(-j);
                x.push_back(std::log(h));
                y.push_back(std::log(eval_kernel(p, 1.0 + side * h)));
            }
            const double s = slope(x, y);
            o.note("(n=", n, ", gamma=", g, ", a=1", side > 0 ? "+" : "-", "h) slope ", sci(s), " expected ", sci(n - 1.0 - g));
            o.require(std::abs(s - (n - 1.0 - g)) <= 0.05, "power-law slope");
        }
    }
    for (auto [n, g] : {std::pair{3, 2.0}, {2, 1.0}}) {
        const KernelParams p(n, g);
        // h = 10^{-j/4}; the last decade is h in [1e-12, 1e-11].
        double lo = 1e300, hi = 0.0;
        for (int j = 44; j <= 48; ++j) {
            const double h = std::pow(10.0, -j / 4.0);
            for (double a : {1.0 + h, 1.0 - h}) {
                const double r = eval_kernel(p, a) / std::log(1.0 / h);
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
        }
        o.note("(n=", n, ", gamma=", g, ") I/log(1/h) in [", sci(lo), ", ", sci(hi), "] over the last decade");
        o.require(lo > 0.0 && hi / lo - 1.0 <= 0.05, "logarithmic regime");
    }
    for (auto [n, g] : {std::pair{3, 1.5}, {2, 0.5}, {4, 2.5}}) {
        const KernelParams p(n, g);
        const double at_one = eval_kernel(p, 1.0);
        double sup = 0.0;
        for (int j = 1; j <= 50; ++j)
            for (double a : {1.0 + std::exp2(-j), 1.0 - std::exp2(-j)}) sup = std::max(sup, eval_kernel(p, a));
        o.note("(n=", n, ", gamma=", g, ") sup near a=1 ", sci(sup), ", I(1) = ", sci(at_one));
        o.require(std::isfinite(at_one) && sup <= at_one * (1.0 + 1e-9), "bounded regime");
    }
}

// 4. Monte-Carlo sphere averages.
void sphere(Outcome& o) {
    const std::vector<std::pair<std::string, std::function<double(double)>>> fs{
        {"1", [](double) { return 1.0; }},
        {"t", [](double t) { return t; }},
        {"t^2", [](double t) { return t * t; }},
        {"e^t", [](double t) { return std::exp(t); }}};
    for (int n : {2, 3, 4})
        for (const auto& [name, f] : fs) {
            const SphereAverage mc = sphere_average(f, n, 100000, 12345);
            const double ref = sphere_reduction(f, n);
            // Rounding allowance for the constant function, whose standard error is zero.
            const double diff = std::abs(mc.estimate - ref);
            const bool ok = diff <= 3.0 * mc.std_error + 1e-12 * std::abs(ref);
            o.note("n=", n, " f=", name, ": |mc - quad| = ", sci(diff), ", 3 se = ", sci(3 * mc.std_error));
            o.require(ok, "sphere average n=" + std::to_string(n) + " f=" + name);
        }
}

// 5. Potential oracles and timing.
void potential_oracles(Outcome& o) {
    {
        const LogGrid g(1e-4, 1e4, 1 << 16);
        const ConvolutionPlan plan(KernelParams(3, 1.0), g);
        const RadialProfile vg = gaussian(g);
        Stopwatch sw;
        const RadialProfile Tg = riesz_radial(vg, plan);
        const double t = sw.seconds();
        const RadialProfile Tb = riesz_radial(ball(g), plan);
        double eg = 0.0, eb = 0.0;
        for (std::size_t j = Tg.edge_margin; j + Tg.edge_margin < g.count(); ++j) {
            const double r = g.node(j);
            eg = std::max(eg, std::abs(Tg.samples[j] / (std::pow(pi, 1.5) * std::erf(r) / r) - 1.0));
            if (r >= 1.0) eb = std::max(eb, std::abs(Tb.samples[j] * r / (4.0 * pi / 3.0) - 1.0));
        }
        o.note("N=2^16 edge-safe region: gaussian max rel err ", sci(eg), ", ball (rho >= 1) ", sci(eb), " (limit 1e-3)");
        o.note("fast path with prebuilt plan: ", sci(t), " s (limit 1 s)");
        o.require(eg <= 1e-3, "gaussian coulomb");
        o.require(eb <= 1e-3, "shell theorem");
        o.require(t < 1.0, "fast path runtime");
    }
    const LogGrid g(1e-4, 1e4, 1 << 14);
    const RadialProfile v = gaussian(g);
    for (auto [n, gamma] : {std::pair{2, 0.7}, {3, 1.5}, {4, 2.5}}) {
        const KernelParams kp(n, gamma);
        const RadialProfile T = riesz_radial(v, kp);
        double worst = 0.0;
        for (int i = 0; i < 16; ++i) {
            const std::size_t j = T.edge_margin + i * (g.count() - 1 - 2 * T.edge_margin) / 15;
            worst = std::max(worst, std::abs(T.samples[j] / riesz_direct(v, kp, g.node(j)) - 1.0));
        }
        o.note("(n=", n, ", gamma=", gamma, ") fast vs direct at 16 radii: max rel diff ", sci(worst), " (limit 1e-3)");
        o.require(worst <= 1e-3, "direct agreement");
    }
}

// 6. Dilation as an index shift on the log grid.
void dilation(Outcome& o) {
    const std::size_t N = 1 << 13;
    const LogGrid g(1e-4, 1e4, N);
    for (std::size_t shift : {64u, 500u}) {
        const double t = std::exp(static_cast<double>(shift) * g.step());
        const LogGrid gt = LogGrid::from_log(g.log_min() + static_cast<double>(shift) * g.step(), g.step(), N);
        for (auto [n, gamma] : {std::pair{3, 1.0}, {2, 1.5}, {5, 4.2}}) {
            const KernelParams kp(n, gamma);
            const RadialProfile T = riesz_radial(gaussian(g), kp);
            const RadialProfile Tt = riesz_radial(gaussian(gt, t), kp);
            const double factor = std::pow(t, n - gamma);
            double worst = 0.0;
            for (std::size_t j = T.edge_margin; j + T.edge_margin < N; ++j)
                worst = std::max(worst, std::abs(Tt.samples[j] / (factor * T.samples[j]) - 1.0));
            o.note("(n=", n, ", gamma=", gamma, ", t=e^{", shift, " step}) max rel deviation ", sci(worst), " (limit 1e-6)");
            o.require(worst <= 1e-6, "dilation covariance");
        }
    }
}

// 7. Region logic on random consistent tuples.
void region_logic(Outcome& o) {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> dim(1, 8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0, subcritical = 0, sw_count = 0, collapse = 0;
    int radial_fail = 0, subset_fail = 0, collapse_fail = 0;
    while (checked < 10000) {
        const int n = dim(rng);
        const double gamma = n * (0.005 + 0.99 * u(rng));
        const double p = 1.0 + 5.0 * u(rng);
        const int mode = checked % 4;
        const double inv_q = mode == 0 ? 1.0 / p : (0.002 + 0.998 * u(rng)) / p;
        const double sum = n * (inv_q - 1.0 / p + 1.0) - gamma;
        const double alpha = sum * u(rng) + 2.0 * (u(rng) - 0.5);
        const ExponentTuple t{n, gamma, p, 1.0 / inv_q, alpha, sum - alpha};
        if (!is_consistent(t) || t.q < t.p) continue;
        ++checked;
        const AdmissibilityVerdict v = classify(t);
        if (gamma <= n - 1) {
            ++subcritical;
            if (!v.holds(cond_radial)) ++radial_fail;
        }
        if (v.cls == AdmissibilityClass::SteinWeiss) {
            ++sw_count;
            if (!radial_admissible(v) || !v.holds(cond_radial)) ++subset_fail;
        }
        if (t.p == t.q || n == 1) {
            ++collapse;
            if (radial_admissible(v) != stein_weiss_admissible(v)) ++collapse_fail;
        }
    }
    o.note(checked, " consistent tuples: ", subcritical, " with gamma <= n-1, ", sw_count, " SteinWeiss, ", collapse,
           " with p = q or n = 1");
    o.note("violations: radial condition ", radial_fail, ", subset ", subset_fail, ", collapse ", collapse_fail);
    o.require(radial_fail == 0 && subcritical > 1000, "gamma <= n-1 implies the radial condition");
    o.require(subset_fail == 0 && sw_count > 100, "SteinWeiss within RadialOnly");
    o.require(collapse_fail == 0 && collapse > 1000, "p = q and n = 1 collapse");
}

// 8. Ratio stability under refinement for the admissible example tuples.
void stability(Outcome& o) {
    for (const ExponentTuple& t : {ExponentTuple{3, 2.5, 2, 2, 0.25, 0.25}, ExponentTuple{3, 2.5, 2, 4, -0.125, -0.125}}) {
        std::map<std::string, std::vector<double>> ratios;
        for (std::size_t n : {std::size_t{1} << 12, std::size_t{1} << 13, std::size_t{1} << 14}) {
            const LogGrid g(1e-4, 1e4, n);
            for (const RatioRecord& r : sweep({t}, {Gaussian{1.0}, BallIndicator{1.0}}, g)) ratios[r.family].push_back(r.ratio);
        }
        for (const auto& [fam, rs] : ratios) {
            double lo = *std::min_element(rs.begin(), rs.end());
            double hi = *std::max_element(rs.begin(), rs.end());
            o.note(to_string(classify(t).cls), " ", fam, ": ratios ", sci(rs[0]), " -> ", sci(rs.back()), ", spread ",
                   sci(hi / lo - 1.0), " (limit 5%)");
            o.require(hi / lo - 1.0 < 0.05, "stability " + fam);
        }
    }
}

// 9. Counterexample probe and its admissible control.
void sharpness(Outcome& o) {
    Stopwatch sw;
    const auto rs = sharpness_probe(2, 4, 2.85, -0.3, -0.3, 0.6, 4);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        o.note("N=", rs[i].N, " lhs ", sci(rs[i].lhs), " rhs ", sci(rs[i].rhs),
               i ? " lhs growth x" + sci(rs[i].lhs / rs[i - 1].lhs) + ", rhs change " + sci(rs[i].rhs / rs[i - 1].rhs - 1.0) : "");
        if (i == 0) continue;
        o.require(rs[i].lhs >= 1.5 * rs[i - 1].lhs, "lhs grows by at least x1.5 at N=" + std::to_string(rs[i].N));
        o.require(std::abs(rs[i].rhs / rs[i - 1].rhs - 1.0) < 0.02, "rhs varies less than 2% at N=" + std::to_string(rs[i].N));
    }
    SharpnessOptions control;
    control.control = true;
    const auto cs = sharpness_probe(2, 4, 2.5, -0.125, -0.125, 0.6, 4, control);
    double lo = 1e300, hi = 0.0;
    for (const auto& r : cs) {
        lo = std::min(lo, r.ratio);
        hi = std::max(hi, r.ratio);
    }
    const double t = sw.seconds();
    o.note("control ratios in [", sci(lo), ", ", sci(hi), "], spread ", sci(hi / lo - 1.0), " (limit 5%)");
    o.note("runtime ", sci(t), " s (limit 60 s)");
    o.require(hi / lo - 1.0 <= 0.05, "control stability");
    o.require(t < 60.0, "runtime");
}

// 10. Weak-norm finiteness against the classifier on a 20-tuple battery.
void weak_norm_battery(Outcome& o) {
    struct Entry {
        int n;
        double gamma, p, alpha, beta;
    };
    const std::vector<Entry> battery{
        // Stein-Weiss
        {3, 2.5, 2, 0.25, 0.25},
        {3, 1.5, 2, 0.3, 0.2},
        {3, 2.0, 1.5, 0.1, 0.1},
        {2, 1.0, 2, 0.3, 0.0},
        {4, 2.0, 2, 0.5, 0.5},
        {3, 2.8, 2, 0.1, 0.1},
        {1, 0.5, 2, 0.2, 0.0},
        // radial only
        {3, 2.5, 2, -0.125, -0.125},
        {3, 2.7, 2, -0.15, -0.15},
        {4, 3.4, 2, -0.2, -0.1},
        {2, 1.5, 2, -0.1, -0.1},
        {3, 2.2, 1.5, -0.1, -0.1},
        {5, 3.5, 2, -0.3, -0.2},
        // inadmissible
        {3, 2.85, 2, -0.3, -0.3},
        {3, 2.95, 2, -0.3, -0.3},
        {4, 3.9, 2, -0.4, -0.3},
        {2, 1.9, 2, -0.3, -0.2},
        {3, 1.5, 2, 0.0, 0.75},
        {3, 1.0, 2, 1.6, -0.1},
        {1, 0.8, 2, -0.1, -0.1},
    };
    std::map<AdmissibilityClass, int> classes;
    int agree = 0;
    for (const Entry& e : battery) {
        const ExponentTuple t{e.n, e.gamma, e.p, solve_q(e.n, e.gamma, e.p, e.alpha, e.beta), e.alpha, e.beta};
        const AdmissibilityClass cls = classify(t).cls;
        ++classes[cls];
        const WeakNormReport r = kernel_weak_norm_check(t);
        const bool match = r.finite() == (cls != AdmissibilityClass::Inadmissible);
        agree += match;
        o.note("(n=", t.n, ", gamma=", t.gamma, ", p=", t.p, ", q=", sci(t.q), ", alpha=", t.alpha, ", beta=", t.beta, ") ",
               to_string(cls), ": g1 weak ", sci(r.diagonal_weak.front()), " -> ", sci(r.diagonal_weak.back()), ", g2 strong ",
               sci(r.remainder_strong.front()), " -> ", sci(r.remainder_strong.back()), match ? "" : "  MISMATCH");
        o.require(match, "weak-norm verdict for gamma=" + sci(t.gamma));
    }
    o.note(agree, "/", battery.size(), " agree; classes: SteinWeiss ", classes[AdmissibilityClass::SteinWeiss],
           ", RadialOnly ", classes[AdmissibilityClass::RadialOnly], ", Inadmissible ", classes[AdmissibilityClass::Inadmissible]);
    o.require(classes.size() == 3, "battery spans all three classes");
}

// 11. Embedding ratio.
void embedding(Outcome& o) {
    const LogGrid g(1e-4, 1e4, 1 << 14);
    const RatioRecord r = embedding_ratio(3, 1.0, 0.0, 4.0, gaussian(g));
    o.note("q=4 ratio ", sci(r.ratio));
    o.require(std::isfinite(r.ratio) && r.ratio > 0.0, "finite ratio");
    const ConvolutionPlan plan(KernelParams(3, 2.0), g);
    double lo = 1e300, hi = 0.0;
    for (int k = -6; k <= 6; ++k) {
        const double x = critical_embedding_ratio(3, 1.0, 0.0, gaussian(g, std::ldexp(1.0, k)), &plan).ratio;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    o.note("critical ladder t = 2^-6..2^6: ratios in [", sci(lo), ", ", sci(hi), "], variation ", sci(hi / lo - 1.0), " (limit 10%)");
    o.require(hi / lo - 1.0 <= 0.10, "ladder variation");
    bool rejected = false;
    try {
        embedding_ratio(3, 1.0, 1.0, 4.0 - 1.0, gaussian(g));  // c = (n-1)(q-2)/2 at q = 3
    } catch (const precondition_error& e) {
        rejected = true;
        o.note("boundary c = (n-1)(q-2)/2 rejected: ", e.what());
    }
    o.require(rejected, "boundary rejection");
}

// 12. Byte-identical CLI output.
void determinism(Outcome& o) {
    const auto dir = std::filesystem::temp_directory_path() / ("radial_riesz_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "tuples.json") << R"([{"n":3,"gamma":2.5,"p":2,"q":2,"alpha":0.25,"beta":0.25},
                                                 {"n":3,"gamma":2.5,"p":2,"q":4,"alpha":-0.125,"beta":-0.125}])";
    }
    const std::string cli = RADIAL_RIESZ_CLI;
    const std::vector<std::pair<std::string, std::string>> runs{
        {"kernel", "kernel --n 3 --gamma 2.5 --a-range 0.01:100:200 --closed-form"},
        {"potential", "--grid 1e-4:1e4:2^13 potential --n 3 --gamma 1 --family gaussian"},
        {"sweep", "--grid 1e-3:1e3:2^11 sweep --tuples-file " + (dir / "tuples.json").string() + " --families gaussian ball"},
        {"sharpness", "sharpness --levels 2 --base-nodes 2^10"},
        {"embed", "--grid 1e-3:1e3:2^11 embed --ladder -2:2"}};
    const auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    for (const auto& [name, args] : runs) {
        std::string first;
        bool same = true;
        for (int rep = 0; rep < 2; ++rep) {
            const auto out = dir / (name + std::to_string(rep) + ".csv");
            const int code = std::system((cli + " " + args + " -o " + out.string()).c_str());
            o.require(code == 0, name + " exit status");
            const std::string text = slurp(out);
            if (rep == 0)
                first = text;
            else
                same = text == first && !text.empty();
        }
        o.note(name, ": ", first.size(), " bytes, ", same ? "identical" : "DIFFERENT");
        o.require(same, name + " output identical");
    }
    std::filesystem::remove_all(dir);
}

const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
    {"kernel oracle n=3", kernel_oracle},
    {"kernel homogeneity", homogeneity},
    {"near-diagonal regimes", regimes},
    {"sphere average validator", sphere},
    {"potential oracles", potential_oracles},
    {"dilation covariance", dilation},
    {"region logic", region_logic},
    {"ratio stability", stability},
    {"sharpness probe", sharpness},
    {"weak-norm mechanism", weak_norm_battery},
    {"embedding", embedding},
    {"CLI determinism", determinism},
};

bool run_one(std::size_t id) {
    Outcome o;
    Stopwatch sw;
    try {
        criteria[id - 1].second(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << id << " [" << criteria[id - 1].first << "]: " << (o.pass ? "PASS" : "FAIL") << " ("
              << sci(sw.seconds()) << " s)\n"
              << o.detail.str() << std::flush;
    return o.pass;
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 2) {
        std::cerr << "usage: acceptance [criterion id 1-" << criteria.size() << "]\n";
        return 2;
    }
    if (argc == 2) {
        const int id = std::atoi(argv[1]);
        if (id < 1 || id > static_cast<int>(criteria.size())) {
            std::cerr << "unknown criterion " << argv[1] << "\n";
            return 2;
        }
        return run_one(static_cast<std::size_t>(id)) ? 0 : 1;
    }
    bool all = true;
    for (std::size_t id = 1; id <= criteria.size(); ++id) all = run_one(id) && all;
    return all ? 0 : 1;
}
