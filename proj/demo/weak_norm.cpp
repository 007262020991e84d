// Splits the weighted kernel into a near-diagonal piece and a remainder and reports how
// their norms behave under refinement, next to the classifier verdict.
#include <radial_riesz.hpp>

#include <cstdio>
#include <string>

using namespace radial_riesz;

int main() {
    const ExponentTuple tuples[] = {
        {3, 2.5, 2, 2, 0.25, 0.25},
        {3, 2.5, 2, 4, -0.125, -0.125},
        {3, 2.85, 2, 4, -0.3, -0.3},
        {3, 1.5, 2, 4, 0.0, 0.75},
    };
    for (const ExponentTuple& t : tuples) {
        const WeakNormReport r = kernel_weak_norm_check(t);
        std::printf("n=%d gamma=%g p=%g q=%g alpha=%g beta=%g  %s\n", t.n, t.gamma, t.p, t.q, t.alpha, t.beta,
                    std::string(to_string(classify(t).cls)).c_str());
        std::printf("  near diagonal, weak L^%g:", r.s);
        for (double x : r.diagonal_weak) std::printf(" %.5g", x);
        std::printf("  %s\n  remainder, strong L^%g:", r.diagonal_finite ? "finite" : "diverges", r.s);
        for (double x : r.remainder_strong) std::printf(" %.5g", x);
        std::printf("  %s\n", r.remainder_finite ? "finite" : "diverges");
    }
}
