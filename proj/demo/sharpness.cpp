// Counterexample cusp against an inadmissible tuple, and the same probe on an admissible
// control. Prints lhs, rhs and ratio per refinement level.
#include <radial_riesz.hpp>

#include <cstdio>

using namespace radial_riesz;

namespace {

void show(const char* title, const std::vector<RatioRecord>& rows) {
    std::printf("%s\n", title);
    std::printf("%8s %14s %14s %14s\n", "N", "lhs", "rhs", "ratio");
    for (const RatioRecord& r : rows) std::printf("%8zu %14.6g %14.6g %14.6g\n", r.N, r.lhs, r.rhs, r.ratio);
}

} // namespace

int main() {
    SharpnessOptions opt;
    opt.base_nodes = 1 << 11;
    show("inadmissible (n=3, gamma=2.85, p=2, q=4, alpha=beta=-0.3), eta=0.6",
         sharpness_probe(2, 4, 2.85, -0.3, -0.3, 0.6, 4, opt));
    opt.control = true;
    show("control (n=3, gamma=2.5, p=2, q=4, alpha=beta=-0.125), eta=0.6",
         sharpness_probe(2, 4, 2.5, -0.125, -0.125, 0.6, 4, opt));
}
