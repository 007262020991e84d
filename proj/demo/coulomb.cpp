// Potential of a Gaussian charge in R^3, compared with pi^{3/2} erf(rho)/rho.
#include <radial_riesz.hpp>

#include <cmath>
#include <cstdio>
#include <numbers>

using namespace radial_riesz;

int main() {
    const LogGrid grid(1e-4, 1e4, 1 << 14);
    const ConvolutionPlan plan(KernelParams(3, 1.0), grid);
    const RadialProfile v = sample([](double r) { return std::exp(-r * r); }, grid);
    const RadialProfile T = riesz_radial(v, plan);

    std::printf("%12s %22s %22s %10s\n", "rho", "T v", "closed form", "rel err");
    const std::size_t first = T.edge_margin;
    const std::size_t last = grid.count() - 1 - T.edge_margin;
    for (std::size_t j = first; j <= last; j += (last - first) / 16) {
        const double rho = grid.node(j);
        const double exact = std::pow(std::numbers::pi, 1.5) * std::erf(rho) / rho;
        std::printf("%12.5g %22.15g %22.15g %10.2e\n", rho, T.samples[j], exact, std::abs(T.samples[j] / exact - 1.0));
    }
}
