// Serial vs OpenMP timing for the hot sweep kernels.

#include <chrono>
#include <cstdio>
#include <vector>

#include "maglab/oscillator.hpp"
#include "maglab/quadrature.hpp"
#include "maglab/zonal.hpp"

namespace {

double seconds(void (*body)(maglab::Exec), maglab::Exec exec) {
    const auto t0 = std::chrono::steady_clock::now();
    body(exec);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void ho_sweep(maglab::Exec exec) {
    const maglab::HOConfig config(0.02, 0.5, 0.5, 1024);
    const maglab::IntervalQuadrature u_quad = maglab::gauss_legendre(16, -0.5, 0.5);
    const std::vector<double> xs{-0.1, 0.0, 0.1};
    (void)maglab::averaged_intensity_ho_profile(config, xs, u_quad, exec);
}

void zonal_sweep(maglab::Exec exec) {
    const maglab::ZonalConfig config(320, 0.1, 0.4);
    const maglab::BallQuadrature disk = maglab::disk_quadrature(0.4, 32, 64);
    (void)maglab::averaged_intensity_zonal(config, {0.0, 0.0}, disk, exec);
}

void report(const char* name, void (*body)(maglab::Exec)) {
    const double ts = seconds(body, maglab::Exec::Serial);
    const double tp = seconds(body, maglab::Exec::Parallel);
    std::printf("%-24s serial %7.2fs   openmp %7.2fs   speedup %.2fx\n", name, ts, tp, ts / tp);
}

}  // namespace

int main() {
    std::printf("kernel                   reference           parallel\n");
    report("ho u-sweep (N=1024)", ho_sweep);
    report("zonal disk sweep", zonal_sweep);
    return 0;
}
