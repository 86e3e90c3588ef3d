// Benchmark: OpenMP grid kernels against the serial reference
// implementation, plus the checker sweeps that parallelize over probe
// directions. Results must agree bitwise; timings show the speedup.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gstft/seminorm.hpp"

using namespace gstft;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(
               clock::now().time_since_epoch())
        .count();
}

template <class F>
double time_ms(F&& fn) {
    const double t0 = now_ms();
    fn();
    return now_ms() - t0;
}

}  // namespace

int main(int argc, char** argv) {
    int nodes = 81;
    if (argc > 1) nodes = std::atoi(argv[1]);

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif

    const QuadSpec quad;
    Window psi(1, 1.0);
    TestDistribution f = TestDistribution::gaussian(1, 1.0);
    f.add(DeltaDerivTerm{{0.3}, {1}, Cplx(0.5, 0.5)});
    f.add(ExpPolyTerm{{-0.5}, {Poly::constant(1.0)}, {0.0}, 1.0});
    const GridSpec grid = GridSpec::symmetric(1, 4.0, 8.0, nodes, nodes);

    TimeFrequencyField Fp, Fs;
    const double t_par = time_ms([&] { Fp = stft(f, psi, grid, quad); });
    const double t_ser = time_ms([&] { Fs = stft_serial(f, psi, grid, quad); });

    bool identical = Fp.values.size() == Fs.values.size();
    for (std::size_t k = 0; identical && k < Fp.values.size(); ++k)
        identical = Fp.values[k] == Fs.values[k];

    std::printf("stft %dx%d grid   : omp %8.1f ms   serial %8.1f ms   "
                "speedup %.2fx   bitwise-equal %s\n",
                nodes, nodes, t_par, t_ser, t_ser / t_par,
                identical ? "yes" : "NO");
    if (!identical) return 1;

    // Weighted-norm scan (parallel over grid nodes inside).
    const ConvexBody K = ConvexBody::vpolytope({{-1.0}, {1.0}});
    const Weight v = Weight::poly_inv(2);
    double norm_val = 0.0;
    const double t_norm =
        time_ms([&] { norm_val = tf_weighted_norm(Fp, K, v); });
    std::printf("tf_weighted_norm  : %8.1f ms   value %.6g\n", t_norm, norm_val);

    // Condition checker sweep on an exponential system.
    const auto region = OpenConvexRegion::hregion({{-1.0}}, {0.0});
    const auto system = exp_weight_system(region, 8);
    double t_check = time_ms([&] {
        (void)check_V(system);
        (void)check_omega_switched(system);
    });
    std::printf("weight checkers   : %8.1f ms\n", t_check);
    return 0;
}
