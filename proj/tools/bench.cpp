// Benchmark comparing the OpenMP-parallel hot paths against their serial
// reference counterparts: the radix-2 transform vs the O(N^2) DFT, and the
// ensemble runner at 1 thread vs all threads.

#include <chrono>
#include <cstdio>

#include "svwe/fft.hpp"
#include "svwe/reference.hpp"
#include "svwe/solver.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace svwe;
using clock_type = std::chrono::steady_clock;

namespace {

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

void bench_fft() {
    std::printf("-- transform: radix-2 vs reference DFT --\n");
    for (int n : {64, 128, 256}) {
        Grid g(1, 8.0, n);
        Field f(g);
        for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = std::sin(0.371 * i);
        SpectralField fast = forward_transform(f);  // warm the plan cache
        auto t0 = clock_type::now();
        for (int r = 0; r < 200; ++r) fast = forward_transform(f);
        const double fast_ms = ms_since(t0) / 200;
        t0 = clock_type::now();
        const SpectralField slow = reference::dft(f);
        const double slow_ms = ms_since(t0);
        double err = 0;
        for (std::size_t i = 0; i < g.size(); ++i)
            err = std::max(err, std::abs(fast.coefficients[i] - slow.coefficients[i]));
        std::printf("  N=%5d  fft %8.4f ms   dft %10.3f ms   speedup %8.1fx   max err %.2e\n", n,
                    fast_ms, slow_ms, slow_ms / fast_ms, err);
    }
}

void bench_ensemble() {
    std::printf("-- ensemble: 1 thread vs %d threads --\n",
#ifdef _OPENMP
                omp_get_max_threads()
#else
                1
#endif
    );
    SimConfig cfg;
    cfg.dim = 2;
    cfg.extent = 8.0;
    cfg.points_per_axis = 128;
    cfg.dt = 0.02;
    cfg.horizon = 0.5;
    cfg.f = Nonlinearity::one();
    cfg.replicates = 16;
    cfg.seed = 42;
    cfg.observe_times = {0.5};
    cfg.validate();

    auto run_with = [&](int threads) {
#ifdef _OPENMP
        omp_set_num_threads(threads);
#else
        (void)threads;
#endif
        auto t0 = clock_type::now();
        double checksum = 0;
        for_each_replicate(cfg, [&](int, const std::vector<std::vector<double>>& snaps) {
            double local = 0;
            for (double v : snaps[0]) local += v * v;
#pragma omp atomic
            checksum += local;
        });
        const double ms = ms_since(t0);
        std::printf("  threads=%d: %8.1f ms (checksum %.6e)\n", threads, ms, checksum);
        return ms;
    };
    const double serial = run_with(1);
#ifdef _OPENMP
    const int max_threads = omp_get_max_threads() > 1 ? omp_get_max_threads() : 1;
#else
    const int max_threads = 1;
#endif
    if (max_threads > 1) {
        const double par = run_with(max_threads);
        std::printf("  parallel speedup: %.2fx\n", serial / par);
    } else {
        std::printf("  single hardware thread available; parallel comparison skipped\n");
    }
}

}  // namespace

int main() {
    bench_fft();
    bench_ensemble();
    return 0;
}
