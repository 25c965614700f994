// Benchmark: serial vs OpenMP-parallel parameter scan.
//
// Runs the dual-route (quadrature + residue) scan over an (L1, Gamma) grid
// with the serial reference implementation and with the parallel kernel at
// several thread counts, reports wall time and speedup, and verifies that
// every parallel result is identical to the serial one.
//
// Usage: bench-scan [n_L1 n_Gamma [repeats]]   (defaults 40 40 3)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "secular/core.hpp"
#include "secular/melnikov.hpp"

using namespace secular;
using clock_type = std::chrono::steady_clock;

namespace {

double time_once(const ScanSpec& spec, const SystemParams& sys, int jobs,
                 ParameterScan& out) {
    const auto t0 = clock_type::now();
    out = (jobs == 0) ? scan_parameter_set_serial(spec, sys, 2.0, 0.5)
                      : scan_parameter_set(spec, sys, 2.0, 0.5, jobs);
    const auto t1 = clock_type::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

double best_of(int repeats, const ScanSpec& spec, const SystemParams& sys,
               int jobs, ParameterScan& out) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r)
        best = std::fmin(best, time_once(spec, sys, jobs, out));
    return best;
}

bool identical(const ParameterScan& a, const ParameterScan& b) {
    if (a.cells.size() != b.cells.size()) return false;
    for (size_t i = 0; i < a.cells.size(); ++i) {
        const ScanCell &x = a.cells[i], &y = b.cells[i];
        if (x.flag != y.flag || x.variant != y.variant) return false;
        // Bitwise equality: the parallel kernel runs the same per-cell code.
        if (x.abs_Lplus != y.abs_Lplus || x.arg_Lplus != y.arg_Lplus ||
            x.agreement != y.agreement)
            return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    ScanSpec spec;
    spec.L1_min = 0.8;
    spec.L1_max = 1.3;
    spec.n_L1 = argc > 1 ? std::atoi(argv[1]) : 40;
    spec.frac_min = 0.05;
    spec.frac_max = 0.95;
    spec.n_Gamma = argc > 2 ? std::atoi(argv[2]) : 40;
    const int repeats = argc > 3 ? std::atoi(argv[3]) : 3;
    if (spec.n_L1 < 1 || spec.n_Gamma < 1 || repeats < 1) {
        std::fprintf(stderr, "usage: bench-scan [n_L1 n_Gamma [repeats]]\n");
        return 2;
    }

    const SystemParams sys = derive_system(1.0, 1.0, 1.0);

    int max_threads = 1;
#ifdef _OPENMP
    max_threads = omp_get_max_threads();
#endif
    std::printf("scan grid %d x %d (%d cells), best of %d runs, %d hw threads\n",
                spec.n_L1, spec.n_Gamma, spec.n_L1 * spec.n_Gamma, repeats,
                max_threads);

    ParameterScan ref;
    const double t_serial = best_of(repeats, spec, sys, 0, ref);
    std::printf("%-22s %10.4f s\n", "serial reference", t_serial);

    std::vector<int> thread_counts = {1};
    for (int j = 2; j <= max_threads; j *= 2) thread_counts.push_back(j);
    if (thread_counts.back() != max_threads)
        thread_counts.push_back(max_threads);

    bool all_match = true;
    for (int jobs : thread_counts) {
        ParameterScan par;
        const double t = best_of(repeats, spec, sys, jobs, par);
        const bool ok = identical(ref, par);
        all_match = all_match && ok;
        std::printf("parallel jobs=%-8d %10.4f s   speedup %5.2fx   %s\n",
                    jobs, t, t_serial / t, ok ? "results identical" : "MISMATCH");
    }
    if (!all_match) {
        std::printf("FAIL: parallel results differ from serial reference\n");
        return 1;
    }
    return 0;
}
