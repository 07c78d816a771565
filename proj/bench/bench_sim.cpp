// Benchmark: OpenMP Monte-Carlo kernels against their serial references.
// Both paths must produce identical numbers; the table reports timings.

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pcmt/da_sim.hpp"
#include "pcmt/dispersal.hpp"
#include "pcmt/tree.hpp"

using namespace pcmt;

namespace {

double time_ms(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both columns run serially\n");
#endif

    PcmtParams params;
    params.K = 64;
    params.R = Rational::parse("1/2");
    params.q = 4;
    params.l = 3;
    params.c = 32;
    const TreePlan plan = plan_tree(params);
    const AttackSpec attack = min_stopping_tree_attack(plan, plan.l());

    std::printf("%-34s %12s %12s %9s\n", "kernel", "parallel ms", "serial ms", "speedup");

    {
        const long long trials = 2000000, s = 40;
        double par_result = 0, ser_result = 0;
        const double par = time_ms([&] { par_result = simulate(plan, attack, s, trials, 7); });
        const double ser =
            time_ms([&] { ser_result = simulate_reference(plan, attack, s, trials, 7); });
        std::printf("%-34s %12.1f %12.1f %8.2fx  %s\n", "light-node sampling (2e6 trials)", par,
                    ser, ser / par, par_result == ser_result ? "results equal" : "MISMATCH");
    }
    {
        OracleParams oracle;
        oracle.theta = 16;
        oracle.beta = 0.2;
        oracle.gamma = 0.25;
        oracle.p_th = 1e-6;
        const long long trials = 200000;
        double par_result = 0, ser_result = 0;
        const double par =
            time_ms([&] { par_result = mc_not_correct(32, 8, 6, oracle, trials, 7); });
        const double ser =
            time_ms([&] { ser_result = mc_not_correct_reference(32, 8, 6, oracle, trials, 7); });
        std::printf("%-34s %12.1f %12.1f %8.2fx  %s\n", "dispersal coverage (2e5 plans)", par, ser,
                    ser / par, par_result == ser_result ? "results equal" : "MISMATCH");
    }
    return 0;
}
