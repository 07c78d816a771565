#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcmt/tree.hpp"

namespace pcmt {

// A data-availability attack: the producer withholds `hidden` coded positions
// of one layer. Valid only if the withheld set actually stalls the peeling
// decoder.
struct AttackSpec {
    int layer = 0;
    std::vector<long long> hidden;  // coded positions, 1-based
};

// Default adversary: hide the leaf set of the minimum stopping tree over the
// information rows. Computed on the unpruned design graph; hiding the same
// coded positions stalls the pruned decoder as well.
AttackSpec min_stopping_tree_attack(const TreePlan& plan, int layer);

// Closed-form failure probability max_j (1 - alpha_j/N_j)^s.
double pf_analytical(const TreePlan& plan, long long s);
double pf_analytical_layer(const TreePlan& plan, int layer, long long s);

// Record of one sampling experiment.
struct SamplingRun {
    long long s = 0;
    long long trials = 0;
    uint64_t seed = 0;
    long long detected = 0;
    double failure_rate = 1.0;
};

// Light-node sampling simulation: per trial, draw s base coded positions
// uniformly with replacement; the trial fails (attack undetected) iff no
// drawn symbol and no element of any drawn symbol's proof is withheld.
// Trials run under OpenMP with per-trial derived seeds; results are
// bit-identical to the serial reference for any thread count.
double simulate(const TreePlan& plan, const AttackSpec& attack, long long s, long long trials,
                uint64_t seed);
double simulate_reference(const TreePlan& plan, const AttackSpec& attack, long long s,
                          long long trials, uint64_t seed);
SamplingRun simulate_run(const TreePlan& plan, const AttackSpec& attack, long long s,
                         long long trials, uint64_t seed);

// One pass, several sample sizes, nested draws (prefix of a trial's stream).
std::vector<double> simulate_multi(const TreePlan& plan, const AttackSpec& attack,
                                   const std::vector<long long>& sample_sizes, long long trials,
                                   uint64_t seed);

// Largest s with X*s <= block_bytes / download_ratio.
long long sample_budget(uint64_t block_bytes, uint64_t sample_bytes, double download_ratio);

// (1/sqrt(K)) * ln(P_u / P_p-bound) for rate R and download ratio D_r, using
// the binomial-prefix threshold bound; approaches 2*sqrt(R)/D_r as K grows.
double scaling_ratio(long long K, Rational R, double download_ratio);
double scaling_limit(Rational R, double download_ratio);

// CSV row {K,R,q,l,layer,s,analytical_pf,empirical_pf,trials,seed}.
std::string attack_csv_header();
std::string attack_csv_row(const TreePlan& plan, const AttackSpec& attack, long long s,
                           double analytical, double empirical, long long trials, uint64_t seed);

}  // namespace pcmt
