#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pcmt/tree.hpp"

namespace pcmt {

struct OracleParams {
    int theta = 0;      // oracle node count
    double beta = 0;    // corruptible fraction, < 1/2
    double gamma = 0;   // quorum margin, <= 1 - 2*beta
    double p_th = 0;    // failure probability threshold
};

// floor(min_j (alpha_j - 1)/N_j * N_l) + 1, in exact rational arithmetic.
long long mu_min(const std::vector<long long>& alphas, const std::vector<long long>& ns);
long long mu_min(const TreePlan& plan);

// Number of adversarial-quorum nodes used in the bound's exponent:
// ceil(gamma * theta), snapping near-integral products first.
long long quorum_count(double gamma, int theta);

struct ProbBound {
    double upper = 0;                            // e^(theta*He(gamma)) * raw
    boost::multiprecision::cpp_rational raw;     // exact alternating sum
};

// Upper bound on the probability that a random g-dispersal fails to be
// (l, mu)-correct. The alternating sum runs over exact big integers; the
// entropy factor is applied in log space at the end.
ProbBound prob_not_correct(long long n_base, long long mu, long long g, const OracleParams& oracle);

// Smallest g in [1, N_l] whose bound is below p_th (linear upward scan).
long long g_star(long long mu, const OracleParams& oracle, long long n_base);

uint64_t comm_cost(long long g_star, const OracleParams& oracle, uint64_t sample_bytes);

struct DispersalPlan {
    long long g = 0;
    std::vector<std::vector<int>> assignment;  // theta sorted g-subsets of [1, N_l]
};

// theta subsets of size g drawn uniformly (distinct elements per node,
// independent across nodes).
DispersalPlan sample_dispersal(long long n_base, long long g, int theta, uint64_t seed);

// (l, mu)-correctness: every quorum of ceil(gamma*theta) nodes jointly holds
// at least N_l - mu + 1 distinct base symbols. Exhaustive over quorums for
// theta <= 12, randomized (2000 draws) otherwise.
bool plan_correct(const DispersalPlan& plan, long long n_base, double gamma, long long mu,
                  uint64_t seed = 1);

// Per-layer coverage through Merkle proofs: every quorum of ceil(gamma*theta)
// nodes holds at least N_j - eta + 1 distinct layer-j coded symbols. Used to
// check the mu_min chain on small trees. Exhaustive; theta <= 12.
bool plan_layer_correct(const DispersalPlan& plan, const TreePlan& tree, int layer, double gamma,
                        long long eta);

// Monte-Carlo estimate of Prob(not (l,mu)-correct) over random plans.
// OpenMP with per-trial seeds; reference implementation is serial.
double mc_not_correct(long long n_base, long long mu, long long g, const OracleParams& oracle,
                      long long trials, uint64_t seed);
double mc_not_correct_reference(long long n_base, long long mu, long long g,
                                const OracleParams& oracle, long long trials, uint64_t seed);

// JSON report {N_l, mu_min, theta, beta, gamma, p_th, g_star, X, comm_cost_bytes}.
std::string dispersal_report(const TreePlan& plan, const OracleParams& oracle,
                             uint64_t sample_bytes);

}  // namespace pcmt
