#include "pcmt/dispersal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "json.hpp"
#include "pcmt/errors.hpp"
#include "pcmt/rng.hpp"

namespace pcmt {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

namespace {

std::vector<cpp_int> factorials(long long n) {
    std::vector<cpp_int> f(static_cast<size_t>(n) + 1);
    f[0] = 1;
    for (long long i = 1; i <= n; ++i) f[static_cast<size_t>(i)] = f[static_cast<size_t>(i) - 1] * i;
    return f;
}

cpp_int binom(const std::vector<cpp_int>& fact, long long n, long long k) {
    if (k < 0 || k > n || n < 0) return 0;
    return fact[static_cast<size_t>(n)] /
           (fact[static_cast<size_t>(k)] * fact[static_cast<size_t>(n - k)]);
}

double natural_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

// log2 of a positive big integer, via the top bits.
double log2_big(const cpp_int& x) {
    const long long bits = static_cast<long long>(msb(x));
    if (bits <= 900) return std::log2(x.convert_to<double>());
    const cpp_int top = x >> (bits - 500);
    return std::log2(top.convert_to<double>()) + static_cast<double>(bits - 500);
}

void check_oracle(const OracleParams& oracle) {
    if (oracle.theta < 1) throw ParamError("oracle needs at least one node");
    if (oracle.beta < 0 || oracle.beta >= 0.5) throw ParamError("beta must lie in [0, 1/2)");
    if (oracle.gamma <= 0 || oracle.gamma > 1 - 2 * oracle.beta + 1e-12)
        throw ParamError("gamma must lie in (0, 1 - 2*beta]");
}

// Floyd's sampling: g distinct values from [1, n], deterministic per rng.
std::vector<int> sample_subset(Rng& rng, long long n, long long g) {
    std::set<int> chosen;
    for (long long j = n - g + 1; j <= n; ++j) {
        const int t = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(j)));
        if (!chosen.insert(t).second) chosen.insert(static_cast<int>(j));
    }
    return {chosen.begin(), chosen.end()};
}

bool quorums_cover(const std::vector<uint64_t>& masks, long long e, long long need_bits,
                   bool exhaustive, Rng rng) {
    const int theta = static_cast<int>(masks.size());
    if (exhaustive) {
        // Iterate all e-subsets of nodes via the classic combination walk.
        std::vector<int> idx(static_cast<size_t>(e));
        for (long long i = 0; i < e; ++i) idx[static_cast<size_t>(i)] = static_cast<int>(i);
        for (;;) {
            uint64_t u = 0;
            for (long long i = 0; i < e; ++i) u |= masks[static_cast<size_t>(idx[static_cast<size_t>(i)])];
            if (std::popcount(u) < need_bits) return false;
            long long pos = e - 1;
            while (pos >= 0 && idx[static_cast<size_t>(pos)] == theta - e + pos) --pos;
            if (pos < 0) break;
            idx[static_cast<size_t>(pos)]++;
            for (long long i = pos + 1; i < e; ++i)
                idx[static_cast<size_t>(i)] = idx[static_cast<size_t>(i) - 1] + 1;
        }
        return true;
    }
    for (int trial = 0; trial < 2000; ++trial) {
        std::set<int> nodes;
        while (static_cast<long long>(nodes.size()) < e)
            nodes.insert(static_cast<int>(rng.below(static_cast<uint64_t>(theta))));
        uint64_t u = 0;
        for (int i : nodes) u |= masks[static_cast<size_t>(i)];
        if (std::popcount(u) < need_bits) return false;
    }
    return true;
}

std::vector<uint64_t> node_masks(const DispersalPlan& plan) {
    std::vector<uint64_t> masks(plan.assignment.size(), 0);
    for (size_t i = 0; i < plan.assignment.size(); ++i) {
        for (int s : plan.assignment[i]) masks[i] |= uint64_t{1} << (s - 1);
    }
    return masks;
}

}  // namespace

long long mu_min(const std::vector<long long>& alphas, const std::vector<long long>& ns) {
    if (alphas.empty() || alphas.size() != ns.size())
        throw ParamError("per-layer thresholds and lengths must align");
    const long long n_base = ns.back();
    // min over j of (alpha_j - 1)/N_j as an exact rational, then floor.
    long long best_num = alphas[0] - 1, best_den = ns[0];
    for (size_t j = 0; j < alphas.size(); ++j) {
        if (alphas[j] < 1 || ns[j] < 1) throw ParamError("thresholds must be positive");
        if ((alphas[j] - 1) * best_den < best_num * ns[j]) {
            best_num = alphas[j] - 1;
            best_den = ns[j];
        }
    }
    return best_num * n_base / best_den + 1;
}

long long mu_min(const TreePlan& plan) {
    std::vector<long long> alphas, ns;
    for (const LayerPlan& lp : plan.layers) {
        alphas.push_back(lp.design.alpha_min);
        ns.push_back(lp.design.n_sef);
    }
    return mu_min(alphas, ns);
}

long long quorum_count(double gamma, int theta) {
    const double t = gamma * static_cast<double>(theta);
    const double snapped = std::round(t);
    if (std::abs(t - snapped) < 1e-9) return static_cast<long long>(snapped);
    return static_cast<long long>(std::ceil(t));
}

static ProbBound bound_with_cache(const std::vector<cpp_int>& fact, long long n_base, long long mu,
                           long long g, const OracleParams& oracle) {
    if (mu < 1 || mu > n_base) throw ParamError("mu must lie in [1, N_l]");
    if (g < 1 || g > n_base) throw ParamError("g must lie in [1, N_l]");
    check_oracle(oracle);
    const long long e = std::max<long long>(1, quorum_count(oracle.gamma, oracle.theta));

    const cpp_int denom = pow(binom(fact, n_base, g), static_cast<unsigned>(e));
    cpp_int sum = 0;
    for (long long j = 0; j <= n_base - mu; ++j) {
        if (j < g) continue;  // C(j, g) = 0 kills the term
        const cpp_int term = binom(fact, n_base, j) * binom(fact, n_base - j - 1, mu - 1) *
                             pow(binom(fact, j, g), static_cast<unsigned>(e));
        if ((n_base - mu - j) % 2 == 0) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    ProbBound out;
    if (sum <= 0) {
        out.raw = 0;
        out.upper = 0.0;
        return out;
    }
    out.raw = cpp_rational(sum, denom);
    const double log2_raw = log2_big(sum) - log2_big(denom);
    const double ln_value =
        static_cast<double>(oracle.theta) * natural_entropy(oracle.gamma) + log2_raw * std::log(2.0);
    out.upper = std::exp(ln_value);
    return out;
}

ProbBound prob_not_correct(long long n_base, long long mu, long long g,
                           const OracleParams& oracle) {
    return bound_with_cache(factorials(n_base), n_base, mu, g, oracle);
}

long long g_star(long long mu, const OracleParams& oracle, long long n_base) {
    if (mu < 1 || mu > n_base) throw ParamError("mu must lie in [1, N_l]");
    check_oracle(oracle);
    const auto fact = factorials(n_base);
    // Upward scan for the first g below the threshold, evaluated in blocks
    // so the blocks can run in parallel; the result is the same first hit.
    const long long block = 16;
    for (long long lo = 1; lo <= n_base; lo += block) {
        const long long hi = std::min(n_base, lo + block - 1);
        std::vector<char> ok(static_cast<size_t>(hi - lo + 1), 0);
#pragma omp parallel for schedule(dynamic)
        for (long long g = lo; g <= hi; ++g) {
            ok[static_cast<size_t>(g - lo)] =
                bound_with_cache(fact, n_base, mu, g, oracle).upper < oracle.p_th;
        }
        for (long long g = lo; g <= hi; ++g) {
            if (ok[static_cast<size_t>(g - lo)]) return g;
        }
    }
    throw InfeasibleError("no dispersal size g <= N_l meets the failure threshold");
}

uint64_t comm_cost(long long g_star, const OracleParams& oracle, uint64_t sample_bytes) {
    return static_cast<uint64_t>(oracle.theta) * static_cast<uint64_t>(g_star) * sample_bytes;
}

DispersalPlan sample_dispersal(long long n_base, long long g, int theta, uint64_t seed) {
    if (g < 1 || g > n_base) throw ParamError("g must lie in [1, N_l]");
    if (theta < 1) throw ParamError("need at least one oracle node");
    DispersalPlan plan;
    plan.g = g;
    plan.assignment.resize(static_cast<size_t>(theta));
    const Rng master(seed);
    for (int i = 0; i < theta; ++i) {
        Rng rng = master.derive(static_cast<uint64_t>(i));
        plan.assignment[static_cast<size_t>(i)] = sample_subset(rng, n_base, g);
    }
    return plan;
}

bool plan_correct(const DispersalPlan& plan, long long n_base, double gamma, long long mu,
                  uint64_t seed) {
    if (n_base > 64) throw CapacityError("coverage masks support up to 64 base symbols");
    const int theta = static_cast<int>(plan.assignment.size());
    const long long e = std::max<long long>(1, quorum_count(gamma, theta));
    if (e > theta) throw ParamError("quorum exceeds the node count");
    return quorums_cover(node_masks(plan), e, n_base - mu + 1, theta <= 12, Rng(seed));
}

bool plan_layer_correct(const DispersalPlan& plan, const TreePlan& tree, int layer, double gamma,
                        long long eta) {
    const long long n_layer = tree.layer(layer).design.n_sef;
    if (n_layer > 64) throw CapacityError("coverage masks support up to 64 symbols per layer");
    const int theta = static_cast<int>(plan.assignment.size());
    if (theta > 12) throw CapacityError("exhaustive per-layer coverage is limited to 12 nodes");

    // Layer-j symbols a node holds through the proofs of its base symbols.
    const LayerPlan& base = tree.layer(tree.l());
    std::vector<uint64_t> masks(plan.assignment.size(), 0);
    for (size_t i = 0; i < plan.assignment.size(); ++i) {
        for (int pos : plan.assignment[i]) {
            if (layer == tree.l()) {
                masks[i] |= uint64_t{1} << (pos - 1);
                continue;
            }
            const long long lambda = base.index_of_coded(pos);
            const LayerPlan& up = tree.layer(layer);
            const long long dpos = 1 + (lambda - 1) % up.k;
            const long long ppos = up.k + 1 + (lambda - 1) % (up.design.n_sef - up.k);
            masks[i] |= uint64_t{1} << (dpos - 1);
            masks[i] |= uint64_t{1} << (ppos - 1);
        }
    }
    const long long e = std::max<long long>(1, quorum_count(gamma, theta));
    if (e > theta) throw ParamError("quorum exceeds the node count");
    return quorums_cover(masks, e, n_layer - eta + 1, true, Rng(1));
}

double mc_not_correct(long long n_base, long long mu, long long g, const OracleParams& oracle,
                      long long trials, uint64_t seed) {
    if (trials < 1) throw ParamError("trials must be positive");
    if (n_base > 64) throw CapacityError("coverage masks support up to 64 base symbols");
    check_oracle(oracle);
    const Rng master(seed);
    long long bad = 0;
#pragma omp parallel for schedule(static) reduction(+ : bad)
    for (long long t = 0; t < trials; ++t) {
        Rng rng = master.derive(static_cast<uint64_t>(t));
        DispersalPlan plan;
        plan.g = g;
        plan.assignment.resize(static_cast<size_t>(oracle.theta));
        for (int i = 0; i < oracle.theta; ++i)
            plan.assignment[static_cast<size_t>(i)] = sample_subset(rng, n_base, g);
        bad += !plan_correct(plan, n_base, oracle.gamma, mu, rng.next_u64());
    }
    return static_cast<double>(bad) / static_cast<double>(trials);
}

double mc_not_correct_reference(long long n_base, long long mu, long long g,
                                const OracleParams& oracle, long long trials, uint64_t seed) {
    if (trials < 1) throw ParamError("trials must be positive");
    if (n_base > 64) throw CapacityError("coverage masks support up to 64 base symbols");
    check_oracle(oracle);
    const Rng master(seed);
    long long bad = 0;
    for (long long t = 0; t < trials; ++t) {
        Rng rng = master.derive(static_cast<uint64_t>(t));
        DispersalPlan plan;
        plan.g = g;
        plan.assignment.resize(static_cast<size_t>(oracle.theta));
        for (int i = 0; i < oracle.theta; ++i)
            plan.assignment[static_cast<size_t>(i)] = sample_subset(rng, n_base, g);
        bad += !plan_correct(plan, n_base, oracle.gamma, mu, rng.next_u64());
    }
    return static_cast<double>(bad) / static_cast<double>(trials);
}

std::string dispersal_report(const TreePlan& plan, const OracleParams& oracle,
                             uint64_t sample_bytes) {
    const long long n_base = plan.base_n();
    const long long mu = mu_min(plan);
    const long long g = g_star(mu, oracle, n_base);
    nlohmann::json j;
    j["N_l"] = n_base;
    j["mu_min"] = mu;
    j["theta"] = oracle.theta;
    j["beta"] = oracle.beta;
    j["gamma"] = oracle.gamma;
    j["p_th"] = oracle.p_th;
    j["g_star"] = g;
    j["X"] = sample_bytes;
    j["comm_cost_bytes"] = comm_cost(g, oracle, sample_bytes);
    return j.dump();
}

}  // namespace pcmt
