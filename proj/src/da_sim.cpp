#include "pcmt/da_sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "pcmt/errors.hpp"
#include "pcmt/rng.hpp"

namespace pcmt {

namespace {

// Marks every base coded position whose sample bundle (the symbol itself
// plus its proof elements) touches the withheld set.
std::vector<char> covered_positions(const TreePlan& plan, const AttackSpec& attack) {
    const int l = plan.l();
    if (attack.layer < 1 || attack.layer > l) throw ParamError("attack layer out of range");
    const LayerPlan& target = plan.layer(attack.layer);
    std::vector<char> hidden(static_cast<size_t>(target.design.n_sef) + 1, 0);
    for (long long pos : attack.hidden) {
        if (pos < 1 || pos > target.design.n_sef) throw ParamError("hidden position out of range");
        hidden[static_cast<size_t>(pos)] = 1;
    }

    const LayerPlan& base = plan.layer(l);
    std::vector<char> covered(static_cast<size_t>(base.design.n_sef) + 1, 0);
    for (long long pos = 1; pos <= base.design.n_sef; ++pos) {
        if (attack.layer == l) {
            covered[static_cast<size_t>(pos)] = hidden[static_cast<size_t>(pos)];
            continue;
        }
        const long long lambda = base.index_of_coded(pos);
        const LayerPlan& up = plan.layer(attack.layer);
        const long long data_pos = 1 + (lambda - 1) % up.k;
        const long long parity_pos = up.k + 1 + (lambda - 1) % (up.design.n_sef - up.k);
        covered[static_cast<size_t>(pos)] =
            hidden[static_cast<size_t>(data_pos)] || hidden[static_cast<size_t>(parity_pos)];
    }
    return covered;
}

void require_valid_attack(const TreePlan& plan, const AttackSpec& attack) {
    if (attack.layer < 1 || attack.layer > plan.l()) throw ParamError("attack layer out of range");
    const LayerPlan& lp = plan.layer(attack.layer);
    std::set<long long> hidden(attack.hidden.begin(), attack.hidden.end());
    std::map<int, Symbol> observed;
    for (long long pos = 1; pos <= lp.design.n_sef; ++pos) {
        if (!hidden.count(pos)) observed[static_cast<int>(pos)] = Symbol{0};
    }
    if (peel_decode(lp.design.fg, observed, 1).status != DecodeStatus::Stuck)
        throw ParamError("hidden set is decodable; not a valid availability attack");
}

bool trial_fails(Rng& rng, const std::vector<char>& covered, long long n_base, long long s) {
    for (long long i = 0; i < s; ++i) {
        const long long pos = 1 + static_cast<long long>(rng.below(static_cast<uint64_t>(n_base)));
        if (covered[static_cast<size_t>(pos)]) return false;  // attack detected
    }
    return true;
}

}  // namespace

AttackSpec min_stopping_tree_attack(const TreePlan& plan, int layer) {
    if (layer < 1 || layer > plan.l()) throw ParamError("attack layer out of range");
    const LayerPlan& lp = plan.layer(layer);
    // Stopping trees live on the unpruned design graph; the leaf set is the
    // same set of coded positions either way.
    const CodeDesign ref =
        sef_design(static_cast<int>(lp.n_target), static_cast<int>(lp.k), lp.align_divisor);
    const auto t = tree_leaf_sizes(lp.n_target);
    int best = ref.info[0];
    for (int i : ref.info) {
        if (t[static_cast<size_t>(i) - 1] < t[static_cast<size_t>(best) - 1]) best = i;
    }
    const StoppingSet ss = stopping_tree(ref.fg, best);

    AttackSpec attack;
    attack.layer = layer;
    for (int leaf : ss.leaf_set) {
        const auto it = std::find(ref.fg.coded_vn_ids.begin(), ref.fg.coded_vn_ids.end(), leaf);
        attack.hidden.push_back((it - ref.fg.coded_vn_ids.begin()) + 1);
    }
    std::sort(attack.hidden.begin(), attack.hidden.end());
    return attack;
}

double pf_analytical_layer(const TreePlan& plan, int layer, long long s) {
    if (s < 0) throw ParamError("sample count must be nonnegative");
    const LayerPlan& lp = plan.layer(layer);
    const double miss = 1.0 - static_cast<double>(lp.design.alpha_min) /
                                  static_cast<double>(lp.design.n_sef);
    return std::pow(miss, static_cast<double>(s));
}

double pf_analytical(const TreePlan& plan, long long s) {
    double worst = 0.0;
    for (int j = 1; j <= plan.l(); ++j) worst = std::max(worst, pf_analytical_layer(plan, j, s));
    return worst;
}

double simulate(const TreePlan& plan, const AttackSpec& attack, long long s, long long trials,
                uint64_t seed) {
    if (s < 0 || trials < 1) throw ParamError("need s >= 0 and trials >= 1");
    require_valid_attack(plan, attack);
    const std::vector<char> covered = covered_positions(plan, attack);
    const long long n_base = plan.base_n();
    const Rng master(seed);

    long long failures = 0;
#pragma omp parallel for schedule(static) reduction(+ : failures)
    for (long long t = 0; t < trials; ++t) {
        Rng rng = master.derive(static_cast<uint64_t>(t));
        failures += trial_fails(rng, covered, n_base, s);
    }
    return static_cast<double>(failures) / static_cast<double>(trials);
}

double simulate_reference(const TreePlan& plan, const AttackSpec& attack, long long s,
                          long long trials, uint64_t seed) {
    if (s < 0 || trials < 1) throw ParamError("need s >= 0 and trials >= 1");
    require_valid_attack(plan, attack);
    const std::vector<char> covered = covered_positions(plan, attack);
    const long long n_base = plan.base_n();
    const Rng master(seed);

    long long failures = 0;
    for (long long t = 0; t < trials; ++t) {
        Rng rng = master.derive(static_cast<uint64_t>(t));
        failures += trial_fails(rng, covered, n_base, s);
    }
    return static_cast<double>(failures) / static_cast<double>(trials);
}

SamplingRun simulate_run(const TreePlan& plan, const AttackSpec& attack, long long s,
                         long long trials, uint64_t seed) {
    SamplingRun run;
    run.s = s;
    run.trials = trials;
    run.seed = seed;
    run.failure_rate = simulate(plan, attack, s, trials, seed);
    run.detected = trials - static_cast<long long>(std::llround(run.failure_rate * trials));
    return run;
}

std::vector<double> simulate_multi(const TreePlan& plan, const AttackSpec& attack,
                                   const std::vector<long long>& sample_sizes, long long trials,
                                   uint64_t seed) {
    if (trials < 1) throw ParamError("trials must be positive");
    require_valid_attack(plan, attack);
    const std::vector<char> covered = covered_positions(plan, attack);
    const long long n_base = plan.base_n();
    long long max_s = 0;
    for (long long s : sample_sizes) {
        if (s < 0) throw ParamError("sample count must be nonnegative");
        max_s = std::max(max_s, s);
    }
    const Rng master(seed);

    std::vector<long long> failures(sample_sizes.size(), 0);
#pragma omp parallel
    {
        std::vector<long long> local(sample_sizes.size(), 0);
#pragma omp for schedule(static) nowait
        for (long long t = 0; t < trials; ++t) {
            Rng rng = master.derive(static_cast<uint64_t>(t));
            // Detection time: first draw that hits the withheld bundle.
            long long first_hit = max_s + 1;
            for (long long i = 0; i < max_s; ++i) {
                const long long pos =
                    1 + static_cast<long long>(rng.below(static_cast<uint64_t>(n_base)));
                if (covered[static_cast<size_t>(pos)]) {
                    first_hit = i + 1;
                    break;
                }
            }
            for (size_t k = 0; k < sample_sizes.size(); ++k) {
                local[k] += sample_sizes[k] < first_hit;
            }
        }
#pragma omp critical
        for (size_t k = 0; k < failures.size(); ++k) failures[k] += local[k];
    }
    std::vector<double> rates(sample_sizes.size());
    for (size_t k = 0; k < rates.size(); ++k)
        rates[k] = static_cast<double>(failures[k]) / static_cast<double>(trials);
    return rates;
}

long long sample_budget(uint64_t block_bytes, uint64_t sample_bytes, double download_ratio) {
    if (download_ratio <= 1.0) throw ParamError("download ratio must exceed 1");
    if (sample_bytes == 0) throw ParamError("sample size must be positive");
    const long double budget = static_cast<long double>(block_bytes) / download_ratio;
    const long double s = budget / static_cast<long double>(sample_bytes);
    if (s < 0) return 0;
    return static_cast<long long>(std::floor(s + 1e-9L));
}

double scaling_ratio(long long K, Rational R, double download_ratio) {
    if (K < 2) throw ParamError("K must be at least 2");
    if ((K * R.den) % R.num != 0) throw ParamError("K/R must be integral");
    const long long N = K * R.den / R.num;
    const long long s = static_cast<long long>(
        std::floor(static_cast<long double>(K) / download_ratio + 1e-9L));
    const long long alpha = threshold_lower_bound(N, K);
    // ln(Pu/Pp) = s * [ln(1 - 1/K) - ln(1 - alpha/N)]
    const double log_ratio =
        static_cast<double>(s) *
        (std::log1p(-1.0 / static_cast<double>(K)) -
         std::log1p(-static_cast<double>(alpha) / static_cast<double>(N)));
    return log_ratio / std::sqrt(static_cast<double>(K));
}

double scaling_limit(Rational R, double download_ratio) {
    return 2.0 * std::sqrt(R.value()) / download_ratio;
}

std::string attack_csv_header() {
    return "K,R,q,l,layer,s,analytical_pf,empirical_pf,trials,seed";
}

std::string attack_csv_row(const TreePlan& plan, const AttackSpec& attack, long long s,
                           double analytical, double empirical, long long trials, uint64_t seed) {
    std::ostringstream out;
    out.precision(10);
    out << plan.params.K << "," << plan.params.R.str() << "," << plan.params.q << ","
        << plan.params.l << "," << attack.layer << "," << s << "," << analytical << ","
        << empirical << "," << trials << "," << seed;
    return out.str();
}

}  // namespace pcmt
