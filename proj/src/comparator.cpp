#include "pcmt/comparator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "pcmt/da_sim.hpp"
#include "pcmt/errors.hpp"

namespace pcmt {

namespace {

long long isqrt_ceil(long long n) {
    long long r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (r * r < n) ++r;
    while (r > 0 && (r - 1) * (r - 1) >= n) --r;
    return r;
}

// ceil(log2(sqrt(n))): smallest t with 4^t >= n.
long long log2_sqrt_ceil(long long n) {
    long long t = 0;
    long long pow4 = 1;
    while (pow4 < n) {
        pow4 *= 4;
        ++t;
    }
    return t;
}

long long layer_length(long long K, Rational R) {
    if ((K * R.den) % R.num != 0) throw ParamError("K/R must be integral");
    return K * R.den / R.num;
}

}  // namespace

SchemeMetrics metrics_rs2d(long long K, Rational R, uint64_t b, uint64_t y) {
    const long long n_base = layer_length(K, R);
    if (b % static_cast<uint64_t>(K) != 0) throw ParamError("block size must split into K symbols");
    SchemeMetrics m;
    m.scheme = "rs2d";
    m.root_bytes = 2 * y * static_cast<uint64_t>(isqrt_ceil(n_base));
    m.x_bytes = b / static_cast<uint64_t>(K) + y * static_cast<uint64_t>(log2_sqrt_ceil(n_base));
    m.ic_proof_bytes = m.x_bytes * static_cast<uint64_t>(isqrt_ceil(K));
    m.decode_class = "O(N_l^1.5)";
    m.alpha_source = "formula";
    return m;
}

SchemeMetrics metrics_lcmt(long long K, Rational R, int q, int l, int d_c, uint64_t b, uint64_t y,
                           std::optional<long long> alpha_external) {
    if (l < 1 || q < 1 || d_c < 2) throw ParamError("bad LCMT parameters");
    if (b % static_cast<uint64_t>(K) != 0) throw ParamError("block size must split into K symbols");
    // k_1 = K/(qR)^(l-1); the root spans layer 1's code length.
    long long k1 = K;
    for (int j = 0; j < l - 1; ++j) {
        if ((k1 * R.den) % (static_cast<long long>(q) * R.num) != 0)
            throw ParamError("layer information lengths are not integral");
        k1 = k1 * R.den / (static_cast<long long>(q) * R.num);
    }
    SchemeMetrics m;
    m.scheme = "lcmt";
    m.root_bytes = y * static_cast<uint64_t>(layer_length(k1, R));
    m.x_bytes = b / static_cast<uint64_t>(K) +
                y * static_cast<uint64_t>((2 * q - 1) * (l - 1));
    m.ic_proof_bytes = static_cast<uint64_t>(d_c - 1) * (b / static_cast<uint64_t>(K)) +
                       static_cast<uint64_t>(d_c) * y * static_cast<uint64_t>((q - 1) * (l - 1));
    m.decode_class = "O(N_l)";
    m.alpha_source = "external-input";
    m.alpha_base = alpha_external;
    return m;
}

SchemeMetrics metrics_pcmt(const TreePlan& plan, uint64_t b, uint64_t y) {
    const long long K = plan.params.K;
    if (b % static_cast<uint64_t>(K) != 0) throw ParamError("block size must split into K symbols");
    SchemeMetrics m;
    m.scheme = "pcmt";
    m.pruned = plan.params.pruned;
    m.root_bytes = y * static_cast<uint64_t>(plan.layer(1).tvn);
    uint64_t proof_groups = 0;     // sum of (2*ceil(TVN_{j+1}/k_j) - 1)
    uint64_t ic_proof_groups = 0;  // sum of (ceil(TVN_{j+1}/k_j) - 1)
    for (int j = 1; j < plan.l(); ++j) {
        const uint64_t groups = static_cast<uint64_t>(plan.group_count(j));
        proof_groups += 2 * groups - 1;
        ic_proof_groups += groups - 1;
    }
    m.x_bytes = b / static_cast<uint64_t>(K) + y * proof_groups;
    const uint64_t d_p = 3;
    m.ic_proof_bytes =
        (d_p - 1) * (b / static_cast<uint64_t>(K)) + d_p * y * ic_proof_groups;
    m.decode_class = "O(TVN_l)";
    m.alpha_source = "lemma6";
    m.alpha_base = plan.layer(plan.l()).design.alpha_min;
    return m;
}

SweepConfig sweep_config_from_json(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        SweepConfig cfg;
        cfg.schemes = j.at("schemes").get<std::vector<std::string>>();
        cfg.K = j.at("K").get<std::vector<long long>>();
        cfg.c = j.at("c").get<std::vector<uint64_t>>();
        for (const auto& r : j.at("R")) cfg.R.push_back(Rational::parse(r.get<std::string>()));
        cfg.q = j.at("q").get<int>();
        cfg.l = j.at("l").get<int>();
        cfg.oracle.theta = j.at("theta").get<int>();
        cfg.oracle.beta = j.at("beta").get<double>();
        cfg.oracle.gamma = j.at("gamma").get<double>();
        cfg.oracle.p_th = j.at("p_th").get<double>();
        cfg.download_ratio = j.at("D_r").get<double>();
        cfg.d_c = j.value("d_c", 8);
        if (j.contains("lcmt_alpha")) cfg.lcmt_alpha = j.at("lcmt_alpha").get<long long>();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw ParamError(std::string("bad sweep config: ") + e.what());
    }
}

std::string sweep_csv_header() {
    return "scheme,pruned,K,c,R,q,l,root_bytes,x_bytes,ic_proof_bytes,decode_class,alpha_source,"
           "alpha_min,s,analytical_pf,g_star,comm_cost_bytes,error";
}

namespace {

std::string format_row(const SchemeMetrics& m, long long K, uint64_t c, Rational R, int q, int l,
                       const std::string& s, const std::string& pf, const std::string& g,
                       const std::string& cost, const std::string& error) {
    std::ostringstream out;
    out << m.scheme << "," << (m.pruned ? "true" : "false") << "," << K << "," << c << ","
        << R.str() << "," << q << "," << l << "," << m.root_bytes << "," << m.x_bytes << ","
        << m.ic_proof_bytes << "," << m.decode_class << "," << m.alpha_source << ","
        << (m.alpha_base ? std::to_string(*m.alpha_base) : "") << "," << s << "," << pf << ","
        << g << "," << cost << "," << error;
    return out.str();
}

std::string format_pf(double v) {
    std::ostringstream out;
    out.precision(10);
    out << v;
    return out.str();
}

}  // namespace

std::vector<std::string> sweep(const SweepConfig& config) {
    std::vector<std::string> rows;
    for (const std::string& scheme : config.schemes) {
        if (scheme != "rs2d" && scheme != "lcmt" && scheme != "pcmt" && scheme != "prpcmt")
            throw ParamError("unknown scheme: " + scheme);
        for (long long K : config.K) {
            for (uint64_t c : config.c) {
                for (Rational R : config.R) {
                    const uint64_t b = c * static_cast<uint64_t>(K);
                    std::string err;
                    try {
                        if (scheme == "rs2d") {
                            const SchemeMetrics m = metrics_rs2d(K, R, b, 32);
                            rows.push_back(format_row(m, K, c, R, config.q, config.l, "", "", "",
                                                      "", ""));
                        } else if (scheme == "lcmt") {
                            const SchemeMetrics m = metrics_lcmt(K, R, config.q, config.l,
                                                                 config.d_c, b, 32,
                                                                 config.lcmt_alpha);
                            std::string s_col, pf_col;
                            if (m.alpha_base) {
                                // External threshold applies to the base layer.
                                const long long n_base = K * R.den / R.num;
                                const long long s = sample_budget(b, m.x_bytes,
                                                                  config.download_ratio);
                                s_col = std::to_string(s);
                                pf_col = format_pf(std::pow(
                                    1.0 - static_cast<double>(*m.alpha_base) /
                                              static_cast<double>(n_base),
                                    static_cast<double>(s)));
                            }
                            rows.push_back(format_row(m, K, c, R, config.q, config.l, s_col,
                                                      pf_col, "", "", ""));
                        } else {
                            PcmtParams p;
                            p.K = K;
                            p.R = R;
                            p.q = config.q;
                            p.l = config.l;
                            p.c = c;
                            p.pruned = scheme == "prpcmt";
                            const TreePlan plan = plan_tree(p);
                            const SchemeMetrics m = metrics_pcmt(plan, b, 32);
                            const long long s = sample_budget(b, m.x_bytes, config.download_ratio);
                            const double pf = pf_analytical(plan, s);
                            std::string g_col, cost_col;
                            try {
                                const long long mu = mu_min(plan);
                                const long long g = g_star(mu, config.oracle, plan.base_n());
                                g_col = std::to_string(g);
                                cost_col = std::to_string(comm_cost(g, config.oracle, m.x_bytes));
                            } catch (const InfeasibleError& e) {
                                err = e.what();
                            }
                            rows.push_back(format_row(m, K, c, R, config.q, config.l,
                                                      std::to_string(s), format_pf(pf), g_col,
                                                      cost_col, err));
                        }
                    } catch (const ParamError& e) {
                        SchemeMetrics stub;
                        stub.scheme = scheme == "prpcmt" ? "pcmt" : scheme;
                        stub.pruned = scheme == "prpcmt";
                        rows.push_back(format_row(stub, K, c, R, config.q, config.l, "", "", "",
                                                  "", e.what()));
                    }
                }
            }
        }
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

}  // namespace pcmt
