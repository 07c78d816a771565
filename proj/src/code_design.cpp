#include "pcmt/code_design.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "json.hpp"
#include "pcmt/errors.hpp"

namespace pcmt {

namespace {

int ceil_log2(long long N) {
    int n = 0;
    while ((1ll << n) < N) ++n;
    return n;
}

std::vector<int> complement(int n, const std::vector<int>& sorted_subset) {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(n) - sorted_subset.size());
    size_t p = 0;
    for (int i = 1; i <= n; ++i) {
        if (p < sorted_subset.size() && sorted_subset[p] == i) {
            ++p;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

long long min_alpha_over(const std::vector<long long>& t, const std::vector<int>& rows) {
    long long best = -1;
    for (int r : rows) {
        const long long v = t[static_cast<size_t>(r) - 1];
        if (best < 0 || v < best) best = v;
    }
    return best;
}

}  // namespace

CodeDesign nf_design(int N, int k) {
    if (N < 2 || (N & (N - 1)) != 0) throw ParamError("NF design requires a power-of-two length");
    if (k < 1 || k >= N) throw ParamError("information length must satisfy 1 <= k < N");

    const std::vector<long long> t = tree_leaf_sizes(N);
    std::vector<int> order(static_cast<size_t>(N));
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return t[static_cast<size_t>(a) - 1] < t[static_cast<size_t>(b) - 1]; });

    CodeDesign d;
    d.n_target = N;
    d.k = k;
    d.n_sef = N;
    d.frozen.assign(order.begin(), order.begin() + (N - k));
    std::sort(d.frozen.begin(), d.frozen.end());
    d.info = complement(N, d.frozen);
    d.alpha_min = t[static_cast<size_t>(order[static_cast<size_t>(N - k)]) - 1];
    d.fg = with_frozen_rows(build_full_fg(N), d.frozen);
    return d;
}

CodeDesign sef_design(int N, int k, std::optional<int> length_divisor) {
    if (N < 2) throw ParamError("SEF design requires N >= 2");
    if (k < 1 || k >= N) throw ParamError("information length must satisfy 1 <= k < N");

    const int n_til = 1 << ceil_log2(N);
    const int delta1 = n_til - N;
    const std::vector<long long> t_full = tree_leaf_sizes(n_til);
    std::vector<long long> t(t_full.begin(), t_full.begin() + N);

    // (N-k+1)-th smallest leaf size of the truncated vector.
    std::vector<long long> sorted = t;
    std::nth_element(sorted.begin(), sorted.begin() + (N - k), sorted.end());
    const long long cut = sorted[static_cast<size_t>(N - k)];

    std::vector<char> frozen(static_cast<size_t>(N) + 1, 0);
    int n_frozen = 0;
    for (int e = 1; e <= N; ++e) {
        if (t[static_cast<size_t>(e) - 1] < cut) {
            frozen[static_cast<size_t>(e)] = 1;
            ++n_frozen;
        }
    }
    for (int i = N; n_frozen < N - k; --i) {
        if (!frozen[static_cast<size_t>(i)]) {
            frozen[static_cast<size_t>(i)] = 1;
            ++n_frozen;
        }
    }

    int delta2 = 0;
    while (delta2 < N && frozen[static_cast<size_t>(N - delta2)]) ++delta2;
    if (length_divisor) {
        if (*length_divisor < 1) throw ParamError("length divisor must be positive");
        while (delta2 >= 0 && (N - delta2) % *length_divisor != 0) --delta2;
        if (delta2 < 0) throw ParamError("no achievable length is a multiple of the requested divisor");
    }

    CodeDesign d;
    d.n_target = N;
    d.k = k;
    d.delta2 = delta2;
    d.n_sef = N - delta2;
    for (int e = 1; e <= d.n_sef; ++e) {
        if (frozen[static_cast<size_t>(e)]) d.frozen.push_back(e);
    }
    d.info = complement(d.n_sef, d.frozen);
    d.alpha_min = min_alpha_over(t_full, d.info);
    d.fg = with_frozen_rows(remove_bottom_rows(build_full_fg(n_til), delta1 + delta2), d.frozen);
    return d;
}

long long threshold_lower_bound(long long N, long long K) {
    if (K < 1 || K >= N) throw ParamError("threshold bound requires 1 <= K < N");
    const int n = ceil_log2(N);
    long long q_star = 0;
    long long prefix = 0;  // sum of C(n, r) for r < q
    long long binom = 1;   // C(n, q-1) while scanning q = 1, 2, ...
    for (long long q = 1; q <= n; ++q) {
        prefix += binom;
        if (prefix > N - K) break;
        q_star = q;
        binom = binom * (n - q + 1) / q;
    }
    return 1ll << q_star;
}

namespace {

// Mutable adjacency scratch used by prune(); ids refer to the input graph.
struct Scratch {
    std::vector<char> vn_alive, cn_alive;
    std::vector<std::vector<int>> vn_cns, cn_vns;
    std::vector<VnRole> role;
    std::vector<int> parent;  // merge classes over VN ids

    int find(int v) {
        while (parent[static_cast<size_t>(v)] != v) {
            parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
            v = parent[static_cast<size_t>(v)];
        }
        return v;
    }

    bool coded(int v) const {
        return role[static_cast<size_t>(v)] == VnRole::Data || role[static_cast<size_t>(v)] == VnRole::Parity;
    }

    void drop_edge(int cn, int vn) {
        auto& vs = cn_vns[static_cast<size_t>(cn)];
        vs.erase(std::find(vs.begin(), vs.end(), vn));
        auto& cs = vn_cns[static_cast<size_t>(vn)];
        cs.erase(std::find(cs.begin(), cs.end(), cn));
    }
};

}  // namespace

FactorGraph prune(const FactorGraph& fg) {
    const int V = tot_vn(fg);
    const int C = static_cast<int>(fg.cns.size());

    Scratch s;
    s.vn_alive.assign(static_cast<size_t>(V) + 1, 1);
    s.cn_alive.assign(static_cast<size_t>(C) + 1, 1);
    s.vn_cns.resize(static_cast<size_t>(V) + 1);
    s.cn_vns.resize(static_cast<size_t>(C) + 1);
    s.role.resize(static_cast<size_t>(V) + 1);
    s.parent.resize(static_cast<size_t>(V) + 1);
    for (const Vn& v : fg.vns) {
        s.vn_cns[static_cast<size_t>(v.id)] = v.cns;
        s.role[static_cast<size_t>(v.id)] = v.role;
        s.parent[static_cast<size_t>(v.id)] = v.id;
    }
    for (const Cn& c : fg.cns) s.cn_vns[static_cast<size_t>(c.id)] = c.vns;

    auto kill_vn = [&](int v) {
        s.vn_alive[static_cast<size_t>(v)] = 0;
        s.parent[static_cast<size_t>(v)] = 0;
        for (int c : std::vector<int>(s.vn_cns[static_cast<size_t>(v)])) s.drop_edge(c, v);
    };

    // pruneFrozenVN: frozen inputs are zero symbols and never constrain.
    for (int v = 1; v <= V; ++v) {
        if (s.role[static_cast<size_t>(v)] == VnRole::Frozen) kill_vn(v);
    }

    auto size_now = [&] {
        int total = 0;
        for (int v = 1; v <= V; ++v) total += s.vn_alive[static_cast<size_t>(v)];
        for (int c = 1; c <= C; ++c) total += s.cn_alive[static_cast<size_t>(c)];
        return total;
    };

    int before = size_now();
    for (;;) {
        // pruneDeg1CN: a lone VN under a CN is a zero symbol. Coded VNs stay
        // (the CN keeps pinning them to zero); SEF outputs never hit that case.
        for (int c = 1; c <= C; ++c) {
            if (!s.cn_alive[static_cast<size_t>(c)] || s.cn_vns[static_cast<size_t>(c)].size() != 1) continue;
            const int v = s.cn_vns[static_cast<size_t>(c)][0];
            if (s.coded(v)) continue;
            s.cn_alive[static_cast<size_t>(c)] = 0;
            s.drop_edge(c, v);
            kill_vn(v);
        }
        // mergeDeg2CN: the two VNs carry equal values and collapse into one.
        for (int c = 1; c <= C; ++c) {
            if (!s.cn_alive[static_cast<size_t>(c)] || s.cn_vns[static_cast<size_t>(c)].size() != 2) continue;
            const int a = s.cn_vns[static_cast<size_t>(c)][0];
            const int b = s.cn_vns[static_cast<size_t>(c)][1];
            if (s.coded(a) && s.coded(b)) continue;  // coded count must not change
            int survivor, absorbed;
            if (s.coded(a) || s.coded(b)) {
                survivor = s.coded(a) ? a : b;
            } else {
                survivor = std::min(a, b);
            }
            absorbed = survivor == a ? b : a;
            s.cn_alive[static_cast<size_t>(c)] = 0;
            s.drop_edge(c, a);
            s.drop_edge(c, b);
            for (int c2 : std::vector<int>(s.vn_cns[static_cast<size_t>(absorbed)])) {
                s.drop_edge(c2, absorbed);
                auto& vs = s.cn_vns[static_cast<size_t>(c2)];
                if (auto it = std::find(vs.begin(), vs.end(), survivor); it != vs.end()) {
                    // Double edge after the merge: the two contributions cancel.
                    s.drop_edge(c2, survivor);
                } else {
                    vs.push_back(survivor);
                    s.vn_cns[static_cast<size_t>(survivor)].push_back(c2);
                }
            }
            s.vn_alive[static_cast<size_t>(absorbed)] = 0;
            s.parent[static_cast<size_t>(absorbed)] = survivor;
        }
        // pruneEmptyCN
        for (int c = 1; c <= C; ++c) {
            if (s.cn_alive[static_cast<size_t>(c)] && s.cn_vns[static_cast<size_t>(c)].empty())
                s.cn_alive[static_cast<size_t>(c)] = 0;
        }
        const int after = size_now();
        if (after == before) break;
        before = after;
    }

    // Re-index survivors ascending by input id; coded VNs keep identity.
    FactorGraph g;
    g.n_cols_vn = fg.n_cols_vn;
    g.rows = fg.rows;
    std::vector<int> new_id(static_cast<size_t>(V) + 1, 0);
    for (int v = 1; v <= V; ++v) {
        if (!s.vn_alive[static_cast<size_t>(v)]) continue;
        Vn copy = fg.vn(v);
        copy.id = static_cast<int>(g.vns.size()) + 1;
        copy.cns.clear();
        new_id[static_cast<size_t>(v)] = copy.id;
        g.vns.push_back(std::move(copy));
    }
    for (int c = 1; c <= C; ++c) {
        if (!s.cn_alive[static_cast<size_t>(c)]) continue;
        Cn copy = fg.cn(c);
        copy.id = static_cast<int>(g.cns.size()) + 1;
        copy.vns.clear();
        for (int v : s.cn_vns[static_cast<size_t>(c)]) copy.vns.push_back(new_id[static_cast<size_t>(v)]);
        std::sort(copy.vns.begin(), copy.vns.end());
        if (copy.vns.size() > 3) throw StructuralError("pruning raised a CN degree above 3");
        g.cns.push_back(std::move(copy));
    }
    for (const Cn& c : g.cns) {
        for (int v : c.vns) g.vns[static_cast<size_t>(v) - 1].cns.push_back(c.id);
    }
    for (int v : fg.coded_vn_ids) {
        if (new_id[static_cast<size_t>(v)] == 0) throw StructuralError("pruning removed a coded symbol");
        g.coded_vn_ids.push_back(new_id[static_cast<size_t>(v)]);
    }
    for (int v = 1; v <= V; ++v) {
        const int rep = s.find(v);  // 0 when the whole merge class was deleted
        g.merge_audit[v] = rep == 0 ? 0 : new_id[static_cast<size_t>(rep)];
    }
    return g;
}

CodeDesign pruned_design(const CodeDesign& d) {
    if (d.pruned) return d;
    CodeDesign out = d;
    out.fg = prune(d.fg);
    out.pruned = true;
    return out;
}

std::string design_json(const CodeDesign& d) {
    nlohmann::json j;
    j["N"] = d.n_target;
    j["k"] = d.k;
    j["N_SEF"] = d.n_sef;
    j["frozen"] = d.frozen;
    j["alpha_min"] = d.alpha_min;
    j["pruned"] = d.pruned;
    return j.dump();
}

}  // namespace pcmt
