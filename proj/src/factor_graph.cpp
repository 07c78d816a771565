#include "pcmt/factor_graph.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "json.hpp"
#include "pcmt/errors.hpp"

namespace pcmt {

const char* role_name(VnRole role) {
    switch (role) {
        case VnRole::Data: return "data";
        case VnRole::Parity: return "parity";
        case VnRole::Frozen: return "frozen";
        case VnRole::Dropped: return "dropped";
        case VnRole::Pad: return "pad";
    }
    return "?";
}

std::vector<int> FactorGraph::rows_per_column() const {
    std::vector<int> counts(static_cast<size_t>(n_cols_vn), 0);
    for (const Vn& v : vns) counts[static_cast<size_t>(v.column) - 1]++;
    return counts;
}

int tot_vn(const FactorGraph& fg) { return static_cast<int>(fg.vns.size()); }

FactorGraph build_full_fg(int N) {
    if (N < 2 || (N & (N - 1)) != 0) throw ParamError("code length must be a power of two >= 2");
    const int n = std::countr_zero(static_cast<unsigned>(N));

    FactorGraph g;
    g.n_cols_vn = n + 1;
    g.rows = N;
    g.vns.reserve(static_cast<size_t>(n + 1) * N);
    for (int m = 1; m <= n + 1; ++m) {
        for (int i = 1; i <= N; ++i) {
            Vn v;
            v.id = (m - 1) * N + i;
            v.column = m;
            v.row = i;
            v.role = m == n + 1 ? VnRole::Data : VnRole::Dropped;
            g.vns.push_back(std::move(v));
        }
    }
    g.cns.reserve(static_cast<size_t>(n) * N);
    for (int m = 1; m <= n; ++m) {
        const int span = 1 << (m - 1);
        for (int i = 1; i <= N; ++i) {
            Cn c;
            c.id = (m - 1) * N + i;
            c.column = m;
            c.row = i;
            c.vns = {(m - 1) * N + i, m * N + i};
            if (((i - 1) / span) % 2 == 0) c.vns.push_back(m * N + i + span);
            g.cns.push_back(std::move(c));
        }
    }
    for (const Cn& c : g.cns) {
        for (int v : c.vns) g.vns[static_cast<size_t>(v) - 1].cns.push_back(c.id);
    }
    g.coded_vn_ids.reserve(static_cast<size_t>(N));
    for (int i = 1; i <= N; ++i) g.coded_vn_ids.push_back(n * N + i);
    return g;
}

FactorGraph with_frozen_rows(const FactorGraph& fg, const std::vector<int>& frozen_rows) {
    FactorGraph g = fg;
    const std::set<int> frozen(frozen_rows.begin(), frozen_rows.end());
    if (!frozen.empty() && (*frozen.begin() < 1 || *frozen.rbegin() > fg.rows))
        throw ParamError("frozen row out of range");

    for (Vn& v : g.vns) {
        if (v.column == 1) {
            v.role = frozen.count(v.row) ? VnRole::Frozen : VnRole::Dropped;
        } else if (v.column == g.n_cols_vn) {
            v.role = frozen.count(v.row) ? VnRole::Parity : VnRole::Data;
        } else {
            v.role = VnRole::Dropped;
        }
    }
    g.coded_vn_ids.clear();
    for (const Vn& v : g.vns) {
        if (v.column == g.n_cols_vn && v.role == VnRole::Data) g.coded_vn_ids.push_back(v.id);
    }
    for (const Vn& v : g.vns) {
        if (v.column == g.n_cols_vn && v.role == VnRole::Parity) g.coded_vn_ids.push_back(v.id);
    }
    return g;
}

FactorGraph remove_bottom_rows(const FactorGraph& fg, int delta) {
    if (delta < 0 || delta >= fg.rows) throw ParamError("row removal count must be in [0, N)");
    if (delta == 0) return fg;
    const int keep = fg.rows - delta;

    FactorGraph g;
    g.n_cols_vn = fg.n_cols_vn;
    g.rows = keep;

    std::vector<int> new_vn_id(fg.vns.size() + 1, 0);
    for (const Vn& v : fg.vns) {
        if (v.row > keep) continue;
        Vn copy = v;
        copy.id = static_cast<int>(g.vns.size()) + 1;
        copy.cns.clear();
        new_vn_id[static_cast<size_t>(v.id)] = copy.id;
        g.vns.push_back(std::move(copy));
    }
    for (const Cn& c : fg.cns) {
        std::vector<int> members;
        for (int v : c.vns) {
            if (int nv = new_vn_id[static_cast<size_t>(v)]; nv != 0) members.push_back(nv);
        }
        if (members.empty()) continue;
        Cn copy;
        copy.id = static_cast<int>(g.cns.size()) + 1;
        copy.column = c.column;
        copy.row = c.row;
        copy.vns = std::move(members);
        g.cns.push_back(std::move(copy));
    }
    for (const Cn& c : g.cns) {
        for (int v : c.vns) g.vns[static_cast<size_t>(v) - 1].cns.push_back(c.id);
    }
    for (int v : fg.coded_vn_ids) {
        if (int nv = new_vn_id[static_cast<size_t>(v)]; nv != 0) g.coded_vn_ids.push_back(nv);
    }
    return g;
}

std::vector<long long> tree_leaf_sizes(long long N) {
    if (N < 1) throw ParamError("leaf-size vector requires N >= 1");
    std::vector<long long> t{1};
    while (static_cast<long long>(t.size()) < N) {
        const size_t half = t.size();
        t.resize(2 * half);
        for (size_t i = 0; i < half; ++i) t[half + i] = 2 * t[i];
    }
    return t;
}

StoppingSet stopping_tree(const FactorGraph& fg, int root_vn_id) {
    if (root_vn_id < 1 || root_vn_id > tot_vn(fg)) throw ParamError("root VN id out of range");
    if (fg.vn(root_vn_id).column != 1) throw ParamError("stopping-tree root must be a leftmost-column VN");

    std::map<std::pair<int, int>, int> vn_at;  // (column, row) -> id
    for (const Vn& v : fg.vns) vn_at[{v.column, v.row}] = v.id;

    std::vector<char> in_set(fg.vns.size() + 1, 0);
    std::vector<int> member_count(fg.cns.size() + 1, 0);
    std::vector<int> frontier{root_vn_id};
    in_set[static_cast<size_t>(root_vn_id)] = 1;

    while (!frontier.empty()) {
        const int vid = frontier.back();
        frontier.pop_back();
        for (int cid : fg.vn(vid).cns) {
            if (++member_count[static_cast<size_t>(cid)] != 1) continue;
            const Cn& c = fg.cn(cid);
            const auto it = vn_at.find({c.column + 1, c.row});
            if (it == vn_at.end())
                throw StructuralError("stopping-tree closure has no horizontal extension");
            const int next = it->second;
            // Already queued members satisfy the CN once their own visit
            // bumps the count; nothing to add.
            if (in_set[static_cast<size_t>(next)]) continue;
            if (fg.vn(next).column == 1)
                throw StructuralError("stopping-tree closure reached a second leftmost-column VN");
            in_set[static_cast<size_t>(next)] = 1;
            frontier.push_back(next);
        }
    }
    // Forced additions may have bumped counts past one; re-check the result.
    StoppingSet out;
    for (const Vn& v : fg.vns) {
        if (!in_set[static_cast<size_t>(v.id)]) continue;
        out.vn_ids.push_back(v.id);
        if (v.column == fg.n_cols_vn) out.leaf_set.push_back(v.id);
    }
    if (!is_stopping_set(fg, out.vn_ids)) throw StructuralError("stopping-tree closure is not a stopping set");
    return out;
}

bool is_stopping_set(const FactorGraph& fg, const std::vector<int>& vn_ids) {
    if (vn_ids.empty()) throw ParamError("empty set is not a stopping set by convention");
    std::vector<char> in_set(fg.vns.size() + 1, 0);
    for (int v : vn_ids) {
        if (v < 1 || v > tot_vn(fg)) throw ParamError("VN id out of range");
        in_set[static_cast<size_t>(v)] = 1;
    }
    for (const Cn& c : fg.cns) {
        int members = 0;
        for (int v : c.vns) members += in_set[static_cast<size_t>(v)];
        if (members == 1) return false;
    }
    return true;
}

void for_each_stopping_set(const FactorGraph& fg, bool exclude_frozen_roots,
                           const std::function<void(const StoppingSet&)>& fn) {
    const int V = tot_vn(fg);
    if (V > 24) throw CapacityError("exhaustive stopping-set search is limited to 24 VNs");

    std::vector<uint32_t> cn_mask(fg.cns.size());
    for (size_t i = 0; i < fg.cns.size(); ++i) {
        uint32_t m = 0;
        for (int v : fg.cns[i].vns) m |= 1u << (v - 1);
        cn_mask[i] = m;
    }
    uint32_t frozen_mask = 0;
    uint32_t leaf_mask = 0;
    for (const Vn& v : fg.vns) {
        if (v.role == VnRole::Frozen) frozen_mask |= 1u << (v.id - 1);
        if (v.column == fg.n_cols_vn) leaf_mask |= 1u << (v.id - 1);
    }

    const uint32_t limit = V == 32 ? 0 : (1u << V);
    for (uint32_t s = 1; s != limit; ++s) {
        if (exclude_frozen_roots && (s & frozen_mask) != 0) continue;
        bool ok = true;
        for (uint32_t m : cn_mask) {
            if (std::popcount(s & m) == 1) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        StoppingSet ss;
        for (int v = 1; v <= V; ++v) {
            if (s & (1u << (v - 1))) {
                ss.vn_ids.push_back(v);
                if (leaf_mask & (1u << (v - 1))) ss.leaf_set.push_back(v);
            }
        }
        fn(ss);
    }
}

std::vector<StoppingSet> enumerate_stopping_sets(const FactorGraph& fg, bool exclude_frozen_roots) {
    std::vector<StoppingSet> out;
    for_each_stopping_set(fg, exclude_frozen_roots, [&](const StoppingSet& ss) { out.push_back(ss); });
    return out;
}

std::string fg_debug_json(const FactorGraph& fg) {
    nlohmann::json j;
    j["n_cols_vn"] = fg.n_cols_vn;
    j["rows"] = fg.rows;
    j["vns"] = nlohmann::json::array();
    for (const Vn& v : fg.vns) {
        j["vns"].push_back({{"id", v.id}, {"m", v.column}, {"i", v.row}, {"role", role_name(v.role)}});
    }
    j["cns"] = nlohmann::json::array();
    for (const Cn& c : fg.cns) {
        j["cns"].push_back({{"id", c.id}, {"m", c.column}, {"i", c.row}, {"vns", c.vns}});
    }
    j["coded"] = fg.coded_vn_ids;
    return j.dump();
}

}  // namespace pcmt
