#include "pcmt/codec.hpp"

#include <algorithm>
#include <deque>

#include "pcmt/errors.hpp"

namespace pcmt {

namespace {

void xor_into(Symbol& acc, const Symbol& other) {
    for (size_t i = 0; i < acc.size(); ++i) acc[i] ^= other[i];
}

DecodeResult run_peeling(const FactorGraph& fg, SymbolVector init) {
    DecodeResult res;
    res.symbols = std::move(init);
    res.resolver_cn.assign(fg.vns.size(), 0);
    SymbolVector& sv = res.symbols;

    const size_t n_cn = fg.cns.size();
    std::vector<int> unknown_count(n_cn + 1, 0);
    std::deque<int> queue;
    for (const Cn& c : fg.cns) {
        for (int v : c.vns) {
            res.edge_ops++;
            if (!sv.is_known(v)) unknown_count[static_cast<size_t>(c.id)]++;
        }
        if (unknown_count[static_cast<size_t>(c.id)] == 1) queue.push_back(c.id);
    }

    while (!queue.empty()) {
        const int cid = queue.front();
        queue.pop_front();
        if (unknown_count[static_cast<size_t>(cid)] != 1) continue;
        const Cn& c = fg.cn(cid);
        int target = 0;
        Symbol value(sv.symbol_size, 0);
        for (int v : c.vns) {
            res.edge_ops++;
            if (sv.is_known(v)) {
                xor_into(value, sv.at(v));
            } else {
                target = v;
            }
        }
        sv.values[static_cast<size_t>(target) - 1] = std::move(value);
        sv.known[static_cast<size_t>(target) - 1] = 1;
        unknown_count[static_cast<size_t>(cid)] = 0;
        res.resolution_order.push_back(target);
        res.resolver_cn[static_cast<size_t>(target) - 1] = cid;
        for (int c2 : fg.vn(target).cns) {
            res.edge_ops++;
            if (c2 == cid) continue;
            if (--unknown_count[static_cast<size_t>(c2)] == 1) queue.push_back(c2);
        }
    }

    for (size_t i = 0; i < fg.vns.size(); ++i) {
        if (!sv.known[i]) res.unresolved.push_back(static_cast<int>(i) + 1);
    }
    if (!res.unresolved.empty()) {
        res.status = DecodeStatus::Stuck;
        return res;
    }
    // Every constraint is now fully determined; a nonzero XOR means the
    // observed values cannot belong to one codeword.
    for (const Cn& c : fg.cns) {
        Symbol acc(sv.symbol_size, 0);
        for (int v : c.vns) xor_into(acc, sv.at(v));
        if (std::any_of(acc.begin(), acc.end(), [](uint8_t b) { return b != 0; })) {
            res.status = DecodeStatus::Inconsistent;
            res.bad_cn = c.id;
            return res;
        }
    }
    res.status = DecodeStatus::Ok;
    return res;
}

SymbolVector make_init(const FactorGraph& fg, size_t symbol_size) {
    SymbolVector sv;
    sv.symbol_size = symbol_size;
    sv.values.assign(fg.vns.size(), Symbol());
    sv.known.assign(fg.vns.size(), 0);
    for (const Vn& v : fg.vns) {
        if (v.role == VnRole::Frozen) {
            sv.values[static_cast<size_t>(v.id) - 1] = Symbol(symbol_size, 0);
            sv.known[static_cast<size_t>(v.id) - 1] = 1;
        }
    }
    return sv;
}

}  // namespace

SymbolVector pepc_encode(const FactorGraph& fg, const std::vector<Symbol>& data) {
    size_t n_data = 0;
    for (const Vn& v : fg.vns) n_data += v.role == VnRole::Data;
    if (data.size() != n_data) throw ParamError("data symbol count does not match the information length");
    if (data.empty()) throw ParamError("cannot encode an empty data vector");
    const size_t size = data[0].size();
    for (const Symbol& s : data) {
        if (s.size() != size) throw ParamError("data symbols must have uniform size");
    }

    SymbolVector init = make_init(fg, size);
    for (size_t r = 0; r < data.size(); ++r) {
        const int vn = fg.coded_vn_ids[r];  // data-first coded order
        init.values[static_cast<size_t>(vn) - 1] = data[r];
        init.known[static_cast<size_t>(vn) - 1] = 1;
    }
    DecodeResult res = run_peeling(fg, std::move(init));
    if (res.status == DecodeStatus::Stuck)
        throw StructuralError("peeling encoder stalled; the design violates the full-row property");
    if (res.status == DecodeStatus::Inconsistent)
        throw StructuralError("peeling encoder produced an inconsistent constraint");
    return std::move(res.symbols);
}

DecodeResult peel_decode(const FactorGraph& fg, const std::map<int, Symbol>& observed,
                         size_t symbol_size) {
    std::map<int, Symbol> by_vn;
    for (const auto& [pos, sym] : observed) {
        if (pos < 1 || pos > fg.num_coded()) throw ParamError("coded position out of range");
        by_vn.emplace(fg.coded_vn_ids[static_cast<size_t>(pos) - 1], sym);
    }
    return peel_decode_by_vn(fg, by_vn, symbol_size);
}

DecodeResult peel_decode_by_vn(const FactorGraph& fg, const std::map<int, Symbol>& observed_by_vn,
                               size_t symbol_size) {
    SymbolVector init = make_init(fg, symbol_size);
    for (const auto& [vn, sym] : observed_by_vn) {
        if (vn < 1 || vn > tot_vn(fg)) throw ParamError("observed VN id out of range");
        if (sym.size() != symbol_size) throw ParamError("observed symbol size mismatch");
        init.values[static_cast<size_t>(vn) - 1] = sym;
        init.known[static_cast<size_t>(vn) - 1] = 1;
    }
    return run_peeling(fg, std::move(init));
}

}  // namespace pcmt
