#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "pcmt/factor_graph.hpp"

namespace pcmt {

using Symbol = std::vector<uint8_t>;

// Values for every VN of one graph. Frozen VNs always hold the all-zero
// symbol; unknown entries are flagged instead of erased bytes.
struct SymbolVector {
    size_t symbol_size = 0;
    std::vector<Symbol> values;  // indexed by VN id - 1
    std::vector<uint8_t> known;

    bool is_known(int vn_id) const { return known[static_cast<size_t>(vn_id) - 1] != 0; }
    const Symbol& at(int vn_id) const { return values[static_cast<size_t>(vn_id) - 1]; }
};

enum class DecodeStatus { Ok, Stuck, Inconsistent };

struct DecodeResult {
    DecodeStatus status = DecodeStatus::Ok;
    SymbolVector symbols;
    std::vector<int> unresolved;        // VN ids, nonempty iff Stuck
    int bad_cn = 0;                     // failing CN id, nonzero iff Inconsistent
    std::vector<int> resolution_order;  // VN ids in the order peeling fixed them
    std::vector<int> resolver_cn;       // per VN id (index id-1): CN that fixed it, 0 if given
    uint64_t edge_ops = 0;              // instrumentation: edge traversals
};

// Systematic peeling encoder: data symbols sit at the information rows of the
// rightmost column, frozen inputs are zero, and every remaining VN is fixed by
// peeling over the check constraints (byte-wise XOR). Stalling is impossible
// for designs out of the freezing algorithms and reported as a structural
// error.
SymbolVector pepc_encode(const FactorGraph& fg, const std::vector<Symbol>& data);

// Erasure peeling decoder. `observed` maps coded positions (1-based index
// into coded_vn_ids) to symbol values; frozen VNs are implicitly known zeros.
DecodeResult peel_decode(const FactorGraph& fg, const std::map<int, Symbol>& observed,
                         size_t symbol_size);

// Decoder entry keyed by VN id instead of coded position.
DecodeResult peel_decode_by_vn(const FactorGraph& fg, const std::map<int, Symbol>& observed_by_vn,
                               size_t symbol_size);

}  // namespace pcmt
