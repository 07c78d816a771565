#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

namespace pcmt {

enum class VnRole : uint8_t { Data, Parity, Frozen, Dropped, Pad };

const char* role_name(VnRole role);

struct Vn {
    int id = 0;      // dense 1-based id within this graph
    int column = 0;  // VN column m, 1-based, growing left to right
    int row = 0;     // row label i inherited from the originating full graph
    VnRole role = VnRole::Dropped;
    std::vector<int> cns;  // incident CN ids
};

struct Cn {
    int id = 0;
    int column = 0;
    int row = 0;
    std::vector<int> vns;  // incident VN ids, degree 2 or 3
};

// Bipartite VN/CN view of a polar encoding graph. Instances are immutable
// after construction; every transform returns a fresh graph.
struct FactorGraph {
    int n_cols_vn = 0;  // n+1 for the full graph of length 2^n
    int rows = 0;       // rows per column for full/row-reduced graphs
    std::vector<Vn> vns;
    std::vector<Cn> cns;
    // The N non-dropped (coded) VN ids: data rows first, then parity rows.
    std::vector<int> coded_vn_ids;
    // For pruned graphs: original VN id -> surviving VN id of its merge class
    // (0 when the original VN was deleted outright).
    std::unordered_map<int, int> merge_audit;

    const Vn& vn(int id) const { return vns[static_cast<size_t>(id) - 1]; }
    const Cn& cn(int id) const { return cns[static_cast<size_t>(id) - 1]; }
    int num_coded() const { return static_cast<int>(coded_vn_ids.size()); }
    std::vector<int> rows_per_column() const;
};

struct StoppingSet {
    std::vector<int> vn_ids;   // sorted ascending
    std::vector<int> leaf_set; // members lying in the rightmost column, sorted
};

// Full polar encoding graph G_N for N = 2^n, n >= 1. CN at column m, row i
// (span s = 2^(m-1)) has degree 3 when ((i-1) / s) % 2 == 0, connecting the
// horizontal pair plus the slanted VN at row i+s of the next column; degree 2
// otherwise. The convention is pinned by the stopping-tree leaf-size law
// checked in the test suite. All rightmost-column VNs start as Data (rate 1).
FactorGraph build_full_fg(int N);

// Re-labels roles for a frozen row set: leftmost-column VNs of frozen rows
// become Frozen, rightmost-column VNs are Data on information rows and Parity
// on frozen rows, and coded_vn_ids is reordered data-first.
FactorGraph with_frozen_rows(const FactorGraph& fg, const std::vector<int>& frozen_rows);

// Deletes every VN in the bottom `delta` rows of all columns together with
// incident edges; CNs left without edges disappear. Ids are re-assigned dense,
// ascending by previous id.
FactorGraph remove_bottom_rows(const FactorGraph& fg, int delta);

// Stopping-tree leaf sizes: the ceil(log2 N)-fold Kronecker power of [1; 2].
// The returned vector always has length 2^ceil(log2 N); callers truncate.
std::vector<long long> tree_leaf_sizes(long long N);

// Minimal stopping set containing `root_vn_id` (a leftmost-column VN) and no
// other leftmost-column VN, built by rightward closure.
StoppingSet stopping_tree(const FactorGraph& fg, int root_vn_id);

bool is_stopping_set(const FactorGraph& fg, const std::vector<int>& vn_ids);

// Exhaustive stopping-set search; guarded to graphs with at most 24 VNs.
// With exclude_frozen_roots the result is the set Psi^A: stopping sets with
// no frozen leftmost-column member.
std::vector<StoppingSet> enumerate_stopping_sets(const FactorGraph& fg, bool exclude_frozen_roots);

// Streaming variant of the exhaustive search (same 24-VN guard).
void for_each_stopping_set(const FactorGraph& fg, bool exclude_frozen_roots,
                           const std::function<void(const StoppingSet&)>& fn);

int tot_vn(const FactorGraph& fg);

// Debug dump (vns, cns, edges) used for test fixtures.
std::string fg_debug_json(const FactorGraph& fg);

}  // namespace pcmt
