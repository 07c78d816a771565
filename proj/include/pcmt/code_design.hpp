#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcmt/factor_graph.hpp"

namespace pcmt {

// Frozen-set design for one layer: achieved length n_sef <= n_target, the
// (row-reduced, optionally pruned) encoding graph with roles marked, the
// frozen/information index sets over [n_sef], and the undecodable threshold.
struct CodeDesign {
    int n_target = 0;
    int k = 0;
    int n_sef = 0;
    FactorGraph fg;
    std::vector<int> frozen;  // F_SEF, sorted ascending
    std::vector<int> info;    // A_SEF = [n_sef] \ F_SEF
    long long alpha_min = 0;
    bool pruned = false;
    int delta2 = 0;  // bottom rows removed beyond the power-of-two fill
};

// Naive freezing: freeze the N-k rows with the smallest stopping-tree leaf
// sizes (ties resolved toward the lowest index). N must be a power of two.
CodeDesign nf_design(int N, int k);

// Sampling-efficient freezing for arbitrary N >= 2. Implements the two-stage
// selection (threshold cut, then bottom fill) and removes the frozen bottom
// rows from the graph. An optional divisor caps the row removal so that the
// achieved length stays a multiple of it; the threshold is unaffected.
CodeDesign sef_design(int N, int k, std::optional<int> length_divisor = std::nullopt);

// Graph pruning: drops frozen VNs, then repeatedly removes degree-1 CNs with
// their (dropped) VN, merges the VN pairs of degree-2 CNs, and clears empty
// CNs until the graph size is stable. Coded symbols and peeling behaviour are
// preserved; max CN degree never grows.
FactorGraph prune(const FactorGraph& fg);

// Convenience: same design with the graph pruned.
CodeDesign pruned_design(const CodeDesign& d);

// 2^{q*} with q* the largest q in [0, n] such that the binomial prefix sum
// C(n,0)+...+C(n,q-1) is at most N-K, for n = ceil(log2 N). Always a lower
// bound on the SEF threshold.
long long threshold_lower_bound(long long N, long long K);

// JSON serialization {N, k, N_SEF, frozen[], alpha_min, pruned}.
std::string design_json(const CodeDesign& d);

}  // namespace pcmt
