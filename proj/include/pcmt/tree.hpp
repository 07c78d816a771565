#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pcmt/code_design.hpp"
#include "pcmt/codec.hpp"
#include "pcmt/hash.hpp"

namespace pcmt {

struct Rational {
    long long num = 1;
    long long den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
    static Rational parse(const std::string& text);
};

struct PcmtParams {
    long long K = 0;
    Rational R;
    int q = 1;
    int l = 1;
    uint64_t c = 0;        // base data-symbol size, bytes
    uint64_t y = 32;       // hash size, bytes
    bool pruned = false;   // use pruned encoding graphs (PrPCMT)
    std::string hash = "sha256";
};

// Geometry of one tree layer. Layer indices lambda run over [1, tvn]:
// zero-pad entries occupy [1, pad], the graph's dropped VNs (pad, d_i] in
// ascending id order, data symbols (d_i, d_i + k], parity (d_i + k, d_i + N].
struct LayerPlan {
    int j = 0;
    long long k = 0;
    long long n_target = 0;
    CodeDesign design;
    std::optional<int> align_divisor;  // kept so the design can be re-derived
    long long tot_vns = 0;
    long long tvn = 0;
    long long d_i = 0;
    long long pad = 0;
    uint64_t symbol_size = 0;

    long long n_sef() const { return design.n_sef; }
    // 0 for pad entries, otherwise the VN id behind a layer index.
    int vn_of_index(long long lambda) const;
    long long index_of_vn(int vn_id) const;
    long long index_of_coded(long long pos) const { return d_i + pos; }
};

struct TreePlan {
    PcmtParams params;
    std::vector<LayerPlan> layers;  // layers[0] is L_1 (top), layers[l-1] the base

    const LayerPlan& layer(int j) const { return layers[static_cast<size_t>(j) - 1]; }
    int l() const { return static_cast<int>(layers.size()); }
    long long base_n() const { return layers.back().design.n_sef; }
    // Hashes of layer j+1 concatenated per data symbol of layer j.
    long long group_count(int j) const {
        return layers[static_cast<size_t>(j)].tvn / layers[static_cast<size_t>(j) - 1].k;
    }
};

// Runs the freezing algorithm per layer (inputs k_j/R, k_j), optionally
// prunes, and lays out padding so parent grouping divides evenly. Interior
// layers additionally keep enough frozen bottom rows for k_{j-1} to divide
// N_j, which makes proof-element authentication chain exactly.
TreePlan plan_tree(const PcmtParams& params);

// Assembles a tree plan around caller-supplied layer designs (top first).
// Used for trees over full encoding graphs or custom frozen sets; the same
// divisibility requirements apply.
TreePlan plan_from_designs(const PcmtParams& params, std::vector<CodeDesign> designs);

struct Pcmt {
    std::shared_ptr<const TreePlan> plan;
    std::vector<std::vector<Symbol>> layers;  // [j-1][lambda-1]
    std::vector<Hash32> root;                 // tvn_1 hashes in index order
};

// Fault-injection hook: runs on each layer's symbol array right after
// encoding, before the layer is hashed into its parent. Used to stage
// incorrect-coding attacks in tests.
struct BuildHooks {
    std::function<void(int layer_j, std::vector<Symbol>& symbols)> after_encode;
};

Pcmt build(const std::vector<uint8_t>& block, const TreePlan& plan);
Pcmt build_with_hooks(const std::vector<uint8_t>& block, const TreePlan& plan, const BuildHooks& hooks);

struct ProofElement {
    int layer = 0;
    long long index = 0;
    Symbol bytes;
};

struct MerkleProof {
    int layer = 0;       // target coordinates
    long long index = 0;
    std::vector<ProofElement> elements;  // data, parity per layer 1..j-1
};

MerkleProof merkle_proof(const Pcmt& tree, int layer, long long index);

bool verify_inclusion(int layer, long long index, const Symbol& bytes, const MerkleProof& proof,
                      const std::vector<Hash32>& root, const TreePlan& plan);

struct IcSymbol {
    int layer = 0;
    long long index = 0;
    Symbol bytes;
    MerkleProof proof;
};

// A failed parity check plus the Merkle-authenticated members that prove the
// layer was mis-encoded. The inconsistent symbol itself travels only as a
// proof; verifiers reconstruct it from the others.
struct IcProof {
    int layer = 0;
    int cn_id = 0;
    int degree = 0;
    std::vector<IcSymbol> symbols;  // degree - 1 entries
    long long missing_index = 0;
    MerkleProof missing_proof;
};

// Assembles the proof for a violated check: the resolved values of all
// members except `missing_vn`, each with a Merkle proof drawn from the
// already-decoded layers above, plus the proof of the missing symbol.
IcProof gen_ic_proof(const TreePlan& plan, const std::vector<std::vector<Symbol>>& decoded_layers,
                     int layer, int cn_id, const SymbolVector& values, int missing_vn);

bool verify_ic_proof(const IcProof& proof, const std::vector<Hash32>& root, const TreePlan& plan);

struct DaAlarm {
    int layer = 0;
    std::vector<long long> stuck_indices;  // unresolved layer indices (a stopping set)
};

struct HashAwareResult {
    enum class Kind { Block, Alarm, Ic };
    Kind kind = Kind::Block;
    std::vector<uint8_t> block;  // c*K bytes on success
    DaAlarm alarm;
    IcProof ic;
};

// Top-down hash-aware peeling decode. `available` maps coded positions to
// bytes per layer; every supplied symbol is checked against its committed
// hash before use.
HashAwareResult hash_aware_decode(const std::vector<Hash32>& root, const TreePlan& plan,
                                  const std::vector<std::map<long long, Symbol>>& available);

// Canonical JSON forms (committed fixtures rely on byte-exact output).
std::string merkle_proof_json(const MerkleProof& proof);
MerkleProof merkle_proof_from_json(const std::string& text);
std::string ic_proof_json(const IcProof& proof);
IcProof ic_proof_from_json(const std::string& text);

std::string params_json(const PcmtParams& params);
PcmtParams params_from_json(const std::string& text);

std::string root_hex(const std::vector<Hash32>& root);
std::vector<Hash32> root_from_hex(const std::string& hex);

}  // namespace pcmt
