#include "pcmt/tree.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "pcmt/errors.hpp"

namespace pcmt {

namespace {

long long gcd_ll(long long a, long long b) { return b == 0 ? a : gcd_ll(b, a % b); }

Hash32 hash_symbol(const TreePlan& plan, const Symbol& s) {
    return hash_by_name(plan.params.hash)(s.data(), s.size());
}

}  // namespace

std::string Rational::str() const { return std::to_string(num) + "/" + std::to_string(den); }

Rational Rational::parse(const std::string& text) {
    const size_t slash = text.find('/');
    try {
        Rational r;
        if (slash == std::string::npos) {
            r.num = std::stoll(text);
            r.den = 1;
        } else {
            r.num = std::stoll(text.substr(0, slash));
            r.den = std::stoll(text.substr(slash + 1));
        }
        if (r.num <= 0 || r.den <= 0) throw ParamError("rate must be positive");
        const long long g = gcd_ll(r.num, r.den);
        r.num /= g;
        r.den /= g;
        return r;
    } catch (const std::logic_error&) {
        throw ParamError("cannot parse rational '" + text + "' (expected \"num/den\")");
    }
}

int LayerPlan::vn_of_index(long long lambda) const {
    if (lambda < 1 || lambda > tvn) throw ParamError("layer index out of range");
    if (lambda <= pad) return 0;
    if (lambda <= d_i) return static_cast<int>(lambda - pad);
    return design.fg.coded_vn_ids[static_cast<size_t>(lambda - d_i) - 1];
}

long long LayerPlan::index_of_vn(int vn_id) const {
    const long long dropped = tot_vns - design.n_sef;
    if (vn_id <= dropped) return pad + vn_id;
    const auto& coded = design.fg.coded_vn_ids;
    const auto it = std::find(coded.begin(), coded.end(), vn_id);
    if (it == coded.end()) throw StructuralError("VN id is neither dropped nor coded");
    return d_i + (it - coded.begin()) + 1;
}

TreePlan plan_tree(const PcmtParams& params) {
    if (params.K < 1) throw ParamError("K must be positive");
    if (params.l < 1) throw ParamError("layer count must be positive");
    if (params.q < 1) throw ParamError("combining parameter q must be positive");
    if (params.c < 1) throw ParamError("base symbol size must be positive");
    if (params.y != 32) throw ParamError("hash size is fixed to 32 bytes");
    if (params.R.num >= params.R.den) throw ParamError("rate must satisfy R < 1");
    hash_by_name(params.hash);

    const int l = params.l;
    std::vector<long long> k(static_cast<size_t>(l) + 1, 0);
    k[static_cast<size_t>(l)] = params.K;
    if (l >= 2) {
        // The proof-element chain needs k_{j-1} | k_j, i.e. an integral qR.
        if ((params.q * params.R.num) % params.R.den != 0)
            throw ParamError("qR must be a positive integer for multi-layer trees");
        const long long m = params.q * params.R.num / params.R.den;
        for (int j = l - 1; j >= 1; --j) {
            if (k[static_cast<size_t>(j) + 1] % m != 0)
                throw ParamError("layer " + std::to_string(j) +
                                 ": information length K/(qR)^(l-j) is not a positive integer");
            k[static_cast<size_t>(j)] = k[static_cast<size_t>(j) + 1] / m;
            if (k[static_cast<size_t>(j)] < 1)
                throw ParamError("layer " + std::to_string(j) + ": information length vanished");
        }
    }

    std::vector<CodeDesign> designs(static_cast<size_t>(l));
    std::vector<std::optional<int>> divisors(static_cast<size_t>(l));
    for (int j = 1; j <= l; ++j) {
        const long long kj = k[static_cast<size_t>(j)];
        if ((kj * params.R.den) % params.R.num != 0)
            throw ParamError("layer " + std::to_string(j) + ": code length k/R is not integral");
        const long long n_target = kj * params.R.den / params.R.num;
        if (n_target <= kj)
            throw ParamError("layer " + std::to_string(j) + ": code length must exceed k");
        // Interior layers keep extra frozen bottom rows until the previous
        // layer's information length divides the achieved code length; the
        // threshold is unaffected.
        if (j >= 2 && j <= l - 1) divisors[static_cast<size_t>(j) - 1] = static_cast<int>(k[static_cast<size_t>(j) - 1]);
        try {
            designs[static_cast<size_t>(j) - 1] =
                sef_design(static_cast<int>(n_target), static_cast<int>(kj), divisors[static_cast<size_t>(j) - 1]);
        } catch (const ParamError& e) {
            throw ParamError("layer " + std::to_string(j) + ": " + e.what());
        }
    }
    TreePlan plan = plan_from_designs(params, std::move(designs));
    for (int j = 1; j <= l; ++j)
        plan.layers[static_cast<size_t>(j) - 1].align_divisor = divisors[static_cast<size_t>(j) - 1];
    return plan;
}

TreePlan plan_from_designs(const PcmtParams& params, std::vector<CodeDesign> designs) {
    if (designs.empty()) throw ParamError("a tree needs at least one layer design");
    const int l = static_cast<int>(designs.size());
    if (params.l != l) throw ParamError("params.l disagrees with the design count");
    if (designs.back().k != params.K) throw ParamError("base design must carry K information symbols");
    if (params.y != 32) throw ParamError("hash size is fixed to 32 bytes");
    if (params.c < 1) throw ParamError("base symbol size must be positive");
    hash_by_name(params.hash);

    TreePlan plan;
    plan.params = params;
    plan.layers.resize(static_cast<size_t>(l));
    for (int j = 1; j <= l; ++j) {
        LayerPlan& lp = plan.layers[static_cast<size_t>(j) - 1];
        lp.j = j;
        if (params.pruned && !designs[static_cast<size_t>(j) - 1].pruned)
            designs[static_cast<size_t>(j) - 1] = pruned_design(designs[static_cast<size_t>(j) - 1]);
        lp.design = std::move(designs[static_cast<size_t>(j) - 1]);
        lp.k = lp.design.k;
        lp.n_target = lp.design.n_target;
        lp.tot_vns = tot_vn(lp.design.fg);
        if (j >= 2) {
            const long long k_up = plan.layers[static_cast<size_t>(j) - 2].k;
            if (lp.k % k_up != 0)
                throw ParamError("layer " + std::to_string(j) +
                                 ": parent information length must divide k");
            if (j <= l - 1 && lp.design.n_sef % k_up != 0)
                throw ParamError("layer " + std::to_string(j) +
                                 ": parent information length must divide the code length");
        }
        // The layer layout relies on dropped VNs owning the smallest ids.
        for (long long v = 1; v <= lp.tot_vns - lp.design.n_sef; ++v) {
            const VnRole role = lp.design.fg.vn(static_cast<int>(v)).role;
            if (role == VnRole::Data || role == VnRole::Parity)
                throw StructuralError("coded VN found below the dropped region");
        }
    }
    for (int j = l; j >= 1; --j) {
        LayerPlan& lp = plan.layers[static_cast<size_t>(j) - 1];
        if (j >= 2) {
            const long long k_parent = plan.layers[static_cast<size_t>(j) - 2].k;
            lp.tvn = (lp.tot_vns + k_parent - 1) / k_parent * k_parent;
        } else {
            lp.tvn = lp.tot_vns;
        }
        lp.d_i = lp.tvn - lp.design.n_sef;
        lp.pad = lp.tvn - lp.tot_vns;
    }
    for (int j = 1; j <= l; ++j) {
        LayerPlan& lp = plan.layers[static_cast<size_t>(j) - 1];
        lp.symbol_size = j == l ? params.c : params.y * static_cast<uint64_t>(plan.group_count(j));
    }
    return plan;
}

namespace {

// Grouping rule: data symbol r of the parent concatenates the hashes of all
// child entries x with 1 + (x-1) mod k == r, ascending in x; pad entries
// contribute y zero bytes.
std::vector<Symbol> form_parent_data(const TreePlan& plan, int child_j,
                                     const std::vector<Symbol>& child_symbols) {
    const LayerPlan& child = plan.layer(child_j);
    const long long k_parent = plan.layer(child_j - 1).k;
    const long long groups = child.tvn / k_parent;
    const uint64_t y = plan.params.y;

    std::vector<Symbol> data(static_cast<size_t>(k_parent));
    for (long long r = 1; r <= k_parent; ++r) {
        Symbol s;
        s.reserve(static_cast<size_t>(groups) * y);
        for (long long slot = 0; slot < groups; ++slot) {
            const long long x = r + slot * k_parent;
            if (x <= child.pad) {
                s.insert(s.end(), y, 0);
            } else {
                const Hash32 h = hash_symbol(plan, child_symbols[static_cast<size_t>(x) - 1]);
                s.insert(s.end(), h.begin(), h.end());
            }
        }
        data[static_cast<size_t>(r) - 1] = std::move(s);
    }
    return data;
}

std::vector<Symbol> layer_array_from(const LayerPlan& lp, const SymbolVector& sv) {
    std::vector<Symbol> arr(static_cast<size_t>(lp.tvn));
    for (long long lambda = 1; lambda <= lp.tvn; ++lambda) {
        const int vn = lp.vn_of_index(lambda);
        arr[static_cast<size_t>(lambda) - 1] = vn == 0 ? Symbol(lp.symbol_size, 0) : sv.at(vn);
    }
    return arr;
}

}  // namespace

Pcmt build_with_hooks(const std::vector<uint8_t>& block, const TreePlan& plan, const BuildHooks& hooks) {
    const PcmtParams& p = plan.params;
    const uint64_t cap = p.c * static_cast<uint64_t>(p.K);
    if (block.size() > cap) throw ParamError("block exceeds c*K bytes");

    std::vector<uint8_t> padded = block;
    padded.resize(cap, 0);

    Pcmt tree;
    tree.plan = std::make_shared<TreePlan>(plan);
    tree.layers.resize(static_cast<size_t>(plan.l()));

    std::vector<Symbol> data(static_cast<size_t>(p.K));
    for (long long i = 0; i < p.K; ++i) {
        data[static_cast<size_t>(i)] = Symbol(padded.begin() + static_cast<long long>(p.c) * i,
                                              padded.begin() + static_cast<long long>(p.c) * (i + 1));
    }
    for (int j = plan.l(); j >= 1; --j) {
        const LayerPlan& lp = plan.layer(j);
        const SymbolVector enc = pepc_encode(lp.design.fg, data);
        tree.layers[static_cast<size_t>(j) - 1] = layer_array_from(lp, enc);
        if (hooks.after_encode) hooks.after_encode(j, tree.layers[static_cast<size_t>(j) - 1]);
        if (j >= 2) data = form_parent_data(plan, j, tree.layers[static_cast<size_t>(j) - 1]);
    }
    tree.root.reserve(static_cast<size_t>(plan.layer(1).tvn));
    for (const Symbol& s : tree.layers[0]) tree.root.push_back(hash_symbol(plan, s));
    return tree;
}

Pcmt build(const std::vector<uint8_t>& block, const TreePlan& plan) {
    return build_with_hooks(block, plan, BuildHooks{});
}

namespace {

MerkleProof proof_from_arrays(const TreePlan& plan, const std::vector<std::vector<Symbol>>& layers,
                              int layer, long long index) {
    if (layer < 1 || layer > plan.l()) throw ParamError("layer out of range");
    const LayerPlan& lp = plan.layer(layer);
    if (index < 1 || index > lp.tvn) throw ParamError("layer index out of range");

    MerkleProof proof;
    proof.layer = layer;
    proof.index = index;
    for (int jp = 1; jp < layer; ++jp) {
        const LayerPlan& up = plan.layer(jp);
        const long long d_idx = up.d_i + 1 + (index - 1) % up.k;
        const long long p_idx = up.d_i + 1 + up.k + (index - 1) % (up.design.n_sef - up.k);
        proof.elements.push_back(
            {jp, d_idx, layers[static_cast<size_t>(jp) - 1][static_cast<size_t>(d_idx) - 1]});
        proof.elements.push_back(
            {jp, p_idx, layers[static_cast<size_t>(jp) - 1][static_cast<size_t>(p_idx) - 1]});
    }
    return proof;
}

// Checks that hash `h` of child entry x (at child layer j) sits in its slot
// of parent data element `parent_data` one layer up.
bool slot_matches(const TreePlan& plan, int child_layer, long long x, const Hash32& h,
                  const ProofElement& parent_data) {
    const LayerPlan& up = plan.layer(child_layer - 1);
    const uint64_t y = plan.params.y;
    const long long container = up.d_i + 1 + (x - 1) % up.k;
    if (parent_data.index != container) return false;
    const long long slot = (x - 1) / up.k;
    const size_t off = static_cast<size_t>(slot) * y;
    if (parent_data.bytes.size() < off + y) return false;
    return std::equal(h.begin(), h.end(), parent_data.bytes.begin() + static_cast<long long>(off));
}

}  // namespace

MerkleProof merkle_proof(const Pcmt& tree, int layer, long long index) {
    return proof_from_arrays(*tree.plan, tree.layers, layer, index);
}

bool verify_inclusion(int layer, long long index, const Symbol& bytes, const MerkleProof& proof,
                      const std::vector<Hash32>& root, const TreePlan& plan) {
    if (layer < 1 || layer > plan.l()) return false;
    const LayerPlan& lp = plan.layer(layer);
    if (index < 1 || index > lp.tvn) return false;
    if (proof.layer != layer || proof.index != index) return false;
    if (static_cast<long long>(root.size()) != plan.layer(1).tvn) return false;

    const Hash32 target_hash = hash_symbol(plan, bytes);
    if (layer == 1) {
        return proof.elements.empty() && target_hash == root[static_cast<size_t>(index) - 1];
    }
    if (proof.elements.size() != 2 * static_cast<size_t>(layer - 1)) return false;

    // Elements must sit exactly where the proof rule places them.
    for (int jp = 1; jp < layer; ++jp) {
        const LayerPlan& up = plan.layer(jp);
        const ProofElement& d = proof.elements[2 * static_cast<size_t>(jp - 1)];
        const ProofElement& pe = proof.elements[2 * static_cast<size_t>(jp - 1) + 1];
        if (d.layer != jp || d.index != up.d_i + 1 + (index - 1) % up.k) return false;
        if (pe.layer != jp ||
            pe.index != up.d_i + 1 + up.k + (index - 1) % (up.design.n_sef - up.k))
            return false;
        if (d.bytes.size() != up.symbol_size || pe.bytes.size() != up.symbol_size) return false;
    }

    if (!slot_matches(plan, layer, index, target_hash,
                      proof.elements[2 * static_cast<size_t>(layer - 2)]))
        return false;
    for (int jp = layer - 1; jp >= 1; --jp) {
        const ProofElement& d = proof.elements[2 * static_cast<size_t>(jp - 1)];
        const ProofElement& pe = proof.elements[2 * static_cast<size_t>(jp - 1) + 1];
        const Hash32 hd = hash_symbol(plan, d.bytes);
        const Hash32 hp = hash_symbol(plan, pe.bytes);
        if (jp == 1) {
            if (hd != root[static_cast<size_t>(d.index) - 1]) return false;
            if (hp != root[static_cast<size_t>(pe.index) - 1]) return false;
        } else {
            const ProofElement& up_data = proof.elements[2 * static_cast<size_t>(jp - 2)];
            if (!slot_matches(plan, jp, d.index, hd, up_data)) return false;
            if (!slot_matches(plan, jp, pe.index, hp, up_data)) return false;
        }
    }
    return true;
}

namespace {

// Committed hash of layer-j entry lambda: from the root for the top layer,
// otherwise from the already-decoded parent data slot.
Hash32 committed_hash(const TreePlan& plan, const std::vector<Hash32>& root,
                      const std::vector<std::vector<Symbol>>& decoded, int j, long long lambda) {
    if (j == 1) return root[static_cast<size_t>(lambda) - 1];
    const LayerPlan& up = plan.layer(j - 1);
    const long long container = up.d_i + 1 + (lambda - 1) % up.k;
    const long long slot = (lambda - 1) / up.k;
    const Symbol& parent = decoded[static_cast<size_t>(j) - 2][static_cast<size_t>(container) - 1];
    Hash32 h;
    std::copy_n(parent.begin() + slot * static_cast<long long>(plan.params.y), plan.params.y,
                h.begin());
    return h;
}

}  // namespace

IcProof gen_ic_proof(const TreePlan& plan, const std::vector<std::vector<Symbol>>& decoded, int j,
                     int cn_id, const SymbolVector& values, int missing_vn) {
    const LayerPlan& lp = plan.layer(j);
    const Cn& cn = lp.design.fg.cn(cn_id);
    IcProof ic;
    ic.layer = j;
    ic.cn_id = cn_id;
    ic.degree = static_cast<int>(cn.vns.size());
    for (int w : cn.vns) {
        if (w == missing_vn) continue;
        IcSymbol s;
        s.layer = j;
        s.index = lp.index_of_vn(w);
        s.bytes = values.at(w);
        s.proof = proof_from_arrays(plan, decoded, j, s.index);
        ic.symbols.push_back(std::move(s));
    }
    ic.missing_index = lp.index_of_vn(missing_vn);
    ic.missing_proof = proof_from_arrays(plan, decoded, j, ic.missing_index);
    return ic;
}

HashAwareResult hash_aware_decode(const std::vector<Hash32>& root, const TreePlan& plan,
                                  const std::vector<std::map<long long, Symbol>>& available) {
    if (static_cast<int>(available.size()) != plan.l())
        throw ParamError("available symbol maps must cover every layer");
    if (static_cast<long long>(root.size()) != plan.layer(1).tvn)
        throw ParamError("root size does not match the tree geometry");

    HashAwareResult out;
    std::vector<std::vector<Symbol>> decoded(static_cast<size_t>(plan.l()));
    for (int j = 1; j <= plan.l(); ++j) {
        const LayerPlan& lp = plan.layer(j);
        std::map<int, Symbol> observed;
        for (const auto& [pos, bytes] : available[static_cast<size_t>(j) - 1]) {
            if (pos < 1 || pos > lp.design.n_sef) throw ParamError("coded position out of range");
            if (bytes.size() != lp.symbol_size) throw ParamError("available symbol has wrong size");
            const Hash32 expect = committed_hash(plan, root, decoded, j, lp.index_of_coded(pos));
            if (hash_symbol(plan, bytes) != expect)
                throw ParamError("available symbol fails inclusion against the root");
            observed.emplace(static_cast<int>(pos), bytes);
        }

        DecodeResult res = peel_decode(lp.design.fg, observed, lp.symbol_size);
        if (res.status == DecodeStatus::Stuck) {
            out.kind = HashAwareResult::Kind::Alarm;
            out.alarm.layer = j;
            for (int v : res.unresolved) out.alarm.stuck_indices.push_back(lp.index_of_vn(v));
            return out;
        }
        // Hashes of peeled symbols are compared to their committed slots in
        // resolution order, so the first mismatch has CN siblings whose
        // values are all committed (observed or checked earlier).
        for (int v : res.resolution_order) {
            const long long lambda = lp.index_of_vn(v);
            const Hash32 expect = committed_hash(plan, root, decoded, j, lambda);
            if (hash_symbol(plan, res.symbols.at(v)) != expect) {
                out.kind = HashAwareResult::Kind::Ic;
                out.ic = gen_ic_proof(plan, decoded, j,
                                       res.resolver_cn[static_cast<size_t>(v) - 1], res.symbols, v);
                return out;
            }
        }
        if (res.status == DecodeStatus::Inconsistent) {
            // Every resolved symbol matched its commitment, so the failing
            // check connects committed values only; reconstruct the member
            // with the largest layer index from the others.
            const Cn& cn = lp.design.fg.cn(res.bad_cn);
            int missing = cn.vns[0];
            for (int w : cn.vns) {
                if (lp.index_of_vn(w) > lp.index_of_vn(missing)) missing = w;
            }
            out.kind = HashAwareResult::Kind::Ic;
            out.ic = gen_ic_proof(plan, decoded, j, res.bad_cn, res.symbols, missing);
            return out;
        }
        decoded[static_cast<size_t>(j) - 1] = layer_array_from(lp, res.symbols);
    }

    const LayerPlan& base = plan.layer(plan.l());
    out.kind = HashAwareResult::Kind::Block;
    out.block.reserve(static_cast<size_t>(plan.params.K) * plan.params.c);
    for (long long r = 1; r <= base.k; ++r) {
        const Symbol& s =
            decoded[static_cast<size_t>(plan.l()) - 1][static_cast<size_t>(base.d_i + r) - 1];
        out.block.insert(out.block.end(), s.begin(), s.end());
    }
    return out;
}

bool verify_ic_proof(const IcProof& proof, const std::vector<Hash32>& root, const TreePlan& plan) {
    if (proof.degree < 2 || proof.degree > 3 ||
        proof.symbols.size() != static_cast<size_t>(proof.degree) - 1)
        throw ParamError("IC proof has a malformed element count");
    if (proof.layer < 1 || proof.layer > plan.l()) return false;
    const LayerPlan& lp = plan.layer(proof.layer);
    if (proof.cn_id < 1 || proof.cn_id > static_cast<int>(lp.design.fg.cns.size())) return false;

    // The claimed check must exist in the public code with these members.
    const Cn& cn = lp.design.fg.cn(proof.cn_id);
    if (static_cast<int>(cn.vns.size()) != proof.degree) return false;
    std::multiset<long long> claimed;
    for (const IcSymbol& s : proof.symbols) claimed.insert(s.index);
    claimed.insert(proof.missing_index);
    std::multiset<long long> actual;
    for (int w : cn.vns) actual.insert(lp.index_of_vn(w));
    if (claimed != actual) return false;

    Symbol reconstructed(lp.symbol_size, 0);
    for (const IcSymbol& s : proof.symbols) {
        if (s.layer != proof.layer || s.bytes.size() != lp.symbol_size) return false;
        if (!verify_inclusion(s.layer, s.index, s.bytes, s.proof, root, plan)) return false;
        for (size_t b = 0; b < reconstructed.size(); ++b) reconstructed[b] ^= s.bytes[b];
    }
    // Valid exactly when the reconstructed symbol contradicts the commitment.
    return !verify_inclusion(proof.layer, proof.missing_index, reconstructed, proof.missing_proof,
                             root, plan);
}

namespace {

nlohmann::json element_to_json(const ProofElement& e) {
    return {{"layer", e.layer}, {"index", e.index}, {"bytes", hex_encode(e.bytes)}};
}

ProofElement element_from_json(const nlohmann::json& j) {
    ProofElement e;
    e.layer = j.at("layer").get<int>();
    e.index = j.at("index").get<long long>();
    e.bytes = hex_decode(j.at("bytes").get<std::string>());
    return e;
}

nlohmann::json merkle_to_json(const MerkleProof& p) {
    nlohmann::json j;
    j["target"] = {{"layer", p.layer}, {"index", p.index}};
    j["elements"] = nlohmann::json::array();
    for (const ProofElement& e : p.elements) j["elements"].push_back(element_to_json(e));
    return j;
}

MerkleProof merkle_from_json(const nlohmann::json& j) {
    MerkleProof p;
    p.layer = j.at("target").at("layer").get<int>();
    p.index = j.at("target").at("index").get<long long>();
    for (const auto& e : j.at("elements")) p.elements.push_back(element_from_json(e));
    return p;
}

}  // namespace

std::string merkle_proof_json(const MerkleProof& proof) { return merkle_to_json(proof).dump(); }

MerkleProof merkle_proof_from_json(const std::string& text) {
    try {
        return merkle_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw ParamError(std::string("bad Merkle proof JSON: ") + e.what());
    }
}

std::string ic_proof_json(const IcProof& proof) {
    nlohmann::json j;
    j["cn"] = {{"layer", proof.layer}, {"id", proof.cn_id}, {"degree", proof.degree}};
    j["symbols"] = nlohmann::json::array();
    for (const IcSymbol& s : proof.symbols) {
        j["symbols"].push_back({{"layer", s.layer},
                                {"index", s.index},
                                {"bytes", hex_encode(s.bytes)},
                                {"proof", merkle_to_json(s.proof)}});
    }
    j["missing"] = {{"layer", proof.layer},
                    {"index", proof.missing_index},
                    {"proof", merkle_to_json(proof.missing_proof)}};
    return j.dump();
}

IcProof ic_proof_from_json(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        IcProof p;
        p.layer = j.at("cn").at("layer").get<int>();
        p.cn_id = j.at("cn").at("id").get<int>();
        p.degree = j.at("cn").at("degree").get<int>();
        for (const auto& s : j.at("symbols")) {
            IcSymbol sym;
            sym.layer = s.at("layer").get<int>();
            sym.index = s.at("index").get<long long>();
            sym.bytes = hex_decode(s.at("bytes").get<std::string>());
            sym.proof = merkle_from_json(s.at("proof"));
            p.symbols.push_back(std::move(sym));
        }
        p.missing_index = j.at("missing").at("index").get<long long>();
        p.missing_proof = merkle_from_json(j.at("missing").at("proof"));
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ParamError(std::string("bad IC proof JSON: ") + e.what());
    }
}

std::string params_json(const PcmtParams& p) {
    nlohmann::json j;
    j["K"] = p.K;
    j["R"] = p.R.str();
    j["q"] = p.q;
    j["l"] = p.l;
    j["c"] = p.c;
    j["y"] = p.y;
    j["pruned"] = p.pruned;
    j["hash"] = p.hash;
    return j.dump();
}

PcmtParams params_from_json(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        PcmtParams p;
        p.K = j.at("K").get<long long>();
        p.R = Rational::parse(j.at("R").get<std::string>());
        p.q = j.at("q").get<int>();
        p.l = j.at("l").get<int>();
        p.c = j.at("c").get<uint64_t>();
        p.y = j.value("y", 32);
        p.pruned = j.value("pruned", false);
        p.hash = j.value("hash", std::string("sha256"));
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ParamError(std::string("bad params JSON: ") + e.what());
    }
}

std::string root_hex(const std::vector<Hash32>& root) {
    std::string out;
    out.reserve(root.size() * 64);
    for (const Hash32& h : root) out += hex_encode(h.data(), h.size());
    return out;
}

std::vector<Hash32> root_from_hex(const std::string& hex) {
    const std::vector<uint8_t> raw = hex_decode(hex);
    if (raw.size() % 32 != 0) throw ParamError("root hex length must be a multiple of 64");
    std::vector<Hash32> root(raw.size() / 32);
    for (size_t i = 0; i < root.size(); ++i)
        std::copy_n(raw.begin() + 32 * static_cast<long long>(i), 32, root[i].begin());
    return root;
}

}  // namespace pcmt
