#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "pcmt/archive.hpp"
#include "pcmt/errors.hpp"
#include "pcmt/tree.hpp"

using namespace pcmt;

namespace {

PcmtParams small_params(bool pruned = false) {
    PcmtParams p;
    p.K = 8;
    p.R = Rational::parse("1/2");
    p.q = 4;
    p.l = 3;
    p.c = 16;
    p.pruned = pruned;
    return p;
}

std::vector<uint8_t> test_block(size_t len, uint64_t seed = 99) {
    Rng rng(seed);
    std::vector<uint8_t> b(len);
    for (auto& x : b) x = static_cast<uint8_t>(rng.below(256));
    return b;
}

std::vector<std::map<long long, Symbol>> full_availability(const Pcmt& tree) {
    std::vector<std::map<long long, Symbol>> av(tree.plan->layers.size());
    for (int j = 1; j <= tree.plan->l(); ++j) {
        const LayerPlan& lp = tree.plan->layer(j);
        for (long long pos = 1; pos <= lp.design.n_sef; ++pos) {
            av[static_cast<size_t>(j) - 1][pos] =
                tree.layers[static_cast<size_t>(j) - 1][static_cast<size_t>(lp.index_of_coded(pos)) - 1];
        }
    }
    return av;
}

}  // namespace

TEST_CASE("tree planning for (K=8, R=1/2, q=4, l=3)") {
    const TreePlan plan = plan_tree(small_params());
    REQUIRE(plan.l() == 3);
    CHECK(plan.layer(1).k == 2);
    CHECK(plan.layer(2).k == 4);
    CHECK(plan.layer(3).k == 8);
    CHECK(plan.layer(3).n_target == 16);
    CHECK(plan.layer(1).design.n_sef == 3);
    CHECK(plan.layer(2).design.n_sef == 8);
    CHECK(plan.layer(3).design.n_sef == 13);

    // Base layer: 13 rows x 5 columns padded up to a multiple of k_2 = 4.
    CHECK(plan.layer(3).tot_vns == 65);
    CHECK(plan.layer(3).tvn == 68);
    CHECK(plan.layer(3).pad == 3);
    CHECK(plan.layer(3).d_i == 55);
    CHECK(plan.layer(2).tvn == 32);
    CHECK(plan.layer(1).tvn == plan.layer(1).tot_vns);

    // Parent data symbols concatenate TVN_{j+1}/k_j hashes.
    CHECK(plan.layer(2).symbol_size == 32 * static_cast<uint64_t>(plan.group_count(2)));
    CHECK(plan.layer(1).symbol_size == 32 * static_cast<uint64_t>(plan.group_count(1)));
    CHECK(plan.layer(3).symbol_size == 16);
}

TEST_CASE("tree planning reproduces the two-layer reference tree") {
    PcmtParams p;
    p.K = 6;
    p.R = Rational::parse("1/2");
    p.q = 4;
    p.l = 2;
    p.c = 8;
    const TreePlan plan = plan_tree(p);
    CHECK(plan.layer(2).design.n_sef == 11);
    CHECK(plan.layer(1).design.n_sef == 4);
    CHECK(plan.layer(2).tot_vns == 55);
    CHECK(plan.layer(2).tvn == 57);  // padded to a multiple of k_1 = 3
    CHECK(plan.layer(2).pad == 2);
    CHECK(plan.layer(1).tvn == 16);
}

TEST_CASE("single-layer trees need no parent grouping") {
    PcmtParams p;
    p.K = 8;
    p.R = Rational::parse("1/2");
    p.q = 4;
    p.l = 1;
    p.c = 4;
    const TreePlan plan = plan_tree(p);
    CHECK(plan.layer(1).tvn == plan.layer(1).tot_vns);
    const Pcmt tree = build(test_block(32), plan);
    CHECK(tree.root.size() == static_cast<size_t>(plan.layer(1).tvn));
}

TEST_CASE("planning rejects broken parameterizations") {
    PcmtParams p = small_params();
    p.K = 6;  // 6 is not divisible by (qR)^2 = 4
    CHECK_THROWS_AS(plan_tree(p), ParamError);
    p = small_params();
    p.q = 3;  // qR = 3/2 is not integral
    CHECK_THROWS_AS(plan_tree(p), ParamError);
    p = small_params();
    p.R = Rational::parse("1/1");
    CHECK_THROWS_AS(plan_tree(p), ParamError);
    p = small_params();
    p.y = 16;
    CHECK_THROWS_AS(plan_tree(p), ParamError);
}

TEST_CASE("builds are deterministic and reject oversized blocks") {
    const TreePlan plan = plan_tree(small_params());
    const auto block = test_block(100);
    const Pcmt a = build(block, plan);
    const Pcmt b = build(block, plan);
    CHECK(a.root == b.root);
    CHECK(a.layers == b.layers);
    CHECK_THROWS_AS(build(test_block(16 * 8 + 1), plan), ParamError);
}

TEST_CASE("grouping rule on the full-graph tree") {
    // Tree over full encoding graphs, frozen sets from naive freezing. The
    // hash of layer-2 entry 28 must land in slot 13 of layer-1 entry 10.
    PcmtParams p = small_params();
    std::vector<CodeDesign> designs{nf_design(4, 2), nf_design(8, 4), nf_design(16, 8)};
    const TreePlan plan = plan_from_designs(p, std::move(designs));
    CHECK(plan.layer(1).tvn == 12);
    CHECK(plan.layer(2).tvn == 32);
    CHECK(plan.layer(3).tvn == 80);
    CHECK(plan.layer(1).d_i == 8);
    CHECK(plan.layer(2).d_i == 24);

    const Pcmt tree = build(test_block(16 * 8, 3), plan);
    const Symbol& child = tree.layers[1][28 - 1];
    const Symbol& parent = tree.layers[0][10 - 1];
    const Hash32 h = sha256(child);
    const size_t slot = (28 - 1) / 2;  // = 13
    CHECK(std::equal(h.begin(), h.end(), parent.begin() + static_cast<long long>(slot) * 32));
    // 1 + (28-1) mod k_1 = 2, so entry 10 = dI_1 + 2 is the right container.
    CHECK(plan.layer(1).d_i + 1 + (28 - 1) % plan.layer(1).k == 10);
}

TEST_CASE("Merkle proofs verify and chain for every symbol") {
    for (bool pruned : {false, true}) {
        const TreePlan plan = plan_tree(small_params(pruned));
        const Pcmt tree = build(test_block(100, pruned ? 5 : 7), plan);
        for (int j = 1; j <= plan.l(); ++j) {
            const LayerPlan& lp = plan.layer(j);
            for (long long idx = 1; idx <= lp.tvn; ++idx) {
                if (idx <= lp.pad) continue;  // pad entries are not symbols
                const MerkleProof proof = merkle_proof(tree, j, idx);
                CHECK(proof.elements.size() == 2 * static_cast<size_t>(j - 1));
                CHECK(verify_inclusion(
                    j, idx, tree.layers[static_cast<size_t>(j) - 1][static_cast<size_t>(idx) - 1],
                    proof, tree.root, plan));
            }
        }
    }
}

TEST_CASE("proof element indices follow the data/parity rule") {
    const TreePlan plan = plan_tree(small_params());
    const Pcmt tree = build(test_block(100), plan);
    const long long idx = plan.layer(3).d_i + 5;
    const MerkleProof proof = merkle_proof(tree, 3, idx);
    REQUIRE(proof.elements.size() == 4);
    for (int jp = 1; jp <= 2; ++jp) {
        const LayerPlan& up = plan.layer(jp);
        const ProofElement& d = proof.elements[2 * static_cast<size_t>(jp - 1)];
        const ProofElement& pe = proof.elements[2 * static_cast<size_t>(jp - 1) + 1];
        CHECK(d.index == up.d_i + 1 + (idx - 1) % up.k);
        CHECK(pe.index == up.d_i + 1 + up.k + (idx - 1) % (up.design.n_sef - up.k));
    }
    CHECK_THROWS_AS(merkle_proof(tree, 3, plan.layer(3).tvn + 1), ParamError);
    CHECK(merkle_proof(tree, 1, 1).elements.empty());
}

TEST_CASE("tampering breaks inclusion") {
    const TreePlan plan = plan_tree(small_params());
    const Pcmt tree = build(test_block(100, 21), plan);
    const LayerPlan& base = plan.layer(3);
    const long long idx = base.d_i + 3;
    Symbol bytes = tree.layers[2][static_cast<size_t>(idx) - 1];
    MerkleProof proof = merkle_proof(tree, 3, idx);

    Symbol flipped = bytes;
    flipped[0] ^= 0x80;
    CHECK_FALSE(verify_inclusion(3, idx, flipped, proof, tree.root, plan));

    MerkleProof bad = proof;
    bad.elements[0].bytes[5] ^= 1;  // layer-1 data element
    CHECK_FALSE(verify_inclusion(3, idx, bytes, bad, tree.root, plan));

    bad = proof;
    bad.elements[3].bytes[2] ^= 1;  // layer-2 parity element
    CHECK_FALSE(verify_inclusion(3, idx, bytes, bad, tree.root, plan));

    // Random single-byte tampering never verifies.
    Rng rng(77);
    for (int trial = 0; trial < 2000; ++trial) {
        const int j = 1 + static_cast<int>(rng.below(3));
        const LayerPlan& lp = plan.layer(j);
        const long long t =
            lp.pad + 1 + static_cast<long long>(rng.below(static_cast<uint64_t>(lp.tvn - lp.pad)));
        Symbol s = tree.layers[static_cast<size_t>(j) - 1][static_cast<size_t>(t) - 1];
        s[rng.below(s.size())] ^= static_cast<uint8_t>(1 + rng.below(255));
        CHECK_FALSE(verify_inclusion(j, t, s, merkle_proof(tree, j, t), tree.root, plan));
    }
}

TEST_CASE("hash-aware decode round-trips the block") {
    for (bool pruned : {false, true}) {
        const TreePlan plan = plan_tree(small_params(pruned));
        const auto block = test_block(100, 31);
        const Pcmt tree = build(block, plan);
        const HashAwareResult res = hash_aware_decode(tree.root, plan, full_availability(tree));
        REQUIRE(res.kind == HashAwareResult::Kind::Block);
        std::vector<uint8_t> expect = block;
        expect.resize(16 * 8, 0);
        CHECK(res.block == expect);
    }
}

TEST_CASE("hiding a minimum stopping tree raises an availability alarm") {
    const TreePlan plan = plan_tree(small_params());
    const Pcmt tree = build(test_block(100, 41), plan);
    for (int j = 1; j <= 3; ++j) {
        const LayerPlan& lp = plan.layer(j);
        // Smallest stopping tree over the information rows.
        int best_root = lp.design.info[0];
        const auto t = tree_leaf_sizes(lp.n_target);
        for (int i : lp.design.info) {
            if (t[static_cast<size_t>(i) - 1] < t[static_cast<size_t>(best_root) - 1]) best_root = i;
        }
        const CodeDesign ref =
            sef_design(static_cast<int>(lp.n_target), static_cast<int>(lp.k), lp.align_divisor);
        const StoppingSet ss = stopping_tree(ref.fg, best_root);
        auto av = full_availability(tree);
        for (int leaf : ss.leaf_set) {
            const auto it = std::find(ref.fg.coded_vn_ids.begin(), ref.fg.coded_vn_ids.end(), leaf);
            REQUIRE(it != ref.fg.coded_vn_ids.end());
            av[static_cast<size_t>(j) - 1].erase((it - ref.fg.coded_vn_ids.begin()) + 1);
        }
        const HashAwareResult res = hash_aware_decode(tree.root, plan, av);
        REQUIRE(res.kind == HashAwareResult::Kind::Alarm);
        CHECK(res.alarm.layer == j);
        CHECK(res.alarm.stuck_indices.size() >= ss.leaf_set.size());
    }
}

TEST_CASE("hiding fewer than alpha_min coded symbols never raises an alarm") {
    const TreePlan plan = plan_tree(small_params());
    const Pcmt tree = build(test_block(100, 43), plan);
    Rng rng(51);
    for (int j = 1; j <= 3; ++j) {
        const LayerPlan& lp = plan.layer(j);
        const long long n = lp.design.n_sef;
        if (n <= 8) {
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                if (std::popcount(mask) >= lp.design.alpha_min) continue;
                auto av = full_availability(tree);
                for (long long pos = 1; pos <= n; ++pos) {
                    if (mask & (1u << (pos - 1))) av[static_cast<size_t>(j) - 1].erase(pos);
                }
                CHECK(hash_aware_decode(tree.root, plan, av).kind == HashAwareResult::Kind::Block);
            }
        } else {
            for (int trial = 0; trial < 1000; ++trial) {
                auto av = full_availability(tree);
                std::set<long long> hidden;
                while (hidden.size() + 1 < static_cast<size_t>(lp.design.alpha_min))
                    hidden.insert(1 + static_cast<long long>(rng.below(static_cast<uint64_t>(n))));
                for (long long pos : hidden) av[static_cast<size_t>(j) - 1].erase(pos);
                CHECK(hash_aware_decode(tree.root, plan, av).kind == HashAwareResult::Kind::Block);
            }
        }
    }
}

TEST_CASE("incorrect coding yields a verifiable proof") {
    for (bool pruned : {false, true}) {
        const TreePlan plan = plan_tree(small_params(pruned));
        const LayerPlan& base = plan.layer(3);
        // Flip a byte of the last parity symbol after encoding; parents then
        // commit to the corrupted array.
        BuildHooks hooks;
        hooks.after_encode = [&](int j, std::vector<Symbol>& symbols) {
            if (j == 3) symbols[static_cast<size_t>(base.tvn) - 1][0] ^= 0x55;
        };
        const Pcmt tree = build_with_hooks(test_block(100, 61), plan, hooks);

        const HashAwareResult res = hash_aware_decode(tree.root, plan, full_availability(tree));
        REQUIRE(res.kind == HashAwareResult::Kind::Ic);
        CHECK(res.ic.layer == 3);
        CHECK(res.ic.degree <= 3);
        CHECK(res.ic.symbols.size() == static_cast<size_t>(res.ic.degree) - 1);
        CHECK(verify_ic_proof(res.ic, tree.root, plan));

        // The same proof against any other root fails.
        const Pcmt other = build(test_block(100, 62), plan_tree(small_params(pruned)));
        CHECK_FALSE(verify_ic_proof(res.ic, other.root, plan));

        // Malformed element counts are parameter errors.
        IcProof broken = res.ic;
        broken.symbols.clear();
        CHECK_THROWS_AS(verify_ic_proof(broken, tree.root, plan), ParamError);
    }
}

TEST_CASE("an IC proof forged against an honest tree is rejected") {
    // Take a real check from an honestly built tree, supply its committed
    // member values, and claim the remaining member is inconsistent. The
    // reconstruction then matches the commitment, so the proof must fail.
    const TreePlan plan = plan_tree(small_params());
    const auto block = test_block(100, 91);
    const Pcmt tree = build(block, plan);
    const HashAwareResult res = hash_aware_decode(tree.root, plan, full_availability(tree));
    REQUIRE(res.kind == HashAwareResult::Kind::Block);

    for (int j = 1; j <= plan.l(); ++j) {
        const LayerPlan& lp = plan.layer(j);
        for (int cn_id : {1, static_cast<int>(lp.design.fg.cns.size())}) {
            const Cn& cn = lp.design.fg.cn(cn_id);
            IcProof forged;
            forged.layer = j;
            forged.cn_id = cn_id;
            forged.degree = static_cast<int>(cn.vns.size());
            for (size_t i = 0; i + 1 < cn.vns.size(); ++i) {
                IcSymbol s;
                s.layer = j;
                s.index = lp.index_of_vn(cn.vns[i]);
                s.bytes = tree.layers[static_cast<size_t>(j) - 1][static_cast<size_t>(s.index) - 1];
                s.proof = merkle_proof(tree, j, s.index);
                forged.symbols.push_back(std::move(s));
            }
            forged.missing_index = lp.index_of_vn(cn.vns.back());
            forged.missing_proof = merkle_proof(tree, j, forged.missing_index);
            CHECK_FALSE(verify_ic_proof(forged, tree.root, plan));

            // Claiming a check over unrelated symbols fails the structure test.
            IcProof wrong = forged;
            wrong.missing_index = wrong.missing_index > 1 ? wrong.missing_index - 1
                                                          : wrong.missing_index + 1;
            CHECK_FALSE(verify_ic_proof(wrong, tree.root, plan));
        }
    }
}

TEST_CASE("repetition property holds exhaustively on small trees") {
    // The strict eta-fraction form requires the base code length to stay a
    // multiple of every k_j, which holds exactly when the base layer comes
    // out of the freezing algorithm unpunctured. (A punctured base such as
    // N_l = 13 with k_2 = 4 admits subsets that violate the bound.)
    std::vector<PcmtParams> cases;
    {
        PcmtParams p;
        p.R = Rational::parse("1/2");
        p.c = 4;
        p.K = 4;
        p.q = 4;
        p.l = 2;  // layers (N=3, N=8)
        cases.push_back(p);
        p.pruned = true;
        cases.push_back(p);
        p.pruned = false;
        p.q = 2;
        p.l = 3;  // three layers of N=8
        cases.push_back(p);
        p.pruned = true;
        cases.push_back(p);
    }
    for (const PcmtParams& p : cases) {
        const TreePlan plan = plan_tree(p);
        const int l = plan.l();
        const long long n_base = plan.layer(l).design.n_sef;
        REQUIRE(n_base <= 16);

        // Distinct proof elements per layer for every base coded position.
        std::vector<std::vector<long long>> data_of(static_cast<size_t>(n_base) + 1);
        std::vector<std::vector<long long>> parity_of(static_cast<size_t>(n_base) + 1);
        for (long long pos = 1; pos <= n_base; ++pos) {
            const long long lambda = plan.layer(l).index_of_coded(pos);
            for (int jp = 1; jp < l; ++jp) {
                const LayerPlan& up = plan.layer(jp);
                data_of[static_cast<size_t>(pos)].push_back(1 + (lambda - 1) % up.k);
                parity_of[static_cast<size_t>(pos)].push_back(up.k + 1 +
                                                              (lambda - 1) % (up.design.n_sef - up.k));
            }
        }
        for (unsigned mask = 1; mask < (1u << n_base); ++mask) {
            const long long s_count = std::popcount(mask);
            for (int jp = 1; jp <= l; ++jp) {
                std::set<long long> covered;
                for (long long pos = 1; pos <= n_base; ++pos) {
                    if (!(mask & (1u << (pos - 1)))) continue;
                    if (jp == l) {
                        covered.insert(pos);
                    } else {
                        covered.insert(data_of[static_cast<size_t>(pos)][static_cast<size_t>(jp) - 1]);
                        covered.insert(parity_of[static_cast<size_t>(pos)][static_cast<size_t>(jp) - 1]);
                    }
                }
                // count/N_j >= s_count/N_l, in exact integer arithmetic
                CHECK(static_cast<long long>(covered.size()) * n_base >=
                      s_count * plan.layer(jp).design.n_sef);
            }
        }
    }
}

TEST_CASE("rate-2/3 trees build, verify, and decode") {
    PcmtParams p;
    p.K = 8;
    p.R = Rational::parse("2/3");
    p.q = 3;  // qR = 2
    p.l = 2;
    p.c = 6;
    for (bool pruned : {false, true}) {
        p.pruned = pruned;
        const TreePlan plan = plan_tree(p);
        CHECK(plan.layer(1).k == 4);
        CHECK(plan.layer(1).n_target == 6);
        CHECK(plan.layer(2).n_target == 12);
        if (!pruned) {
            CHECK(plan.layer(1).design.n_sef == 5);
            CHECK(plan.layer(2).design.n_sef == 9);
        }

        const auto block = test_block(40, 123);
        const Pcmt tree = build(block, plan);
        for (int j = 1; j <= 2; ++j) {
            const LayerPlan& lp = plan.layer(j);
            for (long long idx = lp.pad + 1; idx <= lp.tvn; ++idx) {
                CHECK(verify_inclusion(
                    j, idx, tree.layers[static_cast<size_t>(j) - 1][static_cast<size_t>(idx) - 1],
                    merkle_proof(tree, j, idx), tree.root, plan));
            }
        }
        const HashAwareResult res = hash_aware_decode(tree.root, plan, full_availability(tree));
        REQUIRE(res.kind == HashAwareResult::Kind::Block);
        std::vector<uint8_t> expect = block;
        expect.resize(48, 0);
        CHECK(res.block == expect);
    }
}

TEST_CASE("archives round-trip") {
    const TreePlan plan = plan_tree(small_params());
    const auto block = test_block(90, 71);
    const Pcmt tree = build(block, plan);
    const std::string path = "test_tree_archive.pcmt";
    save_archive(path, tree, block.size());

    const ArchiveContents loaded = load_archive(path);
    CHECK(loaded.block_len == block.size());
    CHECK(loaded.tree.root == tree.root);
    CHECK(loaded.tree.layers == tree.layers);
    CHECK(params_json(loaded.tree.plan->params) == params_json(plan.params));

    // Corrupting the header trips the format check.
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(16);  // first byte of the header JSON
        f.put('X');
    }
    CHECK_THROWS(load_archive(path));
    std::remove(path.c_str());
}

TEST_CASE("committed proof fixtures are bit-exact") {
    PcmtParams p;
    p.K = 6;
    p.R = Rational::parse("1/2");
    p.q = 4;
    p.l = 2;
    p.c = 8;
    const TreePlan plan = plan_tree(p);
    const auto block = test_block(40, 20260810);
    const Pcmt tree = build(block, plan);

    const auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        REQUIRE_MESSAGE(in.good(), ("missing fixture: " + path));
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    CHECK(merkle_proof_json(merkle_proof(tree, 2, 30)) ==
          slurp(oracle::fixture_path("merkle_proof_k6.json")));

    BuildHooks hooks;
    hooks.after_encode = [&](int j, std::vector<Symbol>& symbols) {
        if (j == 2) symbols[static_cast<size_t>(plan.layer(2).tvn) - 1][0] ^= 0x55;
    };
    const Pcmt bad = build_with_hooks(block, plan, hooks);
    const HashAwareResult res = hash_aware_decode(bad.root, plan, full_availability(bad));
    REQUIRE(res.kind == HashAwareResult::Kind::Ic);
    const std::string ic_text = slurp(oracle::fixture_path("ic_proof_k6.json"));
    CHECK(ic_proof_json(res.ic) == ic_text);

    // The committed proof verifies against the committed tampered root and
    // fails against the honest one.
    const auto roots = nlohmann::json::parse(slurp(oracle::fixture_path("roots_k6.json")));
    CHECK(root_hex(tree.root) == roots["honest"].get<std::string>());
    CHECK(root_hex(bad.root) == roots["tampered"].get<std::string>());
    const IcProof committed = ic_proof_from_json(ic_text);
    CHECK(verify_ic_proof(committed, bad.root, plan));
    CHECK_FALSE(verify_ic_proof(committed, tree.root, plan));
}

TEST_CASE("proof JSON is canonical and round-trips") {
    const TreePlan plan = plan_tree(small_params());
    const Pcmt tree = build(test_block(100, 81), plan);
    const MerkleProof proof = merkle_proof(tree, 3, plan.layer(3).d_i + 1);
    const std::string text = merkle_proof_json(proof);
    const MerkleProof back = merkle_proof_from_json(text);
    CHECK(merkle_proof_json(back) == text);
    CHECK(verify_inclusion(3, proof.index, tree.layers[2][static_cast<size_t>(proof.index) - 1],
                           back, tree.root, plan));
}
