#include <algorithm>
#include <map>

#include "doctest.h"
#include "oracles.hpp"
#include "pcmt/code_design.hpp"
#include "pcmt/codec.hpp"
#include "pcmt/errors.hpp"
#include "pcmt/rng.hpp"

using namespace pcmt;

namespace {

bool cn_constraints_hold(const FactorGraph& fg, const SymbolVector& sv) {
    for (const Cn& c : fg.cns) {
        Symbol acc(sv.symbol_size, 0);
        for (int v : c.vns) {
            if (!sv.is_known(v)) return false;
            for (size_t b = 0; b < acc.size(); ++b) acc[b] ^= sv.at(v)[b];
        }
        if (std::any_of(acc.begin(), acc.end(), [](uint8_t x) { return x != 0; })) return false;
    }
    return true;
}

std::map<int, Symbol> observe_all_but(const FactorGraph& fg, const SymbolVector& sv,
                                      const std::vector<int>& hidden_positions) {
    std::map<int, Symbol> obs;
    for (int pos = 1; pos <= fg.num_coded(); ++pos) {
        if (std::find(hidden_positions.begin(), hidden_positions.end(), pos) == hidden_positions.end())
            obs[pos] = sv.at(fg.coded_vn_ids[static_cast<size_t>(pos) - 1]);
    }
    return obs;
}

}  // namespace

TEST_CASE("repetition code (2,1)") {
    const CodeDesign d = sef_design(2, 1);
    const Symbol payload{0xde, 0xad};
    const SymbolVector sv = pepc_encode(d.fg, {payload});
    CHECK(sv.at(d.fg.coded_vn_ids[0]) == payload);
    CHECK(sv.at(d.fg.coded_vn_ids[1]) == payload);
    CHECK(cn_constraints_hold(d.fg, sv));
}

TEST_CASE("rate-1 code is the identity on coded positions") {
    const FactorGraph g = build_full_fg(8);  // all rightmost VNs are data
    Rng rng(17);
    std::vector<Symbol> data;
    for (int i = 0; i < 8; ++i) data.push_back(oracle::random_symbol(rng, 4));
    const SymbolVector sv = pepc_encode(g, data);
    for (int i = 0; i < 8; ++i) CHECK(sv.at(g.coded_vn_ids[static_cast<size_t>(i)]) == data[static_cast<size_t>(i)]);
    CHECK(cn_constraints_hold(g, sv));
}

TEST_CASE("(4,2) satisfies all eight constraints") {
    const CodeDesign d = nf_design(4, 2);
    REQUIRE(d.n_sef == 4);
    Rng rng(23);
    const SymbolVector sv =
        pepc_encode(d.fg, {oracle::random_symbol(rng, 6), oracle::random_symbol(rng, 6)});
    CHECK(d.fg.cns.size() == 8);
    CHECK(cn_constraints_hold(d.fg, sv));
}

TEST_CASE("PEPC agrees with the butterfly transform on full graphs") {
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(5));
        const int N = 1 << n;
        const int k = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(N - 1)));
        const CodeDesign d = nf_design(N, k);
        std::vector<Symbol> data;
        for (int i = 0; i < k; ++i) data.push_back(oracle::random_symbol(rng, 3));
        const SymbolVector sv = pepc_encode(d.fg, data);

        // Leftmost column values must be a valid message: zero on frozen rows,
        // and pushing them through the butterfly must reproduce the codeword.
        std::vector<Symbol> u;
        for (int i = 1; i <= N; ++i) u.push_back(sv.at(i));
        for (int f : d.frozen) CHECK(u[static_cast<size_t>(f) - 1] == Symbol(3, 0));
        const std::vector<Symbol> x = oracle::butterfly_encode(u);
        for (int i = 1; i <= N; ++i) CHECK(x[static_cast<size_t>(i) - 1] == sv.at(n * N + i));
    }
}

TEST_CASE("decode with no erasures completes the dropped VNs") {
    const CodeDesign d = sef_design(8, 4);
    Rng rng(37);
    std::vector<Symbol> data;
    for (int i = 0; i < 4; ++i) data.push_back(oracle::random_symbol(rng, 5));
    const SymbolVector enc = pepc_encode(d.fg, data);
    const DecodeResult res = peel_decode(d.fg, observe_all_but(d.fg, enc, {}), 5);
    REQUIRE(res.status == DecodeStatus::Ok);
    for (int v = 1; v <= tot_vn(d.fg); ++v) CHECK(res.symbols.at(v) == enc.at(v));
}

TEST_CASE("erasing a minimum stopping tree stalls the decoder") {
    const CodeDesign d = sef_design(8, 4);
    // Row 4 has the smallest leaf size among information rows.
    const StoppingSet tree = stopping_tree(d.fg, 4);
    std::vector<int> hidden;
    for (int v : tree.leaf_set) {
        const auto it = std::find(d.fg.coded_vn_ids.begin(), d.fg.coded_vn_ids.end(), v);
        hidden.push_back(static_cast<int>(it - d.fg.coded_vn_ids.begin()) + 1);
    }
    CHECK(hidden.size() == static_cast<size_t>(d.alpha_min));

    Rng rng(41);
    std::vector<Symbol> data;
    for (int i = 0; i < 4; ++i) data.push_back(oracle::random_symbol(rng, 2));
    const SymbolVector enc = pepc_encode(d.fg, data);
    const DecodeResult res = peel_decode(d.fg, observe_all_but(d.fg, enc, hidden), 2);
    REQUIRE(res.status == DecodeStatus::Stuck);
    CHECK(is_stopping_set(d.fg, res.unresolved));
}

TEST_CASE("exhaustive erasure scan matches the threshold for N <= 8") {
    Rng rng(43);
    for (int N = 2; N <= 8; ++N) {
        for (int k = 1; k < N; ++k) {
            const CodeDesign d = sef_design(N, k);
            std::vector<Symbol> data;
            for (int i = 0; i < k; ++i) data.push_back(oracle::random_symbol(rng, 2));
            const SymbolVector enc = pepc_encode(d.fg, data);

            int min_failing = d.n_sef + 1;
            for (unsigned mask = 0; mask < (1u << d.n_sef); ++mask) {
                std::vector<int> hidden;
                for (int pos = 1; pos <= d.n_sef; ++pos) {
                    if (mask & (1u << (pos - 1))) hidden.push_back(pos);
                }
                const DecodeResult res = peel_decode(d.fg, observe_all_but(d.fg, enc, hidden), 2);
                if (res.status == DecodeStatus::Stuck) {
                    min_failing = std::min(min_failing, static_cast<int>(hidden.size()));
                } else {
                    REQUIRE(res.status == DecodeStatus::Ok);
                    for (int v = 1; v <= tot_vn(d.fg); ++v) CHECK(res.symbols.at(v) == enc.at(v));
                }
            }
            CHECK(min_failing == d.alpha_min);
        }
    }
}

TEST_CASE("peeling is order-insensitive") {
    const CodeDesign d = sef_design(12, 6);
    Rng rng(47);
    std::vector<Symbol> data;
    for (int i = 0; i < 6; ++i) data.push_back(oracle::random_symbol(rng, 3));
    const SymbolVector enc = pepc_encode(d.fg, data);

    for (int trial = 0; trial < 25; ++trial) {
        std::vector<int> hidden;
        for (int pos = 1; pos <= d.n_sef; ++pos) {
            if (rng.below(3) == 0) hidden.push_back(pos);
        }
        std::map<int, Symbol> by_vn;
        for (const auto& [pos, sym] : observe_all_but(d.fg, enc, hidden))
            by_vn[d.fg.coded_vn_ids[static_cast<size_t>(pos) - 1]] = sym;

        const DecodeResult fifo = peel_decode_by_vn(d.fg, by_vn, 3);
        const DecodeResult rnd = oracle::peel_random_order(d.fg, by_vn, 3, rng.derive(trial));
        CHECK((fifo.status == DecodeStatus::Stuck) == (rnd.status == DecodeStatus::Stuck));
        CHECK(fifo.unresolved == rnd.unresolved);
        for (int v = 1; v <= tot_vn(d.fg); ++v) {
            if (fifo.symbols.is_known(v)) CHECK(fifo.symbols.at(v) == rnd.symbols.at(v));
        }
    }
}

TEST_CASE("decoding cost is linear in the edge count") {
    const CodeDesign d = sef_design(64, 32);
    Rng rng(53);
    std::vector<Symbol> data;
    for (int i = 0; i < 32; ++i) data.push_back(oracle::random_symbol(rng, 2));
    const SymbolVector enc = pepc_encode(d.fg, data);
    const DecodeResult res = peel_decode(d.fg, observe_all_but(d.fg, enc, {1, 5, 9}), 2);
    uint64_t edges = 0;
    for (const Cn& c : d.fg.cns) edges += c.vns.size();
    CHECK(res.edge_ops <= 4 * edges);
}

TEST_CASE("a violated fully-determined constraint is reported") {
    const CodeDesign d = sef_design(2, 1);
    std::map<int, Symbol> obs;
    obs[1] = Symbol{0x01};  // data coded symbol
    obs[2] = Symbol{0x02};  // parity symbol inconsistent with repetition
    const DecodeResult res = peel_decode(d.fg, obs, 1);
    CHECK(res.status == DecodeStatus::Inconsistent);
    CHECK(res.bad_cn != 0);
}

TEST_CASE("encoder rejects malformed inputs") {
    const CodeDesign d = sef_design(4, 2);
    CHECK_THROWS_AS(pepc_encode(d.fg, {Symbol{1}}), ParamError);
    CHECK_THROWS_AS(pepc_encode(d.fg, {Symbol{1}, Symbol{1, 2}}), ParamError);
}
