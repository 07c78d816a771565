#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcmt/dispersal.hpp"
#include "pcmt/tree.hpp"

namespace pcmt {

// Closed-form size/complexity figures for one scheme at one parameter point.
struct SchemeMetrics {
    std::string scheme;  // rs2d | lcmt | pcmt
    bool pruned = false;
    uint64_t root_bytes = 0;
    uint64_t x_bytes = 0;  // single sample download size
    uint64_t ic_proof_bytes = 0;
    std::string decode_class;
    std::string alpha_source;  // formula | external-input | lemma6
    std::optional<long long> alpha_base;
};

// Two-dimensional Reed-Solomon commitments: sizes only; the undecodable
// threshold comes from an external algebraic expression and stays out of
// scope here.
SchemeMetrics metrics_rs2d(long long K, Rational R, uint64_t b, uint64_t y);

// LDPC coded Merkle tree: the check degree d_c and (optionally) the
// threshold are caller inputs; computing the threshold is NP-hard.
SchemeMetrics metrics_lcmt(long long K, Rational R, int q, int l, int d_c, uint64_t b, uint64_t y,
                           std::optional<long long> alpha_external = std::nullopt);

// Polar coded Merkle tree metrics from a planned tree geometry (d_p = 3).
SchemeMetrics metrics_pcmt(const TreePlan& plan, uint64_t b, uint64_t y);

struct SweepConfig {
    std::vector<std::string> schemes;  // rs2d | lcmt | pcmt | prpcmt
    std::vector<long long> K;
    std::vector<uint64_t> c;
    std::vector<Rational> R;
    int q = 4;
    int l = 4;
    OracleParams oracle;
    double download_ratio = 3.0;
    int d_c = 8;  // LCMT check degree (input, never derived)
    std::optional<long long> lcmt_alpha;
};

SweepConfig sweep_config_from_json(const std::string& text);

// One CSV row per (scheme, K, c, R, q, l); sampling and dispersal columns
// appear only where a threshold is available; infeasible dispersal is
// reported in the error column.
std::string sweep_csv_header();
std::vector<std::string> sweep(const SweepConfig& config);

}  // namespace pcmt
