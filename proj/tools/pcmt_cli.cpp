#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pcmt/archive.hpp"
#include "pcmt/comparator.hpp"
#include "pcmt/da_sim.hpp"
#include "pcmt/dispersal.hpp"
#include "pcmt/errors.hpp"
#include "pcmt/tree.hpp"

namespace {

using namespace pcmt;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParamError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ParamError("cannot open output file: " + out_path);
    out << text << "\n";
}

PcmtParams load_params(const std::string& path) { return params_from_json(read_file(path)); }

int cmd_design(int n, int k, bool pruned, const std::string& out_path) {
    CodeDesign d = sef_design(n, k);
    if (pruned) d = pruned_design(d);
    emit(out_path, design_json(d));
    return 0;
}

int cmd_build(const std::string& block_path, const std::string& params_path,
              const std::string& archive_path) {
    const std::string block_text = read_file(block_path);
    const std::vector<uint8_t> block(block_text.begin(), block_text.end());
    const TreePlan plan = plan_tree(load_params(params_path));
    const Pcmt tree = build(block, plan);
    save_archive(archive_path, tree, block.size());

    nlohmann::json j;
    j["archive"] = archive_path;
    j["root"] = root_hex(tree.root);
    j["block_len"] = block.size();
    j["layers"] = nlohmann::json::array();
    for (const LayerPlan& lp : plan.layers) {
        j["layers"].push_back({{"j", lp.j},
                               {"N_SEF", lp.design.n_sef},
                               {"TVN", lp.tvn},
                               {"alpha_min", lp.design.alpha_min}});
    }
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_prove(const std::string& archive_path, int layer, long long index,
              const std::string& out_path) {
    const ArchiveContents ar = load_archive(archive_path);
    const MerkleProof proof = merkle_proof(ar.tree, layer, index);
    const Symbol& bytes =
        ar.tree.layers[static_cast<size_t>(layer) - 1][static_cast<size_t>(index) - 1];
    nlohmann::json j;
    j["symbol"] = {{"layer", layer}, {"index", index}, {"bytes", hex_encode(bytes)}};
    j["proof"] = nlohmann::json::parse(merkle_proof_json(proof));
    emit(out_path, j.dump());
    return 0;
}

int cmd_verify(const std::string& archive_path, const std::string& root_hex_arg,
               const std::string& params_path, const std::string& proof_path, bool ic) {
    std::vector<Hash32> root;
    std::optional<TreePlan> plan;
    if (!archive_path.empty()) {
        const ArchiveContents ar = load_archive(archive_path);
        root = ar.tree.root;
        plan = *ar.tree.plan;
    } else {
        if (root_hex_arg.empty() || params_path.empty())
            throw ParamError("verify needs --archive, or --root plus --params");
        root = root_from_hex(root_hex_arg);
        plan = plan_tree(load_params(params_path));
    }
    const std::string text = read_file(proof_path);
    bool ok = false;
    if (ic) {
        ok = verify_ic_proof(ic_proof_from_json(text), root, *plan);
    } else {
        const nlohmann::json j = nlohmann::json::parse(text);
        const MerkleProof proof = merkle_proof_from_json(j.at("proof").dump());
        const Symbol bytes = hex_decode(j.at("symbol").at("bytes").get<std::string>());
        ok = verify_inclusion(j.at("symbol").at("layer").get<int>(),
                              j.at("symbol").at("index").get<long long>(), bytes, proof, root,
                              *plan);
    }
    nlohmann::json j;
    j["valid"] = ok;
    std::cout << j.dump() << "\n";
    return ok ? 0 : 1;
}

int cmd_attack(const std::string& archive_path, int layer, long long s, long long trials,
               uint64_t seed, const std::string& format, const std::string& out_path) {
    const ArchiveContents ar = load_archive(archive_path);
    const TreePlan& plan = *ar.tree.plan;
    const AttackSpec attack = min_stopping_tree_attack(plan, layer);
    const double analytical = pf_analytical_layer(plan, layer, s);
    const SamplingRun run = simulate_run(plan, attack, s, trials, seed);
    if (format == "csv") {
        emit(out_path, attack_csv_header() + "\n" +
                           attack_csv_row(plan, attack, s, analytical, run.failure_rate, trials,
                                          seed));
    } else if (format == "json") {
        nlohmann::json j;
        j["K"] = plan.params.K;
        j["R"] = plan.params.R.str();
        j["q"] = plan.params.q;
        j["l"] = plan.params.l;
        j["layer"] = layer;
        j["s"] = run.s;
        j["analytical_pf"] = analytical;
        j["empirical_pf"] = run.failure_rate;
        j["detected"] = run.detected;
        j["trials"] = run.trials;
        j["seed"] = run.seed;
        emit(out_path, j.dump());
    } else {
        throw ParamError("format must be csv or json");
    }
    return 0;
}

int cmd_disperse(const std::string& archive_path, int theta, double beta, double gamma,
                 double p_th, const std::string& out_path) {
    const ArchiveContents ar = load_archive(archive_path);
    const TreePlan& plan = *ar.tree.plan;
    OracleParams oracle;
    oracle.theta = theta;
    oracle.beta = beta;
    oracle.gamma = gamma;
    oracle.p_th = p_th;
    const uint64_t b = plan.params.c * static_cast<uint64_t>(plan.params.K);
    const SchemeMetrics m = metrics_pcmt(plan, b, plan.params.y);
    emit(out_path, dispersal_report(plan, oracle, m.x_bytes));
    return 0;
}

int cmd_metrics(const std::string& scheme, long long K, uint64_t c, const std::string& rate,
                int q, int l, int d_c, std::optional<long long> lcmt_alpha,
                const std::string& format, const std::string& out_path) {
    const Rational R = Rational::parse(rate);
    const uint64_t b = c * static_cast<uint64_t>(K);
    SchemeMetrics m;
    if (scheme == "rs2d") {
        m = metrics_rs2d(K, R, b, 32);
    } else if (scheme == "lcmt") {
        m = metrics_lcmt(K, R, q, l, d_c, b, 32, lcmt_alpha);
    } else if (scheme == "pcmt" || scheme == "prpcmt") {
        PcmtParams p;
        p.K = K;
        p.R = R;
        p.q = q;
        p.l = l;
        p.c = c;
        p.pruned = scheme == "prpcmt";
        m = metrics_pcmt(plan_tree(p), b, 32);
    } else {
        throw ParamError("unknown scheme: " + scheme);
    }
    if (format == "json") {
        nlohmann::json j;
        j["scheme"] = m.scheme;
        j["pruned"] = m.pruned;
        j["root_bytes"] = m.root_bytes;
        j["x_bytes"] = m.x_bytes;
        j["ic_proof_bytes"] = m.ic_proof_bytes;
        j["decode_class"] = m.decode_class;
        j["alpha_source"] = m.alpha_source;
        if (m.alpha_base) j["alpha_min"] = *m.alpha_base;
        emit(out_path, j.dump());
    } else if (format == "csv") {
        std::ostringstream row;
        row << "scheme,pruned,K,c,R,q,l,root_bytes,x_bytes,ic_proof_bytes,decode_class,"
               "alpha_source,alpha_min\n"
            << m.scheme << "," << (m.pruned ? "true" : "false") << "," << K << "," << c << ","
            << R.str() << "," << q << "," << l << "," << m.root_bytes << "," << m.x_bytes << ","
            << m.ic_proof_bytes << "," << m.decode_class << "," << m.alpha_source << ","
            << (m.alpha_base ? std::to_string(*m.alpha_base) : "");
        emit(out_path, row.str());
    } else {
        throw ParamError("format must be csv or json");
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path) {
    const SweepConfig cfg = sweep_config_from_json(read_file(config_path));
    std::string csv = sweep_csv_header();
    for (const std::string& row : sweep(cfg)) csv += "\n" + row;
    emit(out_path, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polar coded Merkle tree toolkit"};
    app.require_subcommand(1);
    int exit_code = 0;

    // design
    auto* design = app.add_subcommand("design", "Run the freezing algorithm for one code");
    int d_n = 0, d_k = 0;
    bool d_pruned = false;
    std::string d_out;
    design->add_option("N", d_n, "target code length")->required();
    design->add_option("k", d_k, "information length")->required();
    design->add_flag("--pruned", d_pruned, "prune the encoding graph");
    design->add_option("--out", d_out, "output path (default stdout)");
    design->callback([&] { exit_code = cmd_design(d_n, d_k, d_pruned, d_out); });

    // build
    auto* build_cmd = app.add_subcommand("build", "Build a tree archive from a block file");
    std::string b_block, b_params, b_archive = "tree.pcmt";
    build_cmd->add_option("block", b_block, "block file")->required();
    build_cmd->add_option("params", b_params, "tree parameter JSON file")->required();
    build_cmd->add_option("--out", b_archive, "archive path (default tree.pcmt)");
    build_cmd->callback([&] { exit_code = cmd_build(b_block, b_params, b_archive); });

    // prove
    auto* prove = app.add_subcommand("prove", "Produce a Merkle proof for one symbol");
    std::string p_archive, p_out;
    int p_layer = 0;
    long long p_index = 0;
    prove->add_option("archive", p_archive)->required();
    prove->add_option("layer", p_layer)->required();
    prove->add_option("index", p_index)->required();
    prove->add_option("--out", p_out, "output path (default stdout)");
    prove->callback([&] { exit_code = cmd_prove(p_archive, p_layer, p_index, p_out); });

    // verify
    auto* verify = app.add_subcommand("verify", "Verify a Merkle or incorrect-coding proof");
    std::string v_archive, v_root, v_params, v_proof;
    bool v_ic = false;
    verify->add_option("--archive", v_archive, "archive supplying root and geometry");
    verify->add_option("--root", v_root, "root hex (with --params)");
    verify->add_option("--params", v_params, "tree parameter JSON file (with --root)");
    verify->add_option("--proof", v_proof, "proof JSON file")->required();
    verify->add_flag("--ic", v_ic, "treat the file as an incorrect-coding proof");
    verify->callback([&] { exit_code = cmd_verify(v_archive, v_root, v_params, v_proof, v_ic); });

    // attack
    auto* attack = app.add_subcommand("attack", "Simulate light-node sampling under an attack");
    std::string a_archive, a_out, a_format = "csv";
    int a_layer = 0;
    long long a_s = 0, a_trials = 100000;
    uint64_t a_seed = 0;
    attack->add_option("archive", a_archive)->required();
    attack->add_option("layer", a_layer, "attacked layer")->required();
    attack->add_option("samples", a_s, "samples per light node")->required();
    attack->add_option("--trials", a_trials, "Monte-Carlo trials (default 100000)");
    attack->add_option("--seed", a_seed, "master seed (default 0)");
    attack->add_option("--format", a_format, "csv | json (default csv)");
    attack->add_option("--out", a_out, "output path (default stdout)");
    attack->callback(
        [&] { exit_code = cmd_attack(a_archive, a_layer, a_s, a_trials, a_seed, a_format, a_out); });

    // disperse
    auto* disperse = app.add_subcommand("disperse", "Design an oracle dispersal for an archive");
    std::string di_archive, di_out;
    int di_theta = 0;
    double di_beta = 0, di_gamma = 0, di_pth = 0;
    disperse->add_option("archive", di_archive)->required();
    disperse->add_option("theta", di_theta, "oracle node count")->required();
    disperse->add_option("beta", di_beta, "corruptible fraction")->required();
    disperse->add_option("gamma", di_gamma, "quorum margin")->required();
    disperse->add_option("p_th", di_pth, "failure probability threshold")->required();
    disperse->add_option("--out", di_out, "output path (default stdout)");
    disperse->callback(
        [&] { exit_code = cmd_disperse(di_archive, di_theta, di_beta, di_gamma, di_pth, di_out); });

    // metrics
    auto* metrics = app.add_subcommand("metrics", "Closed-form size metrics for one scheme");
    std::string m_scheme, m_rate = "1/2", m_out, m_format = "json";
    long long m_K = 0;
    uint64_t m_c = 0;
    int m_q = 4, m_l = 4, m_dc = 8;
    long long m_alpha = -1;
    metrics->add_option("--scheme", m_scheme, "rs2d | lcmt | pcmt | prpcmt")->required();
    metrics->add_option("--K", m_K, "information symbols")->required();
    metrics->add_option("--c", m_c, "base symbol bytes")->required();
    metrics->add_option("--R", m_rate, "rate as num/den (default 1/2)");
    metrics->add_option("--q", m_q, "combining parameter (default 4)");
    metrics->add_option("--l", m_l, "layer count (default 4)");
    metrics->add_option("--dc", m_dc, "LCMT check degree (default 8)");
    metrics->add_option("--lcmt-alpha", m_alpha, "externally computed LCMT threshold");
    metrics->add_option("--format", m_format, "json | csv (default json)");
    metrics->add_option("--out", m_out, "output path (default stdout)");
    metrics->callback([&] {
        exit_code = cmd_metrics(m_scheme, m_K, m_c, m_rate, m_q, m_l, m_dc,
                                m_alpha >= 0 ? std::optional<long long>(m_alpha) : std::nullopt,
                                m_format, m_out);
    });

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Emit metric rows over a parameter grid");
    std::string s_config, s_out;
    sweep_cmd->add_option("config", s_config, "sweep config JSON")->required();
    sweep_cmd->add_option("--out", s_out, "output path (default stdout)");
    sweep_cmd->callback([&] { exit_code = cmd_sweep(s_config, s_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const ParamError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const StructuralError& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return exit_code;
}
