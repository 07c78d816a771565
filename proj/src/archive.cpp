#include "pcmt/archive.hpp"

#include <cstring>
#include <fstream>

#include "json.hpp"
#include "pcmt/errors.hpp"

namespace pcmt {

namespace {

constexpr char kMagic[8] = {'P', 'C', 'M', 'T', 'A', 'R', '0', '1'};

nlohmann::json layer_geometry_json(const LayerPlan& lp) {
    nlohmann::json j;
    j["j"] = lp.j;
    j["k"] = lp.k;
    j["N"] = lp.n_target;
    j["N_SEF"] = lp.design.n_sef;
    j["alpha_min"] = lp.design.alpha_min;
    j["frozen"] = lp.design.frozen;
    j["tot_vn"] = lp.tot_vns;
    j["TVN"] = lp.tvn;
    j["dI"] = lp.d_i;
    j["pad"] = lp.pad;
    j["symbol_size"] = lp.symbol_size;
    return j;
}

}  // namespace

std::string archive_header_json(const Pcmt& tree, uint64_t block_len) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["params"] = nlohmann::json::parse(params_json(tree.plan->params));
    j["root"] = root_hex(tree.root);
    j["block_len"] = block_len;
    j["layers"] = nlohmann::json::array();
    for (const LayerPlan& lp : tree.plan->layers) j["layers"].push_back(layer_geometry_json(lp));
    return j.dump();
}

void save_archive(const std::string& path, const Pcmt& tree, uint64_t block_len) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParamError("cannot open archive for writing: " + path);

    const std::string header = archive_header_json(tree, block_len);
    out.write(kMagic, sizeof(kMagic));
    const uint64_t len = header.size();
    out.write(reinterpret_cast<const char*>(&len), sizeof(len));
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    for (const auto& layer : tree.layers) {
        for (const Symbol& s : layer) {
            out.write(reinterpret_cast<const char*>(s.data()), static_cast<std::streamsize>(s.size()));
        }
    }
    if (!out) throw ParamError("archive write failed: " + path);
}

ArchiveContents load_archive(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParamError("cannot open archive: " + path);

    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw ParamError("not a tree archive: " + path);
    uint64_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof(len));
    if (!in || len > (1ull << 31)) throw ParamError("corrupt archive header");
    std::string header(len, '\0');
    in.read(header.data(), static_cast<std::streamsize>(len));
    if (!in) throw ParamError("corrupt archive header");

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(header);
    } catch (const nlohmann::json::exception& e) {
        throw ParamError(std::string("corrupt archive header: ") + e.what());
    }

    ArchiveContents out;
    const PcmtParams params = params_from_json(j.at("params").dump());
    const TreePlan plan = plan_tree(params);
    // The header geometry is redundant with the params; mismatches mean the
    // file was produced by an incompatible build.
    const auto& layers_json = j.at("layers");
    if (layers_json.size() != plan.layers.size()) throw StructuralError("archive layer count mismatch");
    for (size_t i = 0; i < plan.layers.size(); ++i) {
        const LayerPlan& lp = plan.layers[i];
        const auto& lj = layers_json[i];
        if (lj.at("N_SEF").get<long long>() != lp.design.n_sef ||
            lj.at("TVN").get<long long>() != lp.tvn ||
            lj.at("symbol_size").get<uint64_t>() != lp.symbol_size)
            throw StructuralError("archive geometry disagrees with the recomputed plan");
    }

    out.tree.plan = std::make_shared<TreePlan>(plan);
    out.tree.root = root_from_hex(j.at("root").get<std::string>());
    if (static_cast<long long>(out.tree.root.size()) != plan.layer(1).tvn)
        throw StructuralError("archive root size mismatch");
    out.block_len = j.at("block_len").get<uint64_t>();

    out.tree.layers.resize(plan.layers.size());
    for (size_t i = 0; i < plan.layers.size(); ++i) {
        const LayerPlan& lp = plan.layers[i];
        auto& arr = out.tree.layers[i];
        arr.assign(static_cast<size_t>(lp.tvn), Symbol());
        for (auto& s : arr) {
            s.resize(lp.symbol_size);
            in.read(reinterpret_cast<char*>(s.data()), static_cast<std::streamsize>(s.size()));
        }
    }
    if (!in) throw ParamError("archive payload truncated");

    // Integrity: the stored top layer must reproduce the stored root.
    const HashFn h = hash_by_name(params.hash);
    for (size_t i = 0; i < out.tree.layers[0].size(); ++i) {
        if (h(out.tree.layers[0][i].data(), out.tree.layers[0][i].size()) != out.tree.root[i])
            throw StructuralError("archive top layer does not match its root");
    }
    return out;
}

}  // namespace pcmt
