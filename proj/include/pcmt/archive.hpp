#pragma once

#include <string>

#include "pcmt/tree.hpp"

namespace pcmt {

struct ArchiveContents {
    Pcmt tree;
    uint64_t block_len = 0;
};

// Tree archive: a JSON header (params, per-layer geometry, root hex, block
// length) followed by the raw per-layer symbol arrays.
void save_archive(const std::string& path, const Pcmt& tree, uint64_t block_len);
ArchiveContents load_archive(const std::string& path);

std::string archive_header_json(const Pcmt& tree, uint64_t block_len);

}  // namespace pcmt
