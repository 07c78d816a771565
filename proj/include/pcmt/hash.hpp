#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace pcmt {

using Hash32 = std::array<uint8_t, 32>;

Hash32 sha256(const uint8_t* data, size_t len);
Hash32 sha256(const std::vector<uint8_t>& data);

// Hash function used when committing symbols into parent layers. Pluggable so
// trees can be built with a different 32-byte hash; "sha256" is the fixed
// default and the one all committed fixtures use.
using HashFn = Hash32 (*)(const uint8_t*, size_t);

HashFn hash_by_name(const std::string& name);

std::string hex_encode(const uint8_t* data, size_t len);
std::string hex_encode(const std::vector<uint8_t>& data);
std::vector<uint8_t> hex_decode(const std::string& hex);

}  // namespace pcmt
