#pragma once

#include <cstdint>
#include <string_view>

namespace cyents {

// MurmurHash64A (Austin Appleby, public domain), little-endian block reads.
// Model files depend on this exact function: do not change it without
// bumping the model format version.
std::uint64_t murmur64a(std::string_view data, std::uint64_t seed);

}  // namespace cyents
