#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

namespace repaint {

// Hex-encoded SHA-256. Content ids throughout the project are this digest
// of the object's canonical bytes.
std::string sha256_hex(std::string_view bytes);

// Digest of several parts joined with a 0x1f separator, so ("ab","c") and
// ("a","bc") hash differently.
std::string sha256_hex_parts(std::initializer_list<std::string_view> parts);

// First 8 bytes of the parts digest, little-endian. Used to derive RNG seeds
// from strings in a platform-stable way.
std::uint64_t stable_seed(std::initializer_list<std::string_view> parts);

} // namespace repaint
