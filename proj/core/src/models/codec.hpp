#pragma once

// Compact binary payloads inside JSON documents: little-endian bytes,
// base64 text.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

namespace solarcast::models::codec {

static_assert(std::endian::native == std::endian::little, "packed payloads assume a little-endian host");

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

std::string pack_doubles(const double* data, std::size_t n);
std::vector<double> unpack_doubles(const std::string& text);

}  // namespace solarcast::models::codec
