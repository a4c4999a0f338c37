#ifndef GSGC_CRC32_HPP
#define GSGC_CRC32_HPP

#include <cstddef>
#include <cstdint>
#include <span>

namespace gsgc {

// Reflected CRC-32, polynomial 0xEDB88320 (the zlib/IEEE variant).
// crc32("123456789") == 0xCBF43926.
uint32_t crc32(std::span<const uint8_t> data, uint32_t seed = 0);

}  // namespace gsgc

#endif
