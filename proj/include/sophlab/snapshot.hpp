#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "sophlab/enumerate.hpp"

namespace sophlab::snapshot {

// Binary table snapshot, fully deterministic for a given table:
//   magic "PVMT" | format version byte | ISA tag | budgets | aux | aux digest
//   | kraft accumulator | entry count | entries (canonical key order)
//   | trailing FNV-1a digest of everything before it.
inline constexpr char kMagic[4] = {'P', 'V', 'M', 'T'};
inline constexpr uint8_t kFormatVersion = 1;

std::string serialize(const enumerate::ComplexityTable& t);
enumerate::ComplexityTable deserialize(const std::string& bytes);

// 64-bit FNV-1a digest of the serialized bytes; identical tables always
// produce identical digests regardless of how they were built.
uint64_t table_digest(const enumerate::ComplexityTable& t);

// Content address of a build configuration: digest of (ISA tag, budgets,
// aux). Names snapshot files in the cache directory.
uint64_t content_address(const Budgets& b, const Bits& aux);
std::string content_file_name(const Budgets& b, const Bits& aux);

// Atomic save (write temp file in the same directory, then rename).
void save_table(const enumerate::ComplexityTable& t,
                const std::filesystem::path& path);
enumerate::ComplexityTable load_table(const std::filesystem::path& path);

}  // namespace sophlab::snapshot
