#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace ft {

// FNV-1a 64 over a file's bytes, hex-encoded. Used for provenance in run
// summaries, not for integrity.
std::string file_digest(const std::filesystem::path& path);

std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace ft
