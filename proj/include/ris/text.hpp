#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ris::text {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

// Splits on anything that is not an ASCII letter or digit and lowercases.
// Bytes >= 0x80 count as word characters so UTF-8 words stay intact.
std::vector<std::string> word_tokens(std::string_view s);

// Splits on a single delimiter, keeping empty fields.
std::vector<std::string> split(std::string_view s, char delim);

// Comma-separated list, trimmed, empty entries dropped.
std::vector<std::string> split_list(std::string_view s);

// Shortest representation that round-trips through strtod.
std::string format_double(double v);

// 64-bit FNV-1a; stable across platforms, used for seeds and provenance.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

std::string read_file(const std::filesystem::path& path);

// Non-empty trimmed lines, '#' comments stripped.
std::vector<std::string> read_word_list(const std::filesystem::path& path);

}  // namespace ris::text
