#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gonsel {

/// Whole file into memory; transparently inflates gzip (by magic bytes, not
/// extension). Throws Error on I/O failure.
std::string read_file(const std::string& path);

bool looks_gzipped(std::string_view bytes);
std::string gunzip(std::string_view bytes);

/// FNV-1a over bytes, as 16 hex digits; used for cache keys.
std::string content_hash(std::string_view bytes);

/// Shortest text that round-trips the double ("%.17g" fallback); stable
/// across runs, used for CSV output.
std::string format_double(double value);

/// Splits on a single-character delimiter, keeping empty fields.
std::vector<std::string_view> split(std::string_view line, char delim);

/// Strips one trailing '\r' (GAF and OBO files are often CRLF).
std::string_view chomp(std::string_view line);

}  // namespace gonsel
