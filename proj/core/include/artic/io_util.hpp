#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace artic {

/// Reads a whole file; throws IoError if missing or unreadable.
std::string read_file_bytes(const std::filesystem::path& path);

/// Writes bytes to a temp file in the target directory and renames it
/// over `path`, so an interrupted write never leaves a partial file at
/// the final location.
void atomic_write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace artic
