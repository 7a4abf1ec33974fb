#pragma once

#include <filesystem>
#include <string>

namespace repaint {

// Whole-file read; raises IoError with the path on failure.
std::string read_file(const std::filesystem::path& path);

// Atomic whole-file write (temp file + rename) creating parent directories.
// Concurrent writers of the same path end with one complete copy
// (last-write-wins), never a torn file.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

bool file_exists(const std::filesystem::path& path);

} // namespace repaint
