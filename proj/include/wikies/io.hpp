#pragma once

#include <string>

namespace wikies {

std::string read_file(const std::string& path);

// Writes through a temp file renamed into place, so readers never observe
// a half-written artifact.
void write_file_atomic(const std::string& path, const std::string& payload);

}  // namespace wikies
