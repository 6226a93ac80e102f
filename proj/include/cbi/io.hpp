#pragma once

#include <string>

namespace cbi {

std::string read_text_file(const std::string& path);

// Writes to path + ".tmp" and renames into place, so failed runs leave no
// partial output behind.
void write_text_file_atomic(const std::string& path, const std::string& content);

}  // namespace cbi
