#pragma once

#include <string>

namespace fln {

/// Reads an entire file; throws IoError if it cannot be opened.
std::string read_file(const std::string& path);

/// Writes content to path atomically: the bytes land in a sibling
/// temporary file which is then renamed over the target, so a re-run can
/// never leave a half-written output behind.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace fln
