#pragma once

#include <string>

namespace oud {

// Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double v);

// Full-string strict parse; throws std::runtime_error mentioning `what`.
double parse_double(const std::string& field, const std::string& what);
long long parse_int(const std::string& field, const std::string& what);

std::string read_text_file(const std::string& path);

// Write to a temp file in the target directory, then rename into place, so
// a crash never leaves a half-written file at `path`.
void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace oud
