#pragma once

#include <string>

namespace wt {

// Hex digest of the SHA-256 of a byte string / of a file's contents.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

}  // namespace wt
