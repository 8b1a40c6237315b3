#pragma once

#include <string>
#include <string_view>

namespace blissthc {

// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

// Library version string, e.g. "0.1.0".
std::string_view version();

}  // namespace blissthc
