#pragma once

#include <string>
#include <string_view>

namespace cefr {

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// Lowercases and trims ASCII whitespace; the identity key for an email.
std::string normalize_email(std::string_view email);

/// First eight hex digits of the SHA-256 of the normalized email.
std::string anonymize_email(std::string_view email);

}  // namespace cefr
