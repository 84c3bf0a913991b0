#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "invexp/semigroup.hpp"

namespace invexp {

/// Parses the plain-text Cayley document:
///
///     # comment
///     n
///     row_0 (n space-separated ids)
///     ...
///     row_{n-1}
///     names: x0 x1 ... x{n-1}     (optional)
///
/// and validates the result.
InverseSemigroup load_cayley(std::string_view text, ValidationOptions options = {});
InverseSemigroup load_cayley_file(const std::filesystem::path& path, ValidationOptions options = {});

/// Inverse of load_cayley up to comments and whitespace: single spaces,
/// trailing newline, `names:` line only when names were supplied.
std::string serialize_cayley(const InverseSemigroup& s);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace invexp
