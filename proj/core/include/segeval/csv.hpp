#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace segeval {

/// Split one CSV line. Fields may be wrapped in double quotes, with ""
/// escaping a literal quote.
std::vector<std::string> csv_split(const std::string& line);

/// Quote a field if it contains a comma, quote, or newline.
std::string csv_field(const std::string& value);

std::string csv_join(const std::vector<std::string>& fields);

/// Read all non-empty lines (LF or CRLF endings).
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Format a double with up to 10 significant digits, locale-independent.
std::string format_double(double v);

} // namespace segeval
