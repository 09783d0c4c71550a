#pragma once

// Shared conventions for the text artifacts: 17 significant digits for every
// floating value and `key=value` sidecar files.

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace coopsense::text_io {

/// printf("%.17g"); parses back to the identical double.
std::string format_double(double value);

/// Strict parse of the whole string; throws std::invalid_argument.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::vector<std::string> split(std::string_view line, char delimiter);

using KeyValues = std::map<std::string, std::string>;

/// Reads `key=value` lines up to EOF or a line equal to `stop_line`.
KeyValues read_key_values(std::istream& in, std::string_view stop_line = {});
const std::string& require_key(const KeyValues& values, const std::string& key);

}  // namespace coopsense::text_io
