#pragma once

#include <optional>
#include <regex>
#include <string>
#include <string_view>

namespace dqp {

std::wstring utf8_to_wide(std::string_view s);
std::string wide_to_utf8(std::wstring_view s);

// Compiles with ECMAScript syntax over code points; nullopt when invalid.
std::optional<std::wregex> compile_regex(const std::string& pattern);

// XML Schema 1.0 lexical forms, including the optional timezone.
bool is_xsd_date(std::string_view s);
bool is_xsd_time(std::string_view s);
bool is_xsd_datetime(std::string_view s);

// Strict decimal/double literal ("1", "-2.5", "1e3"); surrounding XML
// whitespace is ignored as with xs:double casts.
std::optional<double> parse_xsd_double(std::string_view s);

// Seconds on a common time line for ordering date ('d'), time ('t') and
// dateTime ('D') values. A zone offset is normalized away; values without a
// zone are read as UTC.
std::optional<double> temporal_seconds(std::string_view s, char kind);

// Shortest round-tripping xs:double lexical form ("1900", "2.5", "NaN", "-INF").
std::string format_number(double v);

// Double-quoted XQuery/binding literal with embedded quotes doubled.
std::string quote(std::string_view s);

}  // namespace dqp
