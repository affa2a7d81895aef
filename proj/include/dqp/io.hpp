#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dqp/concretisation.hpp"
#include "dqp/model.hpp"
#include "dqp/xml_adaption.hpp"

namespace dqp {

inline constexpr int kFormatVersion = 1;

// Pattern documents (.dqp.json). Keys keep a fixed order, so equal patterns
// serialize to identical text.
std::string serialize(const CompletePattern& p);
// Throws SchemaError (JSON pointer + message) for anything off-schema,
// including unknown keys. Validation is left to the caller.
CompletePattern deserialize(std::string_view text);

// Binding files (.bind):
//   Nav0 = child3, Property0 = attribute "Type", Value0 = "obj"
//   Property0 to 5 = name, PropertyA and B = content
//   Value2 = ("m","f")   # comment
// Throws ParseError.
std::vector<Binding> parse_bindings(std::string_view text);
std::string format_bindings(const std::vector<Binding>& bindings);

// Adaption decision files:
//   0-1 = navigation
//   0-2 = navigation(child, descendant)
//   A = reference("A1", "A2")
AdaptionDecisions parse_decisions(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace dqp
