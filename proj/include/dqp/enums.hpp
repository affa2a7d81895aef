#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace dqp {

enum class AbstractionLevel { Generic, AbstractXml, Concrete };
enum class Quantifier { Exists, Forall };
enum class LogicOp { And, Or };
enum class ComparisonOp { Equal, NotEqual, Less, LessEq, Greater, GreaterEq };
enum class ValueType { String, Number, Boolean, Date, Time, DateTime, Unspecified };
enum class Axis { Child, Descendant, Self, DescendantOrSelf, Following };
enum class PropertyKind { Name, Attribute, Data };

// Canonical spellings used by the JSON format.
std::string_view to_string(AbstractionLevel v);
std::string_view to_string(Quantifier v);
std::string_view to_string(LogicOp v);
std::string_view to_string(ComparisonOp v);
std::string_view to_string(ValueType v);
std::string_view to_string(Axis v);
std::string_view to_string(PropertyKind v);

std::optional<AbstractionLevel> parse_level(std::string_view s);
std::optional<Quantifier> parse_quantifier(std::string_view s);
std::optional<LogicOp> parse_logic_op(std::string_view s);
std::optional<ComparisonOp> parse_comparison_op(std::string_view s);
std::optional<ValueType> parse_value_type(std::string_view s);
std::optional<Axis> parse_axis(std::string_view s);
std::optional<PropertyKind> parse_property_kind(std::string_view s);

// XQuery spelling: = != < <= > >=
std::string_view xquery_symbol(ComparisonOp op);
bool is_ordering(ComparisonOp op);

}  // namespace dqp
