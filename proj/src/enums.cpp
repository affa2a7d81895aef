#include "dqp/enums.hpp"

#include <array>
#include <utility>

namespace dqp {

namespace {

template <class E, std::size_t N>
using Table = std::array<std::pair<E, std::string_view>, N>;

constexpr Table<AbstractionLevel, 3> kLevels{{
    {AbstractionLevel::Generic, "GENERIC"},
    {AbstractionLevel::AbstractXml, "ABSTRACT_XML"},
    {AbstractionLevel::Concrete, "CONCRETE"},
}};
constexpr Table<Quantifier, 2> kQuantifiers{{
    {Quantifier::Exists, "EXISTS"},
    {Quantifier::Forall, "FORALL"},
}};
constexpr Table<LogicOp, 2> kLogicOps{{
    {LogicOp::And, "AND"},
    {LogicOp::Or, "OR"},
}};
constexpr Table<ComparisonOp, 6> kComparisonOps{{
    {ComparisonOp::Equal, "EQUAL"},
    {ComparisonOp::NotEqual, "NOT_EQUAL"},
    {ComparisonOp::Less, "LESS"},
    {ComparisonOp::LessEq, "LESS_EQ"},
    {ComparisonOp::Greater, "GREATER"},
    {ComparisonOp::GreaterEq, "GREATER_EQ"},
}};
constexpr Table<ValueType, 7> kValueTypes{{
    {ValueType::String, "STRING"},
    {ValueType::Number, "NUMBER"},
    {ValueType::Boolean, "BOOLEAN"},
    {ValueType::Date, "DATE"},
    {ValueType::Time, "TIME"},
    {ValueType::DateTime, "DATETIME"},
    {ValueType::Unspecified, "UNSPECIFIED"},
}};
constexpr Table<Axis, 5> kAxes{{
    {Axis::Child, "child"},
    {Axis::Descendant, "descendant"},
    {Axis::Self, "self"},
    {Axis::DescendantOrSelf, "descendant-or-self"},
    {Axis::Following, "following"},
}};
constexpr Table<PropertyKind, 3> kPropertyKinds{{
    {PropertyKind::Name, "NAME"},
    {PropertyKind::Attribute, "ATTRIBUTE"},
    {PropertyKind::Data, "DATA"},
}};

template <class E, std::size_t N>
std::string_view lookup(const Table<E, N>& table, E v) {
    for (const auto& [e, s] : table)
        if (e == v) return s;
    return "?";
}

template <class E, std::size_t N>
std::optional<E> reverse(const Table<E, N>& table, std::string_view s) {
    for (const auto& [e, name] : table)
        if (name == s) return e;
    return std::nullopt;
}

}  // namespace

std::string_view to_string(AbstractionLevel v) { return lookup(kLevels, v); }
std::string_view to_string(Quantifier v) { return lookup(kQuantifiers, v); }
std::string_view to_string(LogicOp v) { return lookup(kLogicOps, v); }
std::string_view to_string(ComparisonOp v) { return lookup(kComparisonOps, v); }
std::string_view to_string(ValueType v) { return lookup(kValueTypes, v); }
std::string_view to_string(Axis v) { return lookup(kAxes, v); }
std::string_view to_string(PropertyKind v) { return lookup(kPropertyKinds, v); }

std::optional<AbstractionLevel> parse_level(std::string_view s) { return reverse(kLevels, s); }
std::optional<Quantifier> parse_quantifier(std::string_view s) { return reverse(kQuantifiers, s); }
std::optional<LogicOp> parse_logic_op(std::string_view s) { return reverse(kLogicOps, s); }
std::optional<ComparisonOp> parse_comparison_op(std::string_view s) {
    return reverse(kComparisonOps, s);
}
std::optional<ValueType> parse_value_type(std::string_view s) { return reverse(kValueTypes, s); }
std::optional<Axis> parse_axis(std::string_view s) { return reverse(kAxes, s); }
std::optional<PropertyKind> parse_property_kind(std::string_view s) {
    return reverse(kPropertyKinds, s);
}

std::string_view xquery_symbol(ComparisonOp op) {
    switch (op) {
        case ComparisonOp::Equal: return "=";
        case ComparisonOp::NotEqual: return "!=";
        case ComparisonOp::Less: return "<";
        case ComparisonOp::LessEq: return "<=";
        case ComparisonOp::Greater: return ">";
        case ComparisonOp::GreaterEq: return ">=";
    }
    return "=";
}

bool is_ordering(ComparisonOp op) {
    return op != ComparisonOp::Equal && op != ComparisonOp::NotEqual;
}

}  // namespace dqp
