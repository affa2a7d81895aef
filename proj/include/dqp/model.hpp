#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dqp/enums.hpp"
#include "dqp/ids.hpp"

namespace dqp {

// ---------------------------------------------------------------- parameters

struct ComparisonOptions {
    std::vector<ComparisonOp> options;
    std::optional<ComparisonOp> value;
    bool enabled = true;  // "COMPn = disabled" switches the comparisons off
    bool operator==(const ComparisonOptions&) const = default;
};

struct AxisOptions {
    std::vector<Axis> options;
    std::optional<Axis> value;
    int depth = 1;  // repeated child steps; only meaningful for Axis::Child
    bool operator==(const AxisOptions&) const = default;
};

struct PropertyKindOptions {
    std::vector<PropertyKind> options;
    std::optional<PropertyKind> value;
    bool operator==(const PropertyKindOptions&) const = default;
};

struct TextLiteral {
    std::optional<std::string> value;
    bool operator==(const TextLiteral&) const = default;
};

struct TextList {
    std::optional<std::vector<std::string>> values;
    bool operator==(const TextList&) const = default;
};

struct NumberValue {
    std::optional<double> value;
    bool operator==(const NumberValue&) const = default;
};

struct BooleanValue {
    std::optional<bool> value;
    bool operator==(const BooleanValue&) const = default;
};

struct DateValue {
    std::optional<std::string> value;
    bool operator==(const DateValue&) const = default;
};

struct TimeValue {
    std::optional<std::string> value;
    bool operator==(const TimeValue&) const = default;
};

struct DateTimeValue {
    std::optional<std::string> value;
    bool operator==(const DateTimeValue&) const = default;
};

// Placeholder for a literal whose type is only decided at concretisation.
struct UnknownValue {
    bool operator==(const UnknownValue&) const = default;
};

using ParameterBody =
    std::variant<ComparisonOptions, AxisOptions, PropertyKindOptions, TextLiteral, TextList,
                 NumberValue, BooleanValue, DateValue, TimeValue, DateTimeValue, UnknownValue>;

struct Parameter {
    ParameterId id;
    std::string name;  // display name used by binding files (Nav0, Value2, COMPA, ...)
    std::optional<std::string> description;
    bool predefined = false;
    ParameterBody body;
    bool operator==(const Parameter&) const = default;
};

// "ComparisonOptions", "TextLiteral", ...
std::string_view kind_name(const ParameterBody& body);
bool is_option_parameter(const ParameterBody& body);
bool is_value_parameter(const ParameterBody& body);
bool has_value(const ParameterBody& body);

// ------------------------------------------------------------ graph structure

enum class ElementKind { Generic, XmlRoot, XmlElement };
enum class PropertySubkind { Generic, Xml };
enum class RelationKind { Generic, XmlNavigation, XmlReference };

struct Property {
    PropertyId id;
    std::string name;
    PropertySubkind subkind = PropertySubkind::Generic;
    ParameterId kind_param;       // Xml only
    ParameterId attribute_param;  // Xml only; consulted when the kind is ATTRIBUTE
    bool operator==(const Property&) const = default;
};

struct Element {
    ElementId id;
    std::string name;
    ElementKind kind = ElementKind::Generic;
    std::vector<Property> properties;
    bool operator==(const Element&) const = default;
};

struct Relation {
    RelationId id;
    std::string name;
    ElementId source;
    ElementId target;
    RelationKind kind = RelationKind::Generic;
    ParameterId axis_param;  // navigation; empty when the relation is a mapping target
    PropertyId source_property;    // reference
    PropertyId target_property;    // reference
    ParameterId comparison_param;  // reference equality operator
    bool operator==(const Relation&) const = default;
};

using Comparable = std::variant<ElementId, PropertyId, OperatorId, ParameterId>;

struct Comparison {
    Comparable left;
    Comparable right;
    ParameterId op_param;
    ValueType value_type = ValueType::String;
    bool operator==(const Comparison&) const = default;
};

struct Match {
    PropertyId property;
    ParameterId regex_param;
    bool operator==(const Match&) const = default;
};

struct Operator {
    OperatorId id;
    std::variant<Comparison, Match> body;
    bool operator==(const Operator&) const = default;
};

struct Graph {
    GraphId id;
    std::vector<Element> elements;
    std::vector<Relation> relations;
    std::vector<Operator> operators;
    std::vector<ElementId> return_elements;
    bool operator==(const Graph&) const = default;

    const Element* find_element(const ElementId& e) const;
    const Relation* find_relation(const RelationId& r) const;
    const Operator* find_operator(const OperatorId& o) const;
    // Owner element of a property in this graph, or nullptr.
    const Element* property_owner(const PropertyId& p) const;
    const Property* find_property(const PropertyId& p) const;
    bool contains(const ElementId& e) const { return find_element(e) != nullptr; }
    const Element* root() const;
};

struct Morphism {
    GraphId source;
    GraphId target;
    std::vector<std::pair<ElementId, ElementId>> element_mappings;
    std::vector<std::pair<RelationId, RelationId>> relation_mappings;
    bool operator==(const Morphism&) const = default;

    // Source element mapped onto `target_element`, if any.
    std::optional<ElementId> preimage(const ElementId& target_element) const;
    std::optional<ElementId> image(const ElementId& source_element) const;
    std::optional<RelationId> relation_preimage(const RelationId& target_relation) const;
};

// ----------------------------------------------------------------- conditions

struct Condition;

struct TrueCondition {
    bool operator==(const TrueCondition&) const = default;
};

struct QuantifiedCondition {
    Quantifier quantifier = Quantifier::Exists;
    GraphId graph;
    Morphism morphism;
    Box<Condition> inner;
    bool operator==(const QuantifiedCondition&) const = default;
};

struct Formula {
    LogicOp op = LogicOp::And;
    Box<Condition> left;
    Box<Condition> right;
    bool operator==(const Formula&) const = default;
};

struct NotCondition {
    Box<Condition> inner;
    bool operator==(const NotCondition&) const = default;
};

struct CountPattern {
    GraphId graph;
    Morphism morphism;
    Box<Condition> inner;
    bool operator==(const CountPattern&) const = default;
};

struct NumberElement {
    std::uint64_t value = 0;
    bool operator==(const NumberElement&) const = default;
};

struct CountCondition {
    CountPattern count;
    ComparisonOp op = ComparisonOp::Greater;
    std::variant<NumberElement, Box<CountPattern>> argument;
    bool operator==(const CountCondition&) const = default;
};

struct Condition {
    std::variant<TrueCondition, QuantifiedCondition, Formula, NotCondition, CountCondition> node;
    bool operator==(const Condition&) const = default;
};

// Child index per step: quantified/not inner = 0; formula left = 0, right = 1;
// count pattern inner = 0, counted argument inner = 1.
using ConditionPath = std::vector<int>;

// ------------------------------------------------------------------- pattern

struct PropertyRef {
    const Property* property = nullptr;
    const Element* owner = nullptr;
    const Graph* graph = nullptr;
};

class CompletePattern {
public:
    CompletePattern(std::string name, AbstractionLevel level);

    const std::string& name() const { return name_; }
    AbstractionLevel level() const { return level_; }
    const std::vector<Graph>& graphs() const { return graphs_; }
    const Graph& outer_graph() const { return graphs_.front(); }
    const Graph& graph(const GraphId& g) const;
    const Condition& condition() const { return condition_; }
    const std::vector<Parameter>& parameters() const { return parameters_; }
    bool frozen() const { return frozen_; }

    // Graph ids: outer graph first, then condition graphs in depth-first order.
    std::vector<GraphId> graph_order() const;
    // Graph owning the condition slot `path` points into.
    GraphId enclosing_graph(const ConditionPath& path) const;
    const Condition& condition_at(const ConditionPath& path) const;
    // Morphism whose target is `g`; nullptr for the outer graph.
    const Morphism* morphism_into(const GraphId& g) const;

    const Element* find_element(const ElementId& e, const Graph** graph = nullptr) const;
    const Relation* find_relation(const RelationId& r, const Graph** graph = nullptr) const;
    const Operator* find_operator(const OperatorId& o, const Graph** graph = nullptr) const;
    PropertyRef find_property(const PropertyId& p) const;
    const Parameter* find_parameter(const ParameterId& p) const;
    const Parameter* find_parameter(std::string_view name) const;

    // ---- builders (all throw PatternError on misuse or once frozen)

    ElementId add_element(const GraphId& g, std::string name = {});
    ElementId add_root(const GraphId& g);
    PropertyId add_property(const ElementId& owner, std::string name = {});
    PropertyId add_xml_property(const ElementId& owner, const ParameterId& kind_param,
                                const ParameterId& attribute_param, std::string name = {});
    RelationId add_relation(const GraphId& g, const ElementId& source, const ElementId& target,
                            std::string name = {});
    RelationId add_navigation(const GraphId& g, const ElementId& source, const ElementId& target,
                              const ParameterId& axis_param, std::string name = {});
    RelationId add_reference(const GraphId& g, const ElementId& source, const ElementId& target,
                             const PropertyId& source_property, const PropertyId& target_property,
                             const ParameterId& comparison_param, std::string name = {});
    void add_return_element(const GraphId& g, const ElementId& e);

    ParameterId add_parameter(std::string name, ParameterBody body, bool predefined = false,
                              std::optional<std::string> description = std::nullopt);

    // Replace the TrueCondition at `slot`. The new graph starts empty; the
    // morphism's source is the graph enclosing the slot.
    GraphId add_quantified(const ConditionPath& slot, Quantifier q);
    // Formula with two TrueCondition children; returns their paths.
    std::pair<ConditionPath, ConditionPath> add_formula(const ConditionPath& slot, LogicOp op);
    ConditionPath add_not(const ConditionPath& slot);
    GraphId add_count_condition(const ConditionPath& slot, ComparisonOp op, NumberElement n);
    std::pair<GraphId, GraphId> add_count_comparison(const ConditionPath& slot, ComparisonOp op);

    // Copy `source` (name, kind) into `target_graph` and record the mapping.
    // Return elements stay return elements in quantified graphs.
    ElementId map_element(const GraphId& target_graph, const ElementId& source);
    void add_element_mapping(const GraphId& target_graph, const ElementId& source,
                             const ElementId& target);
    // Copy a generic or navigation relation whose endpoints are already mapped.
    RelationId map_relation(const GraphId& target_graph, const RelationId& source);
    void add_relation_mapping(const GraphId& target_graph, const RelationId& source,
                              const RelationId& target);

    // Comparison with a fresh option parameter (predefined iff one option).
    OperatorId add_comparison(const GraphId& g, Comparable left, Comparable right,
                              std::vector<ComparisonOp> options, ValueType value_type,
                              std::string param_name = {});
    // Comparison reusing an existing option parameter.
    OperatorId add_comparison(const GraphId& g, Comparable left, Comparable right,
                              const ParameterId& op_param, ValueType value_type);
    OperatorId add_match(const GraphId& g, const PropertyId& property,
                         std::optional<std::string> regex, std::string param_name = {});
    OperatorId add_match(const GraphId& g, const PropertyId& property,
                         const ParameterId& regex_param);

    void freeze() { frozen_ = true; }
    // Working copies of finalized patterns (re-abstraction) start mutable again.
    void unfreeze() { frozen_ = false; }

    // ---- low-level access for adaption, concretisation and deserialization

    void set_level(AbstractionLevel level);
    Graph& mutable_graph(const GraphId& g);
    Parameter& mutable_parameter(const ParameterId& p);
    std::vector<Parameter>& mutable_parameters();
    Condition& mutable_condition();
    Morphism& mutable_morphism_into(const GraphId& g);
    void insert_graph(Graph g);
    void remove_parameter(const ParameterId& p);
    std::string fresh_id(std::string_view prefix);
    // Continue id generation after the largest numeric suffix in use.
    void resync_ids();

    bool operator==(const CompletePattern& other) const;

private:
    void check_mutable() const;
    Condition& slot_ref(const ConditionPath& path);
    Graph& new_graph();

    std::string name_;
    AbstractionLevel level_;
    std::vector<Graph> graphs_;
    Condition condition_;
    std::vector<Parameter> parameters_;
    std::uint64_t next_id_ = 0;
    bool frozen_ = false;
};

// Elements a predicate constrains: operands that are elements or property
// owners, followed recursively through operator operands.
std::vector<ElementId> predicate_elements(const CompletePattern& p, const Graph& g,
                                          const Operator& op);

// Every parameter id mentioned by the pattern structure, in traversal order,
// without duplicates.
std::vector<ParameterId> referenced_parameters(const CompletePattern& p);

// Operators whose comparison parameter is switched off are skipped by
// validation, query generation and evaluation.
bool operator_enabled(const CompletePattern& p, const Operator& op);

}  // namespace dqp
