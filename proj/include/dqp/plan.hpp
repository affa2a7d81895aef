#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dqp/model.hpp"

namespace dqp {

// Shared traversal of a concrete pattern used by the evaluator and by query
// generation, so that both bind elements in the same order.
//
// Every element gets a slot. Slot 0 is the document node (all XmlRoots);
// mapped elements share the slot of their preimage; the remaining elements
// get slots 1, 2, ... in binding order, which is also the $varN numbering.

struct PlanCheck {
    enum class Kind { Operator, Reference, Navigation };
    Kind kind = Kind::Operator;
    const Operator* op = nullptr;
    const Relation* relation = nullptr;
};

struct PlanStep {
    const Element* element = nullptr;
    int slot = 0;
    int anchor = 0;  // slot of the navigation source
    Axis axis = Axis::Child;
    int depth = 1;
    std::vector<PlanCheck> checks;
};

struct GraphPlan {
    const Graph* graph = nullptr;
    std::vector<PlanCheck> pre;  // checks over enclosing slots only
    std::vector<PlanStep> steps;
};

struct ConditionPlan {
    enum class Kind { True, Exists, Forall, And, Or, Not, Count };
    Kind kind = Kind::True;
    GraphPlan graph;                      // Exists, Forall, Count
    std::vector<ConditionPlan> children;  // inner | left, right | count inner, counted argument
    ComparisonOp op = ComparisonOp::Greater;
    std::optional<std::uint64_t> number;  // Count compared against a number
};

struct PropertyAccess {
    int slot = 0;
    PropertyKind kind = PropertyKind::Data;
    std::string attribute;
};

struct QueryPlan {
    const CompletePattern* pattern = nullptr;
    GraphPlan outer;
    ConditionPlan condition;
    std::vector<int> returns;
    int slot_count = 1;

    int slot(const ElementId& e) const;
    PropertyAccess access(const PropertyId& p) const;

    std::unordered_map<ElementId, int> slots;
};

// Throws PatternError unless the pattern is at the concrete level.
QueryPlan make_plan(const CompletePattern& p);

// Operator (or reference equality) parameter value; Equal when unset.
ComparisonOp comparison_op(const CompletePattern& p, const ParameterId& id);

}  // namespace dqp
