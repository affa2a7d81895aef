#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dqp/model.hpp"

namespace dqp {

struct ConstraintViolation {
    std::string constraint_id;  // PS-xx, GS-xx, OP-xx, PAR-xx, AX-xx
    std::string location;       // slash path into the pattern, e.g. /graphs/g3/relations/r7
    std::string message;
    std::vector<AbstractionLevel> levels;  // levels the constraint applies to
};

struct ConstraintInfo {
    std::string_view id;
    std::string_view summary;
    bool generic;
    bool abstract_xml;
    bool concrete;
};

const std::vector<ConstraintInfo>& constraint_registry();
const ConstraintInfo* find_constraint(std::string_view id);

// All violations of the constraints applicable at `level`, in traversal order.
std::vector<ConstraintViolation> validate(const CompletePattern& pattern, AbstractionLevel level);

// "<id> <location> <message>"
std::string format_violation(const ConstraintViolation& v);

}  // namespace dqp
