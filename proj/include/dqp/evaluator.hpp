#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dqp/document.hpp"
#include "dqp/model.hpp"

namespace dqp {

struct MatchSet {
    std::string pattern;
    std::vector<NodeId> nodes;   // document order, no duplicates
    std::uint64_t bindings = 0;  // outer-graph bindings enumerated
    std::chrono::nanoseconds duration{0};
};

// Nested-loop evaluation mirroring the generated FLWOR queries.
// Throws PatternError for non-concrete patterns.
MatchSet evaluate(const CompletePattern& pattern, const Document& doc);

// Number of tuples of the count pattern at `path` (a CountCondition slot)
// that extend `outer` and satisfy its inner condition. `argument` selects the
// counted argument pattern instead of the main one.
std::uint64_t count_bindings(const CompletePattern& pattern, const ConditionPath& path,
                             const std::map<ElementId, NodeId>& outer, const Document& doc,
                             bool argument = false);

// First `limit` characters (code points) of the string value.
std::string excerpt(const Document& doc, NodeId n, std::size_t limit = 120);

}  // namespace dqp
