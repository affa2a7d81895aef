#pragma once

#include <map>
#include <string>
#include <vector>

#include "dqp/model.hpp"

namespace dqp {

struct RelationDecision {
    enum class Kind { Navigation, Reference };
    Kind kind = Kind::Navigation;
    // Navigation: axes offered to the concretiser. One axis makes it predefined.
    std::vector<Axis> axes = all_axes();
    // Reference: names of the inserted properties; defaults to <relation>1/<relation>2.
    std::string source_property;
    std::string target_property;

    static std::vector<Axis> all_axes() {
        return {Axis::Child, Axis::Descendant, Axis::Self, Axis::DescendantOrSelf,
                Axis::Following};
    }
    static RelationDecision navigation(std::vector<Axis> axes = all_axes()) {
        RelationDecision d;
        d.axes = std::move(axes);
        return d;
    }
    static RelationDecision reference(std::string source = {}, std::string target = {}) {
        RelationDecision d;
        d.kind = Kind::Reference;
        d.source_property = std::move(source);
        d.target_property = std::move(target);
        return d;
    }
};

// Keyed by relation name, falling back to relation id.
using AdaptionDecisions = std::map<std::string, RelationDecision>;

// Generic -> ABSTRACT_XML. Throws PatternError for an invalid generic pattern,
// a missing decision or a decision that cannot be realised.
CompletePattern adapt_to_xml(const CompletePattern& generic, const AdaptionDecisions& decisions);

// Rewrites a depth-n child navigation into n single child steps through n-1
// anonymous elements; mapped copies in nested graphs follow. Returns the chain.
std::vector<RelationId> expand_child_depth(CompletePattern& pattern, const RelationId& nav);

// Expands every navigation whose axis parameter carries a depth above one.
CompletePattern expand_child_depths(const CompletePattern& pattern);

}  // namespace dqp
