#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "dqp/model.hpp"

namespace dqp {

// XQuery FLWOR text for a concrete pattern. Variables are numbered in the
// order the evaluator binds them. Throws PatternError for other levels.
std::string generate_query(const CompletePattern& pattern);

// Whitespace runs collapsed to one space; none kept next to brackets and
// parentheses, nor at the ends.
std::string normalize_whitespace(std::string_view text);

// Parses the XQuery subset the generator emits (FLWOR, quantified, if,
// boolean and comparison operators, paths with axes and predicates, function
// calls, casts) and checks that every variable is bound. Returns the first
// error, or nullopt.
std::optional<std::string> check_grammar(std::string_view query);

}  // namespace dqp
