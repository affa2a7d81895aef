#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dqp/model.hpp"

namespace dqp {

// One right-hand side of a binding file entry.
struct BindingValue {
    enum class Kind {
        Word,       // name, data, content, equal, unequal, disabled, true, ...
        Axis,       // child3, descendant, descendant-or-self
        String,     // "text"
        Tuple,      // ("a","b")
        Number,     // 3.5
        Attribute,  // attribute "Type"
    };
    Kind kind = Kind::Word;
    std::string text;                // Word, String, Attribute
    std::vector<std::string> items;  // Tuple
    double number = 0;
    Axis axis = Axis::Child;
    int depth = 1;

    static BindingValue word(std::string w);
    static BindingValue string(std::string s);
    static BindingValue tuple(std::vector<std::string> items);
    static BindingValue num(double v);
    static BindingValue axis_step(Axis a, int depth = 1);
    static BindingValue attribute(std::string name);

    bool operator==(const BindingValue&) const = default;
};

std::string describe(const BindingValue& v);

// "Property0 and 1 = name" expands into two keys sharing one value.
struct Binding {
    std::vector<std::string> keys;
    BindingValue value;
    int line = 0;
    bool operator==(const Binding&) const = default;
};

// Sets one parameter. An UnknownValue parameter becomes typed by the literal
// and comparisons of type UNSPECIFIED that use it take that type.
// `attribute "x"` on a property kind also sets <name>.attributeName.
// Throws BindingError.
void bind(CompletePattern& p, const ParameterId& id, const BindingValue& v);
void bind(CompletePattern& p, std::string_view name, const BindingValue& v);
void bind_all(CompletePattern& p, const std::vector<Binding>& bindings);

// Parameters that still need a value before the pattern is concrete.
std::vector<ParameterId> missing_bindings(const CompletePattern& p);

// CONCRETE level, validated and frozen. Throws IncompleteBindingError for
// open parameters and PatternError for any other violation.
CompletePattern finalize(const CompletePattern& p);

// Inverse of binding: clears every non-predefined value, re-enables
// comparisons and returns to ABSTRACT_XML.
CompletePattern erase_bindings(const CompletePattern& p);

}  // namespace dqp
