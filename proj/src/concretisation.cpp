#include "dqp/concretisation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "dqp/errors.hpp"
#include "dqp/text.hpp"
#include "dqp/validation.hpp"

namespace dqp {

BindingValue BindingValue::word(std::string w) {
    BindingValue v;
    v.kind = Kind::Word;
    v.text = std::move(w);
    return v;
}

BindingValue BindingValue::string(std::string s) {
    BindingValue v;
    v.kind = Kind::String;
    v.text = std::move(s);
    return v;
}

BindingValue BindingValue::tuple(std::vector<std::string> items) {
    BindingValue v;
    v.kind = Kind::Tuple;
    v.items = std::move(items);
    return v;
}

BindingValue BindingValue::num(double n) {
    BindingValue v;
    v.kind = Kind::Number;
    v.number = n;
    return v;
}

BindingValue BindingValue::axis_step(Axis a, int depth) {
    BindingValue v;
    v.kind = Kind::Axis;
    v.axis = a;
    v.depth = depth;
    return v;
}

BindingValue BindingValue::attribute(std::string name) {
    BindingValue v;
    v.kind = Kind::Attribute;
    v.text = std::move(name);
    return v;
}

std::string describe(const BindingValue& v) {
    switch (v.kind) {
        case BindingValue::Kind::Word: return v.text;
        case BindingValue::Kind::Axis:
            return std::string(to_string(v.axis)) + (v.depth > 1 ? std::to_string(v.depth) : "");
        case BindingValue::Kind::String: return quote(v.text);
        case BindingValue::Kind::Tuple: {
            std::string s = "(";
            for (std::size_t i = 0; i < v.items.size(); ++i) s += (i ? "," : "") + quote(v.items[i]);
            return s + ")";
        }
        case BindingValue::Kind::Number: {
            std::ostringstream os;
            os << v.number;
            return os.str();
        }
        case BindingValue::Kind::Attribute: return "attribute " + quote(v.text);
    }
    return {};
}

namespace {

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

[[noreturn]] void fail(const Parameter& par, const BindingValue& v, const std::string& why) {
    throw BindingError("cannot bind " + par.name + " = " + describe(v) + ": " + why);
}

std::optional<ComparisonOp> comparison_word(const std::string& w) {
    static const std::pair<const char*, ComparisonOp> words[] = {
        {"equal", ComparisonOp::Equal},        {"=", ComparisonOp::Equal},
        {"unequal", ComparisonOp::NotEqual},   {"not-equal", ComparisonOp::NotEqual},
        {"!=", ComparisonOp::NotEqual},        {"less", ComparisonOp::Less},
        {"<", ComparisonOp::Less},             {"less-equal", ComparisonOp::LessEq},
        {"<=", ComparisonOp::LessEq},          {"greater", ComparisonOp::Greater},
        {">", ComparisonOp::Greater},          {"greater-equal", ComparisonOp::GreaterEq},
        {">=", ComparisonOp::GreaterEq},
    };
    for (const auto& [k, op] : words)
        if (lower(w) == k) return op;
    return parse_comparison_op(w);
}

template <class O, class T>
void choose(O& body, const T& value, const Parameter& par, const BindingValue& v) {
    if (std::find(body.options.begin(), body.options.end(), value) == body.options.end())
        fail(par, v, "not among the options");
    body.value = value;
}

ValueType literal_type(const ParameterBody& b) {
    if (std::holds_alternative<NumberValue>(b)) return ValueType::Number;
    if (std::holds_alternative<BooleanValue>(b)) return ValueType::Boolean;
    if (std::holds_alternative<DateValue>(b)) return ValueType::Date;
    if (std::holds_alternative<TimeValue>(b)) return ValueType::Time;
    if (std::holds_alternative<DateTimeValue>(b)) return ValueType::DateTime;
    return ValueType::String;
}

ParameterBody typed_unknown(const Parameter& par, const BindingValue& v) {
    switch (v.kind) {
        case BindingValue::Kind::String: return TextLiteral{v.text};
        case BindingValue::Kind::Tuple: return TextList{v.items};
        case BindingValue::Kind::Number: return NumberValue{v.number};
        case BindingValue::Kind::Word:
            if (v.text == "true") return BooleanValue{true};
            if (v.text == "false") return BooleanValue{false};
            break;
        default: break;
    }
    fail(par, v, "expected a literal");
}

ParameterBody rebound(const Parameter& par, const BindingValue& v) {
    using K = BindingValue::Kind;
    return std::visit(
        [&](auto body) -> ParameterBody {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, ComparisonOptions>) {
                if (v.kind != K::Word) fail(par, v, "expected a comparison operator");
                if (lower(v.text) == "disabled") {
                    body.enabled = false;
                    return body;
                }
                auto op = comparison_word(v.text);
                if (!op) fail(par, v, "unknown comparison operator");
                choose(body, *op, par, v);
                body.enabled = true;
            } else if constexpr (std::is_same_v<T, AxisOptions>) {
                std::optional<Axis> axis;
                int depth = 1;
                if (v.kind == K::Axis) {
                    axis = v.axis;
                    depth = v.depth;
                } else if (v.kind == K::Word) {
                    axis = parse_axis(lower(v.text));
                }
                if (!axis) fail(par, v, "expected an axis");
                if (depth < 1) fail(par, v, "depth must be positive");
                if (depth > 1 && *axis != Axis::Child) fail(par, v, "only child steps repeat");
                choose(body, *axis, par, v);
                body.depth = depth;
            } else if constexpr (std::is_same_v<T, PropertyKindOptions>) {
                std::optional<PropertyKind> kind;
                if (v.kind == K::Attribute) kind = PropertyKind::Attribute;
                else if (v.kind == K::Word) {
                    std::string w = lower(v.text);
                    if (w == "content") w = "data";
                    for (auto& c : w) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
                    kind = parse_property_kind(w);
                }
                if (!kind) fail(par, v, "expected name, data, content or attribute \"...\"");
                choose(body, *kind, par, v);
            } else if constexpr (std::is_same_v<T, TextLiteral>) {
                if (v.kind != K::String) fail(par, v, "expected a quoted string");
                body.value = v.text;
            } else if constexpr (std::is_same_v<T, TextList>) {
                if (v.kind == K::Tuple) body.values = v.items;
                else if (v.kind == K::String) body.values = std::vector<std::string>{v.text};
                else fail(par, v, "expected a tuple of strings");
            } else if constexpr (std::is_same_v<T, NumberValue>) {
                if (v.kind == K::Number) body.value = v.number;
                else if (v.kind == K::String && parse_xsd_double(v.text))
                    body.value = *parse_xsd_double(v.text);
                else fail(par, v, "expected a number");
            } else if constexpr (std::is_same_v<T, BooleanValue>) {
                if (v.kind == K::Word && (v.text == "true" || v.text == "false"))
                    body.value = v.text == "true";
                else fail(par, v, "expected true or false");
            } else if constexpr (std::is_same_v<T, DateValue>) {
                if (v.kind != K::String || !is_xsd_date(v.text)) fail(par, v, "not an xs:date");
                body.value = v.text;
            } else if constexpr (std::is_same_v<T, TimeValue>) {
                if (v.kind != K::String || !is_xsd_time(v.text)) fail(par, v, "not an xs:time");
                body.value = v.text;
            } else if constexpr (std::is_same_v<T, DateTimeValue>) {
                if (v.kind != K::String || !is_xsd_datetime(v.text)) fail(par, v, "not an xs:dateTime");
                body.value = v.text;
            } else {
                return typed_unknown(par, v);
            }
            return body;
        },
        par.body);
}

void type_comparisons(CompletePattern& p, const ParameterId& id, ValueType t) {
    for (const GraphId& gid : p.graph_order())
        for (auto& op : p.mutable_graph(gid).operators)
            if (auto* c = std::get_if<Comparison>(&op.body)) {
                if (c->value_type != ValueType::Unspecified) continue;
                auto uses = [&](const Comparable& side) {
                    auto* x = std::get_if<ParameterId>(&side);
                    return x && *x == id;
                };
                if (uses(c->left) || uses(c->right)) c->value_type = t;
            }
}

}  // namespace

void bind(CompletePattern& p, const ParameterId& id, const BindingValue& v) {
    const Parameter* par = p.find_parameter(id);
    if (!par) throw BindingError("unknown parameter '" + id.str() + "'");
    const bool was_unknown = std::holds_alternative<UnknownValue>(par->body);
    ParameterBody body = rebound(*par, v);

    if (par->predefined) {
        bool disabling = v.kind == BindingValue::Kind::Word && lower(v.text) == "disabled";
        if (!disabling && body != par->body)
            throw BindingError("parameter " + par->name + " is predefined and cannot be rebound to " +
                               describe(v));
    }
    const std::string name = par->name;
    p.mutable_parameter(id).body = body;
    if (was_unknown) type_comparisons(p, id, literal_type(body));

    if (v.kind == BindingValue::Kind::Attribute) {
        const Parameter* attr = p.find_parameter(std::string_view(name + ".attributeName"));
        if (!attr) throw BindingError("parameter " + name + " has no attribute name");
        p.mutable_parameter(attr->id).body = TextLiteral{v.text};
    }
}

void bind(CompletePattern& p, std::string_view name, const BindingValue& v) {
    const Parameter* par = p.find_parameter(name);
    if (!par) throw BindingError("pattern " + p.name() + " has no parameter '" + std::string(name) + "'");
    bind(p, par->id, v);
}

void bind_all(CompletePattern& p, const std::vector<Binding>& bindings) {
    for (const auto& b : bindings)
        for (const auto& key : b.keys) {
            try {
                bind(p, std::string_view(key), b.value);
            } catch (const BindingError& e) {
                if (b.line > 0) throw BindingError("line " + std::to_string(b.line) + ": " + e.what());
                throw;
            }
        }
}

std::vector<ParameterId> missing_bindings(const CompletePattern& p) {
    std::vector<ParameterId> out;
    auto add = [&](const ParameterId& id) {
        if (!id.empty() && std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
    };
    for (const auto& v : validate(p, AbstractionLevel::Concrete)) {
        if (v.constraint_id == "PAR-03" || v.constraint_id == "PAR-04") {
            const std::string prefix = "/parameters/";
            if (v.location.rfind(prefix, 0) == 0)
                if (const Parameter* par = p.find_parameter(std::string_view(v.location).substr(prefix.size())))
                    add(par->id);
        } else if (v.constraint_id == "AX-08") {
            auto slash = v.location.rfind('/');
            PropertyRef ref = p.find_property(PropertyId(v.location.substr(slash + 1)));
            if (ref.property) add(ref.property->attribute_param);
        }
    }
    return out;
}

CompletePattern finalize(const CompletePattern& p) {
    auto missing = missing_bindings(p);
    if (!missing.empty()) {
        std::vector<std::string> names;
        std::string list;
        for (const auto& id : missing) {
            names.push_back(p.find_parameter(id)->name);
            list += (list.empty() ? "" : ", ") + names.back();
        }
        throw IncompleteBindingError("unbound parameters: " + list, std::move(names));
    }
    if (p.level() == AbstractionLevel::Generic)
        throw PatternError("generic patterns must be adapted before concretisation");
    CompletePattern out = p;
    out.unfreeze();
    out.set_level(AbstractionLevel::Concrete);
    auto violations = validate(out, AbstractionLevel::Concrete);
    if (!violations.empty()) throw PatternError("invalid concrete pattern: " + format_violation(violations.front()));
    out.freeze();
    return out;
}

CompletePattern erase_bindings(const CompletePattern& p) {
    CompletePattern out = p;
    out.unfreeze();
    if (out.level() == AbstractionLevel::Concrete) out.set_level(AbstractionLevel::AbstractXml);
    for (auto& par : out.mutable_parameters()) {
        if (par.predefined) {
            if (auto* c = std::get_if<ComparisonOptions>(&par.body)) c->enabled = true;
            continue;
        }
        std::visit(
            [](auto& b) {
                using T = std::decay_t<decltype(b)>;
                if constexpr (std::is_same_v<T, ComparisonOptions>) {
                    b.value.reset();
                    b.enabled = true;
                } else if constexpr (std::is_same_v<T, AxisOptions>) {
                    b.value.reset();
                    b.depth = 1;
                } else if constexpr (std::is_same_v<T, PropertyKindOptions>) {
                    b.value.reset();
                } else if constexpr (std::is_same_v<T, TextList>) {
                    b.values.reset();
                } else if constexpr (!std::is_same_v<T, UnknownValue>) {
                    b.value.reset();
                }
            },
            par.body);
    }
    return out;
}

}  // namespace dqp
