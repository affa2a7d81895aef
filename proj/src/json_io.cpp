#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "dqp/errors.hpp"
#include "dqp/io.hpp"
#include "json.hpp"

namespace dqp {

using json = nlohmann::ordered_json;

namespace {

// ------------------------------------------------------------------ writing

std::string_view kind_string(ElementKind k) {
    switch (k) {
        case ElementKind::Generic: return "GENERIC";
        case ElementKind::XmlRoot: return "XML_ROOT";
        case ElementKind::XmlElement: return "XML_ELEMENT";
    }
    return {};
}

std::string_view kind_string(PropertySubkind k) { return k == PropertySubkind::Xml ? "XML" : "GENERIC"; }

std::string_view kind_string(RelationKind k) {
    switch (k) {
        case RelationKind::Generic: return "GENERIC";
        case RelationKind::XmlNavigation: return "XML_NAVIGATION";
        case RelationKind::XmlReference: return "XML_REFERENCE";
    }
    return {};
}

template <class Tag>
void put_id(json& j, const char* key, const Id<Tag>& id) {
    if (!id.empty()) j[key] = id.str();
}

json comparable(const Comparable& c) {
    return std::visit(
        [](const auto& id) -> json {
            using T = std::decay_t<decltype(id)>;
            const char* key = std::is_same_v<T, ElementId>    ? "element"
                              : std::is_same_v<T, PropertyId> ? "property"
                              : std::is_same_v<T, OperatorId> ? "operator"
                                                              : "parameter";
            return json{{key, id.str()}};
        },
        c);
}

json graph_json(const Graph& g) {
    json j;
    j["id"] = g.id.str();
    j["elements"] = json::array();
    for (const auto& e : g.elements) {
        json je{{"id", e.id.str()}, {"name", e.name}, {"kind", kind_string(e.kind)}};
        je["properties"] = json::array();
        for (const auto& pr : e.properties) {
            json jp{{"id", pr.id.str()}, {"name", pr.name}, {"subkind", kind_string(pr.subkind)}};
            put_id(jp, "kind_param", pr.kind_param);
            put_id(jp, "attribute_param", pr.attribute_param);
            je["properties"].push_back(jp);
        }
        j["elements"].push_back(je);
    }
    j["relations"] = json::array();
    for (const auto& r : g.relations) {
        json jr{{"id", r.id.str()},
                {"name", r.name},
                {"kind", kind_string(r.kind)},
                {"source", r.source.str()},
                {"target", r.target.str()}};
        put_id(jr, "axis_param", r.axis_param);
        put_id(jr, "source_property", r.source_property);
        put_id(jr, "target_property", r.target_property);
        put_id(jr, "comparison_param", r.comparison_param);
        j["relations"].push_back(jr);
    }
    j["operators"] = json::array();
    for (const auto& op : g.operators) {
        json jo{{"id", op.id.str()}};
        if (auto* c = std::get_if<Comparison>(&op.body)) {
            jo["type"] = "comparison";
            jo["left"] = comparable(c->left);
            jo["right"] = comparable(c->right);
            jo["op_param"] = c->op_param.str();
            jo["value_type"] = to_string(c->value_type);
        } else {
            const auto& m = std::get<Match>(op.body);
            jo["type"] = "match";
            jo["property"] = m.property.str();
            jo["regex_param"] = m.regex_param.str();
        }
        j["operators"].push_back(jo);
    }
    j["return_elements"] = json::array();
    for (const auto& e : g.return_elements) j["return_elements"].push_back(e.str());
    return j;
}

json condition_json(const Condition& c, std::vector<const Morphism*>& morphisms);

json count_json(const CountPattern& cp, std::vector<const Morphism*>& morphisms) {
    morphisms.push_back(&cp.morphism);
    return json{{"graph", cp.graph.str()}, {"inner", condition_json(*cp.inner, morphisms)}};
}

json condition_json(const Condition& c, std::vector<const Morphism*>& morphisms) {
    return std::visit(
        [&](const auto& n) -> json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, TrueCondition>) {
                return json{{"type", "true"}};
            } else if constexpr (std::is_same_v<T, QuantifiedCondition>) {
                morphisms.push_back(&n.morphism);
                return json{{"type", "quantified"},
                            {"quantifier", to_string(n.quantifier)},
                            {"graph", n.graph.str()},
                            {"inner", condition_json(*n.inner, morphisms)}};
            } else if constexpr (std::is_same_v<T, Formula>) {
                json j{{"type", "formula"}, {"op", to_string(n.op)}};
                j["left"] = condition_json(*n.left, morphisms);
                j["right"] = condition_json(*n.right, morphisms);
                return j;
            } else if constexpr (std::is_same_v<T, NotCondition>) {
                return json{{"type", "not"}, {"inner", condition_json(*n.inner, morphisms)}};
            } else {
                json j{{"type", "count"}};
                j["count"] = count_json(n.count, morphisms);
                j["op"] = to_string(n.op);
                if (auto* num = std::get_if<NumberElement>(&n.argument))
                    j["argument"] = json{{"type", "number"}, {"value", num->value}};
                else {
                    json a = count_json(*std::get<Box<CountPattern>>(n.argument), morphisms);
                    j["argument"] = json{{"type", "count"}, {"graph", a["graph"]}, {"inner", a["inner"]}};
                }
                return j;
            }
        },
        c.node);
}

template <class E>
json option_values(const std::vector<E>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_string(x));
    return a;
}

template <class E>
json optional_enum(const std::optional<E>& v) {
    return v ? json(to_string(*v)) : json(nullptr);
}

json optional_text(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

json number_json(double d) {
    if (std::isnan(d)) return "NaN";
    if (std::isinf(d)) return d > 0 ? "INF" : "-INF";
    return d;
}

json parameter_json(const Parameter& p) {
    json j{{"id", p.id.str()}, {"name", p.name}, {"kind", kind_name(p.body)}, {"predefined", p.predefined}};
    if (p.description) j["description"] = *p.description;
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, ComparisonOptions>) {
                j["options"] = option_values(b.options);
                j["value"] = optional_enum(b.value);
                j["enabled"] = b.enabled;
            } else if constexpr (std::is_same_v<T, AxisOptions>) {
                j["options"] = option_values(b.options);
                j["value"] = optional_enum(b.value);
                j["depth"] = b.depth;
            } else if constexpr (std::is_same_v<T, PropertyKindOptions>) {
                j["options"] = option_values(b.options);
                j["value"] = optional_enum(b.value);
            } else if constexpr (std::is_same_v<T, TextList>) {
                j["value"] = b.values ? json(*b.values) : json(nullptr);
            } else if constexpr (std::is_same_v<T, NumberValue>) {
                j["value"] = b.value ? number_json(*b.value) : json(nullptr);
            } else if constexpr (std::is_same_v<T, BooleanValue>) {
                j["value"] = b.value ? json(*b.value) : json(nullptr);
            } else if constexpr (std::is_same_v<T, UnknownValue>) {
            } else {
                j["value"] = optional_text(b.value);
            }
        },
        p.body);
    return j;
}

// ------------------------------------------------------------------ reading

class In {
public:
    In(const json& j, std::string ptr) : j_(j), ptr_(std::move(ptr)) {}

    [[noreturn]] void fail(const std::string& msg) const { throw SchemaError(ptr_.empty() ? "/" : ptr_, msg); }

    // Every key must be known; `required` ones must be present.
    void keys(std::initializer_list<const char*> required, std::initializer_list<const char*> optional = {}) const {
        if (!j_.is_object()) fail("expected an object");
        for (const char* k : required)
            if (!j_.contains(k)) at_missing(k);
        for (const auto& [k, _] : j_.items()) {
            bool known = false;
            for (const char* x : required) known |= k == x;
            for (const char* x : optional) known |= k == x;
            if (!known) In(j_[k], ptr_ + "/" + escape(k)).fail("unknown key");
        }
    }

    In operator[](const char* k) const {
        if (!j_.is_object() || !j_.contains(k)) at_missing(k);
        return In(j_.at(k), ptr_ + "/" + escape(k));
    }
    In operator[](std::size_t i) const { return In(j_.at(i), ptr_ + "/" + std::to_string(i)); }

    bool has(const char* k) const { return j_.is_object() && j_.contains(k); }
    bool is_null() const { return j_.is_null(); }
    std::size_t size() const {
        if (!j_.is_array()) fail("expected an array");
        return j_.size();
    }

    std::string str() const {
        if (!j_.is_string()) fail("expected a string");
        return j_.get<std::string>();
    }
    bool boolean() const {
        if (!j_.is_boolean()) fail("expected a boolean");
        return j_.get<bool>();
    }
    long long integer() const {
        if (!j_.is_number_integer()) fail("expected an integer");
        return j_.get<long long>();
    }
    std::uint64_t unsigned_integer() const {
        if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<long long>() >= 0))
            fail("expected a non-negative integer");
        return j_.get<std::uint64_t>();
    }
    double number() const {
        if (j_.is_number()) return j_.get<double>();
        if (j_.is_string()) {
            auto s = j_.get<std::string>();
            if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
            if (s == "INF") return std::numeric_limits<double>::infinity();
            if (s == "-INF") return -std::numeric_limits<double>::infinity();
        }
        fail("expected a number");
    }
    template <class Tag>
    Id<Tag> id() const {
        std::string s = str();
        if (s.empty()) fail("empty id");
        return Id<Tag>(s);
    }
    template <class Tag>
    Id<Tag> optional_id(const char* k) const {
        return has(k) ? (*this)[k].id<Tag>() : Id<Tag>();
    }
    template <class E, class Parse>
    E enumeration(Parse parse) const {
        auto v = parse(str());
        if (!v) fail("unknown value '" + str() + "'");
        return *v;
    }
    template <class E, class Parse>
    std::vector<E> enum_list(Parse parse) const {
        std::vector<E> out;
        for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].enumeration<E>(parse));
        return out;
    }
    template <class E, class Parse>
    std::optional<E> optional_enum(Parse parse) const {
        if (is_null()) return std::nullopt;
        return enumeration<E>(parse);
    }
    std::optional<std::string> optional_str() const {
        if (is_null()) return std::nullopt;
        return str();
    }

    const std::string& pointer() const { return ptr_; }

private:
    [[noreturn]] void at_missing(const char* k) const {
        throw SchemaError(ptr_ + "/" + escape(k), "missing required key");
    }
    static std::string escape(const std::string& k) {
        std::string out;
        for (char c : k) {
            if (c == '~') out += "~0";
            else if (c == '/') out += "~1";
            else out += c;
        }
        return out;
    }

    const json& j_;
    std::string ptr_;
};

template <class E>
std::optional<E> parse_kind(std::string_view s, std::initializer_list<std::pair<const char*, E>> table) {
    for (const auto& [k, v] : table)
        if (s == k) return v;
    return std::nullopt;
}

Comparable read_comparable(const In& in) {
    if (in.has("element")) {
        in.keys({"element"});
        return in["element"].id<ElementTag>();
    }
    if (in.has("property")) {
        in.keys({"property"});
        return in["property"].id<PropertyTag>();
    }
    if (in.has("operator")) {
        in.keys({"operator"});
        return in["operator"].id<OperatorTag>();
    }
    in.keys({"parameter"});
    return in["parameter"].id<ParameterTag>();
}

Graph read_graph(const In& in) {
    in.keys({"id", "elements", "relations", "operators", "return_elements"});
    Graph g;
    g.id = in["id"].id<GraphTag>();
    In els = in["elements"];
    for (std::size_t i = 0; i < els.size(); ++i) {
        In je = els[i];
        je.keys({"id", "name", "kind", "properties"});
        Element e;
        e.id = je["id"].id<ElementTag>();
        e.name = je["name"].str();
        e.kind = je["kind"].enumeration<ElementKind>([](std::string_view s) {
            return parse_kind<ElementKind>(s, {{"GENERIC", ElementKind::Generic},
                                               {"XML_ROOT", ElementKind::XmlRoot},
                                               {"XML_ELEMENT", ElementKind::XmlElement}});
        });
        In props = je["properties"];
        for (std::size_t k = 0; k < props.size(); ++k) {
            In jp = props[k];
            jp.keys({"id", "name", "subkind"}, {"kind_param", "attribute_param"});
            Property pr;
            pr.id = jp["id"].id<PropertyTag>();
            pr.name = jp["name"].str();
            pr.subkind = jp["subkind"].enumeration<PropertySubkind>([](std::string_view s) {
                return parse_kind<PropertySubkind>(s, {{"GENERIC", PropertySubkind::Generic},
                                                       {"XML", PropertySubkind::Xml}});
            });
            pr.kind_param = jp.optional_id<ParameterTag>("kind_param");
            pr.attribute_param = jp.optional_id<ParameterTag>("attribute_param");
            e.properties.push_back(pr);
        }
        g.elements.push_back(std::move(e));
    }
    In rels = in["relations"];
    for (std::size_t i = 0; i < rels.size(); ++i) {
        In jr = rels[i];
        jr.keys({"id", "name", "kind", "source", "target"},
                {"axis_param", "source_property", "target_property", "comparison_param"});
        Relation r;
        r.id = jr["id"].id<RelationTag>();
        r.name = jr["name"].str();
        r.kind = jr["kind"].enumeration<RelationKind>([](std::string_view s) {
            return parse_kind<RelationKind>(s, {{"GENERIC", RelationKind::Generic},
                                                {"XML_NAVIGATION", RelationKind::XmlNavigation},
                                                {"XML_REFERENCE", RelationKind::XmlReference}});
        });
        r.source = jr["source"].id<ElementTag>();
        r.target = jr["target"].id<ElementTag>();
        r.axis_param = jr.optional_id<ParameterTag>("axis_param");
        r.source_property = jr.optional_id<PropertyTag>("source_property");
        r.target_property = jr.optional_id<PropertyTag>("target_property");
        r.comparison_param = jr.optional_id<ParameterTag>("comparison_param");
        g.relations.push_back(r);
    }
    In ops = in["operators"];
    for (std::size_t i = 0; i < ops.size(); ++i) {
        In jo = ops[i];
        Operator op;
        std::string type = jo["type"].str();
        if (type == "comparison") {
            jo.keys({"id", "type", "left", "right", "op_param", "value_type"});
            Comparison c;
            c.left = read_comparable(jo["left"]);
            c.right = read_comparable(jo["right"]);
            c.op_param = jo["op_param"].id<ParameterTag>();
            c.value_type = jo["value_type"].enumeration<ValueType>(parse_value_type);
            op.body = c;
        } else if (type == "match") {
            jo.keys({"id", "type", "property", "regex_param"});
            op.body = Match{jo["property"].id<PropertyTag>(), jo["regex_param"].id<ParameterTag>()};
        } else {
            jo["type"].fail("unknown operator type '" + type + "'");
        }
        op.id = jo["id"].id<OperatorTag>();
        g.operators.push_back(std::move(op));
    }
    In ret = in["return_elements"];
    for (std::size_t i = 0; i < ret.size(); ++i) g.return_elements.push_back(ret[i].id<ElementTag>());
    return g;
}

struct ConditionReader {
    std::map<GraphId, Morphism> morphisms;
    std::set<GraphId> used;

    Morphism take(const GraphId& g, const In& at) {
        if (!used.insert(g).second) at.fail("graph '" + g.str() + "' is nested twice");
        auto it = morphisms.find(g);
        if (it == morphisms.end()) at.fail("no mapping into graph '" + g.str() + "'");
        return it->second;
    }

    CountPattern count(const In& in) {
        CountPattern cp;
        cp.graph = in["graph"].id<GraphTag>();
        cp.morphism = take(cp.graph, in["graph"]);
        cp.inner = read(in["inner"]);
        return cp;
    }

    Condition read(const In& in) {
        Condition c;
        std::string type = in["type"].str();
        if (type == "true") {
            in.keys({"type"});
            c.node = TrueCondition{};
        } else if (type == "quantified") {
            in.keys({"type", "quantifier", "graph", "inner"});
            QuantifiedCondition q;
            q.quantifier = in["quantifier"].enumeration<Quantifier>(parse_quantifier);
            q.graph = in["graph"].id<GraphTag>();
            q.morphism = take(q.graph, in["graph"]);
            q.inner = read(in["inner"]);
            c.node = std::move(q);
        } else if (type == "formula") {
            in.keys({"type", "op", "left", "right"});
            Formula f;
            f.op = in["op"].enumeration<LogicOp>(parse_logic_op);
            f.left = read(in["left"]);
            f.right = read(in["right"]);
            c.node = std::move(f);
        } else if (type == "not") {
            in.keys({"type", "inner"});
            c.node = NotCondition{read(in["inner"])};
        } else if (type == "count") {
            in.keys({"type", "count", "op", "argument"});
            CountCondition cc;
            In jc = in["count"];
            jc.keys({"graph", "inner"});
            cc.count = count(jc);
            cc.op = in["op"].enumeration<ComparisonOp>(parse_comparison_op);
            In arg = in["argument"];
            std::string at = arg["type"].str();
            if (at == "number") {
                arg.keys({"type", "value"});
                cc.argument = NumberElement{arg["value"].unsigned_integer()};
            } else if (at == "count") {
                arg.keys({"type", "graph", "inner"});
                cc.argument = Box<CountPattern>(count(arg));
            } else {
                arg["type"].fail("unknown argument type '" + at + "'");
            }
            c.node = std::move(cc);
        } else {
            in["type"].fail("unknown condition type '" + type + "'");
        }
        return c;
    }
};

template <class Tag>
void read_pairs(const In& list, std::vector<std::pair<Id<Tag>, Id<Tag>>>& out) {
    for (std::size_t i = 0; i < list.size(); ++i) {
        In pair = list[i];
        if (pair.size() != 2) pair.fail("expected a [source, target] pair");
        out.emplace_back(pair[std::size_t{0}].template id<Tag>(), pair[std::size_t{1}].template id<Tag>());
    }
}

Morphism read_morphism(const In& in) {
    in.keys({"source", "target", "elements", "relations"});
    Morphism m;
    m.source = in["source"].id<GraphTag>();
    m.target = in["target"].id<GraphTag>();
    read_pairs<ElementTag>(in["elements"], m.element_mappings);
    read_pairs<RelationTag>(in["relations"], m.relation_mappings);
    return m;
}

Parameter read_parameter(const In& in) {
    Parameter p;
    p.id = in["id"].id<ParameterTag>();
    p.name = in["name"].str();
    p.predefined = in["predefined"].boolean();
    if (in.has("description")) p.description = in["description"].str();
    std::string kind = in["kind"].str();
    if (kind == "ComparisonOptions") {
        in.keys({"id", "name", "kind", "predefined", "options", "value", "enabled"}, {"description"});
        p.body = ComparisonOptions{in["options"].enum_list<ComparisonOp>(parse_comparison_op),
                                   in["value"].optional_enum<ComparisonOp>(parse_comparison_op),
                                   in["enabled"].boolean()};
    } else if (kind == "AxisOptions") {
        in.keys({"id", "name", "kind", "predefined", "options", "value", "depth"}, {"description"});
        long long depth = in["depth"].integer();
        if (depth < 1) in["depth"].fail("depth must be at least 1");
        p.body = AxisOptions{in["options"].enum_list<Axis>(parse_axis), in["value"].optional_enum<Axis>(parse_axis),
                             static_cast<int>(depth)};
    } else if (kind == "PropertyKindOptions") {
        in.keys({"id", "name", "kind", "predefined", "options", "value"}, {"description"});
        p.body = PropertyKindOptions{in["options"].enum_list<PropertyKind>(parse_property_kind),
                                     in["value"].optional_enum<PropertyKind>(parse_property_kind)};
    } else if (kind == "Unknown") {
        in.keys({"id", "name", "kind", "predefined"}, {"description"});
        p.body = UnknownValue{};
    } else {
        in.keys({"id", "name", "kind", "predefined", "value"}, {"description"});
        In v = in["value"];
        if (kind == "TextLiteral") p.body = TextLiteral{v.optional_str()};
        else if (kind == "Date") p.body = DateValue{v.optional_str()};
        else if (kind == "Time") p.body = TimeValue{v.optional_str()};
        else if (kind == "DateTime") p.body = DateTimeValue{v.optional_str()};
        else if (kind == "Number")
            p.body = NumberValue{v.is_null() ? std::nullopt : std::optional<double>(v.number())};
        else if (kind == "Boolean")
            p.body = BooleanValue{v.is_null() ? std::nullopt : std::optional<bool>(v.boolean())};
        else if (kind == "TextList") {
            std::optional<std::vector<std::string>> values;
            if (!v.is_null()) {
                values.emplace();
                for (std::size_t i = 0; i < v.size(); ++i) values->push_back(v[i].str());
            }
            p.body = TextList{values};
        } else {
            in["kind"].fail("unknown parameter kind '" + kind + "'");
        }
    }
    return p;
}

}  // namespace

std::string serialize(const CompletePattern& p) {
    json j;
    j["format_version"] = kFormatVersion;
    j["name"] = p.name();
    j["level"] = to_string(p.level());
    j["graphs"] = json::array();
    for (const auto& g : p.graphs()) j["graphs"].push_back(graph_json(g));
    std::vector<const Morphism*> morphisms;
    j["condition"] = condition_json(p.condition(), morphisms);
    j["parameters"] = json::array();
    for (const auto& par : p.parameters()) j["parameters"].push_back(parameter_json(par));
    j["mappings"] = json::array();
    for (const Morphism* m : morphisms) {
        json jm{{"source", m->source.str()}, {"target", m->target.str()}};
        jm["elements"] = json::array();
        for (const auto& [s, t] : m->element_mappings) jm["elements"].push_back({s.str(), t.str()});
        jm["relations"] = json::array();
        for (const auto& [s, t] : m->relation_mappings) jm["relations"].push_back({s.str(), t.str()});
        j["mappings"].push_back(jm);
    }
    return j.dump(2) + "\n";
}

CompletePattern deserialize(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("/", std::string("not JSON: ") + e.what());
    }
    In root(j, "");
    root.keys({"format_version", "name", "level", "graphs", "condition", "parameters", "mappings"});
    if (root["format_version"].integer() != kFormatVersion)
        root["format_version"].fail("unsupported format version");
    std::string name = root["name"].str();
    if (name.empty()) root["name"].fail("empty pattern name");
    AbstractionLevel level = root["level"].enumeration<AbstractionLevel>(parse_level);

    CompletePattern p(name, level);
    In graphs = root["graphs"];
    if (graphs.size() == 0) graphs.fail("a pattern has at least the outer graph");
    std::set<GraphId> graph_ids;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        Graph g = read_graph(graphs[i]);
        if (!graph_ids.insert(g.id).second) graphs[i]["id"].fail("duplicate graph id");
        if (i == 0) p.mutable_graph(p.outer_graph().id) = std::move(g);
        else p.insert_graph(std::move(g));
    }

    ConditionReader cr;
    In maps = root["mappings"];
    for (std::size_t i = 0; i < maps.size(); ++i) {
        Morphism m = read_morphism(maps[i]);
        if (!graph_ids.count(m.target)) maps[i]["target"].fail("unknown graph");
        if (!graph_ids.count(m.source)) maps[i]["source"].fail("unknown graph");
        if (!cr.morphisms.emplace(m.target, m).second) maps[i]["target"].fail("second mapping into graph");
    }
    p.mutable_condition() = cr.read(root["condition"]);
    if (cr.used.size() != cr.morphisms.size()) maps.fail("mapping into a graph the condition does not use");
    if (cr.used.size() + 1 != graph_ids.size()) graphs.fail("graph not used by the condition");

    In params = root["parameters"];
    std::set<ParameterId> param_ids;
    for (std::size_t i = 0; i < params.size(); ++i) {
        Parameter par = read_parameter(params[i]);
        if (!param_ids.insert(par.id).second) params[i]["id"].fail("duplicate parameter id");
        p.mutable_parameters().push_back(std::move(par));
    }
    p.resync_ids();
    return p;
}

}  // namespace dqp
