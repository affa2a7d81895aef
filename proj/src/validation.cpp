#include "dqp/validation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dqp/text.hpp"

namespace dqp {

namespace {

constexpr bool G = true;
constexpr bool X = true;

const std::vector<ConstraintInfo> kRegistry = {
    {"PS-01", "morphism source is the nearest enclosing graph", G, X, X},
    {"PS-02", "morphism target is the graph of its condition", G, X, X},
    {"PS-03", "element mappings connect the morphism's source and target graphs", G, X, X},
    {"PS-04", "relation mappings connect the morphism's source and target graphs", G, X, X},
    {"PS-05", "no two mappings of a morphism share a source", G, X, X},
    {"PS-06", "a count pattern graph has at least one unmapped element", G, X, X},
    {"GS-01", "the outermost graph has return elements", G, X, X},
    {"GS-02", "return elements belong to their graph", G, X, X},
    {"GS-03", "return elements of quantified graphs correspond to the preceding graph's", G, X, X},
    {"GS-04", "generic patterns contain no XML-adapted items", G, false, false},
    {"GS-05", "every graph contains exactly one XmlRoot", false, X, X},
    {"GS-06", "XML-level patterns contain only XML-adapted items", false, X, X},
    {"GS-07", "outer graph elements are never mapping targets; targets are unique", G, X, X},
    {"GS-08", "relation mappings are accompanied by mappings of both endpoints", G, X, X},
    {"GS-09", "relation endpoints belong to the relation's graph", G, X, X},
    {"GS-10", "every graph contains at least one element", G, X, X},
    {"GS-11", "identifiers are unique within the pattern", G, X, X},
    {"OP-01", "operator operands belong to the operator's graph", G, X, X},
    {"OP-02", "every predicate constrains at least one element", G, X, X},
    {"OP-03", "comparison value type agrees with typed operands", G, X, X},
    {"OP-04", "concrete comparisons have a value type", false, false, X},
    {"OP-05", "element comparisons use EQUAL or NOT_EQUAL only", G, X, X},
    {"OP-06", "operator operand references are free of cycles", G, X, X},
    {"OP-07", "operator operands are in the same operator list", G, X, X},
    {"OP-08", "operator references resolve", G, X, X},
    {"OP-09", "operator parameters have the expected kind", G, X, X},
    {"OP-10", "concrete regular expressions compile", false, false, X},
    {"PAR-01", "every referenced parameter is in the parameter list", G, X, X},
    {"PAR-02", "every listed parameter is referenced", G, X, X},
    {"PAR-03", "concrete patterns contain no UnknownParameterValue", false, false, X},
    {"PAR-04", "concrete parameters have values", false, false, X},
    {"PAR-05", "date and time values have XML Schema lexical form", G, X, X},
    {"PAR-06", "option parameters offer at least one option", G, X, X},
    {"PAR-07", "option values are among the options", G, X, X},
    {"PAR-08", "predefined parameters carry a value", G, X, X},
    {"PAR-09", "parameter names are unique", G, X, X},
    {"AX-01", "every XmlElement has exactly one incoming XmlNavigation", false, X, X},
    {"AX-02", "the XmlRoot has no incoming relations", false, X, X},
    {"AX-03", "the XmlRoot has no outgoing references", false, X, X},
    {"AX-04", "the XmlRoot is not constrained by predicates", false, X, X},
    {"AX-05", "navigation axis set iff the navigation is not a mapping target", false, X, X},
    {"AX-06", "mappings preserve XML subkinds", false, X, X},
    {"AX-07", "reference properties belong to the reference endpoints", false, X, X},
    {"AX-08", "attribute properties name their attribute", false, false, X},
    {"AX-09", "navigation depth is positive and repeated steps use the child axis", false, X, X},
    {"AX-10", "mapped elements are reached by mapped navigations", false, X, X},
    {"AX-11", "navigations span a tree rooted at the XmlRoot", false, X, X},
};

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

struct Nested {
    GraphId graph;
    GraphId parent;
    const Morphism* morphism;
    bool counted;
    bool quantified;
    std::string location;
};

std::string path_string(const ConditionPath& path) {
    std::string s = "/condition";
    for (int i : path) s += "/" + std::to_string(i);
    return s;
}

void collect_nested(const Condition& c, const GraphId& enclosing, ConditionPath path,
                    std::vector<Nested>& out) {
    std::visit(Overloaded{
                   [](const TrueCondition&) {},
                   [&](const QuantifiedCondition& q) {
                       out.push_back({q.graph, enclosing, &q.morphism, false, true,
                                      path_string(path) + "/morphism"});
                       auto p = path;
                       p.push_back(0);
                       collect_nested(*q.inner, q.graph, p, out);
                   },
                   [&](const Formula& f) {
                       auto l = path, r = path;
                       l.push_back(0);
                       r.push_back(1);
                       collect_nested(*f.left, enclosing, l, out);
                       collect_nested(*f.right, enclosing, r, out);
                   },
                   [&](const NotCondition& n) {
                       auto p = path;
                       p.push_back(0);
                       collect_nested(*n.inner, enclosing, p, out);
                   },
                   [&](const CountCondition& cc) {
                       out.push_back({cc.count.graph, enclosing, &cc.count.morphism, true, false,
                                      path_string(path) + "/count/morphism"});
                       auto p = path;
                       p.push_back(0);
                       collect_nested(*cc.count.inner, cc.count.graph, p, out);
                       if (auto* other = std::get_if<Box<CountPattern>>(&cc.argument)) {
                           out.push_back({(*other)->graph, enclosing, &(*other)->morphism, true,
                                          false, path_string(path) + "/argument/morphism"});
                           auto a = path;
                           a.push_back(1);
                           collect_nested(*(*other)->inner, (*other)->graph, a, out);
                       }
                   },
               },
               c.node);
}

class Validator {
public:
    Validator(const CompletePattern& p, AbstractionLevel level) : p_(p), level_(level) {
        collect_nested(p.condition(), p.outer_graph().id, {}, nested_);
        compute_parameter_use();
    }

    std::vector<ConstraintViolation> run() {
        check_structure();
        check_morphisms();
        for (const auto& g : p_.graphs()) {
            check_graph(g);
            check_operators(g);
            if (level_ != AbstractionLevel::Generic) check_xml(g);
        }
        check_parameters();
        return std::move(out_);
    }

private:
    void report(std::string_view id, std::string location, std::string message) {
        const ConstraintInfo* info = find_constraint(id);
        if (!info) return;
        bool applies = (level_ == AbstractionLevel::Generic && info->generic) ||
                       (level_ == AbstractionLevel::AbstractXml && info->abstract_xml) ||
                       (level_ == AbstractionLevel::Concrete && info->concrete);
        if (!applies) return;
        ConstraintViolation v;
        v.constraint_id = std::string(id);
        v.location = std::move(location);
        v.message = std::move(message);
        if (info->generic) v.levels.push_back(AbstractionLevel::Generic);
        if (info->abstract_xml) v.levels.push_back(AbstractionLevel::AbstractXml);
        if (info->concrete) v.levels.push_back(AbstractionLevel::Concrete);
        out_.push_back(std::move(v));
    }

    static std::string loc(const Graph& g) { return "/graphs/" + g.id.str(); }
    static std::string loc(const Graph& g, const Element& e) {
        return loc(g) + "/elements/" + e.id.str();
    }
    static std::string loc(const Graph& g, const Relation& r) {
        return loc(g) + "/relations/" + r.id.str();
    }
    static std::string loc(const Graph& g, const Operator& o) {
        return loc(g) + "/operators/" + o.id.str();
    }
    static std::string loc(const Parameter& par) { return "/parameters/" + par.name; }

    const Graph* graph_ptr(const GraphId& id) const {
        for (const auto& g : p_.graphs())
            if (g.id == id) return &g;
        return nullptr;
    }

    // ------------------------------------------------------------ structure

    void check_structure() {
        const Graph& outer = p_.outer_graph();
        if (outer.return_elements.empty())
            report("GS-01", loc(outer), "outermost graph has no return elements");

        std::set<std::string> ids;
        auto unique = [&](const std::string& id, const std::string& where) {
            if (!ids.insert(id).second) report("GS-11", where, "duplicate identifier '" + id + "'");
        };
        for (const auto& g : p_.graphs()) {
            unique(g.id.str(), loc(g));
            for (const auto& e : g.elements) {
                unique(e.id.str(), loc(g, e));
                for (const auto& pr : e.properties)
                    unique(pr.id.str(), loc(g, e) + "/properties/" + pr.id.str());
            }
            for (const auto& r : g.relations) unique(r.id.str(), loc(g, r));
            for (const auto& o : g.operators) unique(o.id.str(), loc(g, o));
        }
        for (const auto& par : p_.parameters()) unique(par.id.str(), loc(par));
    }

    void check_morphisms() {
        const GraphId outer = p_.outer_graph().id;
        for (const auto& n : nested_) {
            const Morphism& m = *n.morphism;
            if (m.source != n.parent)
                report("PS-01", n.location,
                       "source graph '" + m.source.str() + "' is not the enclosing graph '" +
                           n.parent.str() + "'");
            if (m.target != n.graph)
                report("PS-02", n.location,
                       "target graph '" + m.target.str() + "' is not '" + n.graph.str() + "'");
            if (m.target == outer || n.graph == outer)
                report("GS-07", n.location, "the outermost graph is a mapping target");

            const Graph* src = graph_ptr(n.parent);
            const Graph* tgt = graph_ptr(n.graph);
            if (!src || !tgt) continue;

            std::set<ElementId> sources, targets;
            for (const auto& [s, t] : m.element_mappings) {
                if (!src->contains(s) || !tgt->contains(t))
                    report("PS-03", n.location,
                           "element mapping " + s.str() + "->" + t.str() +
                               " leaves the morphism's graphs");
                if (!sources.insert(s).second)
                    report("PS-05", n.location, "element '" + s.str() + "' is mapped twice");
                if (!targets.insert(t).second)
                    report("GS-07", n.location,
                           "element '" + t.str() + "' is the target of two mappings");
                if (level_ != AbstractionLevel::Generic) {
                    const Element* se = src->find_element(s);
                    const Element* te = tgt->find_element(t);
                    if (se && te && se->kind != te->kind)
                        report("AX-06", n.location,
                               "element mapping " + s.str() + "->" + t.str() +
                                   " changes the element subkind");
                }
            }
            std::set<RelationId> rel_sources;
            for (const auto& [s, t] : m.relation_mappings) {
                const Relation* rs = src->find_relation(s);
                const Relation* rt = tgt->find_relation(t);
                if (!rs || !rt) {
                    report("PS-04", n.location,
                           "relation mapping " + s.str() + "->" + t.str() +
                               " leaves the morphism's graphs");
                    continue;
                }
                if (!rel_sources.insert(s).second)
                    report("PS-05", n.location, "relation '" + s.str() + "' is mapped twice");
                if (m.image(rs->source) != rt->source || m.image(rs->target) != rt->target)
                    report("GS-08", n.location,
                           "relation mapping " + s.str() + "->" + t.str() +
                               " lacks matching endpoint mappings");
                if (level_ != AbstractionLevel::Generic &&
                    (rs->kind != rt->kind || rs->kind == RelationKind::XmlReference))
                    report("AX-06", n.location,
                           "relation mapping " + s.str() + "->" + t.str() +
                               " must map a navigation onto a navigation");
            }
            if (n.counted) {
                bool fresh = std::any_of(tgt->elements.begin(), tgt->elements.end(),
                                         [&](const Element& e) {
                                             return e.kind != ElementKind::XmlRoot &&
                                                    !m.preimage(e.id);
                                         });
                if (!fresh) report("PS-06", loc(*tgt), "count pattern has nothing to count");
            }
            if (n.quantified) {
                std::set<ElementId> expected;
                for (const auto& r : src->return_elements)
                    if (auto img = m.image(r)) expected.insert(*img);
                std::set<ElementId> actual(tgt->return_elements.begin(),
                                           tgt->return_elements.end());
                if (expected != actual)
                    report("GS-03", loc(*tgt),
                           "return elements do not correspond to those of graph '" +
                               n.parent.str() + "'");
            }
        }
    }

    void check_graph(const Graph& g) {
        if (g.elements.empty()) report("GS-10", loc(g), "graph has no elements");
        for (const auto& r : g.return_elements)
            if (!g.contains(r))
                report("GS-02", loc(g), "return element '" + r.str() + "' is not in the graph");
        for (const auto& r : g.relations)
            if (!g.contains(r.source) || !g.contains(r.target))
                report("GS-09", loc(g, r), "relation endpoint outside the graph");

        bool generic = level_ == AbstractionLevel::Generic;
        int roots = 0;
        for (const auto& e : g.elements) {
            if (e.kind == ElementKind::XmlRoot) ++roots;
            if (generic && e.kind != ElementKind::Generic)
                report("GS-04", loc(g, e), "XML-adapted element in a generic pattern");
            if (!generic && e.kind == ElementKind::Generic)
                report("GS-06", loc(g, e), "generic element in an XML-level pattern");
            for (const auto& pr : e.properties) {
                if (generic && pr.subkind != PropertySubkind::Generic)
                    report("GS-04", loc(g, e) + "/properties/" + pr.id.str(),
                           "XmlProperty in a generic pattern");
                if (!generic && pr.subkind == PropertySubkind::Generic)
                    report("GS-06", loc(g, e) + "/properties/" + pr.id.str(),
                           "generic property in an XML-level pattern");
            }
        }
        for (const auto& r : g.relations) {
            if (generic && r.kind != RelationKind::Generic)
                report("GS-04", loc(g, r), "XML-adapted relation in a generic pattern");
            if (!generic && r.kind == RelationKind::Generic)
                report("GS-06", loc(g, r), "generic relation in an XML-level pattern");
        }
        if (!generic && roots != 1)
            report("GS-05", loc(g), "graph has " + std::to_string(roots) + " XmlRoot elements");
    }

    // ------------------------------------------------------------ operators

    void check_operators(const Graph& g) {
        for (const auto& op : g.operators) {
            const bool enabled = operator_enabled(p_, op);
            if (enabled && predicate_elements(p_, g, op).empty())
                report("OP-02", loc(g, op), "predicate does not constrain any element");
            check_operator_cycle(g, op);
            if (auto* c = std::get_if<Comparison>(&op.body)) check_comparison(g, op, *c, enabled);
            else check_match(g, op, std::get<Match>(op.body));
        }
    }

    void check_operand(const Graph& g, const Operator& op, const Comparable& c) {
        std::visit(
            Overloaded{
                [&](const ElementId& e) {
                    if (g.contains(e)) return;
                    if (p_.find_element(e))
                        report("OP-01", loc(g, op), "operand '" + e.str() + "' is in another graph");
                    else
                        report("OP-08", loc(g, op), "operand '" + e.str() + "' does not exist");
                },
                [&](const PropertyId& pr) {
                    if (g.property_owner(pr)) return;
                    if (p_.find_property(pr).property)
                        report("OP-01", loc(g, op), "operand '" + pr.str() + "' is in another graph");
                    else
                        report("OP-08", loc(g, op), "operand '" + pr.str() + "' does not exist");
                },
                [&](const OperatorId& o) {
                    if (g.find_operator(o)) return;
                    if (p_.find_operator(o))
                        report("OP-07", loc(g, op),
                               "operand '" + o.str() + "' is in another operator list");
                    else
                        report("OP-08", loc(g, op), "operand '" + o.str() + "' does not exist");
                },
                [&](const ParameterId& par) {
                    const Parameter* pp = p_.find_parameter(par);
                    if (!pp) {
                        report("OP-08", loc(g, op), "parameter '" + par.str() + "' does not exist");
                        return;
                    }
                    if (is_option_parameter(pp->body))
                        report("OP-09", loc(g, op),
                               "operand parameter '" + pp->name + "' is not a value parameter");
                },
            },
            c);
    }

    static std::optional<ValueType> implied_type(const ParameterBody& b) {
        return std::visit(
            Overloaded{
                [](const TextLiteral&) -> std::optional<ValueType> { return ValueType::String; },
                [](const TextList&) -> std::optional<ValueType> { return ValueType::String; },
                [](const NumberValue&) -> std::optional<ValueType> { return ValueType::Number; },
                [](const BooleanValue&) -> std::optional<ValueType> { return ValueType::Boolean; },
                [](const DateValue&) -> std::optional<ValueType> { return ValueType::Date; },
                [](const TimeValue&) -> std::optional<ValueType> { return ValueType::Time; },
                [](const DateTimeValue&) -> std::optional<ValueType> {
                    return ValueType::DateTime;
                },
                [](const auto&) -> std::optional<ValueType> { return std::nullopt; },
            },
            b);
    }

    void check_comparison(const Graph& g, const Operator& op, const Comparison& c, bool enabled) {
        check_operand(g, op, c.left);
        check_operand(g, op, c.right);

        const Parameter* par = p_.find_parameter(c.op_param);
        if (!par) {
            report("OP-08", loc(g, op), "operator parameter '" + c.op_param.str() + "' does not exist");
        } else if (!std::holds_alternative<ComparisonOptions>(par->body)) {
            report("OP-09", loc(g, op), "operator parameter '" + par->name + "' is not a comparison option");
        } else {
            const auto& opts = std::get<ComparisonOptions>(par->body);
            bool elementwise = std::holds_alternative<ElementId>(c.left) &&
                               std::holds_alternative<ElementId>(c.right);
            bool ordering = std::any_of(opts.options.begin(), opts.options.end(), is_ordering) ||
                            (opts.value && is_ordering(*opts.value));
            if (elementwise && ordering)
                report("OP-05", loc(g, op), "element comparison with an ordering operator");
        }

        bool elementwise =
            std::holds_alternative<ElementId>(c.left) && std::holds_alternative<ElementId>(c.right);
        for (const Comparable* side : {&c.left, &c.right}) {
            if (std::holds_alternative<OperatorId>(*side) && c.value_type != ValueType::Boolean &&
                c.value_type != ValueType::Unspecified)
                report("OP-03", loc(g, op), "operator operands are compared as BOOLEAN");
            if (auto* pid = std::get_if<ParameterId>(side)) {
                const Parameter* pp = p_.find_parameter(*pid);
                if (!pp) continue;
                auto t = implied_type(pp->body);
                if (t && c.value_type != ValueType::Unspecified && *t != c.value_type)
                    report("OP-03", loc(g, op),
                           "value type " + std::string(to_string(c.value_type)) +
                               " disagrees with parameter '" + pp->name + "'");
            }
        }
        if (enabled && !elementwise && c.value_type == ValueType::Unspecified)
            report("OP-04", loc(g, op), "comparison has no value type");
    }

    void check_match(const Graph& g, const Operator& op, const Match& m) {
        if (!g.property_owner(m.property)) {
            if (p_.find_property(m.property).property)
                report("OP-01", loc(g, op), "matched property is in another graph");
            else
                report("OP-08", loc(g, op), "matched property '" + m.property.str() + "' does not exist");
        }
        const Parameter* par = p_.find_parameter(m.regex_param);
        if (!par) {
            report("OP-08", loc(g, op), "regex parameter '" + m.regex_param.str() + "' does not exist");
            return;
        }
        auto* lit = std::get_if<TextLiteral>(&par->body);
        if (!lit) {
            report("OP-09", loc(g, op), "regex parameter '" + par->name + "' is not a text literal");
            return;
        }
        if (lit->value && !compile_regex(*lit->value))
            report("OP-10", loc(g, op), "regular expression '" + *lit->value + "' does not compile");
    }

    void check_operator_cycle(const Graph& g, const Operator& start) {
        // Depth-first search for a path back to `start` through operator operands.
        std::set<OperatorId> seen;
        std::vector<const Operator*> stack{&start};
        bool first = true;
        while (!stack.empty()) {
            const Operator* cur = stack.back();
            stack.pop_back();
            if (!first && cur->id == start.id) {
                report("OP-06", loc(g, start), "operator refers to itself through its operands");
                return;
            }
            first = false;
            if (!seen.insert(cur->id).second) continue;
            if (auto* c = std::get_if<Comparison>(&cur->body))
                for (const Comparable* side : {&c->left, &c->right})
                    if (auto* oid = std::get_if<OperatorId>(side))
                        if (const Operator* next = g.find_operator(*oid)) {
                            if (next->id == start.id) {
                                report("OP-06", loc(g, start),
                                       "operator refers to itself through its operands");
                                return;
                            }
                            stack.push_back(next);
                        }
        }
    }

    // ---------------------------------------------------------- XML checks

    void check_xml(const Graph& g) {
        const Morphism* m = p_.morphism_into(g.id);
        const Element* root = g.root();

        std::map<ElementId, int> incoming_nav;
        for (const auto& r : g.relations) {
            const Element* s = g.find_element(r.source);
            const Element* t = g.find_element(r.target);
            if (!s || !t) continue;
            if (t->kind == ElementKind::XmlRoot)
                report("AX-02", loc(g, r), "relation into the XmlRoot");
            if (r.kind == RelationKind::XmlNavigation) {
                ++incoming_nav[r.target];
                bool mapped = m && m->relation_preimage(r.id).has_value();
                if (mapped && !r.axis_param.empty())
                    report("AX-05", loc(g, r), "mapped navigation carries its own axis");
                if (!mapped && r.axis_param.empty())
                    report("AX-05", loc(g, r), "navigation without axis parameter");
                if (!r.axis_param.empty()) {
                    const Parameter* ap = p_.find_parameter(r.axis_param);
                    if (!ap) {
                        report("PAR-01", loc(g, r), "axis parameter '" + r.axis_param.str() + "' does not exist");
                    } else if (auto* ax = std::get_if<AxisOptions>(&ap->body)) {
                        check_depth(g, r, *ax);
                    } else {
                        report("OP-09", loc(g, r), "axis parameter '" + ap->name + "' has the wrong kind");
                    }
                }
                bool target_mapped = m && m->preimage(r.target).has_value();
                if (target_mapped != mapped)
                    report("AX-10", loc(g, r),
                           target_mapped ? "navigation into a mapped element is not mapped"
                                         : "mapped navigation leads to an unmapped element");
            } else if (r.kind == RelationKind::XmlReference) {
                if (s->kind == ElementKind::XmlRoot)
                    report("AX-03", loc(g, r), "reference leaving the XmlRoot");
                auto owns = [](const Element* el, const PropertyId& p) {
                    return std::any_of(el->properties.begin(), el->properties.end(),
                                       [&](const Property& pr) { return pr.id == p; });
                };
                if (!owns(s, r.source_property) || !owns(t, r.target_property))
                    report("AX-07", loc(g, r), "reference property not owned by its endpoint");
                const Parameter* cp = p_.find_parameter(r.comparison_param);
                if (cp && !std::holds_alternative<ComparisonOptions>(cp->body))
                    report("AX-07", loc(g, r), "reference comparison parameter has the wrong kind");
            }
        }
        for (const auto& e : g.elements)
            if (e.kind == ElementKind::XmlElement && incoming_nav[e.id] != 1)
                report("AX-01", loc(g, e),
                       "element has " + std::to_string(incoming_nav[e.id]) +
                           " incoming navigations");

        if (root) {
            for (const auto& op : g.operators) {
                auto elems = predicate_elements(p_, g, op);
                if (std::find(elems.begin(), elems.end(), root->id) != elems.end())
                    report("AX-04", loc(g, op), "predicate on the XmlRoot");
            }
            check_tree(g, *root);
        }

        if (level_ == AbstractionLevel::Concrete)
            for (const auto& e : g.elements)
                for (const auto& pr : e.properties) check_attribute(g, e, pr);
    }

    void check_depth(const Graph& g, const Relation& r, const AxisOptions& ax) {
        if (ax.depth < 1)
            report("AX-09", loc(g, r), "navigation depth must be positive");
        else if (ax.depth > 1 && ax.value && *ax.value != Axis::Child)
            report("AX-09", loc(g, r), "repeated steps require the child axis");
    }

    void check_tree(const Graph& g, const Element& root) {
        std::map<ElementId, std::vector<ElementId>> children;
        for (const auto& r : g.relations)
            if (r.kind == RelationKind::XmlNavigation) children[r.source].push_back(r.target);
        std::set<ElementId> reached;
        std::vector<ElementId> todo{root.id};
        while (!todo.empty()) {
            ElementId cur = todo.back();
            todo.pop_back();
            if (!reached.insert(cur).second) continue;
            for (const auto& c : children[cur]) todo.push_back(c);
        }
        for (const auto& e : g.elements)
            if (!reached.count(e.id))
                report("AX-11", loc(g, e), "element is not reachable from the XmlRoot");
    }

    void check_attribute(const Graph& g, const Element& e, const Property& pr) {
        if (pr.subkind != PropertySubkind::Xml) return;
        const Parameter* kp = p_.find_parameter(pr.kind_param);
        if (!kp) return;
        auto* kind = std::get_if<PropertyKindOptions>(&kp->body);
        if (!kind || kind->value != PropertyKind::Attribute) return;
        if (!property_in_use(pr.id)) return;
        const Parameter* ap = p_.find_parameter(pr.attribute_param);
        auto* lit = ap ? std::get_if<TextLiteral>(&ap->body) : nullptr;
        if (!lit || !lit->value || lit->value->empty())
            report("AX-08", loc(g, e) + "/properties/" + pr.id.str(),
                   "attribute property without attribute name");
    }

    // ----------------------------------------------------------- parameters

    // Parameters that only disabled comparisons refer to, and properties that
    // nothing active refers to, are exempt from the completeness checks.
    void compute_parameter_use() {
        for (const auto& g : p_.graphs()) {
            for (const auto& r : g.relations) {
                mark(r.axis_param);
                mark(r.comparison_param);
                if (r.kind == RelationKind::XmlReference) {
                    used_properties_.insert(r.source_property);
                    used_properties_.insert(r.target_property);
                }
            }
            for (const auto& op : g.operators) {
                if (!operator_enabled(p_, op)) continue;
                if (auto* c = std::get_if<Comparison>(&op.body)) {
                    mark(c->op_param);
                    for (const Comparable* side : {&c->left, &c->right}) {
                        if (auto* par = std::get_if<ParameterId>(side)) mark(*par);
                        if (auto* pr = std::get_if<PropertyId>(side)) used_properties_.insert(*pr);
                    }
                } else {
                    const auto& m = std::get<Match>(op.body);
                    mark(m.regex_param);
                    used_properties_.insert(m.property);
                }
            }
        }
        for (const auto& g : p_.graphs())
            for (const auto& e : g.elements)
                for (const auto& pr : e.properties) {
                    attribute_params_.insert(pr.attribute_param);
                    if (property_in_use(pr.id)) mark(pr.kind_param);
                }
    }

    void mark(const ParameterId& id) {
        if (!id.empty()) active_.insert(id);
    }

    bool property_in_use(const PropertyId& id) const { return used_properties_.count(id) > 0; }

    void check_parameters() {
        auto referenced = referenced_parameters(p_);
        std::set<ParameterId> ref_set(referenced.begin(), referenced.end());
        for (const auto& id : referenced)
            if (!p_.find_parameter(id))
                report("PAR-01", "/parameters", "parameter '" + id.str() + "' is not in the list");

        std::set<std::string> names;
        for (const auto& par : p_.parameters()) {
            if (!ref_set.count(par.id))
                report("PAR-02", loc(par), "parameter is not referenced");
            if (!names.insert(par.name).second)
                report("PAR-09", loc(par), "duplicate parameter name");
            if (par.predefined && !has_value(par.body))
                report("PAR-08", loc(par), "predefined parameter without value");

            const bool active = active_.count(par.id) > 0;
            const bool attribute_name = attribute_params_.count(par.id) > 0;
            if (active && std::holds_alternative<UnknownValue>(par.body))
                report("PAR-03", loc(par), "UnknownParameterValue in a concrete pattern");
            else if (active && !attribute_name && !has_value(par.body))
                report("PAR-04", loc(par), "parameter has no value");

            std::visit(Overloaded{
                           [&](const ComparisonOptions& o) { check_options(par, o); },
                           [&](const AxisOptions& o) { check_options(par, o); },
                           [&](const PropertyKindOptions& o) { check_options(par, o); },
                           [&](const DateValue& d) {
                               if (d.value && !is_xsd_date(*d.value))
                                   report("PAR-05", loc(par), "'" + *d.value + "' is not an xs:date");
                           },
                           [&](const TimeValue& d) {
                               if (d.value && !is_xsd_time(*d.value))
                                   report("PAR-05", loc(par), "'" + *d.value + "' is not an xs:time");
                           },
                           [&](const DateTimeValue& d) {
                               if (d.value && !is_xsd_datetime(*d.value))
                                   report("PAR-05", loc(par),
                                          "'" + *d.value + "' is not an xs:dateTime");
                           },
                           [](const auto&) {},
                       },
                       par.body);
        }
    }

    template <class O>
    void check_options(const Parameter& par, const O& o) {
        if (o.options.empty()) report("PAR-06", loc(par), "option parameter without options");
        if (o.value && std::find(o.options.begin(), o.options.end(), *o.value) == o.options.end())
            report("PAR-07", loc(par),
                   "value " + std::string(to_string(*o.value)) + " is not among the options");
    }

    const CompletePattern& p_;
    AbstractionLevel level_;
    std::vector<Nested> nested_;
    std::set<ParameterId> active_;
    std::set<ParameterId> attribute_params_;
    std::set<PropertyId> used_properties_;
    std::vector<ConstraintViolation> out_;
};

}  // namespace

const std::vector<ConstraintInfo>& constraint_registry() { return kRegistry; }

const ConstraintInfo* find_constraint(std::string_view id) {
    for (const auto& c : kRegistry)
        if (c.id == id) return &c;
    return nullptr;
}

std::vector<ConstraintViolation> validate(const CompletePattern& pattern, AbstractionLevel level) {
    return Validator(pattern, level).run();
}

std::string format_violation(const ConstraintViolation& v) {
    return v.constraint_id + " " + v.location + " " + v.message;
}

}  // namespace dqp
