#include "dqp/catalog.hpp"

#include <map>

#include "dqp/errors.hpp"

namespace dqp {

namespace {

const std::vector<ComparisonOp> kAllOps{ComparisonOp::Equal,   ComparisonOp::NotEqual,
                                        ComparisonOp::Less,    ComparisonOp::LessEq,
                                        ComparisonOp::Greater, ComparisonOp::GreaterEq};

class Builder {
public:
    explicit Builder(std::string name)
        : p(std::move(name), AbstractionLevel::Generic), outer(p.outer_graph().id) {}

    CompletePattern p;
    GraphId outer;

    template <class Body>
    ParameterId param(const std::string& name, Body body, bool predefined = false) {
        if (const Parameter* existing = p.find_parameter(std::string_view(name))) return existing->id;
        return p.add_parameter(name, std::move(body), predefined);
    }

    ParameterId fixed(const std::string& name, ComparisonOp op) {
        return param(name, ComparisonOptions{{op}, op, true}, true);
    }

    // Record element identified by its own property: Property<n> COMP<n> Value<n>.
    ElementId element(const GraphId& g, const std::string& n) {
        ElementId e = p.add_element(g, n);
        PropertyId pr = p.add_property(e, n);
        p.add_comparison(g, pr, param("Value" + n, TextLiteral{}), fixed("COMP" + n, ComparisonOp::Equal),
                         ValueType::String);
        return e;
    }

    // Returned record element of the outer graph.
    ElementId record() {
        ElementId e = element(outer, "0");
        p.add_return_element(outer, e);
        return e;
    }

    ElementId child(const GraphId& g, const ElementId& parent, const std::string& n) {
        ElementId e = element(g, n);
        up_[e] = p.add_relation(g, parent, e, name_of(parent) + "-" + n);
        return e;
    }

    // Copies `chain` (ancestors first) together with the relations between them.
    std::vector<ElementId> map_chain(const GraphId& g, const std::vector<ElementId>& chain) {
        std::vector<ElementId> out;
        for (const auto& e : chain) out.push_back(p.map_element(g, e));
        for (std::size_t i = 0; i < chain.size(); ++i)
            if (auto it = up_.find(chain[i]); it != up_.end()) up_[out[i]] = p.map_relation(g, it->second);
        return out;
    }

    ElementId map(const GraphId& g, const ElementId& e) { return map_chain(g, {e}).front(); }

    // Open comparison of a new property against an untyped literal.
    void compare_value(const GraphId& g, const ElementId& owner, const std::string& n) {
        PropertyId pr = p.add_property(owner, n);
        p.add_comparison(g, pr, param("Value" + n, UnknownValue{}), param("COMP" + n, ComparisonOptions{kAllOps, {}}),
                         ValueType::Unspecified);
    }

    void match(const GraphId& g, const ElementId& owner, const std::string& n) {
        PropertyId pr = p.add_property(owner, n);
        p.add_match(g, pr, param("Value" + n, TextLiteral{}));
    }

    void compare_properties(const GraphId& g, const ElementId& l, const std::string& ln,
                            const ElementId& r, const std::string& rn, const ParameterId& op) {
        PropertyId lp = p.add_property(l, ln);
        PropertyId rp = p.add_property(r, rn);
        p.add_comparison(g, lp, rp, op, ValueType::String);
    }

    RelationId reference(const GraphId& g, const ElementId& s, const ElementId& t, std::string name) {
        return p.add_relation(g, s, t, std::move(name));
    }

private:
    std::string name_of(const ElementId& e) const { return p.find_element(e)->name; }
    std::map<ElementId, RelationId> up_;
};

CompletePattern match1() {
    Builder b("MATCH1");
    ElementId e0 = b.record();
    GraphId g = b.p.add_quantified({}, Quantifier::Exists);
    ElementId e0m = b.map(g, e0);
    ElementId e1 = b.child(g, e0m, "1");
    b.match(g, e1, "A");
    return std::move(b.p);
}

CompletePattern match2() {
    Builder b("MATCH2");
    ElementId e0 = b.record();
    GraphId g = b.p.add_quantified({}, Quantifier::Exists);
    ElementId e1 = b.child(g, b.map(g, e0), "1");
    ElementId e2 = b.child(g, e1, "2");
    b.match(g, e2, "A");
    return std::move(b.p);
}

CompletePattern comp() {
    Builder b("COMP");
    ElementId e0 = b.record();
    GraphId g = b.p.add_quantified({}, Quantifier::Exists);
    ElementId e0m = b.map(g, e0);
    ElementId e1 = b.child(g, e0m, "1");
    ElementId e2 = b.child(g, e0m, "2");
    b.compare_properties(g, e1, "A", e2, "B", b.param("COMPA", ComparisonOptions{kAllOps, {}}));
    return std::move(b.p);
}

CompletePattern compval1() {
    Builder b("COMPVAL1");
    ElementId e0 = b.record();
    GraphId g = b.p.add_quantified({}, Quantifier::Exists);
    ElementId e1 = b.child(g, b.map(g, e0), "1");
    b.compare_value(g, e1, "2");
    return std::move(b.p);
}

CompletePattern compval2() {
    Builder b("COMPVAL2");
    ElementId e0 = b.record();
    GraphId g = b.p.add_quantified({}, Quantifier::Exists);
    ElementId e1 = b.child(g, b.map(g, e0), "1");
    ElementId e2 = b.child(g, e1, "2");
    b.compare_value(g, e2, "3");
    return std::move(b.p);
}

CompletePattern refint() {
    Builder b("REFINT");
    ElementId e0 = b.record();
    GraphId g1 = b.p.add_quantified({}, Quantifier::Exists);
    ElementId e0m = b.map(g1, e0);
    ElementId e1 = b.child(g1, e0m, "1");
    b.p.add_not({0});
    GraphId g2 = b.p.add_quantified({0, 0}, Quantifier::Exists);
    auto chain = b.map_chain(g2, {e0m, e1});
    ElementId e2 = b.element(g2, "2");
    b.reference(g2, chain[1], e2, "A");
    return std::move(b.p);
}

CompletePattern card1() {
    Builder b("CARD1");
    ElementId e0 = b.record();
    GraphId g = b.p.add_count_condition({}, ComparisonOp::Greater, NumberElement{1});
    b.child(g, b.map(g, e0), "1");
    return std::move(b.p);
}

CompletePattern card2() {
    Builder b("CARD2");
    ElementId e0 = b.record();
    GraphId g1 = b.p.add_quantified({}, Quantifier::Exists);
    ElementId e0m = b.map(g1, e0);
    ElementId e1 = b.child(g1, e0m, "1");
    GraphId g2 = b.p.add_count_condition({0}, ComparisonOp::Greater, NumberElement{1});
    auto chain = b.map_chain(g2, {e0m, e1});
    b.child(g2, chain[1], "2");
    return std::move(b.p);
}

CompletePattern func1() {
    Builder b("FUNC1");
    ElementId e0 = b.record();
    GraphId g = b.p.add_quantified({}, Quantifier::Exists);
    ElementId e0m = b.map(g, e0);
    ElementId e2 = b.child(g, e0m, "2");
    ElementId e4 = b.child(g, e0m, "4");
    ElementId e1 = b.element(g, "1");
    ElementId e3 = b.child(g, e1, "3");
    ElementId e5 = b.child(g, e1, "5");
    b.compare_properties(g, e2, "A", e3, "A", b.fixed("COMPA", ComparisonOp::Equal));
    b.compare_properties(g, e4, "B", e5, "B", b.fixed("COMPB", ComparisonOp::NotEqual));
    return std::move(b.p);
}

CompletePattern func2() {
    Builder b("FUNC2");
    ElementId e0 = b.record();
    GraphId g = b.p.add_quantified({}, Quantifier::Exists);
    ElementId a1 = b.child(g, b.map(g, e0), "1");
    ElementId a2 = b.child(g, a1, "2");
    ElementId a3 = b.child(g, a1, "3");
    ElementId b0 = b.element(g, "0");
    ElementId b1 = b.child(g, b0, "1");
    ElementId b2 = b.child(g, b1, "2");
    ElementId b3 = b.child(g, b1, "3");
    b.compare_properties(g, a2, "A", b2, "A", b.fixed("COMPA", ComparisonOp::Equal));
    b.compare_properties(g, a3, "B", b3, "B", b.fixed("COMPB", ComparisonOp::NotEqual));
    return std::move(b.p);
}

CompletePattern unique1() {
    Builder b("UNIQUE1");
    ElementId e0 = b.record();
    GraphId g1 = b.p.add_quantified({}, Quantifier::Exists);
    ElementId e0m = b.map(g1, e0);
    ElementId e1 = b.child(g1, e0m, "1");
    GraphId g2 = b.p.add_count_condition({0}, ComparisonOp::Greater, NumberElement{1});
    auto chain = b.map_chain(g2, {e0m, e1});
    ElementId e2 = b.element(g2, "0");
    ElementId e3 = b.child(g2, e2, "1");
    b.compare_properties(g2, chain[1], "2", e3, "2", b.fixed("COMP2", ComparisonOp::Equal));
    return std::move(b.p);
}

CompletePattern unique2() {
    Builder b("UNIQUE2");
    ElementId e0 = b.record();
    GraphId g1 = b.p.add_quantified({}, Quantifier::Exists);
    ElementId e0m = b.map(g1, e0);
    ElementId e1 = b.child(g1, e0m, "1");
    ElementId e2 = b.child(g1, e1, "2");
    ElementId e3 = b.child(g1, e2, "3");
    GraphId g2 = b.p.add_count_condition({0}, ComparisonOp::Greater, NumberElement{1});
    auto chain = b.map_chain(g2, {e0m, e1, e2, e3});
    ElementId e4 = b.child(g2, chain[1], "2");
    ElementId e5 = b.child(g2, e4, "3");
    b.compare_properties(g2, chain[3], "A", e5, "A", b.fixed("COMPA", ComparisonOp::Equal));
    return std::move(b.p);
}

CompletePattern mand1() {
    Builder b("MAND1");
    ElementId e0 = b.record();
    auto [left, right] = b.p.add_formula({}, LogicOp::Or);
    ConditionPath neg = b.p.add_not(left);
    GraphId g1 = b.p.add_quantified(neg, Quantifier::Exists);
    b.child(g1, b.map(g1, e0), "1");
    GraphId g2 = b.p.add_quantified(right, Quantifier::Exists);
    ElementId e1b = b.child(g2, b.map(g2, e0), "1");
    b.compare_value(g2, e1b, "2");
    return std::move(b.p);
}

CompletePattern mand2() {
    Builder b("MAND2");
    ElementId e0 = b.record();
    GraphId g1 = b.p.add_quantified({}, Quantifier::Exists);
    ElementId e0m = b.map(g1, e0);
    ElementId e1 = b.child(g1, e0m, "1");
    auto [left, right] = b.p.add_formula({0}, LogicOp::Or);
    ConditionPath neg = b.p.add_not(left);
    GraphId g2 = b.p.add_quantified(neg, Quantifier::Exists);
    auto c2 = b.map_chain(g2, {e0m, e1});
    b.child(g2, b.child(g2, c2[1], "2"), "3");
    GraphId g3 = b.p.add_quantified(right, Quantifier::Exists);
    auto c3 = b.map_chain(g3, {e0m, e1});
    ElementId e3b = b.child(g3, b.child(g3, c3[1], "2"), "3");
    b.compare_value(g3, e3b, "4");
    return std::move(b.p);
}

CompletePattern mandstruc1() {
    Builder b("MANDSTRUC1");
    ElementId e0 = b.record();
    ConditionPath neg = b.p.add_not({});
    GraphId g = b.p.add_quantified(neg, Quantifier::Exists);
    b.child(g, b.child(g, b.map(g, e0), "1"), "2");
    return std::move(b.p);
}

CompletePattern mandstruc2() {
    Builder b("MANDSTRUC2");
    ElementId e0 = b.record();
    GraphId g1 = b.p.add_quantified({}, Quantifier::Exists);
    ElementId e0m = b.map(g1, e0);
    ElementId e1 = b.child(g1, e0m, "1");
    ConditionPath neg = b.p.add_not({0});
    GraphId g2 = b.p.add_quantified(neg, Quantifier::Exists);
    auto chain = b.map_chain(g2, {e0m, e1});
    b.child(g2, chain[1], "2");
    return std::move(b.p);
}

CompletePattern contrel() {
    Builder b("CONTREL");
    ElementId e0 = b.record();
    GraphId g = b.p.add_quantified({}, Quantifier::Exists);
    ElementId e0m = b.map(g, e0);
    ElementId e1 = b.child(g, e0m, "1");
    ElementId e2 = b.child(g, e1, "2");
    ElementId e3 = b.child(g, e1, "3");
    ElementId e4 = b.element(g, "4");
    ElementId e5 = b.child(g, e4, "5");
    ElementId e6 = b.child(g, e5, "6");
    ElementId e7 = b.child(g, e5, "7");
    b.reference(g, e2, e4, "B");
    b.reference(g, e6, e0m, "C");
    b.compare_properties(g, e3, "A1", e7, "A2", b.param("COMPA", ComparisonOptions{kAllOps, {}}));
    return std::move(b.p);
}

CompletePattern exdup() {
    Builder b("EXDUP");
    ElementId e0 = b.record();
    GraphId g = b.p.add_count_condition({}, ComparisonOp::Greater, NumberElement{1});
    ElementId e0m = b.map(g, e0);
    ElementId e1 = b.element(g, "0");
    b.p.add_comparison(g, e0m, e1, b.fixed("COMP", ComparisonOp::Equal), ValueType::Unspecified);
    return std::move(b.p);
}

CompletePattern appdup() {
    Builder b("APPDUP");
    ElementId e0 = b.record();
    GraphId g1 = b.p.add_quantified({}, Quantifier::Exists);
    ElementId e0m = b.map(g1, e0);
    ElementId e1 = b.child(g1, e0m, "1");
    ElementId e2 = b.child(g1, e0m, "2");
    ElementId e3 = b.child(g1, e0m, "3");
    GraphId g2 = b.p.add_count_condition({0}, ComparisonOp::Greater, NumberElement{1});
    auto chain = b.map_chain(g2, {e0m, e1, e2, e3});
    ElementId e4 = b.element(g2, "0");
    ElementId e5 = b.child(g2, e4, "1");
    ElementId e6 = b.child(g2, e4, "2");
    ElementId e7 = b.child(g2, e4, "3");
    const char* ops[] = {"COMPA", "COMPB", "COMPC"};
    ElementId copies[] = {e5, e6, e7};
    for (int i = 0; i < 3; ++i)
        b.p.add_comparison(g2, chain[i + 1], copies[i], b.fixed(ops[i], ComparisonOp::Equal),
                           ValueType::Unspecified);
    return std::move(b.p);
}

using Ctor = CompletePattern (*)();

struct Family {
    Ctor build;
    std::vector<std::pair<std::string, RelationDecision>> references;
};

const std::map<CatalogId, Family>& families() {
    static const std::map<CatalogId, Family> m{
        {CatalogId::MATCH1, {match1, {}}},
        {CatalogId::MATCH2, {match2, {}}},
        {CatalogId::COMP, {comp, {}}},
        {CatalogId::COMPVAL1, {compval1, {}}},
        {CatalogId::COMPVAL2, {compval2, {}}},
        {CatalogId::REFINT, {refint, {{"A", RelationDecision::reference("A1", "A2")}}}},
        {CatalogId::CARD1, {card1, {}}},
        {CatalogId::CARD2, {card2, {}}},
        {CatalogId::FUNC1, {func1, {}}},
        {CatalogId::FUNC2, {func2, {}}},
        {CatalogId::UNIQUE1, {unique1, {}}},
        {CatalogId::UNIQUE2, {unique2, {}}},
        {CatalogId::MAND1, {mand1, {}}},
        {CatalogId::MAND2, {mand2, {}}},
        {CatalogId::MANDSTRUC1, {mandstruc1, {}}},
        {CatalogId::MANDSTRUC2, {mandstruc2, {}}},
        {CatalogId::CONTREL,
         {contrel,
          {{"B", RelationDecision::reference("B1", "C2")},
           {"C", RelationDecision::reference("B2", "C1")}}}},
        {CatalogId::EXDUP, {exdup, {}}},
        {CatalogId::APPDUP, {appdup, {}}},
    };
    return m;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries{
        {CatalogId::MATCH1, "MATCH1", "check a property of a contained element against a given regular expression",
         {"wrong datatype", "imprecise numerical values", "abbreviations", "misfielded values", "extraneous data",
          "heterogeneous measure units", "doubtful data"}},
        {CatalogId::MATCH2, "MATCH2",
         "check a property of an indirectly contained element against a given regular expression",
         {"wrong datatype", "abbreviations"}},
        {CatalogId::COMP, "COMP", "compares two values that are indirectly related to one record",
         {"information in multiple locations"}},
        {CatalogId::COMPVAL1, "COMPVAL1", "compare a value in the data with a literal value",
         {"domain violation", "dummy values", "alternative possible values", "abstract terms", "ambiguous values",
          "heterogeneous value representations"}},
        {CatalogId::COMPVAL2, "COMPVAL2", "compare a value of an indirectly contained element with a literal value",
         {"abstract terms", "ambiguous values", "heterogeneous value representations"}},
        {CatalogId::REFINT, "REFINT", "detect referential integrity violations", {"referential integrity violation"}},
        {CatalogId::CARD1, "CARD1", "check whether a certain structure occurs more than once in the data",
         {"alternative possible values"}},
        {CatalogId::CARD2, "CARD2", "check whether a certain nested structure occurs more than once in the data",
         {"heterogeneous structural representations"}},
        {CatalogId::FUNC1, "FUNC1", "detect violations of functional dependencies",
         {"violation of a functional dependency"}},
        {CatalogId::FUNC2, "FUNC2", "detect violations of functional dependencies between nested fields",
         {"violation of a functional dependency"}},
        {CatalogId::UNIQUE1, "UNIQUE1", "detect unique value violations across records",
         {"unique value violation", "approximate duplicate records"}},
        {CatalogId::UNIQUE2, "UNIQUE2", "detect unique value violations within a record",
         {"information in multiple locations"}},
        {CatalogId::MAND1, "MAND1", "detect missing mandatory attributes", {"missing values"}},
        {CatalogId::MAND2, "MAND2", "detect missing mandatory attributes of nested fields", {"missing values"}},
        {CatalogId::MANDSTRUC1, "MANDSTRUC1", "detect missing mandatory structures in the data",
         {"missing references"}},
        {CatalogId::MANDSTRUC2, "MANDSTRUC2", "detect missing mandatory structures below an existing field",
         {"missing references", "heterogeneous structural representations"}},
        {CatalogId::CONTREL, "CONTREL", "detects contradictory relationships of two records",
         {"contradictory relationships"}},
        {CatalogId::EXDUP, "EXDUP", "detects exact duplicate records via a direct comparison",
         {"exact duplicate records"}},
        {CatalogId::APPDUP, "APPDUP", "detects approximate duplicate records comparing three distinguishing attributes",
         {"approximate duplicate records"}},
    };
    return entries;
}

const CatalogEntry& catalog_entry(CatalogId id) {
    for (const auto& e : catalog_entries())
        if (e.id == id) return e;
    throw PatternError("unknown catalog id");
}

std::optional<CatalogId> parse_catalog_id(std::string_view name) {
    for (const auto& e : catalog_entries())
        if (e.name == name) return e.id;
    return std::nullopt;
}

AdaptionDecisions catalog_decisions(CatalogId id) {
    const Family& s = families().at(id);
    CompletePattern g = s.build();
    AdaptionDecisions out;
    for (const auto& graph : g.graphs())
        for (const auto& r : graph.relations) out[r.name.empty() ? r.id.str() : r.name] = RelationDecision::navigation();
    for (const auto& [name, d] : s.references) out[name] = d;
    return out;
}

CompletePattern instantiate(CatalogId id, AbstractionLevel level) {
    CompletePattern g = families().at(id).build();
    switch (level) {
        case AbstractionLevel::Generic: return g;
        case AbstractionLevel::AbstractXml: return adapt_to_xml(g, catalog_decisions(id));
        default: throw PatternError("catalog patterns exist at GENERIC and ABSTRACT_XML only");
    }
}

CompletePattern instantiate(std::string_view name, AbstractionLevel level) {
    auto id = parse_catalog_id(name);
    if (!id) throw PatternError("unknown catalog pattern '" + std::string(name) + "'");
    return instantiate(*id, level);
}

const std::vector<CoverageRow>& coverage_table() {
    static const std::vector<CoverageRow> rows = [] {
        const std::vector<std::pair<std::string_view, std::string_view>> variants{
            {"illegal values", "wrong datatype"},
            {"illegal values", "domain violation"},
            {"missing data", "missing values"},
            {"missing data", "missing references"},
            {"missing data", "missing records"},
            {"missing data", "dummy values"},
            {"referential integrity violation", "referential integrity violation"},
            {"unique value violation", "unique value violation"},
            {"violation of a functional dependency", "violation of a functional dependency"},
            {"contradictory relationships", "contradictory relationships"},
            {"imprecise data", "alternative possible values"},
            {"imprecise data", "imprecise numerical values"},
            {"imprecise data", "abstract terms"},
            {"imprecise data", "ambiguous values"},
            {"imprecise data", "abbreviations"},
            {"misplaced information", "misfielded values"},
            {"misplaced information", "extraneous data"},
            {"redundant data", "exact duplicate records"},
            {"redundant data", "approximate duplicate records"},
            {"redundant data", "information in multiple locations"},
            {"heterogeneous data", "heterogeneous measure units"},
            {"heterogeneous data", "heterogeneous value representations"},
            {"heterogeneous data", "heterogeneous structural representations"},
            {"misspellings", "misspellings"},
            {"semantically incorrect data", "false values"},
            {"semantically incorrect data", "false references"},
            {"semantically incorrect data", "doubtful data"},
        };
        std::vector<CoverageRow> out;
        for (const auto& [problem, variant] : variants) {
            CoverageRow row{problem, variant, {}};
            for (const auto& e : catalog_entries())
                for (auto v : e.covered_variants)
                    if (v == variant) row.patterns.push_back(e.name);
            out.push_back(std::move(row));
        }
        return out;
    }();
    return rows;
}

CoverageSummary coverage_summary() {
    CoverageSummary s;
    for (const auto& row : coverage_table()) {
        ++s.total;
        if (row.patterns.empty())
            s.uncovered.push_back(row.variant);
        else
            ++s.covered;
    }
    s.ratio = s.total ? double(s.covered) / double(s.total) : 0.0;
    return s;
}

}  // namespace dqp
