#include <algorithm>
#include <filesystem>
#include <random>
#include <set>

#include "doctest.h"
#include "dqp/catalog.hpp"
#include "dqp/concretisation.hpp"
#include "dqp/errors.hpp"
#include "dqp/io.hpp"
#include "dqp/validation.hpp"

using namespace dqp;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = DQP_FIXTURES;

std::string dump(const std::vector<ConstraintViolation>& v) {
    std::string s;
    for (const auto& x : v) s += format_violation(x) + "\n";
    return s;
}

struct Fixture {
    fs::path file;
    CatalogId id;
};

// sources/<variant>_<db>.<PATTERN>.bind
std::vector<Fixture> source_fixtures() {
    std::vector<Fixture> out;
    for (const auto& entry : fs::directory_iterator(kFixtures / "bindings" / "sources")) {
        std::string stem = entry.path().stem().string();
        auto id = parse_catalog_id(stem.substr(stem.find('.') + 1));
        REQUIRE_MESSAGE(id, stem);
        out.push_back({entry.path(), *id});
    }
    std::sort(out.begin(), out.end(), [](const Fixture& a, const Fixture& b) { return a.file < b.file; });
    return out;
}

CompletePattern concrete(CatalogId id, const fs::path& bindings) {
    auto p = instantiate(id, AbstractionLevel::AbstractXml);
    bind_all(p, parse_bindings(read_file(bindings)));
    return finalize(p);
}

}  // namespace

TEST_CASE("binding syntax") {
    auto b = parse_bindings(R"(Property2 = attribute "Value", COMP2 = unequal, Value2 = ("m","f"))");
    REQUIRE(b.size() == 3);
    CHECK(b[0].keys == std::vector<std::string>{"Property2"});
    CHECK(b[0].value == BindingValue::attribute("Value"));
    CHECK(b[1].value == BindingValue::word("unequal"));
    CHECK(b[2].value == BindingValue::tuple({"m", "f"}));

    auto nav = parse_bindings("Nav0 = child3");
    REQUIRE(nav.size() == 1);
    CHECK(nav[0].value == BindingValue::axis_step(Axis::Child, 3));
    CHECK(parse_bindings("Nav1 = descendant-or-self")[0].value ==
          BindingValue::axis_step(Axis::DescendantOrSelf));

    CHECK(parse_bindings("").empty());
    CHECK(parse_bindings("  # only a comment\n\n").empty());
}

TEST_CASE("binding keys expand") {
    CHECK(parse_bindings("Property0 and 1 = name")[0].keys == std::vector<std::string>{"Property0", "Property1"});
    CHECK(parse_bindings("Property0 to 3 = name")[0].keys ==
          std::vector<std::string>{"Property0", "Property1", "Property2", "Property3"});
    CHECK(parse_bindings("PropertyA and B = content")[0].keys == std::vector<std::string>{"PropertyA", "PropertyB"});
    CHECK(parse_bindings("PropertyA1 and A2 = data")[0].keys == std::vector<std::string>{"PropertyA1", "PropertyA2"});
    CHECK(parse_bindings("Nav9 and 10 = child")[0].keys == std::vector<std::string>{"Nav9", "Nav10"});
    CHECK(parse_bindings("COMPA to C = equal")[0].keys == std::vector<std::string>{"COMPA", "COMPB", "COMPC"});
}

TEST_CASE("binding values") {
    auto b = parse_bindings("a = \"say \"\"hi\"\"\"\nb = 2.5\nc = true\nd = ()\ne = \"\\?$\"");
    REQUIRE(b.size() == 5);
    CHECK(b[0].value.text == "say \"hi\"");
    CHECK(b[1].value == BindingValue::num(2.5));
    CHECK(b[2].value == BindingValue::word("true"));
    CHECK(b[3].value == BindingValue::tuple({}));
    CHECK(b[4].value.text == "\\?$");
    CHECK(b[1].line == 2);
}

TEST_CASE("binding syntax errors carry positions") {
    CHECK_THROWS_AS(parse_bindings("Value2 = (\"m\" \"f\")"), ParseError);
    CHECK_THROWS_AS(parse_bindings("Value2 = (\"m\","), ParseError);
    CHECK_THROWS_AS(parse_bindings("Value2 \"m\""), ParseError);
    CHECK_THROWS_AS(parse_bindings("Value2 = \"open"), ParseError);
    CHECK_THROWS_AS(parse_bindings("Property0 or 1 = name"), ParseError);
    CHECK_THROWS_AS(parse_bindings("Value0 = \"a\" \"b\""), ParseError);
    try {
        parse_bindings("Nav0 = child\nValue2 = (\"m\" \"f\")");
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("decision files") {
    auto d = parse_decisions("0-1 = navigation\n0-2 = navigation(child, descendant)\nA = reference(\"A1\", \"A2\")\nB = reference");
    REQUIRE(d.size() == 4);
    CHECK(d["0-1"].axes.size() == 5);
    CHECK(d["0-2"].axes == std::vector<Axis>{Axis::Child, Axis::Descendant});
    CHECK(d["A"].kind == RelationDecision::Kind::Reference);
    CHECK(d["A"].source_property == "A1");
    CHECK(d["B"].source_property.empty());
    CHECK_THROWS_AS(parse_decisions("x = sideways"), ParseError);
    CHECK_THROWS_AS(parse_decisions("x = navigation(upward)"), ParseError);
}

TEST_CASE("listing bindings concretise the running example patterns") {
    for (auto [id, file] : {std::pair{CatalogId::CARD1, "card1_listing.bind"}, {CatalogId::FUNC1, "func1_listing.bind"},
                            {CatalogId::REFINT, "refint_listing.bind"}, {CatalogId::CARD1, "card1_golden.bind"},
                            {CatalogId::FUNC1, "func1_golden.bind"}, {CatalogId::REFINT, "refint_golden.bind"}}) {
        CAPTURE(file);
        auto c = concrete(id, kFixtures / "bindings" / file);
        CHECK(c.level() == AbstractionLevel::Concrete);
        CHECK(c.frozen());
        CHECK(missing_bindings(c).empty());
        for (const auto& par : c.parameters())
            if (par.name.find(".attributeName") == std::string::npos) CHECK_MESSAGE(has_value(par.body), par.name);
    }
}

TEST_CASE("every source binding yields a valid concrete pattern") {
    auto fixtures = source_fixtures();
    CHECK(fixtures.size() == 43);
    for (const auto& f : fixtures) {
        CAPTURE(f.file.filename().string());
        CompletePattern c("x", AbstractionLevel::Concrete);
        REQUIRE_NOTHROW(c = concrete(f.id, f.file));
        auto v = validate(c, AbstractionLevel::Concrete);
        CHECK_MESSAGE(v.empty(), dump(v));
    }
}

TEST_CASE("missing bindings of a fresh abstract pattern") {
    auto p = instantiate(CatalogId::MATCH1, AbstractionLevel::AbstractXml);
    // Oracle: parameters reached from relations and operators, plus the kind
    // parameters of the properties those operators read; none has a value yet.
    std::set<std::string> expected;
    auto note = [&](const ParameterId& id) {
        if (id.empty()) return;
        const Parameter* par = p.find_parameter(id);
        if (!has_value(par->body)) expected.insert(par->name);
    };
    for (const auto& g : p.graphs()) {
        for (const auto& r : g.relations) note(r.axis_param);
        for (const auto& op : g.operators) {
            if (auto* c = std::get_if<Comparison>(&op.body)) {
                note(c->op_param);
                for (const Comparable* side : {&c->left, &c->right}) {
                    if (auto* x = std::get_if<ParameterId>(side)) note(*x);
                    if (auto* x = std::get_if<PropertyId>(side)) note(p.find_property(*x).property->kind_param);
                }
            } else {
                const auto& m = std::get<Match>(op.body);
                note(m.regex_param);
                note(p.find_property(m.property).property->kind_param);
            }
        }
    }
    std::set<std::string> got;
    for (const auto& id : missing_bindings(p)) got.insert(p.find_parameter(id)->name);
    CHECK(got == expected);
    CHECK(got == std::set<std::string>{"Nav0", "Nav1", "Property0", "Value0", "Property1", "Value1", "PropertyA",
                                       "ValueA"});

    try {
        finalize(p);
        FAIL("finalize accepted open parameters");
    } catch (const IncompleteBindingError& e) {
        CHECK(std::find(e.missing().begin(), e.missing().end(), "ValueA") != e.missing().end());
    }
}

TEST_CASE("binding errors") {
    auto p = instantiate(CatalogId::COMPVAL1, AbstractionLevel::AbstractXml);
    CHECK_THROWS_AS(bind(p, "Nope", BindingValue::word("name")), BindingError);
    CHECK_THROWS_AS(bind(p, "COMP0", BindingValue::word("unequal")), BindingError);  // predefined
    CHECK_NOTHROW(bind(p, "COMP0", BindingValue::word("equal")));
    CHECK_THROWS_AS(bind(p, "Property0", BindingValue::word("colour")), BindingError);
    CHECK_THROWS_AS(bind(p, "Nav0", BindingValue::axis_step(Axis::Descendant, 2)), BindingError);
    CHECK_THROWS_AS(bind(p, "Value0", BindingValue::num(3)), BindingError);

    p.add_parameter("When", DateValue{});
    CHECK_THROWS_AS(bind(p, "When", BindingValue::string("2021-13-40")), BindingError);
    CHECK_NOTHROW(bind(p, "When", BindingValue::string("2021-12-24")));

    auto narrow = instantiate(CatalogId::CARD1, AbstractionLevel::AbstractXml);
    narrow.add_parameter("Only", ComparisonOptions{{ComparisonOp::Equal}, {}});
    CHECK_THROWS_AS(bind(narrow, "Only", BindingValue::word("unequal")), BindingError);
}

TEST_CASE("unknown values take the type of their literal") {
    auto p = instantiate(CatalogId::COMPVAL1, AbstractionLevel::AbstractXml);
    bind(p, "Value2", BindingValue::num(1900));
    CHECK(std::holds_alternative<NumberValue>(p.find_parameter(std::string_view("Value2"))->body));
    bool typed = false;
    for (const auto& g : p.graphs())
        for (const auto& op : g.operators)
            if (auto* c = std::get_if<Comparison>(&op.body))
                if (auto* x = std::get_if<ParameterId>(&c->right))
                    if (p.find_parameter(*x)->name == "Value2") typed = c->value_type == ValueType::Number;
    CHECK(typed);

    auto q = instantiate(CatalogId::COMPVAL1, AbstractionLevel::AbstractXml);
    bind(q, "Value2", BindingValue::tuple({"m", "f"}));
    CHECK(std::holds_alternative<TextList>(q.find_parameter(std::string_view("Value2"))->body));
}

TEST_CASE("disabled comparisons drop out of completeness") {
    auto p = instantiate(CatalogId::MATCH2, AbstractionLevel::AbstractXml);
    bind_all(p, parse_bindings(R"(Nav0 = child, Property0 = name, Value0 = "a"
Nav1 = child, Property1 = name, Value1 = "b", Nav2 = child, PropertyA = data, ValueA = "x")"));
    auto missing = missing_bindings(p);
    REQUIRE(missing.size() == 2);
    bind(p, "COMP2", BindingValue::word("disabled"));
    CHECK(missing_bindings(p).empty());
    CHECK_NOTHROW(finalize(p));
}

TEST_CASE("binding order does not matter") {
    auto bindings = parse_bindings(read_file(kFixtures / "bindings" / "func1_listing.bind"));
    std::vector<std::pair<std::string, BindingValue>> flat;
    for (const auto& b : bindings)
        for (const auto& k : b.keys) flat.emplace_back(k, b.value);
    auto base = instantiate(CatalogId::FUNC1, AbstractionLevel::AbstractXml);
    std::string reference;
    std::mt19937 rng(7);
    for (int round = 0; round < 10; ++round) {
        auto p = base;
        for (const auto& [k, v] : flat) bind(p, std::string_view(k), v);
        std::string s = serialize(finalize(p));
        if (round == 0) reference = s;
        CHECK(s == reference);
        std::shuffle(flat.begin(), flat.end(), rng);
    }
}

TEST_CASE("erasing and rebinding reproduces the concrete pattern") {
    for (const auto& f : source_fixtures()) {
        CAPTURE(f.file.filename().string());
        auto c = concrete(f.id, f.file);
        auto erased = erase_bindings(c);
        CHECK(erased.level() == AbstractionLevel::AbstractXml);
        CHECK_FALSE(missing_bindings(erased).empty());
        bind_all(erased, parse_bindings(read_file(f.file)));
        CHECK(serialize(finalize(erased)) == serialize(c));
    }
}

TEST_CASE("serialization round trip") {
    for (const auto& e : catalog_entries()) {
        CAPTURE(e.name);
        for (auto level : {AbstractionLevel::Generic, AbstractionLevel::AbstractXml}) {
            auto p = instantiate(e.id, level);
            std::string text = serialize(p);
            auto back = deserialize(text);
            CHECK(back == p);
            CHECK(serialize(back) == text);
        }
    }
    for (const auto& f : source_fixtures()) {
        auto c = concrete(f.id, f.file);
        auto back = deserialize(serialize(c));
        CHECK(back == c);
        CHECK(back.level() == AbstractionLevel::Concrete);
    }
}

TEST_CASE("deserialized patterns keep generating fresh ids") {
    auto p = deserialize(serialize(instantiate(CatalogId::CARD1, AbstractionLevel::Generic)));
    std::set<std::string> ids;
    for (const auto& g : p.graphs())
        for (const auto& e : g.elements) ids.insert(e.id.str());
    ElementId fresh = p.add_element(p.outer_graph().id, "extra");
    CHECK_FALSE(ids.count(fresh.str()));
}

TEST_CASE("schema errors point at the offending value") {
    std::string text = serialize(instantiate(CatalogId::CARD1, AbstractionLevel::AbstractXml));
    auto expect_pointer = [](const std::string& doc, const std::string& pointer) {
        try {
            deserialize(doc);
            FAIL("accepted: " << pointer);
        } catch (const SchemaError& e) {
            CHECK(e.pointer() == pointer);
        }
    };
    auto replace = [&](const std::string& from, const std::string& to) {
        std::string s = text;
        auto at = s.find(from);
        REQUIRE(at != std::string::npos);
        return s.replace(at, from.size(), to);
    };
    expect_pointer(replace("\"format_version\": 1", "\"format_version\": 1, \"extra\": 0"), "/extra");
    expect_pointer(replace("\"format_version\": 1", "\"format_version\": 2"), "/format_version");
    expect_pointer(replace("\"level\": \"ABSTRACT_XML\"", "\"level\": \"FANCY\""), "/level");
    expect_pointer(replace("\"kind\": \"XML_ROOT\"", "\"kind\": \"ROOTISH\""), "/graphs/0/elements/1/kind");
    std::size_t first_open = 0;
    auto original = deserialize(text);
    while (original.parameters()[first_open].predefined) ++first_open;
    expect_pointer(replace("\"predefined\": false", "\"predefined\": 0"),
                   "/parameters/" + std::to_string(first_open) + "/predefined");
    CHECK_THROWS_AS(deserialize("{not json"), SchemaError);
}
