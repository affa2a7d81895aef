#include <algorithm>
#include <regex>

#include "doctest.h"
#include "dqp/concretisation.hpp"
#include "dqp/errors.hpp"
#include "dqp/io.hpp"
#include "dqp/query_gen.hpp"
#include "support.hpp"

using namespace dqp;
using namespace dqp::testing;
namespace fs = std::filesystem;

namespace {

std::string golden(const char* name) { return read_file(kFixtures / "golden" / name); }

std::string query(CatalogId id, const char* bind) { return generate_query(concrete(id, kFixtures / "bindings" / bind)); }

}  // namespace

TEST_CASE("whitespace normalisation") {
    CHECK(normalize_whitespace("  a \n\t b  ") == "a b");
    CHECK(normalize_whitespace("x [ y ] ( z )") == "x[y](z)");
    CHECK(normalize_whitespace("$a/data() != $b") == "$a/data()!= $b");
}

TEST_CASE("golden queries") {
    CHECK(normalize_whitespace(query(CatalogId::FUNC1, "func1_golden.bind")) == normalize_whitespace(golden("func1.xq")));
    CHECK(normalize_whitespace(query(CatalogId::REFINT, "refint_golden.bind")) ==
          normalize_whitespace(golden("refint.xq")));
    CHECK(normalize_whitespace(query(CatalogId::CARD1, "card1_golden.bind")) == normalize_whitespace(golden("card1.xq")));
}

TEST_CASE("goldens parse") {
    for (const char* g : {"func1.xq", "refint.xq", "card1.xq"}) CHECK_MESSAGE(!check_grammar(golden(g)), g);
}

TEST_CASE("grammar check rejects broken queries") {
    CHECK(check_grammar("for $a in /child::* where true() return $b"));
    CHECK(check_grammar("for $a in /child::*[ where true() return $a"));
    CHECK(check_grammar("some $a in /child::* satisfies"));
    CHECK(check_grammar("matches(./data(), \"x)"));
    CHECK(check_grammar("for $a in /bogus::* return $a"));
    CHECK_FALSE(check_grammar("for $a in /child::* where (some $n in $a/child::* satisfies $n is $a) return $a"));
    CHECK_FALSE(check_grammar("count(if (true()) then 1 else ()) > 1.0"));
}

TEST_CASE("an empty inner condition is rendered as true()") {
    std::string q = normalize_whitespace(query(CatalogId::CARD1, "card1_golden.bind"));
    CHECK(q.find("where true()return $var2") != std::string::npos);
}

TEST_CASE("non-concrete patterns are refused") {
    auto p = instantiate(CatalogId::CARD1, AbstractionLevel::AbstractXml);
    CHECK_THROWS_AS(generate_query(p), PatternError);
    CHECK_THROWS_AS(generate_query(instantiate(CatalogId::CARD1, AbstractionLevel::Generic)), PatternError);
}

TEST_CASE("generation is deterministic") {
    auto p = concrete(CatalogId::FUNC1, kFixtures / "bindings" / "func1_listing.bind");
    CHECK(generate_query(p) == generate_query(p));
    auto again = concrete(CatalogId::FUNC1, kFixtures / "bindings" / "func1_listing.bind");
    CHECK(generate_query(p) == generate_query(again));
}

TEST_CASE("special characters in literals") {
    auto p = instantiate(CatalogId::MATCH1, AbstractionLevel::AbstractXml);
    bind_all(p, parse_bindings(R"(Nav0 = child2, Property0 = name, Value0 = "a""b", Nav1 = child, Property1 = name,
                                  Value1 = "x&y", PropertyA = data, ValueA = "\d+")"));
    std::string q = generate_query(finalize(p));
    CHECK(q.find(R"("a""b")") != std::string::npos);
    CHECK(q.find(R"("x&amp;y")") != std::string::npos);
    CHECK(q.find(R"(matches(./data(), "\d+"))") != std::string::npos);
    CHECK_FALSE(check_grammar(q));
}

TEST_CASE("source and random queries are well formed") {
    int checked = 0;
    for (const auto& entry : fs::directory_iterator(kFixtures / "bindings" / "sources")) {
        std::string stem = entry.path().stem().string();
        auto id = parse_catalog_id(stem.substr(stem.find('.') + 1));
        REQUIRE(id);
        std::string q = generate_query(concrete(*id, entry.path()));
        auto err = check_grammar(q);
        CHECK_MESSAGE(!err, stem, ": ", err.value_or(""), "\n", q);
        ++checked;
    }
    CHECK(checked >= 40);

    std::mt19937 rng(7);
    std::set<std::string> patterns;
    for (int round = 0; round < 40; ++round)
        for (const auto& e : catalog_entries()) {
            auto p = random_concrete(e.id, rng);
            if (!p) continue;
            std::string q = generate_query(*p);
            auto err = check_grammar(q);
            CHECK_MESSAGE(!err, e.name, ": ", err.value_or(""), "\n", q);
            patterns.insert(std::string(e.name));
            // every variable is declared once
            std::regex decl(R"((for|some|every) (\$var\d+) in)");
            std::set<std::string> seen;
            for (auto it = std::sregex_iterator(q.begin(), q.end(), decl); it != std::sregex_iterator(); ++it)
                CHECK_MESSAGE(seen.insert((*it)[2]).second, q);
        }
    CHECK(patterns.size() == catalog_entries().size());
}
