#include <chrono>

#include "doctest.h"
#include "dqp/evaluator.hpp"
#include "support.hpp"

using namespace dqp;
using namespace dqp::testing;

TEST_CASE("100k element document") {
    Document d = Document::parse(synthetic_buildings(100000, 7));
    REQUIRE(d.element_count() >= 100000);
    struct Case {
        CatalogId id;
        double limit_s;
    };
    for (Case c : {Case{CatalogId::MATCH1, 5}, Case{CatalogId::COMPVAL1, 5}, Case{CatalogId::CARD1, 5},
                   Case{CatalogId::MAND1, 5}, Case{CatalogId::FUNC1, 120}}) {
        std::string name(catalog_entry(c.id).name);
        auto p = concrete(c.id, kFixtures / "bindings" / "perf" / (name + ".bind"));
        auto m = evaluate(p, d);
        double s = std::chrono::duration<double>(m.duration).count();
        MESSAGE(name << ": " << m.nodes.size() << " matches in " << s << " s");
        CHECK_MESSAGE(s < c.limit_s, name);
        CHECK(!m.nodes.empty());
    }
}
