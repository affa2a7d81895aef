#include <algorithm>

#include "doctest.h"
#include "dqp/catalog.hpp"
#include "dqp/io.hpp"
#include "dqp/validation.hpp"
#include "support.hpp"

using namespace dqp;
using namespace dqp::testing;
namespace fs = std::filesystem;

namespace {

bool reports(const std::vector<ConstraintViolation>& vs, const std::string& id) {
    return std::any_of(vs.begin(), vs.end(), [&](const auto& v) { return v.constraint_id == id; });
}

std::vector<std::string> fixture_ids() {
    std::vector<std::string> ids;
    for (const auto& entry : fs::directory_iterator(kFixtures / "constraints")) {
        std::string name = entry.path().filename().string();
        if (name.size() > 15 && name.ends_with(".fail.dqp.json")) ids.push_back(name.substr(0, name.find('.')));
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace

TEST_CASE("registry") {
    std::set<std::string_view> ids;
    for (const auto& c : constraint_registry()) {
        CHECK(ids.insert(c.id).second);
        CHECK((c.generic || c.abstract_xml || c.concrete));
        CHECK(find_constraint(c.id) == &c);
    }
    CHECK(find_constraint("XX-99") == nullptr);
}

TEST_CASE("every constraint fixture fails on its constraint and its base passes") {
    auto ids = fixture_ids();
    for (const auto& id : ids) {
        CAPTURE(id);
        const ConstraintInfo* info = find_constraint(id);
        REQUIRE(info);

        CompletePattern good = deserialize(read_file(kFixtures / "constraints" / (id + ".pass.dqp.json")));
        auto clean = validate(good, good.level());
        CHECK_MESSAGE(clean.empty(), (clean.empty() ? "" : format_violation(clean[0])));

        CompletePattern bad = deserialize(read_file(kFixtures / "constraints" / (id + ".fail.dqp.json")));
        auto found = validate(bad, bad.level());
        CHECK(reports(found, id));
        for (const auto& v : found)
            if (v.constraint_id == id) {
                CHECK(format_violation(v).rfind(id + " /", 0) == 0);
                CHECK(std::find(v.levels.begin(), v.levels.end(), bad.level()) != v.levels.end());
            }
    }
    CHECK(ids.size() >= 25);
    MESSAGE(ids.size() << " constraints with violating and passing fixtures");
}

TEST_CASE("constraints apply only at their levels") {
    // a concrete-only constraint is not checked on the abstract pattern
    auto abstract = instantiate(CatalogId::CARD1, AbstractionLevel::AbstractXml);
    CHECK(validate(abstract, AbstractionLevel::AbstractXml).empty());
    auto as_concrete = validate(abstract, AbstractionLevel::Concrete);
    CHECK(reports(as_concrete, "PAR-04"));
    for (const auto& v : as_concrete) CHECK(find_constraint(v.constraint_id)->concrete);

    // XML constraints are not checked on generic patterns
    auto generic = instantiate(CatalogId::CARD1, AbstractionLevel::Generic);
    CHECK(validate(generic, AbstractionLevel::Generic).empty());
}

TEST_CASE("catalog patterns validate cleanly") {
    for (const auto& e : catalog_entries()) {
        CAPTURE(e.name);
        CHECK(validate(instantiate(e.id, AbstractionLevel::Generic), AbstractionLevel::Generic).empty());
        CHECK(validate(instantiate(e.id, AbstractionLevel::AbstractXml), AbstractionLevel::AbstractXml).empty());
    }
}
