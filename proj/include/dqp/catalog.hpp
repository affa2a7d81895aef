#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dqp/model.hpp"
#include "dqp/xml_adaption.hpp"

namespace dqp {

enum class CatalogId {
    MATCH1, MATCH2, COMP, COMPVAL1, COMPVAL2, REFINT, CARD1, CARD2, FUNC1, FUNC2,
    UNIQUE1, UNIQUE2, MAND1, MAND2, MANDSTRUC1, MANDSTRUC2, CONTREL, EXDUP, APPDUP,
};

struct CatalogEntry {
    CatalogId id;
    std::string_view name;
    std::string_view purpose;
    std::vector<std::string_view> covered_variants;
};

const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry& catalog_entry(CatalogId id);
std::optional<CatalogId> parse_catalog_id(std::string_view name);

// Generic or ABSTRACT_XML version of a catalog pattern.
CompletePattern instantiate(CatalogId id, AbstractionLevel level);
// Throws PatternError for an unknown name.
CompletePattern instantiate(std::string_view name, AbstractionLevel level);

// Relation decisions the abstract catalog patterns are adapted with: every
// structural relation becomes a navigation offering all axes, cross-record
// relations become references.
AdaptionDecisions catalog_decisions(CatalogId id);

struct CoverageRow {
    std::string_view problem;
    std::string_view variant;
    std::vector<std::string_view> patterns;  // empty: not covered
};

struct CoverageSummary {
    std::size_t covered = 0;
    std::size_t total = 0;
    double ratio = 0;
    std::vector<std::string_view> uncovered;
};

const std::vector<CoverageRow>& coverage_table();
CoverageSummary coverage_summary();

}  // namespace dqp
