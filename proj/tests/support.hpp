#pragma once

#include <filesystem>
#include <optional>
#include <random>
#include <set>
#include <string>

#include "dqp/catalog.hpp"
#include "dqp/document.hpp"
#include "dqp/model.hpp"

namespace dqp::testing {

inline const std::filesystem::path kFixtures = DQP_FIXTURES;

// Catalog pattern concretised with a binding file.
CompletePattern concrete(CatalogId id, const std::filesystem::path& bindings);

// Small vocabulary shared by random documents and random bindings, so that
// predicates hit often enough to be interesting.
struct Vocabulary {
    std::vector<std::string> names{"a", "b", "c"};
    std::vector<std::string> attributes{"id", "ref", "v"};
    std::vector<std::string> texts{"1", "2", "10", "a", "b", "a b"};
    std::vector<std::string> regexes{"^a", "b$", "[0-9]", "a|1", "^$"};
};

// Random tree with names from the vocabulary. No whitespace between elements;
// text only in leaves, except for an occasional mixed-content element.
std::string random_document(std::mt19937& rng, int max_elements, const Vocabulary& v = {});

// Building records (name, city, country, year) totalling at least
// `elements` elements. Mostly clean, with a small share of doubtful years,
// missing years, extra cities and countries that break city -> country.
std::string synthetic_buildings(std::size_t elements, unsigned seed);

// Catalog pattern with every open parameter bound at random; nullopt when the
// draw does not validate.
std::optional<CompletePattern> random_concrete(CatalogId id, std::mt19937& rng, const Vocabulary& v = {});

// Brute-force evaluation straight from the first-order reading of the
// pattern: every unmapped element ranges over all elements of the document,
// relations and operators are checked once their elements are assigned.
std::set<NodeId> naive_evaluate(const CompletePattern& p, const Document& d);

// Node set rendered as "/r/a[1] /r/b[2] ..." for diagnostics.
std::string show(const Document& d, const std::set<NodeId>& nodes);

}  // namespace dqp::testing
