#include <atomic>
#include <fstream>
#include <thread>

#include <unistd.h>

#include "doctest.h"
#include "dqp/evaluator.hpp"
#include "dqp/external.hpp"
#include "dqp/io.hpp"
#include "dqp/query_gen.hpp"
#include "support.hpp"

using namespace dqp;
using namespace dqp::testing;
namespace fs = std::filesystem;

namespace {

struct Instance {
    std::string pattern;
    std::string xml;
    std::optional<CompletePattern> concrete;
};

struct Outcome {
    std::set<NodeId> native, external;
    std::string error;
};

Outcome run(const std::string& cmd, const Instance& in, const fs::path& dir, std::size_t k) {
    Outcome o;
    Document d = Document::parse(in.xml);
    fs::path file = dir / ("doc" + std::to_string(k) + ".xml");
    std::ofstream(file, std::ios::binary) << in.xml;
    auto m = evaluate(*in.concrete, d);
    o.native = {m.nodes.begin(), m.nodes.end()};
    try {
        auto ext = evaluate_external(cmd, *in.concrete, d, file);
        o.external = {ext.begin(), ext.end()};
    } catch (const std::exception& e) {
        o.error = e.what();
    }
    fs::remove(file);
    return o;
}

}  // namespace

TEST_CASE("path wrapper parses") { CHECK_FALSE(check_grammar(path_query("for $var1 in /child::* where true() return $var1"))); }

TEST_CASE("external processor agrees with the evaluator") {
    auto cmd = xquery_command();
    if (!cmd) {
        MESSAGE("XQUERY_CMD not set; skipped");
        return;
    }
    fs::path dir = fs::temp_directory_path() / ("dqp-oracle-" + std::to_string(::getpid()));
    fs::create_directories(dir);

    // running example first, then random instances
    std::vector<Instance> instances;
    for (auto [id, bind, data] : {std::tuple{CatalogId::CARD1, "card1_listing.bind", "running_example.xml"},
                                  std::tuple{CatalogId::FUNC1, "func1_listing.bind", "running_example.xml"},
                                  std::tuple{CatalogId::REFINT, "refint_listing.bind", "running_example_extended.xml"}})
        instances.push_back({std::string(catalog_entry(id).name), read_file(kFixtures / "data" / data),
                             concrete(id, kFixtures / "bindings" / bind)});
    std::mt19937 rng(5150);
    while (instances.size() < 620)
        for (const auto& e : catalog_entries()) {
            auto p = random_concrete(e.id, rng);
            if (!p) continue;
            instances.push_back({std::string(e.name), random_document(rng, 200), std::move(p)});
        }

    std::vector<Outcome> outcomes(instances.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::max(2u, std::thread::hardware_concurrency()); ++t)
        pool.emplace_back([&] {
            for (std::size_t k; (k = next++) < instances.size();) outcomes[k] = run(*cmd, instances[k], dir, k);
        });
    for (auto& t : pool) t.join();
    fs::remove_all(dir);

    int nonempty = 0;
    for (std::size_t k = 0; k < instances.size(); ++k) {
        const auto& in = instances[k];
        const auto& o = outcomes[k];
        Document d = Document::parse(in.xml);
        CHECK_MESSAGE(o.error.empty(), in.pattern, ": ", o.error, "\n", generate_query(*in.concrete));
        CHECK_MESSAGE(o.native == o.external, in.pattern, "\n", in.xml, "\n", generate_query(*in.concrete),
                      "\nnative: ", show(d, o.native), "\nexternal: ", show(d, o.external));
        nonempty += !o.native.empty();
    }
    CHECK(nonempty > static_cast<int>(instances.size()) / 10);
    MESSAGE(instances.size() << " instances, " << nonempty << " with matches");
}
