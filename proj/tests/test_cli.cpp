#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>

#include <unistd.h>

#include "doctest.h"
#include "dqp/catalog.hpp"
#include "dqp/io.hpp"
#include "dqp/query_gen.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace dqp;
using namespace dqp::testing;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result dqp_cli(const std::string& args) {
    std::string cmd = std::string(DQP_CLI) + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
    int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

struct Workdir {
    fs::path dir = fs::temp_directory_path() / ("dqp-cli-" + std::to_string(::getpid()));
    Workdir() { fs::create_directories(dir); }
    ~Workdir() { fs::remove_all(dir); }
    std::string operator/(const std::string& f) const { return (dir / f).string(); }
};

std::string fx(const std::string& rel) { return (kFixtures / rel).string(); }

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

// Catalog pattern exported and concretised through the CLI.
std::string concrete_file(const Workdir& w, const char* id, const char* bind) {
    std::string abstract = w / (std::string(id) + ".x.json"), concrete = w / (std::string(id) + ".c.json");
    REQUIRE(dqp_cli(std::string("catalog export ") + id + " --level x -o " + abstract).code == 0);
    REQUIRE(dqp_cli("concretize " + abstract + " " + fx(std::string("bindings/") + bind) + " -o " + concrete).code == 0);
    return concrete;
}

}  // namespace

TEST_CASE("catalog commands") {
    Workdir w;
    auto list = dqp_cli("catalog list");
    CHECK(list.code == 0);
    CHECK(lines(list.out) == catalog_entries().size());
    CHECK(lines(list.out) == 19);

    auto show = dqp_cli("catalog show FUNC1");
    CHECK(show.code == 0);
    CHECK(show.out.find("detect violations of functional dependencies") != std::string::npos);
    CHECK(dqp_cli("catalog show NOPE").code == 2);

    CHECK(dqp_cli("catalog export REFINT --level x -o " + (w / "r.dqp.json")).code == 0);
    CHECK(deserialize(read_file(w / "r.dqp.json")) == instantiate(CatalogId::REFINT, AbstractionLevel::AbstractXml));
    CHECK(dqp_cli("catalog export REFINT --level g").out == serialize(instantiate(CatalogId::REFINT, AbstractionLevel::Generic)));
}

TEST_CASE("validate exit codes") {
    Workdir w;
    dqp_cli("catalog export CARD1 --level x -o " + (w / "c.json"));
    CHECK(dqp_cli("validate " + (w / "c.json")).code == 0);
    auto concrete = dqp_cli("validate " + (w / "c.json") + " --level c");
    CHECK(concrete.code == 1);
    CHECK(concrete.out.rfind("PAR-", 0) == 0);
    write_file(w / "bad.json", "{\"graphs\": ");
    CHECK(dqp_cli("validate " + (w / "bad.json")).code == 2);
    CHECK(dqp_cli("validate " + (w / "absent.json")).code == 2);
}

TEST_CASE("concretize") {
    Workdir w;
    std::string c = concrete_file(w, "CARD1", "card1_listing.bind");
    CHECK(deserialize(read_file(c)).level() == AbstractionLevel::Concrete);

    write_file(w / "part.bind", "Nav0 = child2, Property0 = name, Value0 = \"architect\"\n");
    auto missing = dqp_cli("concretize " + (w / "CARD1.x.json") + " " + (w / "part.bind"));
    CHECK(missing.code == 1);
    CHECK(missing.out.find("Value1") != std::string::npos);

    write_file(w / "tuple.bind", "Value0 = (\"a\", \n");
    CHECK(dqp_cli("concretize " + (w / "CARD1.x.json") + " " + (w / "tuple.bind")).code == 2);
}

TEST_CASE("genquery") {
    Workdir w;
    std::string func = concrete_file(w, "FUNC1", "func1_golden.bind");
    auto q = dqp_cli("genquery --check-grammar " + func);
    CHECK(q.code == 0);
    CHECK(normalize_whitespace(q.out) == normalize_whitespace(read_file(kFixtures / "golden" / "func1.xq")));
    CHECK(dqp_cli("genquery " + func).out == q.out);

    std::string refint = concrete_file(w, "REFINT", "refint_golden.bind");
    CHECK(dqp_cli("genquery " + refint + " -o " + (w / "r.xq")).code == 0);
    CHECK(normalize_whitespace(read_file(w / "r.xq")) == normalize_whitespace(read_file(kFixtures / "golden" / "refint.xq")));

    CHECK(dqp_cli("genquery " + (w / "FUNC1.x.json")).code == 1);
}

TEST_CASE("run") {
    Workdir w;
    std::string card = concrete_file(w, "CARD1", "card1_listing.bind");
    std::string func = concrete_file(w, "FUNC1", "func1_listing.bind");
    std::string data = fx("data/running_example.xml");

    auto r = dqp_cli("run " + card + " --data " + data + " --format json");
    CHECK(r.code == 0);
    auto j = nlohmann::ordered_json::parse(r.out);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"pattern", "matches", "count", "duration_ms", "engine"});
    CHECK(j["pattern"] == "CARD1");
    CHECK(j["count"] == 1);
    CHECK(j["matches"][0]["path"] == "/data/architect[1]");
    CHECK(j["matches"][0]["name"] == "architect");
    CHECK(j["engine"] == "native");

    auto both = nlohmann::json::parse(dqp_cli("run " + func + " " + card + " --data " + data + " --format json").out);
    REQUIRE(both.is_array());
    CHECK(both[0]["pattern"] == "FUNC1");
    CHECK(both[0]["count"] == 2);
    CHECK(both[1]["pattern"] == "CARD1");

    auto csv = dqp_cli("run " + func + " --data " + data + " --format csv");
    CHECK(csv.out.rfind("pattern,path,name,excerpt\n", 0) == 0);
    CHECK(lines(csv.out) == 3);

    write_file(w / "empty.xml", "<data/>");
    auto none = nlohmann::json::parse(dqp_cli("run " + card + " --data " + (w / "empty.xml") + " --format json").out);
    CHECK(none["count"] == 0);
    CHECK(dqp_cli("run " + card + " --data " + (w / "empty.xml") + " --fail-on-match").code == 0);
    CHECK(dqp_cli("run " + card + " --data " + data + " --fail-on-match").code == 1);
    CHECK(dqp_cli("run " + (w / "CARD1.x.json") + " --data " + data).code == 1);
    CHECK(dqp_cli("run " + card + " --data " + (w / "missing.xml")).code == 2);
    CHECK(dqp_cli("run " + card + " --data " + data + " --format yaml").code == 2);
}

TEST_CASE("external engine needs a command") {
    Workdir w;
    std::string card = concrete_file(w, "CARD1", "card1_listing.bind");
    std::string data = fx("data/running_example.xml");
    CHECK(dqp_cli("run " + card + " --data " + data + " --engine external").code == (std::getenv("XQUERY_CMD") ? 0 : 2));
    // a stand-in processor that prints a fixed path
    write_file(w / "fake.sh", "#!/bin/sh\necho /data/architect[1]\n");
    fs::permissions(w / "fake.sh", fs::perms::owner_all);
    auto r = dqp_cli("--xquery_cmd " + (w / "fake.sh") + " run " + card + " --data " + data +
                     " --engine external --format json");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["engine"] == "external");
    CHECK(j["matches"][0]["path"] == "/data/architect[1]");
    write_file(w / "dqp.toml", "xquery_cmd = \"" + (w / "fake.sh") + " {query} {data}\"\n");
    CHECK(dqp_cli("--config " + (w / "dqp.toml") + " run " + card + " --data " + data + " --engine external").code == 0);
}

TEST_CASE("adapt") {
    Workdir w;
    dqp_cli("catalog export REFINT --level g -o " + (w / "g.json"));
    write_file(w / "d.txt", "0-1 = navigation\nA = reference(\"A1\", \"A2\")\n");
    CHECK(dqp_cli("adapt " + (w / "g.json") + " " + (w / "d.txt") + " -o " + (w / "x.json")).code == 0);
    CHECK(dqp_cli("validate " + (w / "x.json") + " --level x").code == 0);
    CHECK(deserialize(read_file(w / "x.json")).level() == AbstractionLevel::AbstractXml);
    write_file(w / "partial.txt", "0-1 = navigation\n");
    CHECK(dqp_cli("adapt " + (w / "g.json") + " " + (w / "partial.txt")).code == 1);
}
