#include "dqp/external.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include <sys/wait.h>
#include <unistd.h>

#include "dqp/query_gen.hpp"

namespace dqp {

namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
    for (std::size_t i = s.find(from); i != std::string::npos; i = s.find(from, i + to.size())) s.replace(i, from.size(), to);
}

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& text) {
        static std::atomic<unsigned> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("dqp-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".xq");
        std::ofstream(path, std::ios::binary) << text;
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
};

}  // namespace

std::optional<std::string> xquery_command(const std::optional<std::string>& configured) {
    if (configured && !configured->empty()) return configured;
    if (const char* env = std::getenv("XQUERY_CMD"); env && *env) return std::string(env);
    return std::nullopt;
}

std::string path_query(const std::string& query) {
    return "for $dqp_node in (\n" + query +
           ")/.\n"
           "return string-join(\n"
           "  for $a in $dqp_node/ancestor-or-self::*\n"
           "  return if ($a/parent::*)\n"
           "         then concat(\"/\", name($a), \"[\", count($a/preceding-sibling::*[name()=name($a)]) + 1, \"]\")\n"
           "         else concat(\"/\", name($a)),\n"
           "  \"\")\n";
}

std::vector<NodeId> evaluate_external(const std::string& command, const CompletePattern& pattern,
                                      const Document& doc, const std::filesystem::path& doc_path) {
    TempFile query(path_query(generate_query(pattern)));
    std::string cmd = command;
    const std::string q = shell_quote(query.path.string()), d = shell_quote(doc_path.string());
    if (cmd.find("{query}") == std::string::npos && cmd.find("{data}") == std::string::npos) {
        cmd += " " + q + " " + d;
    } else {
        replace_all(cmd, "{query}", q);
        replace_all(cmd, "{data}", d);
    }

    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("cannot start '" + cmd + "'");
    std::string out;
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
    int status = ::pclose(pipe);
    if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0)
        throw std::runtime_error("external XQuery processor failed: " + cmd);

    std::unordered_map<std::string, NodeId> by_path;
    for (NodeId n = 1; n < doc.node_count(); ++n)
        if (doc.kind(n) == Document::Kind::Element) by_path.emplace(doc.path(n), n);

    std::vector<NodeId> nodes;
    std::size_t start = 0;
    while (start < out.size()) {
        std::size_t end = out.find('\n', start);
        if (end == std::string::npos) end = out.size();
        std::string line = out.substr(start, end - start);
        start = end + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto it = by_path.find(line);
        if (it == by_path.end()) throw std::runtime_error("external result '" + line + "' is not an element path");
        nodes.push_back(it->second);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

}  // namespace dqp
