#include "dqp/report.hpp"

#include <cstdio>

#include "json.hpp"

namespace dqp {

namespace {

nlohmann::ordered_json to_json(const MatchReport& r) {
    nlohmann::ordered_json j;
    j["pattern"] = r.pattern;
    j["matches"] = nlohmann::ordered_json::array();
    for (const auto& m : r.matches) j["matches"].push_back({{"path", m.path}, {"name", m.name}, {"excerpt", m.excerpt}});
    j["count"] = r.matches.size();
    j["duration_ms"] = r.duration_ms;
    j["engine"] = r.engine;
    return j;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

MatchReport make_report(const std::string& pattern, const std::string& engine, const std::vector<NodeId>& nodes,
                        const Document& doc, double duration_ms) {
    MatchReport r{pattern, engine, {}, duration_ms};
    for (NodeId n : nodes) r.matches.push_back({doc.path(n), doc.name(n), excerpt(doc, n)});
    return r;
}

std::string reports_json(const std::vector<MatchReport>& reports) {
    if (reports.size() == 1) return to_json(reports[0]).dump(2) + "\n";
    auto a = nlohmann::ordered_json::array();
    for (const auto& r : reports) a.push_back(to_json(r));
    return a.dump(2) + "\n";
}

std::string reports_csv(const std::vector<MatchReport>& reports) {
    std::string out = "pattern,path,name,excerpt\n";
    for (const auto& r : reports)
        for (const auto& m : r.matches)
            out += csv_field(r.pattern) + "," + csv_field(m.path) + "," + csv_field(m.name) + "," +
                   csv_field(m.excerpt) + "\n";
    return out;
}

std::string reports_text(const std::vector<MatchReport>& reports) {
    std::string out;
    for (const auto& r : reports) {
        char head[64];
        std::snprintf(head, sizeof head, " (%.1f ms, %s)\n", r.duration_ms, r.engine.c_str());
        out += r.pattern + ": " + std::to_string(r.matches.size()) + (r.matches.size() == 1 ? " match" : " matches") +
               head;
        for (const auto& m : r.matches) out += "  " + m.path + "  " + m.excerpt + "\n";
    }
    return out;
}

}  // namespace dqp
