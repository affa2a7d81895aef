#pragma once

#include <string>
#include <vector>

#include "dqp/document.hpp"
#include "dqp/evaluator.hpp"

namespace dqp {

struct ReportedMatch {
    std::string path;     // /data/architect[1]
    std::string name;
    std::string excerpt;  // first 120 characters of the string value
};

struct MatchReport {
    std::string pattern;
    std::string engine;  // native | external
    std::vector<ReportedMatch> matches;
    double duration_ms = 0;
};

MatchReport make_report(const std::string& pattern, const std::string& engine, const std::vector<NodeId>& nodes,
                        const Document& doc, double duration_ms);

// {pattern, matches: [{path, name, excerpt}], count, duration_ms, engine}.
// One report is written as an object, several as an array.
std::string reports_json(const std::vector<MatchReport>& reports);
// Header "pattern,path,name,excerpt", one row per match.
std::string reports_csv(const std::vector<MatchReport>& reports);
std::string reports_text(const std::vector<MatchReport>& reports);

}  // namespace dqp
