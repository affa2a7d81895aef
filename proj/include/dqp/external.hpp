#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dqp/document.hpp"
#include "dqp/model.hpp"

namespace dqp {

// Command template for an external XQuery processor: the configured value if
// given, else the XQUERY_CMD environment variable. "{query}" and "{data}" are
// replaced by the quoted query and document paths; when absent both paths are
// appended in that order. The command prints one result item per line and
// exits with 0.
std::optional<std::string> xquery_command(const std::optional<std::string>& configured = std::nullopt);

// Generated query wrapped so that each returned element is printed as the
// path Document::path gives it.
std::string path_query(const std::string& query);

// Evaluates a concrete pattern with the external processor. Result nodes in
// document order. Throws std::runtime_error when the command fails or prints
// a path that is not in the document.
std::vector<NodeId> evaluate_external(const std::string& command, const CompletePattern& pattern,
                                      const Document& doc, const std::filesystem::path& doc_path);

}  // namespace dqp
