#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "confound/bayesnet.hpp"

namespace confound {

/// Model files are JSON documents with exactly three members:
///
///   {
///     "variables": [{"name": "X", "states": ["0", "1"]}, ...],
///     "edges": [["X", "Z"], ...],
///     "cpts": {
///       "Z": {"parents": ["X"], "table": [[0.8, 0.2], [0.2, 0.8]]},
///       ...
///     }
///   }
///
/// Variable order is declaration order. Each CPT lists its parents in the
/// order its rows use (first parent slowest); the edge list must hold exactly
/// those parent->child pairs. Comments are not accepted.
///
/// Throws ParseError (with a "line:col" or field-path location) for syntax and
/// shape problems, ValidationError for probability invariants, CycleError for
/// cyclic graphs.
DiscreteBayesNet parse_model(std::string_view text);

/// Canonical text: edges grouped by child in declaration order, numbers in
/// shortest round-trip form, LF line endings.
std::string serialize_model(const DiscreteBayesNet& net);

DiscreteBayesNet load_model(const std::filesystem::path& path);

}  // namespace confound
