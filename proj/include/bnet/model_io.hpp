#ifndef BNET_MODEL_IO_HPP
#define BNET_MODEL_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "bnet/network.hpp"

namespace bnet {

// Model documents are UTF-8 JSON:
//
//   {
//     "name": "...",
//     "description": "...",              (optional)
//     "variables": [{"name": "X", "states": ["t", "f"]}, ...],
//     "cpts": [{"child": "X", "parents": [...], "rows": [[...], ...]}, ...]
//   }
//
// Edges are implied by the parents lists. Unknown fields are rejected.

/// Parses and schema-checks a document without validating the network.
/// With `rows_optional`, CPT entries may omit "rows" (structure-only documents).
NetworkDefinition parse_model_definition(std::string_view document, bool rows_optional = false);

BayesianNetwork load_model(std::string_view document);
BayesianNetwork load_model_file(const std::filesystem::path& path);

/// Structure-only documents for parameter learning; full model documents are
/// accepted too and their rows ignored.
NetworkStructure load_structure(std::string_view document);

/// Canonical document: variables in declaration order, one CPT row per line,
/// probabilities in shortest round-trip decimal form.
std::string save_model(const BayesianNetwork& net);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace bnet

#endif  // BNET_MODEL_IO_HPP
