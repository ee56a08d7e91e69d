#ifndef BNET_API_HPP
#define BNET_API_HPP

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bnet/curriculum.hpp"
#include "bnet/impact.hpp"
#include "bnet/network.hpp"

namespace bnet::api {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline constexpr int kDefaultPrecision = 6;
inline constexpr int kMaxPrecision = 17;

/// Compact JSON with every floating-point number printed in fixed notation
/// with `precision` decimals. Key order is insertion order.
std::string render(const ordered_json& document, int precision = kDefaultPrecision);

ordered_json error_body(const Error& error);
int exit_code(ErrorCode code);
int http_status(ErrorCode code);

/// "Var=state,Var=state"; the empty string is empty evidence. Names are taken
/// verbatim (no trimming).
Evidence parse_evidence(std::string_view text);
/// "Var=state".
TargetSpec parse_target(std::string_view text);
/// "X,Y,Z".
std::vector<std::string> parse_names(std::string_view text);
/// Scenario override sets separated by ';', each in parse_evidence() form.
std::vector<Evidence> parse_scenarios(std::string_view text);

/// Parses a request body; throws parse_error / schema_error.
json parse_request(std::string_view body);

/// Request handlers shared by the CLI and the HTTP service. Each takes a JSON
/// request object and returns the response document.
///
///   infer       {"evidence": {...}, "query": "X"}
///   map         {"evidence": {...}, "vars": ["X", ...], "mode": "map" | "ml"}
///   joint       {"assignment": {...}}
///   likelihood  {"evidence": {...}}
///   impact      {"target": "Var=state", "evidence": {...}}
///   plan        {"profile": {...}, "weights": {...}}
///   whatif      {"profile": {...}, "scenarios": [{...}, ...], "weights": {...}}
class Handler {
public:
    explicit Handler(BayesianNetwork net, curriculum::ScoreWeights weights = {});

    const BayesianNetwork& network() const { return m_net; }
    /// Canonical model document (served verbatim, not re-rendered).
    const std::string& model_document() const { return m_document; }

    ordered_json infer(const json& request) const;
    ordered_json map(const json& request) const;
    ordered_json joint(const json& request) const;
    ordered_json likelihood(const json& request) const;
    ordered_json impact(const json& request) const;
    ordered_json plan(const json& request) const;
    ordered_json whatif(const json& request) const;

    /// Routes by endpoint name ("infer", "map", ...); usage_error if unknown.
    ordered_json dispatch(std::string_view endpoint, const json& request) const;

private:
    BayesianNetwork m_net;
    curriculum::ScoreWeights m_weights;
    std::string m_document;
};

ordered_json validation_report_json(const ValidationReport& report);

}  // namespace bnet::api

#endif  // BNET_API_HPP
