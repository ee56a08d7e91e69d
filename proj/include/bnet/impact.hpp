#ifndef BNET_IMPACT_HPP
#define BNET_IMPACT_HPP

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bnet/network.hpp"

namespace bnet {

struct TargetSpec {
    std::string variable;
    std::string state;
};

struct ImpactLevel {
    /// Signed log-odds swing of the target with the largest magnitude.
    double level = 0.0;
    std::string achieving_state;
};

struct ImpactEntry {
    std::string influencer;
    double level = 0.0;
    std::string achieving_state;
    double magnitude = 0.0;
    /// I(influencer; target variable | evidence) in nats.
    double mutual_information = 0.0;
};

struct ImpactReport {
    TargetSpec target;
    double baseline = 0.0;
    /// Sorted by magnitude, descending; ties keep declaration order.
    std::vector<ImpactEntry> entries;
};

/// Natural log-odds ln(p / (1 - p)).
double log_odds(double p);

/// For each influencer state x with P(x | e) > 0, the swing
/// ln-odds P(target | e, x) − ln-odds P(target | e). Returns the swing with the
/// largest absolute value, the earliest state winning ties.
///
/// Throws degenerate_baseline when P(target | e) is 0 or 1, or when some
/// reachable influencer state drives the target to 0 or 1 (infinite swing).
ImpactLevel impact_level(const BayesianNetwork& net, const TargetSpec& target, std::string_view influencer,
                         const Evidence& evidence);

/// impact_level() and mutual information for every variable that is neither
/// the target nor bound in `evidence`.
ImpactReport impact_ranking(const BayesianNetwork& net, const TargetSpec& target, const Evidence& evidence);

/// I(a; b | evidence) in nats.
double mutual_information(const BayesianNetwork& net, std::string_view a, std::string_view b,
                          const Evidence& evidence);

/// Whether every trail between `a` and `b` is blocked by `given`.
bool d_separated(const NetworkStructure& structure, std::string_view a, std::string_view b,
                 const std::set<std::string, std::less<>>& given);

}  // namespace bnet

#endif  // BNET_IMPACT_HPP
