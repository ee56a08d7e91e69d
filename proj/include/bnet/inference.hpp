#ifndef BNET_INFERENCE_HPP
#define BNET_INFERENCE_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bnet/factor.hpp"
#include "bnet/network.hpp"

namespace bnet {

struct Distribution {
    std::string variable;
    std::vector<std::string> states;
    std::vector<double> probabilities;

    /// Throws unknown_symbol for a state not in `states`.
    double operator[](std::string_view state) const;
};

struct MapResult {
    /// Bindings over the queried variables only.
    Evidence assignment;
    /// P(assignment | evidence).
    double probability = 0.0;
};

/// Full joint over all variables, mixed-radix in topological order with the
/// last variable of that order varying fastest.
struct JointTable {
    std::vector<std::size_t> order;
    std::vector<std::size_t> cardinalities;
    std::vector<double> cells;

    /// `states` is indexed by network variable index.
    std::size_t index_of(std::span<const int> states) const;
    /// Inverse of index_of(): per-variable states of cell `index`.
    std::vector<int> states_of(std::size_t index, std::size_t variable_count) const;
};

inline constexpr std::size_t kDefaultJointCap = 10'000'000;
inline constexpr std::size_t kDefaultHypothesisCap = 100'000;

/// Chain-rule product of one CPT entry per variable.
double joint_probability(const BayesianNetwork& net, const Assignment& assignment);
double joint_probability(const BayesianNetwork& net, std::span<const int> states);

/// Brute-force joint built cell by cell from joint_probability(); used as the
/// reference for the elimination-based queries. Throws size_limit above `cap`.
JointTable enumerate_joint(const BayesianNetwork& net, std::size_t cap = kDefaultJointCap);

/// P(evidence); 1 for empty evidence.
double evidence_likelihood(const BayesianNetwork& net, const Evidence& evidence);

/// P(query | evidence). Throws impossible_evidence when P(evidence) = 0.
Distribution posterior_marginal(const BayesianNetwork& net, const Evidence& evidence, std::string_view query);

/// Normalized P(variables | evidence) as a factor over the sorted variable
/// indices. Variables bound in the evidence are not allowed here.
Factor posterior_factor(const BayesianNetwork& net, const Evidence& evidence,
                        std::span<const std::size_t> variables);

/// Most probable joint state of `query_vars` given the evidence. Ties go to the
/// earliest state, variable by variable in topological order.
MapResult map_assignment(const BayesianNetwork& net, const Evidence& evidence,
                         std::span<const std::string> query_vars,
                         std::size_t hypothesis_cap = kDefaultHypothesisCap);

/// Hypothesis over `query_vars` maximizing P(evidence | hypothesis). Hypotheses
/// with zero prior are never selected. Same tie-break as map_assignment().
MapResult ml_assignment(const BayesianNetwork& net, const Evidence& evidence,
                        std::span<const std::string> query_vars,
                        std::size_t hypothesis_cap = kDefaultHypothesisCap);

}  // namespace bnet

#endif  // BNET_INFERENCE_HPP
