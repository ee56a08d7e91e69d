#include "bnet/inference.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace bnet {

namespace {

struct HypothesisSpace {
    std::vector<std::size_t> variables;  // topological order
    std::size_t size = 1;
};

HypothesisSpace check_query(const BayesianNetwork& net, const Evidence& evidence,
                            std::span<const std::string> query_vars, std::size_t cap) {
    if (query_vars.empty())
        throw Error(ErrorCode::usage_error, "query variable set is empty");
    std::set<std::size_t> unique;
    for (const auto& name : query_vars) {
        std::size_t v = net.index_of(name);
        if (!unique.insert(v).second)
            throw Error(ErrorCode::usage_error, "query variable '" + name + "' is listed twice", name);
        if (evidence.contains(name))
            throw Error(ErrorCode::usage_error, "query variable '" + name + "' is also bound as evidence", name);
    }
    HypothesisSpace space;
    for (std::size_t v : net.topological_order()) {
        if (!unique.contains(v))
            continue;
        space.variables.push_back(v);
        if (space.size > cap / net.cardinality(v) + 1)
            space.size = cap + 1;
        else
            space.size *= net.cardinality(v);
    }
    if (space.size > cap)
        throw Error(ErrorCode::size_limit,
                    "MAP hypothesis space exceeds " + std::to_string(cap) + " assignments");
    return space;
}

// Scores within this relative distance are ties; the earlier hypothesis stays.
constexpr double kTieTolerance = 1e-12;

// Walks every hypothesis in tie-break order and returns the per-variable
// states of the first strict maximum of `score(index into factor)`.
template <class Score>
std::vector<int> best_hypothesis(const BayesianNetwork& net, const HypothesisSpace& space, const Factor& layout,
                                 Score score, double& best_value) {
    const auto& scope = layout.scope();
    std::vector<std::size_t> stride(scope.size(), 1);
    for (std::size_t k = scope.size(); k-- > 1;)
        stride[k - 1] = stride[k] * layout.cardinalities()[k];
    std::vector<std::size_t> stride_by_order;
    for (std::size_t v : space.variables)
        stride_by_order.push_back(stride[static_cast<std::size_t>(
            std::lower_bound(scope.begin(), scope.end(), v) - scope.begin())]);

    std::vector<std::size_t> counter(space.variables.size(), 0);
    std::vector<std::size_t> best(space.variables.size(), 0);
    bool found = false;
    best_value = 0.0;
    for (std::size_t h = 0; h < space.size; ++h) {
        std::size_t index = 0;
        for (std::size_t k = 0; k < counter.size(); ++k)
            index += counter[k] * stride_by_order[k];
        if (auto value = score(index); value && (!found || *value > best_value * (1.0 + kTieTolerance))) {
            found = true;
            best_value = *value;
            best = counter;
        }
        for (std::size_t k = counter.size(); k-- > 0;) {
            if (++counter[k] < net.cardinality(space.variables[k]))
                break;
            counter[k] = 0;
        }
    }
    if (!found)
        throw Error(ErrorCode::impossible_evidence, "no hypothesis has positive prior probability");
    std::vector<int> states(net.size(), -1);
    for (std::size_t k = 0; k < best.size(); ++k)
        states[space.variables[k]] = static_cast<int>(best[k]);
    return states;
}

MapResult make_result(const BayesianNetwork& net, const HypothesisSpace& space, const std::vector<int>& states,
                      double probability) {
    MapResult result;
    for (std::size_t v : space.variables)
        result.assignment.bind(net.variable(v).name, net.variable(v).states[static_cast<std::size_t>(states[v])]);
    result.probability = probability;
    return result;
}

std::vector<std::size_t> sorted_indices(const HypothesisSpace& space) {
    auto out = space.variables;
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

double Distribution::operator[](std::string_view state) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == state)
            return probabilities[i];
    throw Error(ErrorCode::unknown_symbol,
                "unknown state '" + std::string(state) + "' for variable '" + variable + "'", variable);
}

std::size_t JointTable::index_of(std::span<const int> states) const {
    std::size_t index = 0;
    for (std::size_t k = 0; k < order.size(); ++k)
        index = index * cardinalities[k] + static_cast<std::size_t>(states[order[k]]);
    return index;
}

std::vector<int> JointTable::states_of(std::size_t index, std::size_t variable_count) const {
    std::vector<int> states(variable_count, -1);
    for (std::size_t k = order.size(); k-- > 0;) {
        states[order[k]] = static_cast<int>(index % cardinalities[k]);
        index /= cardinalities[k];
    }
    return states;
}

double joint_probability(const BayesianNetwork& net, std::span<const int> states) {
    double p = 1.0;
    for (std::size_t v = 0; v < net.size(); ++v)
        p *= net.cpt(v).rows[net.row_index(v, states)][static_cast<std::size_t>(states[v])];
    return p;
}

double joint_probability(const BayesianNetwork& net, const Assignment& assignment) {
    return joint_probability(net, net.resolve(assignment));
}

JointTable enumerate_joint(const BayesianNetwork& net, std::size_t cap) {
    std::size_t size = net.joint_size();
    if (size > cap)
        throw Error(ErrorCode::size_limit, "joint table would have more than " + std::to_string(cap) + " cells");

    JointTable table;
    auto order = net.topological_order();
    table.order.assign(order.begin(), order.end());
    for (std::size_t v : table.order)
        table.cardinalities.push_back(net.cardinality(v));
    table.cells.resize(size);

    std::vector<int> states(net.size(), 0);
    for (std::size_t i = 0; i < size; ++i) {
        table.cells[i] = joint_probability(net, states);
        for (std::size_t k = table.order.size(); k-- > 0;) {
            std::size_t v = table.order[k];
            if (static_cast<std::size_t>(++states[v]) < table.cardinalities[k])
                break;
            states[v] = 0;
        }
    }
    return table;
}

double evidence_likelihood(const BayesianNetwork& net, const Evidence& evidence) {
    auto states = net.resolve(evidence);
    if (evidence.empty())
        return 1.0;
    return eliminate(net, states, {}).total();
}

Distribution posterior_marginal(const BayesianNetwork& net, const Evidence& evidence, std::string_view query) {
    std::size_t q = net.index_of(query);
    auto states = net.resolve(evidence);
    const Variable& var = net.variable(q);

    Distribution dist{var.name, var.states, std::vector<double>(var.cardinality(), 0.0)};
    if (states[q] >= 0) {
        if (eliminate(net, states, {}).total() <= 0.0)
            throw Error(ErrorCode::impossible_evidence, "evidence has zero probability");
        dist.probabilities[static_cast<std::size_t>(states[q])] = 1.0;
        return dist;
    }

    const std::size_t query_index[] = {q};
    Factor f = eliminate(net, states, query_index);
    double z = f.total();
    if (z <= 0.0)
        throw Error(ErrorCode::impossible_evidence, "evidence has zero probability");
    for (std::size_t s = 0; s < var.cardinality(); ++s)
        dist.probabilities[s] = f.values()[s] / z;
    return dist;
}

Factor posterior_factor(const BayesianNetwork& net, const Evidence& evidence,
                        std::span<const std::size_t> variables) {
    auto states = net.resolve(evidence);
    std::vector<std::size_t> sorted(variables.begin(), variables.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t v : sorted)
        if (states[v] >= 0)
            throw Error(ErrorCode::usage_error, "variable '" + net.variable(v).name + "' is bound as evidence",
                        net.variable(v).name);
    Factor f = eliminate(net, states, sorted);
    double z = f.total();
    if (z <= 0.0)
        throw Error(ErrorCode::impossible_evidence, "evidence has zero probability");
    for (double& p : f.values())
        p /= z;
    return f;
}

MapResult map_assignment(const BayesianNetwork& net, const Evidence& evidence,
                         std::span<const std::string> query_vars, std::size_t hypothesis_cap) {
    auto space = check_query(net, evidence, query_vars, hypothesis_cap);
    auto states = net.resolve(evidence);
    auto query = sorted_indices(space);

    Factor joint = eliminate(net, states, query);
    double likelihood = joint.total();
    if (likelihood <= 0.0)
        throw Error(ErrorCode::impossible_evidence, "evidence has zero probability");

    double best = 0.0;
    auto chosen = best_hypothesis(
        net, space, joint, [&](std::size_t i) { return std::optional<double>(joint.values()[i]); }, best);
    return make_result(net, space, chosen, best / likelihood);
}

MapResult ml_assignment(const BayesianNetwork& net, const Evidence& evidence,
                        std::span<const std::string> query_vars, std::size_t hypothesis_cap) {
    auto space = check_query(net, evidence, query_vars, hypothesis_cap);
    auto states = net.resolve(evidence);
    auto query = sorted_indices(space);

    Factor joint = eliminate(net, states, query);
    double likelihood = joint.total();
    if (likelihood <= 0.0)
        throw Error(ErrorCode::impossible_evidence, "evidence has zero probability");
    std::vector<int> unbound(net.size(), -1);
    Factor prior = eliminate(net, unbound, query);

    double best = 0.0;
    auto chosen = best_hypothesis(
        net, space, joint,
        [&](std::size_t i) -> std::optional<double> {
            if (prior.values()[i] <= 0.0)
                return std::nullopt;
            return joint.values()[i] / prior.values()[i];
        },
        best);
    std::size_t index = 0;
    {
        std::size_t stride = 1;
        for (std::size_t k = query.size(); k-- > 0;) {
            index += stride * static_cast<std::size_t>(chosen[query[k]]);
            stride *= net.cardinality(query[k]);
        }
    }
    return make_result(net, space, chosen, joint.values()[index] / likelihood);
}

}  // namespace bnet
