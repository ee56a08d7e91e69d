#include "bnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

namespace bnet {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::parse_error: return "parse_error";
        case ErrorCode::schema_error: return "schema_error";
        case ErrorCode::validation_error: return "validation_error";
        case ErrorCode::unknown_symbol: return "unknown_symbol";
        case ErrorCode::impossible_evidence: return "impossible_evidence";
        case ErrorCode::degenerate_baseline: return "degenerate_baseline";
        case ErrorCode::size_limit: return "size_limit";
        case ErrorCode::usage_error: return "usage_error";
    }
    return "unknown";
}

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += sep;
        out += items[i];
    }
    return out;
}

// Rows closer to 1 than this are left untouched so that canonical decimal
// documents survive a load/save cycle bit for bit.
constexpr double kRenormalizeThreshold = 1e-12;

}  // namespace

CycleError::CycleError(std::vector<std::string> cycle)
    : Error(ErrorCode::validation_error, "structure contains a cycle: " + join(cycle, " -> "),
            join(cycle, " -> ")),
      m_cycle(std::move(cycle)) {}

std::optional<std::size_t> Variable::find_state(std::string_view state) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == state)
            return i;
    return std::nullopt;
}

std::vector<std::string> NetworkStructure::parents_of(std::string_view child) const {
    std::vector<std::string> out;
    for (const auto& e : edges)
        if (e.child == child)
            out.push_back(e.parent);
    return out;
}

const Variable* NetworkStructure::find_variable(std::string_view name) const {
    for (const auto& v : variables)
        if (v.name == name)
            return &v;
    return nullptr;
}

std::size_t mixed_radix_index(std::span<const std::size_t> cardinalities,
                              std::span<const std::size_t> states) {
    std::size_t index = 0;
    for (std::size_t i = 0; i < cardinalities.size(); ++i)
        index = index * cardinalities[i] + states[i];
    return index;
}

std::size_t parent_config_index(std::span<const Variable> parents, const Evidence& parent_states) {
    for (const auto& [name, state] : parent_states) {
        bool known = std::any_of(parents.begin(), parents.end(),
                                 [&](const Variable& p) { return p.name == name; });
        if (!known)
            throw Error(ErrorCode::unknown_symbol, "'" + name + "' is not a parent", name);
    }
    std::vector<std::size_t> cards;
    std::vector<std::size_t> states;
    for (const auto& parent : parents) {
        const std::string* state = parent_states.find(parent.name);
        if (!state)
            throw Error(ErrorCode::usage_error, "parent '" + parent.name + "' is unbound", parent.name);
        auto idx = parent.find_state(*state);
        if (!idx)
            throw Error(ErrorCode::unknown_symbol,
                        "unknown state '" + *state + "' for variable '" + parent.name + "'", parent.name);
        cards.push_back(parent.cardinality());
        states.push_back(*idx);
    }
    return mixed_radix_index(cards, states);
}

std::vector<std::string> topological_order(const NetworkStructure& structure) {
    const auto& vars = structure.variables;
    std::unordered_map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < vars.size(); ++i)
        index.emplace(vars[i].name, i);

    std::vector<std::vector<std::size_t>> children(vars.size());
    std::vector<std::vector<std::size_t>> parents(vars.size());
    std::vector<std::size_t> indegree(vars.size(), 0);
    for (const auto& e : structure.edges) {
        auto p = index.find(e.parent);
        auto c = index.find(e.child);
        if (p == index.end() || c == index.end())
            throw Error(ErrorCode::validation_error,
                        "edge " + e.parent + " -> " + e.child + " references an undeclared variable",
                        e.parent + " -> " + e.child);
        children[p->second].push_back(c->second);
        parents[c->second].push_back(p->second);
        ++indegree[c->second];
    }

    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (indegree[i] == 0)
            ready.push(i);

    std::vector<std::string> order;
    std::vector<bool> done(vars.size(), false);
    while (!ready.empty()) {
        std::size_t v = ready.top();
        ready.pop();
        done[v] = true;
        order.push_back(vars[v].name);
        for (std::size_t c : children[v])
            if (--indegree[c] == 0)
                ready.push(c);
    }
    if (order.size() == vars.size())
        return order;

    // Every leftover node keeps a leftover parent, so walking parents must
    // revisit a node.
    std::size_t start = 0;
    while (done[start])
        ++start;
    std::vector<std::size_t> walk;
    std::vector<std::size_t> seen_at(vars.size(), std::numeric_limits<std::size_t>::max());
    std::size_t v = start;
    while (seen_at[v] == std::numeric_limits<std::size_t>::max()) {
        seen_at[v] = walk.size();
        walk.push_back(v);
        for (std::size_t p : parents[v]) {
            if (!done[p]) {
                v = p;
                break;
            }
        }
    }
    std::vector<std::string> cycle;
    for (std::size_t i = walk.size(); i-- > seen_at[v];)
        cycle.push_back(vars[walk[i]].name);
    cycle.push_back(cycle.front());
    throw CycleError(std::move(cycle));
}

ValidationReport validate_network(const NetworkDefinition& definition) {
    ValidationReport report;
    auto add = [&](std::string kind, std::string locus, std::string message, double residual = 0.0) {
        report.violations.push_back({std::move(kind), std::move(locus), std::move(message), residual});
    };

    const auto& vars = definition.structure.variables;
    std::unordered_map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const auto& v = vars[i];
        if (v.name.empty())
            add("empty_name", "variables[" + std::to_string(i) + "]", "variable name is empty");
        if (!index.emplace(v.name, i).second)
            add("duplicate_variable", v.name, "variable '" + v.name + "' is declared more than once");
        if (v.states.size() < 2)
            add("too_few_states", v.name, "variable '" + v.name + "' declares fewer than 2 states");
        std::set<std::string_view> seen;
        for (const auto& s : v.states) {
            if (s.empty())
                add("empty_state", v.name, "variable '" + v.name + "' has an empty state label");
            else if (!seen.insert(s).second)
                add("duplicate_state", v.name + "=" + s, "state '" + s + "' of '" + v.name + "' is repeated");
        }
    }

    bool edges_ok = true;
    std::set<std::pair<std::string_view, std::string_view>> edge_set;
    for (const auto& e : definition.structure.edges) {
        std::string locus = e.parent + " -> " + e.child;
        if (!index.contains(e.parent) || !index.contains(e.child)) {
            edges_ok = false;
            add("unknown_edge_endpoint", locus, "edge " + locus + " references an undeclared variable");
            continue;
        }
        if (e.parent == e.child) {
            edges_ok = false;
            add("self_loop", locus, "variable '" + e.child + "' is its own parent");
        }
        if (!edge_set.emplace(e.parent, e.child).second)
            add("duplicate_edge", locus, "edge " + locus + " is listed more than once");
    }
    if (edges_ok) {
        try {
            topological_order(definition.structure);
        } catch (const CycleError& err) {
            add("cycle", err.locus(), err.what());
        }
    }

    std::unordered_map<std::string_view, std::size_t> cpt_count;
    for (const auto& cpt : definition.cpts) {
        auto child_it = index.find(cpt.child);
        if (child_it == index.end()) {
            add("unknown_cpt_child", cpt.child, "CPT for undeclared variable '" + cpt.child + "'");
            continue;
        }
        if (++cpt_count[cpt.child] > 1) {
            add("duplicate_cpt", cpt.child, "variable '" + cpt.child + "' has more than one CPT");
            continue;
        }
        const Variable& child = vars[child_it->second];

        bool parents_ok = true;
        std::set<std::string_view> declared;
        for (const auto& p : cpt.parents) {
            if (!index.contains(p)) {
                parents_ok = false;
                add("unknown_parent", cpt.child, "CPT of '" + cpt.child + "' names undeclared parent '" + p + "'");
            } else if (!declared.insert(p).second) {
                parents_ok = false;
                add("duplicate_parent", cpt.child, "CPT of '" + cpt.child + "' lists parent '" + p + "' twice");
            }
        }
        auto graph_parents = definition.structure.parents_of(cpt.child);
        std::set<std::string_view> graph_set(graph_parents.begin(), graph_parents.end());
        if (parents_ok && graph_set != declared) {
            parents_ok = false;
            add("parent_mismatch", cpt.child,
                "CPT parents of '" + cpt.child + "' differ from its graph parents");
        }
        if (!parents_ok)
            continue;

        std::size_t expected_rows = 1;
        for (const auto& p : cpt.parents)
            expected_rows *= vars[index.at(p)].cardinality();
        if (cpt.rows.size() != expected_rows) {
            add("row_count", cpt.child,
                "CPT of '" + cpt.child + "' has " + std::to_string(cpt.rows.size()) + " rows, expected " +
                    std::to_string(expected_rows));
        }
        for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
            const auto& row = cpt.rows[r];
            std::string locus = cpt.child + "[" + std::to_string(r) + "]";
            if (row.size() != child.cardinality()) {
                add("row_width", locus,
                    "row has " + std::to_string(row.size()) + " entries, expected " +
                        std::to_string(child.cardinality()));
                continue;
            }
            double sum = 0.0;
            bool in_range = true;
            for (double p : row) {
                if (!std::isfinite(p) || p < 0.0 || p > 1.0)
                    in_range = false;
                sum += p;
            }
            if (!in_range) {
                add("probability_range", locus, "row has an entry outside [0, 1]");
                continue;
            }
            if (std::abs(sum - 1.0) > kRowSumTolerance) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "row sums to " << sum;
                add("row_sum", locus, msg.str(), 1.0 - sum);
            }
        }
    }
    for (const auto& v : vars)
        if (!v.name.empty() && !cpt_count.contains(v.name))
            add("missing_cpt", v.name, "variable '" + v.name + "' has no CPT");

    return report;
}

BayesianNetwork BayesianNetwork::create(NetworkDefinition definition) {
    auto report = validate_network(definition);
    if (!report.valid()) {
        const auto& first = report.violations.front();
        std::string message = "invalid network: " + first.message;
        if (report.violations.size() > 1)
            message += " (and " + std::to_string(report.violations.size() - 1) + " more)";
        throw Error(ErrorCode::validation_error, message, first.locus);
    }

    std::vector<Cpt> ordered;
    ordered.reserve(definition.cpts.size());
    for (const auto& v : definition.structure.variables) {
        auto it = std::find_if(definition.cpts.begin(), definition.cpts.end(),
                               [&](const Cpt& c) { return c.child == v.name; });
        ordered.push_back(std::move(*it));
    }
    for (auto& cpt : ordered) {
        for (auto& row : cpt.rows) {
            double sum = 0.0;
            for (double p : row)
                sum += p;
            if (std::abs(sum - 1.0) > kRenormalizeThreshold)
                for (double& p : row)
                    p /= sum;
        }
    }
    // Edges in the same canonical order a loaded document implies, so that
    // save/load round-trips compare equal.
    definition.structure.edges.clear();
    for (const auto& cpt : ordered)
        for (const auto& p : cpt.parents)
            definition.structure.edges.push_back({p, cpt.child});
    definition.cpts = std::move(ordered);
    return BayesianNetwork(std::move(definition));
}

BayesianNetwork::BayesianNetwork(NetworkDefinition definition) : m_definition(std::move(definition)) {
    const auto& vars = variables();
    for (std::size_t i = 0; i < vars.size(); ++i)
        m_index.emplace(vars[i].name, i);

    m_parents.resize(vars.size());
    m_children.resize(vars.size());
    m_strides.resize(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
        for (const auto& p : m_definition.cpts[i].parents) {
            std::size_t pi = m_index.at(p);
            m_parents[i].push_back(pi);
            m_children[pi].push_back(i);
        }
        auto& strides = m_strides[i];
        strides.assign(m_parents[i].size(), 1);
        for (std::size_t k = m_parents[i].size(); k-- > 1;)
            strides[k - 1] = strides[k] * vars[m_parents[i][k]].cardinality();
    }
    for (auto& c : m_children)
        std::sort(c.begin(), c.end());
    for (const auto& name : bnet::topological_order(structure()))
        m_order.push_back(m_index.at(name));
}

std::optional<std::size_t> BayesianNetwork::find(std::string_view name) const {
    auto it = m_index.find(std::string(name));
    if (it == m_index.end())
        return std::nullopt;
    return it->second;
}

std::size_t BayesianNetwork::index_of(std::string_view name) const {
    auto idx = find(name);
    if (!idx)
        throw Error(ErrorCode::unknown_symbol, "unknown variable '" + std::string(name) + "'", std::string(name));
    return *idx;
}

std::size_t BayesianNetwork::state_index(std::size_t variable, std::string_view state) const {
    const auto& v = variables()[variable];
    auto idx = v.find_state(state);
    if (!idx)
        throw Error(ErrorCode::unknown_symbol,
                    "unknown state '" + std::string(state) + "' for variable '" + v.name + "'", v.name);
    return *idx;
}

std::vector<int> BayesianNetwork::resolve(const Evidence& evidence) const {
    std::vector<int> states(size(), -1);
    for (const auto& [name, state] : evidence) {
        std::size_t v = index_of(name);
        states[v] = static_cast<int>(state_index(v, state));
    }
    return states;
}

std::vector<int> BayesianNetwork::resolve(const Assignment& assignment) const {
    std::vector<int> states(size(), -1);
    for (const auto& [name, state] : assignment) {
        std::size_t v = index_of(name);
        states[v] = static_cast<int>(state_index(v, state));
    }
    for (std::size_t v = 0; v < size(); ++v)
        if (states[v] < 0)
            throw Error(ErrorCode::usage_error, "assignment leaves '" + variable(v).name + "' unbound",
                        variable(v).name);
    return states;
}

std::size_t BayesianNetwork::row_index(std::size_t index, std::span<const int> states) const {
    std::size_t row = 0;
    const auto& ps = m_parents[index];
    for (std::size_t k = 0; k < ps.size(); ++k)
        row += m_strides[index][k] * static_cast<std::size_t>(states[ps[k]]);
    return row;
}

std::size_t BayesianNetwork::joint_size() const {
    std::size_t total = 1;
    for (const auto& v : variables()) {
        if (total > std::numeric_limits<std::size_t>::max() / v.cardinality())
            return std::numeric_limits<std::size_t>::max();
        total *= v.cardinality();
    }
    return total;
}

}  // namespace bnet
