#ifndef BNET_NETWORK_HPP
#define BNET_NETWORK_HPP

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bnet/error.hpp"

namespace bnet {

/// Tolerance applied to CPT row sums when a network is constructed or loaded.
inline constexpr double kRowSumTolerance = 1e-9;

struct Variable {
    std::string name;
    std::vector<std::string> states;

    std::size_t cardinality() const { return states.size(); }
    std::optional<std::size_t> find_state(std::string_view state) const;

    bool operator==(const Variable&) const = default;
};

struct Edge {
    std::string parent;
    std::string child;

    bool operator==(const Edge&) const = default;
};

struct NetworkStructure {
    std::vector<Variable> variables;
    std::vector<Edge> edges;

    /// Parents of `child` in edge-list order.
    std::vector<std::string> parents_of(std::string_view child) const;
    const Variable* find_variable(std::string_view name) const;

    bool operator==(const NetworkStructure&) const = default;
};

/// Conditional probability table. Rows are addressed mixed-radix over the
/// parents' state indices in `parents` order, last parent varying fastest;
/// columns follow the child's state order.
struct Cpt {
    std::string child;
    std::vector<std::string> parents;
    std::vector<std::vector<double>> rows;

    bool operator==(const Cpt&) const = default;
};

/// A candidate network as read from a document or assembled by hand. Nothing
/// about it is guaranteed until validate_network() reports no violations.
struct NetworkDefinition {
    std::string name;
    std::string description;
    NetworkStructure structure;
    std::vector<Cpt> cpts;

    bool operator==(const NetworkDefinition&) const = default;
};

struct Violation {
    std::string kind;
    std::string locus;
    std::string message;
    double residual = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool valid() const { return violations.empty(); }
};

ValidationReport validate_network(const NetworkDefinition& definition);

/// Parents before children; ties are broken by declaration order.
/// Throws CycleError when the structure is not acyclic.
std::vector<std::string> topological_order(const NetworkStructure& structure);

/// Mixed-radix value of `states` over `cardinalities`, last position fastest.
std::size_t mixed_radix_index(std::span<const std::size_t> cardinalities,
                              std::span<const std::size_t> states);

/// Variable-to-state bindings keyed by exact, case-sensitive name. A variable
/// may be bound at most once. The tag keeps partial and total bindings apart.
template <class Tag>
class Bindings {
public:
    using map_type = std::map<std::string, std::string, std::less<>>;

    Bindings() = default;
    Bindings(std::initializer_list<std::pair<std::string, std::string>> init) {
        for (const auto& [variable, state] : init)
            bind(variable, state);
    }

    void bind(std::string variable, std::string state) {
        auto [it, inserted] = m_bindings.emplace(std::move(variable), std::move(state));
        if (!inserted)
            throw Error(ErrorCode::usage_error, "variable '" + it->first + "' is bound more than once",
                        it->first);
    }

    /// Binds or rebinds.
    void set(std::string variable, std::string state) {
        m_bindings.insert_or_assign(std::move(variable), std::move(state));
    }

    void erase(std::string_view variable) {
        if (auto it = m_bindings.find(variable); it != m_bindings.end())
            m_bindings.erase(it);
    }

    bool contains(std::string_view variable) const { return m_bindings.find(variable) != m_bindings.end(); }

    const std::string* find(std::string_view variable) const {
        auto it = m_bindings.find(variable);
        return it == m_bindings.end() ? nullptr : &it->second;
    }

    std::size_t size() const { return m_bindings.size(); }
    bool empty() const { return m_bindings.empty(); }
    auto begin() const { return m_bindings.begin(); }
    auto end() const { return m_bindings.end(); }
    const map_type& bindings() const { return m_bindings; }

    bool operator==(const Bindings&) const = default;

private:
    map_type m_bindings;
};

struct EvidenceTag {};
struct AssignmentTag {};

/// Partial observation; possibly empty.
using Evidence = Bindings<EvidenceTag>;
/// Total assignment covering every network variable.
using Assignment = Bindings<AssignmentTag>;

/// Row index of the configuration `parent_states` over `parents`.
/// Throws unknown_symbol for unknown parents or states and usage_error for
/// unbound parents.
std::size_t parent_config_index(std::span<const Variable> parents, const Evidence& parent_states);

/// A validated, immutable discrete Bayesian network.
class BayesianNetwork {
public:
    /// Validates and normalizes `definition`. Rows whose sums deviate from 1 by
    /// more than floating-point noise, but within kRowSumTolerance, are rescaled.
    /// Throws Error(validation_error) naming the first violation.
    static BayesianNetwork create(NetworkDefinition definition);

    const std::string& name() const { return m_definition.name; }
    const std::string& description() const { return m_definition.description; }
    const NetworkStructure& structure() const { return m_definition.structure; }
    const std::vector<Variable>& variables() const { return m_definition.structure.variables; }
    /// CPTs in variable declaration order.
    const std::vector<Cpt>& cpts() const { return m_definition.cpts; }
    const NetworkDefinition& definition() const { return m_definition; }

    std::size_t size() const { return variables().size(); }
    const Variable& variable(std::size_t index) const { return variables()[index]; }
    const Cpt& cpt(std::size_t index) const { return m_definition.cpts[index]; }
    std::size_t cardinality(std::size_t index) const { return variables()[index].cardinality(); }

    std::optional<std::size_t> find(std::string_view name) const;
    /// Throws unknown_symbol.
    std::size_t index_of(std::string_view name) const;
    /// Throws unknown_symbol.
    std::size_t state_index(std::size_t variable, std::string_view state) const;

    /// Parent indices in the CPT's declared order.
    std::span<const std::size_t> parents(std::size_t index) const { return m_parents[index]; }
    std::span<const std::size_t> children(std::size_t index) const { return m_children[index]; }
    std::span<const std::size_t> topological_order() const { return m_order; }

    /// Per-variable state indices, -1 where unbound. Throws unknown_symbol.
    std::vector<int> resolve(const Evidence& evidence) const;
    /// Per-variable state indices; throws usage_error unless every variable is bound.
    std::vector<int> resolve(const Assignment& assignment) const;

    /// CPT row of `index` selected by the parents' entries in `states`, which
    /// must all be bound.
    std::size_t row_index(std::size_t index, std::span<const int> states) const;

    /// Product of state counts over all variables, saturating at SIZE_MAX.
    std::size_t joint_size() const;

    bool operator==(const BayesianNetwork& other) const { return m_definition == other.m_definition; }

private:
    explicit BayesianNetwork(NetworkDefinition definition);

    NetworkDefinition m_definition;
    std::unordered_map<std::string, std::size_t> m_index;
    std::vector<std::vector<std::size_t>> m_parents;
    std::vector<std::vector<std::size_t>> m_children;
    std::vector<std::vector<std::size_t>> m_strides;
    std::vector<std::size_t> m_order;
};

}  // namespace bnet

#endif  // BNET_NETWORK_HPP
