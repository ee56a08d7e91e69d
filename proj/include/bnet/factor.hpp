#ifndef BNET_FACTOR_HPP
#define BNET_FACTOR_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace bnet {

class BayesianNetwork;

/// Table over a set of variables, identified by their network index. The
/// scope is kept sorted ascending and values are laid out mixed-radix with the
/// last scope variable varying fastest.
class Factor {
public:
    Factor() : m_values{1.0} {}
    Factor(std::vector<std::size_t> scope, std::vector<std::size_t> cardinalities, std::vector<double> values);

    /// CPT of `variable` as a factor over {variable} ∪ parents.
    static Factor from_cpt(const BayesianNetwork& net, std::size_t variable);

    const std::vector<std::size_t>& scope() const { return m_scope; }
    const std::vector<std::size_t>& cardinalities() const { return m_cards; }
    const std::vector<double>& values() const { return m_values; }
    std::vector<double>& values() { return m_values; }
    std::size_t size() const { return m_values.size(); }
    bool contains(std::size_t variable) const;

    Factor product(const Factor& other) const;
    Factor sum_out(std::size_t variable) const;
    /// Fixes `variable` to `state` and drops it from the scope.
    Factor reduce(std::size_t variable, std::size_t state) const;
    double total() const;

private:
    std::size_t position(std::size_t variable) const;

    std::vector<std::size_t> m_scope;
    std::vector<std::size_t> m_cards;
    std::vector<double> m_values;
};

/// Unnormalized P(query, evidence) over the sorted `query` variables, by
/// variable elimination with a min-degree order (ties by declaration order).
/// `states` holds -1 for unbound variables; query variables must be unbound.
Factor eliminate(const BayesianNetwork& net, std::span<const int> states, std::span<const std::size_t> query);

}  // namespace bnet

#endif  // BNET_FACTOR_HPP
