#include "bnet/factor.hpp"

#include <algorithm>
#include <cassert>
#include <set>

#include "bnet/network.hpp"

namespace bnet {

Factor::Factor(std::vector<std::size_t> scope, std::vector<std::size_t> cardinalities, std::vector<double> values)
    : m_scope(std::move(scope)), m_cards(std::move(cardinalities)), m_values(std::move(values)) {
    assert(std::is_sorted(m_scope.begin(), m_scope.end()));
}

Factor Factor::from_cpt(const BayesianNetwork& net, std::size_t variable) {
    const auto parents = net.parents(variable);
    const Cpt& cpt = net.cpt(variable);

    std::vector<std::size_t> scope(parents.begin(), parents.end());
    scope.push_back(variable);
    std::sort(scope.begin(), scope.end());
    std::vector<std::size_t> cards;
    for (std::size_t v : scope)
        cards.push_back(net.cardinality(v));

    std::size_t total = 1;
    for (std::size_t c : cards)
        total *= c;
    std::vector<double> values(total);

    std::vector<int> states(net.size(), 0);
    std::vector<std::size_t> counter(scope.size(), 0);
    for (std::size_t i = 0; i < total; ++i) {
        for (std::size_t k = 0; k < scope.size(); ++k)
            states[scope[k]] = static_cast<int>(counter[k]);
        values[i] = cpt.rows[net.row_index(variable, states)][static_cast<std::size_t>(states[variable])];
        for (std::size_t k = scope.size(); k-- > 0;) {
            if (++counter[k] < cards[k])
                break;
            counter[k] = 0;
        }
    }
    return Factor(std::move(scope), std::move(cards), std::move(values));
}

bool Factor::contains(std::size_t variable) const {
    return std::binary_search(m_scope.begin(), m_scope.end(), variable);
}

std::size_t Factor::position(std::size_t variable) const {
    return static_cast<std::size_t>(std::lower_bound(m_scope.begin(), m_scope.end(), variable) - m_scope.begin());
}

Factor Factor::product(const Factor& other) const {
    std::vector<std::size_t> scope;
    std::set_union(m_scope.begin(), m_scope.end(), other.m_scope.begin(), other.m_scope.end(),
                   std::back_inserter(scope));
    std::vector<std::size_t> cards(scope.size());
    // Stride of each result position within this factor and within `other`.
    std::vector<std::size_t> stride_a(scope.size(), 0), stride_b(scope.size(), 0);
    {
        std::size_t sa = 1, sb = 1;
        std::size_t ia = m_scope.size(), ib = other.m_scope.size();
        for (std::size_t k = scope.size(); k-- > 0;) {
            std::size_t v = scope[k];
            if (ia > 0 && m_scope[ia - 1] == v) {
                --ia;
                cards[k] = m_cards[ia];
                stride_a[k] = sa;
                sa *= m_cards[ia];
            }
            if (ib > 0 && other.m_scope[ib - 1] == v) {
                --ib;
                cards[k] = other.m_cards[ib];
                stride_b[k] = sb;
                sb *= other.m_cards[ib];
            }
        }
    }
    std::size_t total = 1;
    for (std::size_t c : cards)
        total *= c;
    std::vector<double> values(total);
    std::vector<std::size_t> counter(scope.size(), 0);
    std::size_t a = 0, b = 0;
    for (std::size_t i = 0; i < total; ++i) {
        values[i] = m_values[a] * other.m_values[b];
        for (std::size_t k = scope.size(); k-- > 0;) {
            if (++counter[k] < cards[k]) {
                a += stride_a[k];
                b += stride_b[k];
                break;
            }
            a -= stride_a[k] * (cards[k] - 1);
            b -= stride_b[k] * (cards[k] - 1);
            counter[k] = 0;
        }
    }
    return Factor(std::move(scope), std::move(cards), std::move(values));
}

Factor Factor::sum_out(std::size_t variable) const {
    std::size_t pos = position(variable);
    assert(pos < m_scope.size() && m_scope[pos] == variable);
    std::size_t inner = 1;
    for (std::size_t k = pos + 1; k < m_cards.size(); ++k)
        inner *= m_cards[k];
    const std::size_t card = m_cards[pos];
    const std::size_t outer = m_values.size() / (inner * card);

    std::vector<double> values(outer * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t s = 0; s < card; ++s)
            for (std::size_t i = 0; i < inner; ++i)
                values[o * inner + i] += m_values[(o * card + s) * inner + i];

    auto scope = m_scope;
    auto cards = m_cards;
    scope.erase(scope.begin() + static_cast<std::ptrdiff_t>(pos));
    cards.erase(cards.begin() + static_cast<std::ptrdiff_t>(pos));
    return Factor(std::move(scope), std::move(cards), std::move(values));
}

Factor Factor::reduce(std::size_t variable, std::size_t state) const {
    std::size_t pos = position(variable);
    assert(pos < m_scope.size() && m_scope[pos] == variable);
    std::size_t inner = 1;
    for (std::size_t k = pos + 1; k < m_cards.size(); ++k)
        inner *= m_cards[k];
    const std::size_t card = m_cards[pos];
    const std::size_t outer = m_values.size() / (inner * card);

    std::vector<double> values(outer * inner);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < inner; ++i)
            values[o * inner + i] = m_values[(o * card + state) * inner + i];

    auto scope = m_scope;
    auto cards = m_cards;
    scope.erase(scope.begin() + static_cast<std::ptrdiff_t>(pos));
    cards.erase(cards.begin() + static_cast<std::ptrdiff_t>(pos));
    return Factor(std::move(scope), std::move(cards), std::move(values));
}

double Factor::total() const {
    double sum = 0.0;
    for (double v : m_values)
        sum += v;
    return sum;
}

Factor eliminate(const BayesianNetwork& net, std::span<const int> states, std::span<const std::size_t> query) {
    // Only ancestors of the query and evidence matter; every other CPT sums
    // to one once its descendants are summed out.
    std::vector<bool> relevant(net.size(), false);
    std::vector<std::size_t> stack(query.begin(), query.end());
    for (std::size_t v = 0; v < net.size(); ++v)
        if (states[v] >= 0)
            stack.push_back(v);
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        if (relevant[v])
            continue;
        relevant[v] = true;
        for (std::size_t p : net.parents(v))
            stack.push_back(p);
    }

    std::vector<Factor> factors;
    factors.reserve(net.size());
    for (std::size_t v = 0; v < net.size(); ++v) {
        if (!relevant[v])
            continue;
        Factor f = Factor::from_cpt(net, v);
        for (std::size_t s : std::vector<std::size_t>(f.scope()))
            if (states[s] >= 0)
                f = f.reduce(s, static_cast<std::size_t>(states[s]));
        factors.push_back(std::move(f));
    }

    std::vector<bool> keep(net.size(), false);
    for (std::size_t q : query)
        keep[q] = true;
    std::vector<std::size_t> pending;
    for (std::size_t v = 0; v < net.size(); ++v)
        if (relevant[v] && states[v] < 0 && !keep[v])
            pending.push_back(v);

    while (!pending.empty()) {
        // Min-degree: fewest distinct neighbours across the factors mentioning
        // the variable; earliest declaration wins ties.
        std::size_t best = 0;
        std::size_t best_degree = SIZE_MAX;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            std::set<std::size_t> neighbours;
            for (const auto& f : factors)
                if (f.contains(pending[i]))
                    neighbours.insert(f.scope().begin(), f.scope().end());
            std::size_t degree = neighbours.empty() ? 0 : neighbours.size() - 1;
            if (degree < best_degree) {
                best_degree = degree;
                best = i;
            }
        }
        std::size_t var = pending[best];
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));

        Factor joined;
        std::vector<Factor> rest;
        for (auto& f : factors) {
            if (f.contains(var))
                joined = joined.product(f);
            else
                rest.push_back(std::move(f));
        }
        rest.push_back(joined.sum_out(var));
        factors = std::move(rest);
    }

    Factor result;
    for (const auto& f : factors)
        result = result.product(f);
    return result;
}

}  // namespace bnet
