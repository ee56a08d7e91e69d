#include "bnet/impact.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "bnet/factor.hpp"
#include "bnet/inference.hpp"

namespace bnet {

namespace {

// Swings closer than this are ties; the earliest state keeps the slot.
constexpr double kTieTolerance = 1e-12;

// Unnormalized P(influencer, target, e) with accessors in (x, t) order.
struct PairTable {
    Factor factor;
    std::size_t x_cards = 0, t_cards = 0;
    bool x_first = true;

    double operator()(std::size_t x, std::size_t t) const {
        return x_first ? factor.values()[x * t_cards + t] : factor.values()[t * x_cards + x];
    }
};

PairTable pair_table(const BayesianNetwork& net, std::size_t x, std::size_t t, const Evidence& evidence) {
    auto states = net.resolve(evidence);
    for (std::size_t v : {x, t})
        if (states[v] >= 0)
            throw Error(ErrorCode::usage_error, "variable '" + net.variable(v).name + "' is bound as evidence",
                        net.variable(v).name);
    std::vector<std::size_t> query{std::min(x, t), std::max(x, t)};
    PairTable table{eliminate(net, states, query), net.cardinality(x), net.cardinality(t), x < t};
    if (table.factor.total() <= 0.0)
        throw Error(ErrorCode::impossible_evidence, "evidence has zero probability");
    return table;
}

double mutual_information(const PairTable& table) {
    const double z = table.factor.total();
    std::vector<double> px(table.x_cards, 0.0), pt(table.t_cards, 0.0);
    for (std::size_t x = 0; x < table.x_cards; ++x)
        for (std::size_t t = 0; t < table.t_cards; ++t) {
            px[x] += table(x, t) / z;
            pt[t] += table(x, t) / z;
        }
    double mi = 0.0;
    for (std::size_t x = 0; x < table.x_cards; ++x)
        for (std::size_t t = 0; t < table.t_cards; ++t) {
            double p = table(x, t) / z;
            if (p > 0.0)
                mi += p * std::log(p / (px[x] * pt[t]));
        }
    return std::max(mi, 0.0);
}

ImpactLevel level_from(const BayesianNetwork& net, const PairTable& table, std::size_t x_var, std::size_t t_state,
                       const TargetSpec& target) {
    const double z = table.factor.total();
    double target_mass = 0.0;
    for (std::size_t x = 0; x < table.x_cards; ++x)
        target_mass += table(x, t_state);
    const double baseline = target_mass / z;
    if (baseline <= 0.0 || baseline >= 1.0)
        throw Error(ErrorCode::degenerate_baseline,
                    "P(" + target.variable + "=" + target.state + ") is " + (baseline <= 0.0 ? "0" : "1") +
                        " under this evidence; log-odds are undefined",
                    target.variable);
    const double base_odds = log_odds(baseline);

    const Variable& influencer = net.variable(x_var);
    ImpactLevel best;
    bool found = false;
    for (std::size_t x = 0; x < table.x_cards; ++x) {
        double px = 0.0;
        for (std::size_t t = 0; t < table.t_cards; ++t)
            px += table(x, t);
        if (px <= 0.0)
            continue;
        double conditioned = table(x, t_state) / px;
        if (conditioned <= 0.0 || conditioned >= 1.0)
            throw Error(ErrorCode::degenerate_baseline,
                        "P(" + target.variable + "=" + target.state + " | " + influencer.name + "=" +
                            influencer.states[x] + ") is " + (conditioned <= 0.0 ? "0" : "1") +
                            "; log-odds are undefined",
                        influencer.name);
        double swing = log_odds(conditioned) - base_odds;
        if (!found || std::abs(swing) > std::abs(best.level) + kTieTolerance) {
            found = true;
            best = {swing, influencer.states[x]};
        }
    }
    if (!found)
        throw Error(ErrorCode::impossible_evidence, "every state of '" + influencer.name + "' is impossible",
                    influencer.name);
    return best;
}

struct Resolved {
    std::size_t target;
    std::size_t target_state;
};

Resolved resolve_target(const BayesianNetwork& net, const TargetSpec& target, const Evidence& evidence) {
    std::size_t t = net.index_of(target.variable);
    std::size_t s = net.state_index(t, target.state);
    net.resolve(evidence);
    if (const std::string* bound = evidence.find(target.variable)) {
        if (evidence_likelihood(net, evidence) <= 0.0)
            throw Error(ErrorCode::impossible_evidence, "evidence has zero probability");
        throw Error(ErrorCode::degenerate_baseline,
                    "target '" + target.variable + "' is bound as evidence, so P(" + target.variable + "=" +
                        target.state + ") is " + (*bound == target.state ? "1" : "0") +
                        "; log-odds are undefined",
                    target.variable);
    }
    return {t, s};
}

}  // namespace

double log_odds(double p) { return std::log(p / (1.0 - p)); }

ImpactLevel impact_level(const BayesianNetwork& net, const TargetSpec& target, std::string_view influencer,
                         const Evidence& evidence) {
    auto [t, ts] = resolve_target(net, target, evidence);
    std::size_t x = net.index_of(influencer);
    if (x == t)
        throw Error(ErrorCode::usage_error, "influencer and target are the same variable", target.variable);
    return level_from(net, pair_table(net, x, t, evidence), x, ts, target);
}

ImpactReport impact_ranking(const BayesianNetwork& net, const TargetSpec& target, const Evidence& evidence) {
    auto [t, ts] = resolve_target(net, target, evidence);
    ImpactReport report;
    report.target = target;

    const auto states = net.resolve(evidence);
    {
        const std::size_t q[] = {t};
        Factor f = eliminate(net, states, q);
        if (f.total() <= 0.0)
            throw Error(ErrorCode::impossible_evidence, "evidence has zero probability");
        report.baseline = f.values()[ts] / f.total();
        if (report.baseline <= 0.0 || report.baseline >= 1.0)
            throw Error(ErrorCode::degenerate_baseline,
                        "P(" + target.variable + "=" + target.state + ") is " +
                            (report.baseline <= 0.0 ? "0" : "1") + " under this evidence; log-odds are undefined",
                        target.variable);
    }

    for (std::size_t x = 0; x < net.size(); ++x) {
        if (x == t || states[x] >= 0)
            continue;
        auto table = pair_table(net, x, t, evidence);
        auto level = level_from(net, table, x, ts, target);
        report.entries.push_back({net.variable(x).name, level.level, level.achieving_state,
                                  std::abs(level.level), mutual_information(table)});
    }
    std::stable_sort(report.entries.begin(), report.entries.end(),
                     [](const ImpactEntry& a, const ImpactEntry& b) { return a.magnitude > b.magnitude; });
    return report;
}

double mutual_information(const BayesianNetwork& net, std::string_view a, std::string_view b,
                          const Evidence& evidence) {
    std::size_t x = net.index_of(a);
    std::size_t t = net.index_of(b);
    if (x == t)
        throw Error(ErrorCode::usage_error, "mutual information needs two distinct variables", std::string(a));
    return mutual_information(pair_table(net, x, t, evidence));
}

bool d_separated(const NetworkStructure& structure, std::string_view a, std::string_view b,
                 const std::set<std::string, std::less<>>& given) {
    const auto& vars = structure.variables;
    std::unordered_map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < vars.size(); ++i)
        index.emplace(vars[i].name, i);
    auto lookup = [&](std::string_view name) {
        auto it = index.find(name);
        if (it == index.end())
            throw Error(ErrorCode::unknown_symbol, "unknown variable '" + std::string(name) + "'", std::string(name));
        return it->second;
    };
    std::size_t source = lookup(a);
    std::size_t sink = lookup(b);
    if (source == sink)
        throw Error(ErrorCode::usage_error, "d-separation needs two distinct variables", std::string(a));
    if (given.contains(a) || given.contains(b))
        throw Error(ErrorCode::usage_error, "queried variables may not be in the conditioning set");

    std::vector<std::vector<std::size_t>> parents(vars.size()), children(vars.size());
    for (const auto& e : structure.edges) {
        std::size_t p = lookup(e.parent), c = lookup(e.child);
        parents[c].push_back(p);
        children[p].push_back(c);
    }
    std::vector<bool> observed(vars.size(), false);
    for (const auto& g : given)
        observed[lookup(g)] = true;

    // Observed nodes and their ancestors: the colliders that let a trail pass.
    std::vector<bool> opens_collider(vars.size(), false);
    std::deque<std::size_t> pending;
    for (std::size_t v = 0; v < vars.size(); ++v)
        if (observed[v])
            pending.push_back(v);
    while (!pending.empty()) {
        std::size_t v = pending.front();
        pending.pop_front();
        if (opens_collider[v])
            continue;
        opens_collider[v] = true;
        for (std::size_t p : parents[v])
            pending.push_back(p);
    }

    // Trail search over (node, arrived-from-child) pairs.
    std::vector<bool> visited_up(vars.size(), false), visited_down(vars.size(), false);
    std::deque<std::pair<std::size_t, bool>> frontier{{source, true}};
    while (!frontier.empty()) {
        auto [v, up] = frontier.front();
        frontier.pop_front();
        auto& visited = up ? visited_up : visited_down;
        if (visited[v])
            continue;
        visited[v] = true;
        if (v == sink && !observed[v])
            return false;
        if (up) {
            if (observed[v])
                continue;
            for (std::size_t p : parents[v])
                frontier.emplace_back(p, true);
            for (std::size_t c : children[v])
                frontier.emplace_back(c, false);
        } else {
            if (!observed[v])
                for (std::size_t c : children[v])
                    frontier.emplace_back(c, false);
            if (opens_collider[v])
                for (std::size_t p : parents[v])
                    frontier.emplace_back(p, true);
        }
    }
    return true;
}

}  // namespace bnet
