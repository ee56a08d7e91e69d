#include "bnet/curriculum.hpp"

#include <algorithm>
#include <cmath>

#include "bnet/model_io.hpp"

namespace bnet::curriculum {

namespace {

const Edge kDefaultEdges[] = {
    {"RBG", "Pub"},
    {"AG", "G"},  {"S", "G"},    {"A", "G"}, {"NumC", "G"}, {"RBG", "G"}, {"Pub", "G"},
    {"G", "RecL"}, {"Pub", "RecL"},
    {"G", "Satisfaction"}, {"RecL", "Satisfaction"},
};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& names, std::string_view name) {
    return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

std::span<const Edge> default_edges() { return kDefaultEdges; }

const BayesianNetwork& default_model() {
    static const BayesianNetwork model = load_model(default_model_document());
    return model;
}

BayesianNetwork build_default_model() { return default_model(); }

void ScoreWeights::check() const {
    for (double w : {grade, recommendation, satisfaction})
        if (!(w >= 0.0) || !std::isfinite(w))
            throw Error(ErrorCode::usage_error, "score weights must be finite and non-negative");
    if (std::abs(grade + recommendation + satisfaction - 1.0) > 1e-9)
        throw Error(ErrorCode::usage_error, "score weights must sum to 1");
}

double success_score(double p_grade_a, double p_approved, double p_satisfied, const ScoreWeights& weights) {
    return weights.grade * p_grade_a + weights.recommendation * p_approved + weights.satisfaction * p_satisfied;
}

StudentProfile::StudentProfile(Evidence bindings) : m_bindings(std::move(bindings)) {
    for (const auto& [name, state] : m_bindings)
        if (!contains(kProfileVariables, name))
            throw Error(ErrorCode::usage_error,
                        "'" + name + "' cannot be part of a student profile (allowed: AG, S, A, NumC, RBG, Pub)",
                        name);
}

PlanReport evaluate_plan(const BayesianNetwork& net, const StudentProfile& profile, const ScoreWeights& weights) {
    weights.check();
    PlanReport report;
    report.profile = profile.evidence();
    report.grade = posterior_marginal(net, profile.evidence(), "G");
    report.recommendation = posterior_marginal(net, profile.evidence(), "RecL");
    report.satisfaction = posterior_marginal(net, profile.evidence(), "Satisfaction");
    report.success_score = success_score(report.grade["A"], report.recommendation["approved"],
                                         report.satisfaction["high"], weights);
    return report;
}

std::vector<ScenarioOutcome> compare_plans(const BayesianNetwork& net, const StudentProfile& profile,
                                           std::span<const Evidence> overrides, const ScoreWeights& weights) {
    weights.check();
    for (const auto& scenario : overrides)
        for (const auto& [name, state] : scenario)
            if (!contains(kScenarioVariables, name))
                throw Error(ErrorCode::usage_error,
                            "scenario overrides may only bind NumC and A, not '" + name + "'", name);

    std::vector<ScenarioOutcome> outcomes;
    for (std::size_t i = 0; i < overrides.size(); ++i) {
        ScenarioOutcome outcome;
        outcome.input_position = i;
        outcome.overrides = overrides[i];
        Evidence merged = profile.evidence();
        for (const auto& [name, state] : overrides[i])
            merged.set(name, state);
        try {
            outcome.report = evaluate_plan(net, StudentProfile(std::move(merged)), weights);
        } catch (const Error& err) {
            outcome.error = err;
        }
        outcomes.push_back(std::move(outcome));
    }
    std::stable_sort(outcomes.begin(), outcomes.end(), [](const ScenarioOutcome& a, const ScenarioOutcome& b) {
        if (a.report && b.report)
            return a.report->success_score > b.report->success_score;
        return a.report.has_value() && !b.report.has_value();
    });
    return outcomes;
}

}  // namespace bnet::curriculum
