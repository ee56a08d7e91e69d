#ifndef BNET_CURRICULUM_HPP
#define BNET_CURRICULUM_HPP

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bnet/inference.hpp"
#include "bnet/network.hpp"

namespace bnet::curriculum {

// Variable vocabulary of the bundled curriculum model.
inline constexpr std::array<std::string_view, 6> kProfileVariables{"AG", "S", "A", "NumC", "RBG", "Pub"};
inline constexpr std::array<std::string_view, 3> kOutcomeVariables{"G", "RecL", "Satisfaction"};
inline constexpr std::array<std::string_view, 2> kScenarioVariables{"NumC", "A"};

/// Edges of the bundled model, parent → child, in CPT parent order.
std::span<const Edge> default_edges();

/// The bundled model document (models/curriculum.default.json, embedded at
/// build time).
std::string_view default_model_document();

/// Parses the embedded document once and returns the shared instance.
const BayesianNetwork& default_model();
BayesianNetwork build_default_model();

struct ScoreWeights {
    double grade = 1.0 / 3.0;
    double recommendation = 1.0 / 3.0;
    double satisfaction = 1.0 / 3.0;

    /// Throws usage_error unless all weights are >= 0 and sum to 1 within 1e-9.
    void check() const;
};

double success_score(double p_grade_a, double p_approved, double p_satisfied, const ScoreWeights& weights);

/// Evidence restricted to kProfileVariables.
class StudentProfile {
public:
    StudentProfile() = default;
    /// Throws usage_error for bindings outside the profile vocabulary.
    explicit StudentProfile(Evidence bindings);

    const Evidence& evidence() const { return m_bindings; }

private:
    Evidence m_bindings;
};

struct PlanReport {
    Evidence profile;
    Distribution grade;
    Distribution recommendation;
    Distribution satisfaction;
    double success_score = 0.0;
};

/// Outcome posteriors for a profile. Throws impossible_evidence when the
/// profile has zero probability, unknown_symbol when `net` lacks the outcome
/// vocabulary.
PlanReport evaluate_plan(const BayesianNetwork& net, const StudentProfile& profile,
                         const ScoreWeights& weights = {});

struct ScenarioOutcome {
    std::size_t input_position = 0;
    Evidence overrides;
    std::optional<PlanReport> report;
    std::optional<Error> error;
};

/// Evaluates the profile under each override set. An override replaces the
/// profile's binding of the same variable. Overrides may only bind
/// kScenarioVariables (usage_error otherwise, for the whole batch). Per-scenario
/// failures are recorded in the entry. Sorted by success score descending,
/// ties and failures in input order, failures last.
std::vector<ScenarioOutcome> compare_plans(const BayesianNetwork& net, const StudentProfile& profile,
                                           std::span<const Evidence> overrides, const ScoreWeights& weights = {});

}  // namespace bnet::curriculum

#endif  // BNET_CURRICULUM_HPP
